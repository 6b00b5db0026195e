#pragma once

#include <filesystem>
#include <nlohmann/json.hpp>
#include <string>
#include <string_view>

#include "superosc/anharmonic.hpp"
#include "superosc/dispersive.hpp"
#include "superosc/nlevel.hpp"
#include "superosc/parametric.hpp"
#include "superosc/signal.hpp"

namespace superosc::io {

using json = nlohmann::json;

// Sorted keys, no whitespace unless indent >= 0, floats as %.17g, non-finite as null.
std::string canonical_dump(const json& value, int indent = -1);

std::string sha256_hex(std::string_view bytes);
// SHA-256 of the canonical form; stable under key reordering.
std::string digest(const json& value);

json read_file(const std::filesystem::path& path);
// Canonical form with two-space indent and a trailing newline.
void write_file(const std::filesystem::path& path, const json& value);

std::string to_string(signal::Precision p);
signal::Precision precision_from_string(const std::string& name);

// Readers raise ValidationFailed naming the offending field path.
json to_json(const signal::ConstraintSpec& spec);
signal::ConstraintSpec constraint_spec_from_json(const json& j);

json to_json(const signal::SincExpansion& f);
signal::SincExpansion sinc_expansion_from_json(const json& j);

json to_json(const signal::SignalCharacterization& c);

json to_json(const nlevel::QuantumSystemSpec& sys);
nlevel::QuantumSystemSpec quantum_system_from_json(const json& j);

json to_json(const anharmonic::AnharmonicSpec& spec);
anharmonic::AnharmonicSpec anharmonic_spec_from_json(const json& j);
json to_json(const anharmonic::SpectrumSummary& s);

json to_json(const dispersive::DispersionRoots& r);

json to_json(const parametric::FrequencyProfile& p);
parametric::FrequencyProfile profile_from_json(const json& j);
json to_json(const parametric::BogoliubovPair& b);

// Field access with path-aware errors.
double number_at(const json& j, std::string_view key, std::string_view path);
double number_or(const json& j, std::string_view key, double fallback, std::string_view path);

}  // namespace superosc::io
