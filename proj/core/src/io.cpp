#include "superosc/io.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "superosc/csv.hpp"
#include "superosc/error.hpp"

namespace superosc::io {

namespace {

std::string join(std::string_view path, std::string_view key) {
  if (path.empty()) return std::string(key);
  return std::string(path) + "." + std::string(key);
}

std::string indexed(std::string_view path, std::size_t i) {
  return std::string(path) + "[" + std::to_string(i) + "]";
}

[[noreturn]] void bad(std::string_view path, const std::string& what) {
  fail(ErrorKind::ValidationFailed, std::string(path.empty() ? "<root>" : path) + ": " + what);
}

const json& object_at(const json& j, std::string_view path) {
  if (!j.is_object()) bad(path, "expected an object");
  return j;
}

const json& field(const json& j, std::string_view key, std::string_view path) {
  object_at(j, path);
  auto it = j.find(std::string(key));
  if (it == j.end()) bad(join(path, key), "missing field");
  return *it;
}

double as_number(const json& v, std::string_view path) {
  if (!v.is_number()) bad(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) bad(path, "expected a finite number");
  return x;
}

std::vector<double> number_array(const json& v, std::string_view path) {
  if (!v.is_array()) bad(path, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_number(v[i], indexed(path, i)));
  return out;
}

void dump(const json& v, int indent, int level, std::string& out) {
  auto newline = [&](int lvl) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * lvl), ' ');
  };
  switch (v.type()) {
    case json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(level + 1);
        out += json(it.key()).dump();
        out += indent < 0 ? ":" : ": ";
        dump(it.value(), indent, level + 1, out);
      }
      newline(level);
      out += '}';
      return;
    }
    case json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      out += '[';
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        newline(level + 1);
        dump(v[i], indent, level + 1, out);
      }
      newline(level);
      out += ']';
      return;
    }
    case json::value_t::number_float: {
      const double x = v.get<double>();
      out += std::isfinite(x) ? csv::format_number(x) : "null";
      return;
    }
    default:
      out += v.dump();
  }
}

json matrix_rows(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_json(const Eigen::VectorXd& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

}  // namespace

std::string canonical_dump(const json& value, int indent) {
  std::string out;
  dump(value, indent, 0, out);
  return out;
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    fail(ErrorKind::ValidationFailed, "SHA-256 digest failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 0xF];
  }
  return out;
}

std::string digest(const json& value) { return sha256_hex(canonical_dump(value)); }

json read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::ValidationFailed, "cannot read " + path.string());
  try {
    return json::parse(f);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::ValidationFailed, path.string() + ": " + e.what());
  }
}

void write_file(const std::filesystem::path& path, const json& value) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::ValidationFailed, "cannot write " + path.string());
  f << canonical_dump(value, 2) << '\n';
}

double number_at(const json& j, std::string_view key, std::string_view path) {
  return as_number(field(j, key, path), join(path, key));
}

double number_or(const json& j, std::string_view key, double fallback, std::string_view path) {
  object_at(j, path);
  auto it = j.find(std::string(key));
  return it == j.end() ? fallback : as_number(*it, join(path, key));
}

std::string to_string(signal::Precision p) {
  return p == signal::Precision::Extended ? "extended" : "machine";
}

signal::Precision precision_from_string(const std::string& name) {
  if (name == "machine") return signal::Precision::Machine;
  if (name == "extended") return signal::Precision::Extended;
  fail(ErrorKind::ValidationFailed, "precision must be 'machine' or 'extended', got '" + name + "'");
}

json to_json(const signal::ConstraintSpec& spec) {
  json pts = json::array();
  for (const auto& p : spec.points) pts.push_back({{"time", p.time}, {"amplitude", p.amplitude}});
  return {{"bandlimit", spec.bandlimit}, {"points", pts}};
}

signal::ConstraintSpec constraint_spec_from_json(const json& j) {
  signal::ConstraintSpec spec;
  spec.bandlimit = number_at(j, "bandlimit", "");
  if (j.contains("points")) {
    const json& pts = j["points"];
    if (!pts.is_array()) bad("points", "expected an array");
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const std::string path = indexed("points", i);
      spec.points.push_back({number_at(pts[i], "time", path), number_at(pts[i], "amplitude", path)});
    }
  } else {
    const auto times = number_array(field(j, "times", ""), "times");
    const auto amps = number_array(field(j, "amplitudes", ""), "amplitudes");
    if (times.size() != amps.size()) bad("amplitudes", "length differs from times");
    for (std::size_t i = 0; i < times.size(); ++i) spec.points.push_back({times[i], amps[i]});
  }
  return spec;
}

json to_json(const signal::SincExpansion& f) {
  return {{"bandlimit", f.bandlimit()},
          {"centers", std::vector<double>(f.centers().begin(), f.centers().end())},
          {"weights", std::vector<double>(f.weights().begin(), f.weights().end())},
          {"condition_number", f.condition_number()},
          {"precision", to_string(f.precision())},
          {"ill_conditioned", f.ill_conditioned()},
          {"max_residual", f.max_residual()}};
}

signal::SincExpansion sinc_expansion_from_json(const json& j) {
  const double band = number_at(j, "bandlimit", "");
  if (band <= 0.0) bad("bandlimit", "must be positive");
  auto centers = number_array(field(j, "centers", ""), "centers");
  auto weights = number_array(field(j, "weights", ""), "weights");
  if (centers.size() != weights.size()) bad("weights", "length differs from centers");
  return signal::SincExpansion(band, std::move(centers), std::move(weights));
}

json to_json(const signal::SignalCharacterization& c) {
  json out = {{"window", {c.window.lo, c.window.hi}},
              {"scan", {c.scan.lo, c.scan.hi}},
              {"peak_inside", c.peak_inside},
              {"peak_inside_time", c.peak_inside_time},
              {"peak_outside", c.peak_outside},
              {"peak_outside_time", c.peak_outside_time},
              {"dynamic_range", c.dynamic_range},
              {"zero_crossings", c.zero_crossings}};
  out["local_period_estimate"] =
      c.local_period_estimate ? json(*c.local_period_estimate) : json(nullptr);
  return out;
}

json to_json(const nlevel::QuantumSystemSpec& sys) {
  return {{"energies", sys.energies}, {"coupling", matrix_rows(sys.coupling)}, {"delta", sys.delta}};
}

nlevel::QuantumSystemSpec quantum_system_from_json(const json& j) {
  nlevel::QuantumSystemSpec sys;
  sys.energies = number_array(field(j, "energies", ""), "energies");
  sys.delta = number_or(j, "delta", 0.0, "");
  const json& rows = field(j, "coupling", "");
  const auto n = static_cast<Eigen::Index>(sys.energies.size());
  if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != n)
    bad("coupling", "expected " + std::to_string(n) + " rows");
  sys.coupling.resize(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const std::string path = indexed("coupling", static_cast<std::size_t>(r));
    const auto row = number_array(rows[static_cast<std::size_t>(r)], path);
    if (static_cast<Eigen::Index>(row.size()) != n) bad(path, "expected " + std::to_string(n) + " entries");
    for (Eigen::Index c = 0; c < n; ++c) sys.coupling(r, c) = row[static_cast<std::size_t>(c)];
  }
  return sys;
}

json to_json(const anharmonic::AnharmonicSpec& spec) {
  return {{"omega", spec.omega}, {"lambda", spec.lambda}, {"truncation", spec.truncation}};
}

anharmonic::AnharmonicSpec anharmonic_spec_from_json(const json& j) {
  anharmonic::AnharmonicSpec spec;
  spec.omega = number_or(j, "omega", spec.omega, "");
  spec.lambda = number_or(j, "lambda", spec.lambda, "");
  const double n = number_or(j, "truncation", static_cast<double>(spec.truncation), "");
  if (n < 2 || n != std::floor(n)) bad("truncation", "expected an integer >= 2");
  spec.truncation = static_cast<std::size_t>(n);
  return spec;
}

json to_json(const anharmonic::SpectrumSummary& s) {
  return {{"omega", s.omega},
          {"lambda", s.lambda},
          {"eigenvalues", vector_json(s.eigenvalues)},
          {"gaps", vector_json(s.gaps)},
          {"eigenvectors", matrix_rows(s.eigenvectors)},
          {"position_matrix", matrix_rows(s.position_matrix)},
          {"converged", s.converged},
          {"convergence_change", s.convergence_change}};
}

json to_json(const dispersive::DispersionRoots& r) {
  const char* branch = r.branch == dispersive::RootBranch::Real        ? "real"
                       : r.branch == dispersive::RootBranch::Degenerate ? "degenerate"
                                                                        : "complex";
  json out = {{"k", r.k}, {"Lambda", r.scale}, {"branch", branch}};
  if (r.real()) {
    out["omega1"] = r.omega1;
    out["omega2"] = r.omega2;
    out["group_velocity"] = {r.group_velocity[0], r.group_velocity[1]};
    out["phase_velocity"] = {r.phase_velocity[0], r.phase_velocity[1]};
  }
  return out;
}

json to_json(const parametric::FrequencyProfile& p) {
  using parametric::ProfileKind;
  json out = {{"kind", parametric::to_string(p.kind)}};
  switch (p.kind) {
    case ProfileKind::Constant:
      out["omega0"] = p.omega0;
      break;
    case ProfileKind::TanhStep:
      out.update({{"omega_in", p.omega_in}, {"omega_out", p.omega_out}, {"center", p.center},
                  {"width", p.width}});
      break;
    case ProfileKind::GaussianBump:
      out.update({{"omega0", p.omega0}, {"amplitude", p.amplitude}, {"center", p.center},
                  {"width", p.width}});
      break;
    case ProfileKind::Modulated:
      out.update({{"omega0", p.omega0}, {"depth", p.depth}, {"mod_frequency", p.mod_frequency},
                  {"envelope_width", p.width}, {"center", p.center}});
      break;
  }
  return out;
}

parametric::FrequencyProfile profile_from_json(const json& j) {
  using parametric::FrequencyProfile;
  using parametric::ProfileKind;
  const json& kind = field(j, "kind", "");
  if (!kind.is_string()) bad("kind", "expected a string");
  FrequencyProfile p;
  switch (parametric::profile_kind_from_string(kind.get<std::string>())) {
    case ProfileKind::Constant:
      p = FrequencyProfile::constant(number_at(j, "omega0", ""));
      break;
    case ProfileKind::TanhStep:
      p = FrequencyProfile::tanh_step(number_at(j, "omega_in", ""), number_at(j, "omega_out", ""),
                                      number_or(j, "center", 0.0, ""), number_at(j, "width", ""));
      break;
    case ProfileKind::GaussianBump:
      p = FrequencyProfile::gaussian_bump(number_at(j, "omega0", ""), number_at(j, "amplitude", ""),
                                          number_or(j, "center", 0.0, ""), number_at(j, "width", ""));
      break;
    case ProfileKind::Modulated:
      p = FrequencyProfile::modulated(number_at(j, "omega0", ""), number_at(j, "depth", ""),
                                      number_at(j, "mod_frequency", ""),
                                      number_at(j, "envelope_width", ""),
                                      number_or(j, "center", 0.0, ""));
      break;
  }
  p.validate();
  return p;
}

json to_json(const parametric::BogoliubovPair& b) {
  return {{"alpha", {b.alpha.real(), b.alpha.imag()}},
          {"beta", {b.beta.real(), b.beta.imag()}},
          {"beta_sq", b.excitation()},
          {"mean_quanta", b.excitation()},
          {"normalization_residual", b.normalization_residual},
          {"flatness_residual", b.flatness_residual}};
}

}  // namespace superosc::io
