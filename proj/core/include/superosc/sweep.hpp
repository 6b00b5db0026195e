#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "superosc/csv.hpp"
#include "superosc/io.hpp"

namespace superosc::sweep {

using json = io::json;

// Manifest JSON:
//   kind        respond | nlevel | anharmonic | dispersive | parametric
//   inputs      name -> file path (relative to the manifest) or inline object
//   parameters  kind-specific settings
//   tolerances  quad_tol, ode_tol, precision
//   grid        "start:stop:step" (kinds that sample in time)
struct ExperimentManifest {
  std::string kind;
  json inputs = json::object();
  json parameters = json::object();
  json tolerances = json::object();
  std::string grid;
  std::filesystem::path base_dir;     // resolves relative input paths
  std::filesystem::path output_root;  // bundles go under here
  // Put outputs in output_root/<kind>-<digest prefix>; otherwise directly in output_root.
  bool digest_directory = true;

  static ExperimentManifest from_json(const json& j, std::filesystem::path base_dir = {});
  static ExperimentManifest load(const std::filesystem::path& path);
  json to_json() const;
};

struct OutputBundle {
  std::filesystem::path directory;
  std::vector<std::filesystem::path> files;
  std::map<std::string, std::string> input_digests;
  std::string digest;  // of kind, resolved inputs, parameters, tolerances and grid
  json summary = json::object();  // scalar results
  double elapsed_seconds = 0.0;
};

// Content digest of the resolved manifest; independent of key order and of
// whether inputs were given inline or by path.
std::string manifest_digest(const ExperimentManifest& manifest);

// Runs the owning module and writes CSV/JSON outputs plus manifest.json.
// Input errors are ValidationFailed naming the field; module errors keep
// their kind with the experiment kind prefixed to the message.
OutputBundle run_experiment(const ExperimentManifest& manifest);

struct SweepRow {
  json overrides;
  bool ok = false;
  std::string error;
  std::string error_kind;
  OutputBundle bundle;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // grid order

  json to_json() const;
  // Numeric overrides and summary scalars, one row per grid point, NaN where absent.
  csv::Table table() const;
};

// Each override is merge-patched into the template. Points run on up to
// `threads` workers (0 = hardware concurrency); per-point errors are recorded.
SweepResult run_sweep(const ExperimentManifest& templ, const std::vector<json>& overrides,
                      unsigned threads = 0);

// Writes sweep.json and sweep.csv under `directory`.
std::vector<std::filesystem::path> write_sweep(const SweepResult& result,
                                               const std::filesystem::path& directory);

}  // namespace superosc::sweep
