// Run configuration and the text formats emitted by the command-line tool.
//
// Configs are flat `key = value` text; nested keys use dotted names
// (heuristic.beta_start, sampler.theta).  Unknown keys are rejected with the
// offending line number, as are malformed values.
//
// Output tables are comma-separated with `#`-prefixed header lines of the
// form `# key: value` and trailing `# summary: key=value` lines.  With a
// fixed config and seed every emitted byte is reproducible except the
// wall-time summary field.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "sss/heuristic.hpp"
#include "sss/ising.hpp"
#include "sss/params.hpp"

namespace sss {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class RunMode { sss, scp_basic, mcmc };

std::string to_string(RunMode mode);
RunMode run_mode_from_string(std::string_view s);

struct RunConfig {
  // Problem source: either a file path or a generator spec, never both.
  std::string problem_path;
  std::string family;            // independent | chain | sk | grid3d
  int size_x = 0;                // m, or grid edge length
  int size_y = 0;                // grid3d only; 0 means cubic
  int size_z = 0;
  bool periodic = true;          // grid3d boundary
  std::uint64_t problem_seed = 0;
  bool problem_seed_set = false; // unset: fall back to `seed`

  double beta = 1.0;

  std::string heuristic = "sa";  // sa | exact
  SaSchedule schedule;

  SamplerParams sampler;

  RunMode mode = RunMode::sss;
  bool fresh_tree = false;       // tree = cached | fresh
  long long draws = 100;
  long long mcmc_steps = 1000;
  std::uint64_t seed = 0;
  int threads = 1;
  std::string out;               // empty: stdout

  void validate() const;         // throws ConfigError
};

RunConfig parse_config(std::istream& in, const std::string& origin);
RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_string(const std::string& text);

// Canonical one-line-per-field rendering; basis of the config hash.
std::string canonical_config_string(const RunConfig& cfg);

std::uint64_t fnv1a64(std::string_view data);
std::uint64_t config_hash(const RunConfig& cfg);

// Materialize the configured problem and heuristic.
IsingModel load_problem(const RunConfig& cfg);
std::unique_ptr<Heuristic> make_heuristic(const RunConfig& cfg,
                                          const IsingModel& model);

// --- sample tables ---------------------------------------------------------

struct SampleRow {
  long long index = 0;
  std::string state;       // over {+,-}
  double energy = 0.0;
  double log_q = 0.0;
  int refresh_calls = 0;
  bool fallback = false;
};

struct TableFile {
  std::map<std::string, std::string> header;   // `# key: value`
  std::vector<std::string> columns;            // from `# columns: ...`
  std::vector<std::vector<std::string>> rows;  // raw fields
  std::map<std::string, std::string> summary;  // `# summary: key=value`
};

// Generic reader for every table this tool writes.
TableFile read_table_file(const std::string& path);

struct SamplesFile {
  std::map<std::string, std::string> header;
  std::vector<SampleRow> rows;
  std::map<std::string, std::string> summary;

  double header_real(const std::string& key) const;
};

SamplesFile read_samples_file(const std::string& path);

std::string format_real(double v);   // %.17g, round-trip exact

}  // namespace sss
