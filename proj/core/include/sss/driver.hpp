// Implementations of the command-line verbs, kept in the library so tests
// can run them in-process.  Each writer emits a `#`-headed comma-separated
// table (see io.hpp); given a fixed config and seed, output is byte-stable
// except for the wall_time_s summary field.

#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "sss/io.hpp"

namespace sss {

// `sss gen`: write a generated problem to `out`.
void run_gen(Family family, int lx, int ly, int lz, bool periodic,
             std::uint64_t seed, std::ostream& out);

// `sss sample`: draw cfg.draws states in mode sss or scp-basic, one row per
// draw, then a summary block (logZ estimate, weight diagnostics, heuristic
// call count, wall time).  Rejects mode mcmc.
void run_sample(const RunConfig& cfg, std::ostream& out);

// `sss mcmc`: run cfg.mcmc_steps steps of the SCP Metropolis-Hastings
// kernel; row 0 is the initial state, then one row per step.
void run_mcmc(const RunConfig& cfg, std::ostream& out);

// Where the reference log Z for the diag line comes from.  auto_pick takes
// the closed form when the model is independent or chain, full enumeration
// when m is desk-scale, and the importance-sampling estimate otherwise; the
// choice is recorded in the output header.  `enumerate` on a large model
// propagates the enumeration size guard (CLI exit 3).
enum class LogZSource { auto_pick, oracle, enumerate, estimate };

// `sss diag`: energy vs log_q scatter from an existing samples file, with
// the reference line log q = -beta E - log Z and a least-squares fit.
// log_z_override, when set, wins over `source`.
void run_diag(const std::string& samples_path, const IsingModel& model,
              std::optional<double> log_z_override, LogZSource source,
              std::ostream& out);

// `sss suggest-params`: size-scaling guidance.  Scaling m by c = m/m0
// scales the population up and the KL budget down by the same factor.
struct SuggestedParams {
  long long population_size = 0;
  double theta = 0.0;
};

SuggestedParams suggest_params(int m, int m0 = 100, long long n0 = 2000,
                               double theta0 = 0.05);

}  // namespace sss
