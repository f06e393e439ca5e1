#pragma once

// Importance-sampling estimators, weight diagnostics, and the
// Metropolis-Hastings kernel driven by the sequential constraining process.
//
// A drawn state y with proposal probability q_hat(y) gets the unnormalized
// weight w = exp(-beta E(y)) / q_hat(y).  The mean of w estimates Z
// unbiasedly; ratios of weighted sums give self-normalized expectations.
// All sums are computed with a max-shift so log weights of any magnitude are
// safe.

#include <functional>
#include <random>
#include <vector>

#include "sss/heuristic.hpp"
#include "sss/ising.hpp"
#include "sss/params.hpp"
#include "sss/sampler.hpp"

namespace sss {

struct WeightedSample {
  SpinState state;
  double log_q = 0.0;
  double log_pi_tilde = 0.0;   // -beta * E(state)
  double log_w = 0.0;          // log_pi_tilde - log_q
};

std::vector<WeightedSample> weigh(const std::vector<DrawResult>& draws,
                                  const IsingModel& model, double beta);

// Self-normalized estimate of E_pi[h]; lies in [min h, max h] over the draws.
double estimate_expectation(const std::vector<WeightedSample>& samples,
                            const std::function<double(const SpinState&)>& h);

struct LogZEstimate {
  double log_z_hat = 0.0;   // log of the weight mean
  double log_se = 0.0;      // log of the standard error of Z_hat
  long long n = 0;

  double z() const { return std::exp(log_z_hat); }            // may overflow
  double z_standard_error() const { return std::exp(log_se); }
  double relative_se() const { return std::exp(log_se - log_z_hat); }
};

// Unbiased in Z (not in log Z); needs >= 2 samples for the error bar.
LogZEstimate estimate_logz(const std::vector<WeightedSample>& samples);

struct WeightDiagnostics {
  double weight_variance = 0.0;   // Var[w] / mean(w)^2, population form
  double ess = 0.0;               // n / (1 + weight_variance)  (Kish)
};

WeightDiagnostics weight_diagnostics(const std::vector<WeightedSample>& samples);

// Least-squares fit of log_q against E plus scatter about the reference
// line log q = -beta E - log Z.  When log_z is unknown (NaN) the residual is
// taken about the best intercept instead, which is the same up to centering.
struct BoltzmannFit {
  double fit_slope = 0.0;
  double fit_intercept = 0.0;
  double residual_sd = 0.0;
};

BoltzmannFit fit_boltzmann_line(const std::vector<double>& energies,
                                const std::vector<double>& log_qs, double beta,
                                double log_z);

// ---------------------------------------------------------------------------

struct McmcState {
  SpinState x;
  double log_pi_tilde = 0.0;
  long long steps = 0;
  long long accepts = 0;

  double acceptance_rate() const {
    return steps ? static_cast<double>(accepts) / static_cast<double>(steps)
                 : 0.0;
  }
};

McmcState mcmc_init(const IsingModel& model, double beta, std::uint64_t seed);
McmcState mcmc_init_from(const IsingModel& model, double beta, SpinState x);

// One reversible move: propose y by a forward constraining pass, score the
// reverse pass that would regenerate x along the same variable order (fresh
// populations in both directions), and accept with probability
// min(1, pi(y) q_rev(x) / (pi(x) q_fwd(y))).  Requires a state-independent
// heuristic; the reverse conditioning is vacuous then, and the kernel
// satisfies detailed balance.
void mcmc_step(McmcState& mc, const IsingModel& model,
               const Heuristic& heuristic, const SamplerParams& params,
               std::mt19937_64& rng);

}  // namespace sss
