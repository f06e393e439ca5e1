#include "sss/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "sss/branch.hpp"
#include "sss/estimator.hpp"
#include "sss/rng.hpp"

namespace sss {

std::vector<WeightedSample> weigh(const std::vector<DrawResult>& draws,
                                  const IsingModel& model, double beta) {
  std::vector<WeightedSample> out;
  out.reserve(draws.size());
  for (const auto& d : draws) {
    WeightedSample w;
    w.state = d.state;
    w.log_q = d.log_q;
    w.log_pi_tilde = -beta * model.energy(d.state);
    w.log_w = w.log_pi_tilde - w.log_q;
    if (!std::isfinite(w.log_w))
      throw std::logic_error("non-finite importance weight");
    out.push_back(std::move(w));
  }
  return out;
}

namespace {

double max_log_w(const std::vector<WeightedSample>& s) {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& x : s) m = std::max(m, x.log_w);
  return m;
}

}  // namespace

double estimate_expectation(const std::vector<WeightedSample>& samples,
                            const std::function<double(const SpinState&)>& h) {
  if (samples.empty()) throw std::invalid_argument("no samples");
  double shift = max_log_w(samples);
  double num = 0.0, den = 0.0;
  for (const auto& s : samples) {
    double a = std::exp(s.log_w - shift);
    num += a * h(s.state);
    den += a;
  }
  return num / den;
}

LogZEstimate estimate_logz(const std::vector<WeightedSample>& samples) {
  if (samples.empty()) throw std::invalid_argument("no samples");
  LogZEstimate e;
  e.n = static_cast<long long>(samples.size());
  double shift = max_log_w(samples);
  double sum = 0.0;
  for (const auto& s : samples) sum += std::exp(s.log_w - shift);
  double mean = sum / static_cast<double>(e.n);
  e.log_z_hat = shift + std::log(mean);
  if (e.n >= 2) {
    double ss = 0.0;
    for (const auto& s : samples) {
      double d = std::exp(s.log_w - shift) - mean;
      ss += d * d;
    }
    double var = ss / static_cast<double>(e.n - 1);
    double se = std::sqrt(var / static_cast<double>(e.n));
    e.log_se = se > 0.0 ? shift + std::log(se)
                        : -std::numeric_limits<double>::infinity();
  } else {
    e.log_se = std::numeric_limits<double>::quiet_NaN();
  }
  return e;
}

WeightDiagnostics weight_diagnostics(const std::vector<WeightedSample>& samples) {
  if (samples.size() < 2)
    throw std::invalid_argument("need >= 2 samples for weight diagnostics");
  double shift = max_log_w(samples);
  double s1 = 0.0, s2 = 0.0;
  for (const auto& s : samples) {
    double a = std::exp(s.log_w - shift);
    s1 += a;
    s2 += a * a;
  }
  double n = static_cast<double>(samples.size());
  WeightDiagnostics d;
  d.weight_variance = n * s2 / (s1 * s1) - 1.0;
  d.ess = n / (1.0 + d.weight_variance);
  return d;
}

BoltzmannFit fit_boltzmann_line(const std::vector<double>& energies,
                                const std::vector<double>& log_qs, double beta,
                                double log_z) {
  if (energies.size() != log_qs.size() || energies.size() < 2)
    throw std::invalid_argument("need >= 2 (E, log q) pairs");
  double n = static_cast<double>(energies.size());
  double me = 0.0, mq = 0.0;
  for (std::size_t i = 0; i < energies.size(); ++i) {
    me += energies[i];
    mq += log_qs[i];
  }
  me /= n;
  mq /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < energies.size(); ++i) {
    sxx += (energies[i] - me) * (energies[i] - me);
    sxy += (energies[i] - me) * (log_qs[i] - mq);
  }
  BoltzmannFit f;
  f.fit_slope = sxx > 0.0 ? sxy / sxx
                          : std::numeric_limits<double>::quiet_NaN();
  f.fit_intercept = mq - f.fit_slope * me;

  double ss = 0.0;
  if (std::isnan(log_z)) {
    // Unknown intercept: scatter of log q + beta E about its mean.
    double mr = mq + beta * me;
    for (std::size_t i = 0; i < energies.size(); ++i) {
      double r = (log_qs[i] + beta * energies[i]) - mr;
      ss += r * r;
    }
  } else {
    for (std::size_t i = 0; i < energies.size(); ++i) {
      double r = log_qs[i] - (-beta * energies[i] - log_z);
      ss += r * r;
    }
  }
  f.residual_sd = std::sqrt(ss / n);
  return f;
}

// ---------------------------------------------------------------------------

McmcState mcmc_init(const IsingModel& model, double beta, std::uint64_t seed) {
  std::mt19937_64 eng(rng::mix(seed, 0x494E4954ull));
  SpinState x(static_cast<std::size_t>(model.num_spins()));
  for (auto& s : x) s = rng::uniform01(eng) < 0.5 ? Spin{1} : Spin{-1};
  return mcmc_init_from(model, beta, std::move(x));
}

McmcState mcmc_init_from(const IsingModel& model, double beta, SpinState x) {
  McmcState mc;
  mc.log_pi_tilde = -beta * model.energy(x);
  mc.x = std::move(x);
  return mc;
}

namespace {

// Single-variable robust estimate of Pr(y_v = +1) from a population, count
// or Rao-Blackwell form.
double single_site_qplus(const IsingModel& model, const SamplerParams& params,
                         const SamplePopulation& pop, int v) {
  long long cp = 0;
  for (const auto& y : pop) cp += y[static_cast<std::size_t>(v)] > 0;
  std::vector<double> a =
      robust_alphas({cp, static_cast<long long>(pop.size()) - cp});
  if (params.estimator == EstimatorMode::rao_blackwell) {
    std::vector<std::int32_t> all(pop.size());
    std::iota(all.begin(), all.end(), 0);
    return rao_blackwell_estimate(model, params.beta, pop, all, v, a[0], a[1])
        .first;
  }
  return (static_cast<double>(cp) + a[0]) /
         (static_cast<double>(pop.size()) + 1.0);
}

}  // namespace

void mcmc_step(McmcState& mc, const IsingModel& model,
               const Heuristic& heuristic, const SamplerParams& params,
               std::mt19937_64& rng) {
  if (!heuristic.state_independent())
    throw std::invalid_argument(
        "mcmc_step requires a state-independent heuristic");
  int m = model.num_spins();
  if (static_cast<int>(mc.x.size()) != m)
    throw std::invalid_argument("chain state length != m");

  // One variable order per step, shared by both passes.  The chooser only
  // looks at which sites are assigned, so a dummy assignment realizes it.
  BranchChooser chooser(params.branch_rule, model);
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(m));
  {
    PartialState probe(m);
    for (int n = 0; n < m; ++n) {
      int v = chooser.choose(probe, rng);
      probe.set(v, 1);
      order.push_back(v);
    }
  }

  auto population = [&](const PartialState& sigma) {
    HeuristicRequest req;
    req.constraint = sigma;
    req.population_size = params.population_size;
    req.seed = rng::mix(params.seed, 0x4D434D43ull, rng());
    req.beta = params.beta;
    return heuristic.run_constrained(model, req);
  };

  // Forward pass: generate y, accumulating log q_fwd(y).
  PartialState sy(m);
  double log_q_fwd = 0.0;
  for (int v : order) {
    SamplePopulation pop = population(sy);
    double qp = single_site_qplus(model, params, pop, v);
    Spin s = rng::uniform01(rng) < qp ? Spin{1} : Spin{-1};
    log_q_fwd += std::log(s > 0 ? qp : 1.0 - qp);
    sy.set(v, s);
  }
  SpinState y = sy.as_state();
  double log_pi_y = -params.beta * model.energy(y);

  // Reverse pass: score regenerating x along the same order.
  PartialState sx(m);
  double log_q_rev = 0.0;
  for (int v : order) {
    SamplePopulation pop = population(sx);
    double qp = single_site_qplus(model, params, pop, v);
    Spin s = mc.x[static_cast<std::size_t>(v)];
    log_q_rev += std::log(s > 0 ? qp : 1.0 - qp);
    sx.set(v, s);
  }

  double log_accept = (log_pi_y + log_q_rev) - (mc.log_pi_tilde + log_q_fwd);
  ++mc.steps;
  if (std::log(rng::uniform01(rng)) < log_accept) {
    mc.x = std::move(y);
    mc.log_pi_tilde = log_pi_y;
    ++mc.accepts;
  }
}

}  // namespace sss
