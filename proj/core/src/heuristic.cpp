#include "sss/heuristic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>
#include <vector>

#include "sss/rng.hpp"

namespace sss {

SamplePopulation Heuristic::run_constrained(const IsingModel& model,
                                            const HeuristicRequest& req) const {
  if (req.constraint.size() != model.num_spins())
    throw std::invalid_argument("constraint length != model size");
  if (req.population_size < 1)
    throw std::invalid_argument("population size must be >= 1");

  std::size_t n = static_cast<std::size_t>(req.population_size);
  SamplePopulation pop(n);
  auto fill = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t j = lo; j < hi; ++j)
      pop[j] = sample_one(model, req.constraint, req.beta,
                          rng::mix(req.seed, j));
  };

  // Thread spawn overhead dominates small requests; run those inline.
  int nt = threads_;
  if (n < 256) nt = 1;
  if (nt <= 1) {
    fill(0, n);
  } else {
    nt = std::min<int>(nt, static_cast<int>(n));
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(nt));
    std::size_t chunk = (n + static_cast<std::size_t>(nt) - 1) /
                        static_cast<std::size_t>(nt);
    for (int t = 0; t < nt; ++t) {
      std::size_t lo = static_cast<std::size_t>(t) * chunk;
      std::size_t hi = std::min(n, lo + chunk);
      if (lo >= hi) break;
      workers.emplace_back(fill, lo, hi);
    }
    for (auto& w : workers) w.join();
  }

  for (const auto& y : pop)
    if (!req.constraint.matches(y))
      throw std::logic_error("heuristic '" + name() +
                             "' violated the clamping contract");
  return pop;
}

// ---------------------------------------------------------------------------

SpinState sa_sample(const IsingModel& model, const PartialState& constraint,
                    const SaSchedule& schedule, double beta_target,
                    std::uint64_t seed) {
  int m = model.num_spins();
  std::mt19937_64 eng(seed);

  SpinState y(static_cast<std::size_t>(m));
  std::vector<int> free;
  free.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    if (constraint.assigned(i)) {
      y[static_cast<std::size_t>(i)] = constraint.get(i);
    } else {
      y[static_cast<std::size_t>(i)] =
          rng::uniform01(eng) < 0.5 ? Spin{1} : Spin{-1};
      free.push_back(i);
    }
  }
  if (schedule.n_steps <= 0 || schedule.sweeps_per_step <= 0 || free.empty())
    return y;

  // Maintain all local fields incrementally; a flip of site i shifts
  // lambda_j by 2 * y_i_new * J_ij for each neighbour j.
  std::vector<double> lambda(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i)
    lambda[static_cast<std::size_t>(i)] = model.local_field(y, i);

  std::vector<int> order = free;
  int n_steps = schedule.n_steps;
  for (int k = 0; k < n_steps; ++k) {
    double beta = n_steps == 1
                      ? beta_target
                      : schedule.beta_start +
                            (beta_target - schedule.beta_start) *
                                (static_cast<double>(k) /
                                 static_cast<double>(n_steps - 1));
    for (int rep = 0; rep < schedule.sweeps_per_step; ++rep) {
      if (schedule.order == SaSchedule::Order::random_permutation) {
        for (std::size_t a = order.size(); a > 1; --a) {
          std::size_t b = rng::uniform_below(eng, a);
          std::swap(order[a - 1], order[b]);
        }
      }
      for (int i : order) {
        double p = prob_plus(lambda[static_cast<std::size_t>(i)], beta);
        Spin s = rng::uniform01(eng) < p ? Spin{1} : Spin{-1};
        if (s != y[static_cast<std::size_t>(i)]) {
          y[static_cast<std::size_t>(i)] = s;
          double step = 2.0 * static_cast<double>(s);
          for (const auto& [j, w] : model.neighbours(i))
            lambda[static_cast<std::size_t>(j)] += step * w;
        }
      }
    }
  }
  return y;
}

SpinState AnnealHeuristic::sample_one(const IsingModel& model,
                                      const PartialState& constraint,
                                      double beta,
                                      std::uint64_t member_seed) const {
  return sa_sample(model, constraint, schedule_, beta, member_seed);
}

// ---------------------------------------------------------------------------

SpinState ExactIndependentHeuristic::sample_one(const IsingModel& model,
                                                const PartialState& constraint,
                                                double beta,
                                                std::uint64_t member_seed) const {
  if (!model.couplings().empty())
    throw std::invalid_argument(
        "exact independent sampler requires a coupling-free model");
  int m = model.num_spins();
  std::mt19937_64 eng(member_seed);
  SpinState y(static_cast<std::size_t>(m));
  const auto& h = model.fields();
  for (int i = 0; i < m; ++i) {
    if (constraint.assigned(i)) {
      y[static_cast<std::size_t>(i)] = constraint.get(i);
    } else {
      double p = prob_plus(h[static_cast<std::size_t>(i)], beta);
      y[static_cast<std::size_t>(i)] =
          rng::uniform01(eng) < p ? Spin{1} : Spin{-1};
    }
  }
  return y;
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double lse2(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

// Sample s in {+1,-1} from two log weights.
Spin sample_pm(std::mt19937_64& eng, double logw_plus, double logw_minus) {
  if (logw_plus == kNegInf) return -1;
  if (logw_minus == kNegInf) return 1;
  double p = 1.0 / (1.0 + std::exp(logw_minus - logw_plus));
  return rng::uniform01(eng) < p ? Spin{1} : Spin{-1};
}

}  // namespace

SpinState ExactChainHeuristic::sample_one(const IsingModel& model,
                                          const PartialState& constraint,
                                          double beta,
                                          std::uint64_t member_seed) const {
  int m = model.num_spins();
  std::vector<double> j(static_cast<std::size_t>(std::max(0, m - 1)), 0.0);
  for (const auto& c : model.couplings()) {
    if (c.j != c.i + 1)
      throw std::invalid_argument(
          "exact chain sampler requires consecutive couplings");
    j[static_cast<std::size_t>(c.i)] = c.value;
  }
  const auto& h = model.fields();
  std::mt19937_64 eng(member_seed);

  auto allowed = [&](int i, int s) {
    return !constraint.assigned(i) || constraint.get(i) == s;
  };

  // Forward messages F[i][0] for s=+1, F[i][1] for s=-1.
  std::vector<std::array<double, 2>> f(static_cast<std::size_t>(m));
  f[0][0] = allowed(0, 1) ? -beta * h[0] : kNegInf;
  f[0][1] = allowed(0, -1) ? beta * h[0] : kNegInf;
  for (int k = 1; k < m; ++k) {
    double jj = j[static_cast<std::size_t>(k - 1)];
    const auto& prev = f[static_cast<std::size_t>(k - 1)];
    auto& cur = f[static_cast<std::size_t>(k)];
    cur[0] = allowed(k, 1)
                 ? lse2(prev[0] - beta * jj, prev[1] + beta * jj) -
                       beta * h[static_cast<std::size_t>(k)]
                 : kNegInf;
    cur[1] = allowed(k, -1)
                 ? lse2(prev[0] + beta * jj, prev[1] - beta * jj) +
                       beta * h[static_cast<std::size_t>(k)]
                 : kNegInf;
  }

  SpinState y(static_cast<std::size_t>(m));
  y[static_cast<std::size_t>(m - 1)] =
      sample_pm(eng, f[static_cast<std::size_t>(m - 1)][0],
                f[static_cast<std::size_t>(m - 1)][1]);
  for (int k = m - 2; k >= 0; --k) {
    double jj = j[static_cast<std::size_t>(k)];
    double ynext = static_cast<double>(y[static_cast<std::size_t>(k + 1)]);
    y[static_cast<std::size_t>(k)] =
        sample_pm(eng, f[static_cast<std::size_t>(k)][0] - beta * jj * ynext,
                  f[static_cast<std::size_t>(k)][1] + beta * jj * ynext);
  }
  return y;
}

std::unique_ptr<Heuristic> make_exact_heuristic(const IsingModel& model) {
  if (model.couplings().empty())
    return std::make_unique<ExactIndependentHeuristic>();
  bool chainlike = std::all_of(
      model.couplings().begin(), model.couplings().end(),
      [](const Coupling& c) { return c.j == c.i + 1; });
  if (chainlike) return std::make_unique<ExactChainHeuristic>();
  throw std::invalid_argument(
      "exact sampling is only available for independent and chain models");
}

}  // namespace sss
