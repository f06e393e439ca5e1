#pragma once

// Constrained stochastic processes that propose full states.
//
// A heuristic, given a clamping condition (partial state) and a population
// size N, returns N full states whose assigned coordinates match the clamp
// exactly.  The sampler modules treat the result purely as an empirical
// population: members need not be independent of one another, and nothing
// downstream assumes they are.
//
// The default run_constrained generates members independently in parallel;
// interacting-population heuristics can override it wholesale.  Member j of a
// request uses engine seed rng::mix(request.seed, j), so results do not
// depend on the thread count or schedule.

#include <cstdint>
#include <memory>
#include <string>

#include "sss/estimator.hpp"
#include "sss/ising.hpp"
#include "sss/partial_state.hpp"

namespace sss {

struct HeuristicRequest {
  PartialState constraint;       // length m; assigned sites are clamped
  long long population_size = 1; // N >= 1
  std::uint64_t seed = 0;
  double beta = 1.0;             // target inverse temperature
};

struct SaSchedule {
  double beta_start = 0.1;
  // beta_end comes from the request's target beta at run time.
  int n_steps = 100;
  int sweeps_per_step = 1;
  enum class Order { sequential, random_permutation };
  Order order = Order::random_permutation;
};

class Heuristic {
 public:
  virtual ~Heuristic() = default;

  virtual std::string name() const = 0;

  // True when the process does not condition on any externally supplied
  // current state; required by the MCMC kernel's reverse pass.
  virtual bool state_independent() const { return true; }

  // Returns exactly N = request.population_size states, each matching the
  // constraint (verified; violation is a logic error in the heuristic).
  virtual SamplePopulation run_constrained(const IsingModel& model,
                                           const HeuristicRequest& request) const;

  void set_threads(int t) { threads_ = t < 1 ? 1 : t; }
  int threads() const { return threads_; }

 protected:
  // One member draw.  member_seed is already fully mixed.
  virtual SpinState sample_one(const IsingModel& model,
                               const PartialState& constraint, double beta,
                               std::uint64_t member_seed) const = 0;

  int threads_ = 1;
};

// Simulated annealing with heat-bath (Gibbs) single-site sweeps over the free
// variables only; clamped variables are held fixed from initialization on.
// beta ramps linearly from schedule.beta_start to the request's beta across
// n_steps (n_steps == 1 runs directly at the target), with sweeps_per_step
// full sweeps at each step.  Free variables initialize uniformly at random.
class AnnealHeuristic final : public Heuristic {
 public:
  explicit AnnealHeuristic(SaSchedule schedule) : schedule_(schedule) {}
  std::string name() const override { return "sa"; }
  const SaSchedule& schedule() const { return schedule_; }

 protected:
  SpinState sample_one(const IsingModel& model, const PartialState& constraint,
                       double beta, std::uint64_t member_seed) const override;

 private:
  SaSchedule schedule_;
};

// Free-function form of one SA run.
SpinState sa_sample(const IsingModel& model, const PartialState& constraint,
                    const SaSchedule& schedule, double beta_target,
                    std::uint64_t seed);

// Exact conditional sampler for coupling-free models: per-site Bernoulli.
class ExactIndependentHeuristic final : public Heuristic {
 public:
  std::string name() const override { return "exact-independent"; }

 protected:
  SpinState sample_one(const IsingModel& model, const PartialState& constraint,
                       double beta, std::uint64_t member_seed) const override;
};

// Exact conditional sampler for chain models: forward filtering, backward
// sampling in the log domain, with clamped sites restricted to their value.
class ExactChainHeuristic final : public Heuristic {
 public:
  std::string name() const override { return "exact-chain"; }

 protected:
  SpinState sample_one(const IsingModel& model, const PartialState& constraint,
                       double beta, std::uint64_t member_seed) const override;
};

// Picks the exact sampler matching the model (independent or chain);
// throws std::invalid_argument for other families.
std::unique_ptr<Heuristic> make_exact_heuristic(const IsingModel& model);

}  // namespace sss
