#pragma once

// Shared sampler knobs.  Defaults follow the benchmark protocol at m = 100;
// for other sizes scale population_size up and theta down linearly in m
// (`suggest-params` in the CLI prints the scaled values).

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sss {

enum class EstimatorMode { count, rao_blackwell };
enum class BranchRule { fixed, random, neighbour, bisection };

struct SamplerParams {
  long long population_size = 2000;   // N, per refresh
  double theta = 0.05;                // KL growth threshold, nats
  long long max_tree_size = 100000;   // node budget
  long long count_threshold = 0;      // #_thresh: branch-eligibility floor
  double beta = 1.0;
  EstimatorMode estimator = EstimatorMode::count;
  BranchRule branch_rule = BranchRule::neighbour;
  std::uint64_t seed = 0;

  void validate() const {
    if (population_size < 1)
      throw std::invalid_argument("population_size must be >= 1");
    if (!(theta > 0.0)) throw std::invalid_argument("theta must be > 0");
    if (max_tree_size < 3)
      throw std::invalid_argument("max_tree_size must be >= 3");
    if (count_threshold < 0)
      throw std::invalid_argument("count_threshold must be >= 0");
    if (beta < 0.0) throw std::invalid_argument("beta must be >= 0");
  }
};

EstimatorMode estimator_mode_from_string(const std::string& s);
BranchRule branch_rule_from_string(const std::string& s);
std::string to_string(EstimatorMode m);
std::string to_string(BranchRule r);

}  // namespace sss
