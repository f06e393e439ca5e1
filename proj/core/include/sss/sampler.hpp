#pragma once

// Drawing full states.
//
// draw() performs ancestral sampling down a subcube tree, extending the tree
// in place whenever it reaches an incomplete leaf; the returned log_q is the
// leaf's logQ, i.e. the sum of estimated branch conditionals along the path.
// If an extension cannot make progress (frozen tree, or node budget stuck
// with nothing retractable), the remaining free variables are completed from
// one direct constrained population with a per-variable robust estimate;
// this keeps q_hat positive everywhere, at the cost of a looser value, and
// is flagged in the result.
//
// scp_basic() is the one-variable-at-a-time reference process: a fresh
// constrained population per coordinate, no tree, exactly m populations per
// draw.

#include <random>

#include "sss/heuristic.hpp"
#include "sss/ising.hpp"
#include "sss/params.hpp"
#include "sss/sstree.hpp"

namespace sss {

struct DrawResult {
  SpinState state;
  double log_q = 0.0;        // <= 0
  int refresh_calls = 0;     // heuristic populations consumed by this draw
  bool used_fallback = false;
};

// Child pick at an internal node: plus branch with probability
// exp(plus.logQ - node.logQ).
TreeNode* sample_child(const TreeNode* node, std::mt19937_64& rng);

// Pure ancestral descent to a leaf; no extension.  Test/diagnostic primitive.
TreeNode* sample_leaf(const SubcubeTree& tree, std::mt19937_64& rng);

DrawResult draw(SubcubeTree& tree, const Heuristic& heuristic,
                std::mt19937_64& rng);

DrawResult scp_basic(const IsingModel& model, const Heuristic& heuristic,
                     const SamplerParams& params, std::mt19937_64& rng);

}  // namespace sss
