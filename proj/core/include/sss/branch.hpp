#pragma once

// Branch-variable selection.
//
// Rules pick which free variable a tree node splits on.  None of them may
// look at sample values: selection that chases apparent purity biases the
// probability estimates, so choices depend only on the model topology and on
// which variables are already assigned.
//
//   fixed      index order 0..m-1
//   random     uniform over free variables
//   neighbour  uniform over free variables adjacent to an assigned one
//              (falls back to uniform when nothing qualifies)
//   bisection  precomputed recursive-separator order for chain/grid models

#include <random>
#include <vector>

#include "sss/ising.hpp"
#include "sss/params.hpp"
#include "sss/partial_state.hpp"

namespace sss {

// Recursive vertex-separator ordering of an lx x ly x lz lattice in
// breadth-first box order: each box emits its central separator plane
// (longest axis first, x preferred on ties), then recurses into the halves.
// On a periodic axis the top-level cut removes two parallel planes, which is
// what it takes to disconnect a ring.
std::vector<int> bisection_order(int lx, int ly, int lz, bool periodic);

class BranchChooser {
 public:
  BranchChooser(BranchRule rule, const IsingModel& model);

  // Next branch variable for a node with partial state sigma.
  // Deterministic given the rng state; rng is untouched by fixed/bisection.
  int choose(const PartialState& sigma, std::mt19937_64& rng) const;

  BranchRule rule() const { return rule_; }
  // Full static order; empty for the randomized rules.
  const std::vector<int>& static_order() const { return order_; }

 private:
  BranchRule rule_;
  const IsingModel* model_;
  std::vector<int> order_;
};

}  // namespace sss
