#pragma once

// Memory-bounded subcube trees.
//
// A SubcubeTree is a full binary tree (every node has zero or two children)
// over partial states: each internal node fixes one branch variable, its
// children pin that variable to + and -, and the leaves always partition the
// root subcube.  Nodes carry the sample count of their latest refresh
// population, a Dirichlet pseudocount alpha, and logQ, the log of the
// estimated probability of reaching the node from the root.
//
// extend() grows the tree under an incomplete leaf from one fresh constrained
// population: frontier leaves are branched most-populated-first until the
// worst-case posterior KL loss of the grown partition would exceed theta (the
// offending branch is undone), a child enters the frontier only while its
// state is incomplete and its count exceeds the eligibility threshold, and
// the node budget is enforced before every branch by retracting the subleaf
// (internal node with two leaf children) of lowest stored logQ.
//
// Retraction priorities are the logQ values at enqueue time; they are not
// refreshed when later extensions change the tree, which affects only which
// node gets evicted, never correctness.  All tie-breaks (frontier and
// retraction) use node creation order, so runs are reproducible.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <random>
#include <set>
#include <unordered_map>
#include <vector>

#include "sss/branch.hpp"
#include "sss/estimator.hpp"
#include "sss/heuristic.hpp"
#include "sss/ising.hpp"
#include "sss/params.hpp"
#include "sss/partial_state.hpp"

namespace sss {

struct TreeNode {
  TreeNode* parent = nullptr;
  std::unique_ptr<TreeNode> plus, minus;   // both set or both null
  int branch_variable = -1;                // >= 0 iff internal
  int depth = 0;                           // == number of assigned variables
  std::uint64_t id = 0;                    // creation sequence number
  long long count = 0;                     // # under the owning refresh pop
  double alpha = 0.0;
  double log_q = 0.0;
  bool refresh_point = false;
  bool in_retraction_queue = false;
  double retraction_priority = 0.0;        // logQ at enqueue time

  bool is_leaf() const { return !plus; }
  bool is_subleaf() const {
    return plus && plus->is_leaf() && minus->is_leaf();
  }
  TreeNode* child(Spin s) const { return s > 0 ? plus.get() : minus.get(); }
};

class SubcubeTree {
 public:
  SubcubeTree(const IsingModel& model, SamplerParams params);

  const IsingModel& model() const { return *model_; }
  const SamplerParams& params() const { return params_; }
  TreeNode* root() { return root_.get(); }
  const TreeNode* root() const { return root_.get(); }
  long long tree_size() const { return tree_size_; }
  long long refresh_count() const { return refresh_count_; }

  // Reconstructs sigma(node) by walking the ancestor path.
  PartialState partial_state(const TreeNode* node) const;
  bool is_complete_state(const TreeNode* node) const {
    return node->depth == model_->num_spins();
  }

  // Grow the tree under incomplete leaf nu from one fresh population of
  // params.population_size states constrained on sigma(nu).
  void extend(TreeNode* nu, const Heuristic& heuristic, std::mt19937_64& rng);

  // Enforce the node budget: no-op while a branch would still fit, otherwise
  // delete the two children of the lowest-priority queued subleaf.  Returns
  // false when over budget with nothing retractable.  protected_node (may be
  // null) is never enqueued as a consequence of this call.
  bool retract_worst_subleaf(const TreeNode* protected_node);

  // Enqueue every subleaf of the subtree rooted here; idempotent.
  void update_retraction_queue(TreeNode* subtree_root);

  // Extension on/off switch; frozen trees only serve cached draws.
  void set_extension_enabled(bool on) { extension_enabled_ = on; }
  bool extension_enabled() const { return extension_enabled_; }

  template <typename F>
  void for_each_node(F&& f) const {
    walk(root_.get(), f);
  }
  template <typename F>
  void for_each_leaf(F&& f) const {
    walk(root_.get(), [&](const TreeNode* n) {
      if (n->is_leaf()) f(n);
    });
  }

  // Indented text dump (state, count, alpha, logQ) for golden tests.
  void dump(std::ostream& out) const;

  // Test instrumentation: called after every accepted branch with the
  // current partition counts, alphas and worst-case KL.
  std::function<void(const std::vector<long long>&, const std::vector<double>&,
                     double)>
      on_branch_accepted;

  // Test instrumentation: when set, picks branch variables instead of the
  // configured rule.  Lets golden tests script an exact tree evolution.
  std::function<int(const PartialState&)> branch_override;

 private:
  template <typename F>
  static void walk(const TreeNode* n, F&& f) {
    if (!n) return;
    f(n);
    walk(n->plus.get(), f);
    walk(n->minus.get(), f);
  }

  struct RqEntry {
    double priority;
    TreeNode* node;
  };
  struct RqCmp {
    bool operator()(const RqEntry& a, const RqEntry& b) const {
      if (a.priority != b.priority) return a.priority < b.priority;
      return a.node->id < b.node->id;
    }
  };

  void rq_insert(TreeNode* n);
  void rq_erase(TreeNode* n);
  TreeNode* make_node(TreeNode* parent);
  static void collect_leaves(TreeNode* n, std::vector<TreeNode*>& out);
  void set_probs_count_mode(TreeNode* nu, long long n_pop, double log_q_r);
  void set_probs_rb_mode(
      TreeNode* nu, double log_q_r,
      const std::unordered_map<const TreeNode*, double>& rb_plus);

  const IsingModel* model_;
  SamplerParams params_;
  BranchChooser chooser_;
  std::unique_ptr<TreeNode> root_;
  long long tree_size_ = 1;
  long long refresh_count_ = 0;
  std::uint64_t next_id_ = 0;
  bool extension_enabled_ = true;
  std::set<RqEntry, RqCmp> rq_;
};

}  // namespace sss
