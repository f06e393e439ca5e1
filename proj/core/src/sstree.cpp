#include "sss/sstree.hpp"

#include <cassert>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>
#include <queue>
#include <stdexcept>

#include "sss/rng.hpp"

namespace sss {

namespace {

double lse2(double a, double b) {
  double m = std::max(a, b);
  if (m == -std::numeric_limits<double>::infinity()) return m;
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

}  // namespace

SubcubeTree::SubcubeTree(const IsingModel& model, SamplerParams params)
    : model_(&model), params_(params), chooser_(params.branch_rule, model) {
  params_.validate();
  root_ = std::unique_ptr<TreeNode>(make_node(nullptr));
  root_->count = params_.population_size;   // nominal until first refresh
  root_->alpha = 1.0;
  root_->log_q = 0.0;
}

TreeNode* SubcubeTree::make_node(TreeNode* parent) {
  auto* n = new TreeNode;
  n->parent = parent;
  n->depth = parent ? parent->depth + 1 : 0;
  n->id = next_id_++;
  return n;
}

PartialState SubcubeTree::partial_state(const TreeNode* node) const {
  PartialState s(model_->num_spins());
  for (const TreeNode* c = node; c->parent; c = c->parent) {
    const TreeNode* p = c->parent;
    s.set(p->branch_variable, c == p->plus.get() ? Spin{1} : Spin{-1});
  }
  return s;
}

void SubcubeTree::rq_insert(TreeNode* n) {
  if (n->in_retraction_queue) return;
  n->retraction_priority = n->log_q;
  rq_.insert({n->retraction_priority, n});
  n->in_retraction_queue = true;
}

void SubcubeTree::rq_erase(TreeNode* n) {
  if (!n->in_retraction_queue) return;
  rq_.erase({n->retraction_priority, n});
  n->in_retraction_queue = false;
}

void SubcubeTree::collect_leaves(TreeNode* n, std::vector<TreeNode*>& out) {
  if (n->is_leaf()) {
    out.push_back(n);
    return;
  }
  collect_leaves(n->plus.get(), out);
  collect_leaves(n->minus.get(), out);
}

bool SubcubeTree::retract_worst_subleaf(const TreeNode* protected_node) {
  if (tree_size_ + 2 <= params_.max_tree_size) return true;
  if (rq_.empty()) return false;
  TreeNode* s = rq_.begin()->node;
  rq_erase(s);
  assert(s->is_subleaf());
  // The pseudocount mass of the deleted cells folds back into the parent, so
  // the surviving partition keeps a coherent Dirichlet.
  s->alpha = s->plus->alpha + s->minus->alpha;
  s->plus.reset();
  s->minus.reset();
  s->branch_variable = -1;
  tree_size_ -= 2;
  TreeNode* p = s->parent;
  if (p && p != protected_node && p->is_subleaf()) rq_insert(p);
  return true;
}

void SubcubeTree::update_retraction_queue(TreeNode* r) {
  if (!r || r->is_leaf()) return;
  if (r->is_subleaf()) {
    rq_insert(r);
    return;
  }
  update_retraction_queue(r->plus.get());
  update_retraction_queue(r->minus.get());
}

void SubcubeTree::set_probs_count_mode(TreeNode* nu, long long n_pop,
                                       double log_q_r) {
  double log_denom = std::log(static_cast<double>(n_pop) + 1.0);
  auto rec = [&](auto&& self, TreeNode* x) -> void {
    if (x->is_leaf()) {
      x->log_q =
          std::log(static_cast<double>(x->count) + x->alpha) - log_denom +
          log_q_r;
      return;
    }
    self(self, x->plus.get());
    self(self, x->minus.get());
    x->log_q = lse2(x->plus->log_q, x->minus->log_q);
  };
  rec(rec, nu);
}

void SubcubeTree::set_probs_rb_mode(
    TreeNode* nu, double log_q_r,
    const std::unordered_map<const TreeNode*, double>& rb_plus) {
  std::unordered_map<const TreeNode*, double> agg;
  auto up = [&](auto&& self, TreeNode* x) -> double {
    if (x->is_leaf()) return agg[x] = x->alpha;
    return agg[x] = self(self, x->plus.get()) + self(self, x->minus.get());
  };
  up(up, nu);

  nu->log_q = log_q_r;
  auto down = [&](auto&& self, TreeNode* x) -> void {
    if (x->is_leaf()) return;
    double n = static_cast<double>(x->count);
    // Guard against the sum of member conditionals rounding onto [0, n].
    double sp = rb_plus.at(x);
    sp = std::min(std::max(sp, n * 1e-15), n * (1.0 - 1e-15));
    double ap = agg.at(x->plus.get()), am = agg.at(x->minus.get());
    double denom = n + ap + am;
    x->plus->log_q = x->log_q + std::log((sp + ap) / denom);
    x->minus->log_q = x->log_q + std::log((n - sp + am) / denom);
    self(self, x->plus.get());
    self(self, x->minus.get());
  };
  down(down, nu);
}

void SubcubeTree::extend(TreeNode* nu, const Heuristic& heuristic,
                         std::mt19937_64& rng) {
  if (!extension_enabled_)
    throw std::logic_error("extend called on a frozen tree");
  if (!nu->is_leaf()) throw std::invalid_argument("extend requires a leaf");
  if (is_complete_state(nu))
    throw std::invalid_argument("extend requires an incomplete leaf");

  // Only nu's parent can be a queued subleaf that overlaps the region under
  // construction; pull it out for the duration (re-enqueued below if the
  // extension leaves it a subleaf).
  TreeNode* protect = nu->parent;
  if (protect) rq_erase(protect);

  PartialState sigma = partial_state(nu);
  HeuristicRequest req;
  req.constraint = sigma;
  req.population_size = params_.population_size;
  req.seed = rng::mix(params_.seed, 0x52465348ull,
                      static_cast<std::uint64_t>(refresh_count_));
  req.beta = params_.beta;
  ++refresh_count_;
  SamplePopulation pop = heuristic.run_constrained(*model_, req);

  nu->refresh_point = true;
  nu->count = params_.population_size;

  const bool rb = params_.estimator == EstimatorMode::rao_blackwell;
  std::unordered_map<const TreeNode*, std::vector<std::int32_t>> members;
  {
    auto& all = members[nu];
    all.resize(pop.size());
    std::iota(all.begin(), all.end(), 0);
  }
  std::unordered_map<const TreeNode*, double> rb_plus;

  struct FEntry {
    long long count;
    std::uint64_t seq;
    TreeNode* node;
  };
  struct FCmp {
    bool operator()(const FEntry& a, const FEntry& b) const {
      if (a.count != b.count) return a.count < b.count;   // most populated first
      return a.seq > b.seq;                               // then FIFO
    }
  };
  std::priority_queue<FEntry, std::vector<FEntry>, FCmp> frontier;
  std::uint64_t fseq = 0;
  if (nu->count > params_.count_threshold)
    frontier.push({nu->count, fseq++, nu});

  while (!frontier.empty()) {
    if (!retract_worst_subleaf(protect)) break;   // budget stuck: stop cleanly

    TreeNode* mu = frontier.top().node;
    frontier.pop();
    int v = branch_override ? branch_override(partial_state(mu))
                            : chooser_.choose(partial_state(mu), rng);

    mu->plus.reset(make_node(mu));
    mu->minus.reset(make_node(mu));
    mu->branch_variable = v;
    tree_size_ += 2;

    auto& mm = members.at(mu);
    auto& mp = members[mu->plus.get()];
    auto& mq = members[mu->minus.get()];
    for (std::int32_t j : mm)
      (pop[static_cast<std::size_t>(j)][static_cast<std::size_t>(v)] > 0 ? mp
                                                                         : mq)
          .push_back(j);
    mu->plus->count = static_cast<long long>(mp.size());
    mu->minus->count = static_cast<long long>(mq.size());
    if (rb) rb_plus[mu] = rb_plus_sum(*model_, params_.beta, pop, mm, v);

    std::vector<TreeNode*> leaves;
    collect_leaves(nu, leaves);
    std::vector<long long> counts(leaves.size());
    for (std::size_t i = 0; i < leaves.size(); ++i) counts[i] = leaves[i]->count;
    std::vector<double> alphas = robust_alphas(counts);
    double kl = worst_case_kl(counts, alphas);

    if (kl > params_.theta) {
      // Undo the branch that broke the loss budget and stop growing.
      members.erase(mu->plus.get());
      members.erase(mu->minus.get());
      if (rb) rb_plus.erase(mu);
      mu->plus.reset();
      mu->minus.reset();
      mu->branch_variable = -1;
      tree_size_ -= 2;
      break;
    }

    for (std::size_t i = 0; i < leaves.size(); ++i)
      leaves[i]->alpha = alphas[i];
    if (on_branch_accepted) on_branch_accepted(counts, alphas, kl);

    for (TreeNode* c : {mu->plus.get(), mu->minus.get()})
      if (!is_complete_state(c) && c->count > params_.count_threshold)
        frontier.push({c->count, fseq++, c});
  }

  if (nu->is_leaf()) nu->alpha = 1.0;   // extension fizzled: one-cell partition

  double log_q_r = nu->log_q;
  if (rb)
    set_probs_rb_mode(nu, log_q_r, rb_plus);
  else
    set_probs_count_mode(nu, params_.population_size, log_q_r);

  update_retraction_queue(nu);
  if (nu->is_leaf() && protect && protect->is_subleaf()) rq_insert(protect);
}

void SubcubeTree::dump(std::ostream& out) const {
  auto rec = [&](auto&& self, const TreeNode* n, int indent) -> void {
    for (int i = 0; i < indent; ++i) out << "  ";
    out << partial_state(n).to_string();
    if (!n->is_leaf()) out << "  v=" << n->branch_variable;
    // A logQ that is zero up to rounding prints as 0.000000, not -0.000000:
    // whether an exactly-total partition lands a hair above or below zero is
    // floating-point noise, and goldens should not depend on it.
    double lq = n->log_q;
    if (lq > -5e-7 && lq <= 0.0) lq = 0.0;
    char buf[96];
    std::snprintf(buf, sizeof buf, "  #=%lld  alpha=%.6g  logQ=%.6f",
                  n->count, n->alpha, lq);
    out << buf;
    if (n->refresh_point) out << "  R";
    out << "\n";
    if (!n->is_leaf()) {
      self(self, n->plus.get(), indent + 1);
      self(self, n->minus.get(), indent + 1);
    }
  };
  rec(rec, root_.get(), 0);
}

}  // namespace sss
