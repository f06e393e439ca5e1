#include "sss/sampler.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "sss/branch.hpp"
#include "sss/estimator.hpp"
#include "sss/rng.hpp"

namespace sss {

TreeNode* sample_child(const TreeNode* node, std::mt19937_64& rng) {
  if (node->is_leaf())
    throw std::invalid_argument("sample_child requires an internal node");
  double p = std::exp(node->plus->log_q - node->log_q);
  if (p > 1.0) p = 1.0;
  return rng::uniform01(rng) < p ? node->plus.get() : node->minus.get();
}

TreeNode* sample_leaf(const SubcubeTree& tree, std::mt19937_64& rng) {
  const TreeNode* n = tree.root();
  while (!n->is_leaf()) n = sample_child(n, rng);
  return const_cast<TreeNode*>(n);
}

namespace {

// Complete the free variables of sigma from one constrained population,
// scoring each choice with a single-level robust estimate.  Returns the
// added log probability.
double complete_from_population(const SubcubeTree& tree,
                                const SamplePopulation& pop,
                                PartialState& sigma, std::mt19937_64& rng) {
  BranchChooser chooser(tree.params().branch_rule, tree.model());
  std::vector<std::int32_t> live(pop.size());
  std::iota(live.begin(), live.end(), 0);
  double log_q = 0.0;
  while (!sigma.complete()) {
    int v = chooser.choose(sigma, rng);
    long long cp = 0;
    for (std::int32_t j : live)
      cp += pop[static_cast<std::size_t>(j)][static_cast<std::size_t>(v)] > 0;
    long long cm = static_cast<long long>(live.size()) - cp;
    std::vector<double> a = robust_alphas({cp, cm});
    double denom = static_cast<double>(cp + cm) + 1.0;
    double qp = (static_cast<double>(cp) + a[0]) / denom;
    Spin s = rng::uniform01(rng) < qp ? Spin{1} : Spin{-1};
    log_q += std::log(s > 0 ? qp : 1.0 - qp);
    sigma.set(v, s);
    std::vector<std::int32_t> next;
    next.reserve(live.size());
    for (std::int32_t j : live)
      if (pop[static_cast<std::size_t>(j)][static_cast<std::size_t>(v)] == s)
        next.push_back(j);
    live.swap(next);
  }
  return log_q;
}

}  // namespace

DrawResult draw(SubcubeTree& tree, const Heuristic& heuristic,
                std::mt19937_64& rng) {
  DrawResult res;
  TreeNode* node = tree.root();
  for (;;) {
    if (!node->is_leaf()) {
      node = sample_child(node, rng);
      continue;
    }
    if (tree.is_complete_state(node)) {
      res.state = tree.partial_state(node).as_state();
      res.log_q = node->log_q;
      return res;
    }
    if (tree.extension_enabled()) {
      tree.extend(node, heuristic, rng);
      ++res.refresh_calls;
      if (!node->is_leaf()) continue;   // descend into the grown subtree
    }
    // Extension unavailable or fizzled: finish with one direct population.
    PartialState sigma = tree.partial_state(node);
    HeuristicRequest req;
    req.constraint = sigma;
    req.population_size = tree.params().population_size;
    req.seed = rng::mix(tree.params().seed, 0x46414C4Cull, rng());
    req.beta = tree.params().beta;
    SamplePopulation pop = heuristic.run_constrained(tree.model(), req);
    ++res.refresh_calls;
    res.used_fallback = true;
    double add = complete_from_population(tree, pop, sigma, rng);
    res.state = sigma.as_state();
    res.log_q = node->log_q + add;
    return res;
  }
}

DrawResult scp_basic(const IsingModel& model, const Heuristic& heuristic,
                     const SamplerParams& params, std::mt19937_64& rng) {
  params.validate();
  int m = model.num_spins();
  BranchChooser chooser(params.branch_rule, model);
  const bool rb = params.estimator == EstimatorMode::rao_blackwell;

  PartialState sigma(m);
  DrawResult res;
  std::vector<std::int32_t> all(
      static_cast<std::size_t>(params.population_size));
  std::iota(all.begin(), all.end(), 0);

  for (int n = 0; n < m; ++n) {
    HeuristicRequest req;
    req.constraint = sigma;
    req.population_size = params.population_size;
    req.seed = rng::mix(params.seed, 0x53435000ull, rng());
    req.beta = params.beta;
    SamplePopulation pop = heuristic.run_constrained(model, req);
    ++res.refresh_calls;

    int v = chooser.choose(sigma, rng);
    double qp;
    if (rb) {
      long long cp = 0;
      for (const auto& y : pop) cp += y[static_cast<std::size_t>(v)] > 0;
      std::vector<double> a =
          robust_alphas({cp, params.population_size - cp});
      qp = rao_blackwell_estimate(model, params.beta, pop, all, v, a[0], a[1])
               .first;
    } else {
      long long cp = 0;
      for (const auto& y : pop) cp += y[static_cast<std::size_t>(v)] > 0;
      std::vector<double> a =
          robust_alphas({cp, params.population_size - cp});
      qp = (static_cast<double>(cp) + a[0]) /
           (static_cast<double>(params.population_size) + 1.0);
    }
    Spin s = rng::uniform01(rng) < qp ? Spin{1} : Spin{-1};
    res.log_q += std::log(s > 0 ? qp : 1.0 - qp);
    sigma.set(v, s);
  }
  res.state = sigma.as_state();
  return res;
}

}  // namespace sss
