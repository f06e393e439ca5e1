// End-to-end acceptance checks: eight independent criteria covering
// estimator correctness, sampler exactness, weight quality, annealing-ladder
// convergence, MCMC stationarity, and structural tree invariants.  Each
// criterion prints exactly one "C<k> PASS|FAIL <detail>" line; run them all
// (no arguments) or one at a time with --criterion K.  The exit status is the
// number of failures.
//
// Every tolerance and seed is pinned here.  Stochastic checks use error bands
// wide enough that a correct implementation passes with large margin; C4 is
// the only one with a rerun-once policy, because its target band is a
// property of the problem instance, not just of the estimator.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <map>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sss/estimator.hpp"
#include "sss/heuristic.hpp"
#include "sss/ising.hpp"
#include "sss/montecarlo.hpp"
#include "sss/params.hpp"
#include "sss/rng.hpp"
#include "sss/sampler.hpp"
#include "sss/sstree.hpp"

#include "../unit/stat_helpers.hpp"

namespace {

using namespace sss;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double logsumexp2(double a, double b) {
  const double hi = std::max(a, b), lo = std::min(a, b);
  if (hi == -std::numeric_limits<double>::infinity()) return hi;
  return hi + std::log1p(std::exp(lo - hi));
}

// C1: fresh-tree importance sampling is unbiased for Z.  An m = 8 random
// chain has an exact transfer-matrix log Z; 500 independent estimates of 50
// draws each (a fresh tree per draw) must average to Z within 3 standard
// errors of the estimate ensemble.
Outcome criterion1() {
  const IsingModel model = generate_chain(8, 4242);
  const double beta = 1.0;
  const double z_true = std::exp(exact_logz_chain(model, beta));
  ExactChainHeuristic heuristic;

  SamplerParams params;
  params.population_size = 2000;
  params.theta = 0.01;
  params.max_tree_size = 511;
  params.beta = beta;
  params.estimator = EstimatorMode::count;
  params.branch_rule = BranchRule::bisection;

  const int reps = 500, draws_per = 50;
  std::vector<double> z_hat(reps);
  for (int r = 0; r < reps; ++r) {
    std::vector<DrawResult> batch;
    batch.reserve(draws_per);
    for (int d = 0; d < draws_per; ++d) {
      const std::uint64_t k =
          static_cast<std::uint64_t>(r) * draws_per + static_cast<std::uint64_t>(d);
      params.seed = rng::mix(1111, k);
      SubcubeTree tree(model, params);
      std::mt19937_64 eng(rng::mix(3333, k));
      batch.push_back(draw(tree, heuristic, eng));
    }
    z_hat[static_cast<std::size_t>(r)] = estimate_logz(weigh(batch, model, beta)).z();
  }
  const double mu = testutil::mean(z_hat);
  const double se = std::sqrt(testutil::variance(z_hat) / reps);
  const double dev = std::abs(mu - z_true);
  std::ostringstream os;
  os.precision(6);
  os << "mean Zhat " << mu << " vs exact Z " << z_true << ", deviation "
     << dev / se << " se over " << reps << " estimates of " << draws_per
     << " draws";
  return {dev <= 3.0 * se, os.str()};
}

// C2: the two-vertex shortcut inside worst_case_kl agrees with the
// brute-force maximum of the posterior loss over every vertex prior, for
// 10,000 random count vectors.
Outcome criterion2() {
  std::mt19937_64 eng(909);
  const int n_vectors = 10000;
  double worst_gap = 0.0;
  for (int t = 0; t < n_vectors; ++t) {
    const int k = 1 + static_cast<int>(rng::uniform_below(eng, 8));
    std::vector<long long> counts(static_cast<std::size_t>(k));
    for (auto& c : counts)
      c = static_cast<long long>(rng::uniform_below(eng, 51));
    const std::vector<double> alphas = robust_alphas(counts);
    double brute = 0.0;
    for (int i = 0; i < k; ++i) {
      std::vector<double> vertex(static_cast<std::size_t>(k), 0.0);
      vertex[static_cast<std::size_t>(i)] = 1.0;
      brute = std::max(brute, posterior_kl_loss(vertex, alphas, counts));
    }
    const double fast = worst_case_kl(counts, alphas);
    const double gap = std::abs(fast - brute) /
                       std::max({1.0, std::abs(fast), std::abs(brute)});
    worst_gap = std::max(worst_gap, gap);
  }
  std::ostringstream os;
  os.precision(3);
  os << n_vectors << " count vectors (<= 8 cells, counts <= 50), worst relative gap "
     << worst_gap;
  return {worst_gap <= 1e-12, os.str()};
}

// C3: with an exact heuristic and the Rao-Blackwellised estimator on a
// coupling-free model, the per-variable conditionals are recovered exactly up
// to pseudocount smoothing, so every draw's log q_hat stays within
// 2m/(N + 1) nats of log pi.  One population per variable (the untreed
// process) keeps every estimate at full population size, which is what the
// bound's per-variable budget assumes.  The model seed is pinned to an
// instance with max |h| < 2 so minority cells keep O(N/50) expected counts.
Outcome criterion3() {
  const int m = 100;
  const IsingModel model = generate_independent(m, 77);
  const double beta = 1.0;
  ExactIndependentHeuristic heuristic;

  SamplerParams params;
  params.population_size = 2000;
  params.beta = beta;
  params.estimator = EstimatorMode::rao_blackwell;
  params.branch_rule = BranchRule::fixed;
  params.seed = 515151;

  const double bound = 2.0 * m / (static_cast<double>(params.population_size) + 1.0);
  const int n_draws = 200;
  std::mt19937_64 eng(616161);
  double worst = 0.0;
  for (int d = 0; d < n_draws; ++d) {
    const DrawResult r = scp_basic(model, heuristic, params, eng);
    double log_pi = 0.0;
    for (int i = 0; i < m; ++i) {
      const double p_plus = prob_plus(model.fields()[static_cast<std::size_t>(i)], beta);
      log_pi += std::log(r.state[static_cast<std::size_t>(i)] > 0 ? p_plus
                                                                  : 1.0 - p_plus);
    }
    worst = std::max(worst, std::abs(r.log_q - log_pi));
  }
  std::ostringstream os;
  os.precision(4);
  os << "max |log q_hat - log pi| = " << worst << " over " << n_draws
     << " draws, bound " << bound;
  return {worst <= bound, os.str()};
}

// C4: same instance with the count estimator on a cached tree; the
// normalized importance-weight variance over 100 draws should land near 1
// (band [0.3, 3]).  Stochastic, so one rerun with an independent seed pair is
// allowed before declaring failure.
Outcome criterion4() {
  const int m = 100;
  const IsingModel model = generate_independent(m, 77);
  const double beta = 1.0;
  ExactIndependentHeuristic heuristic;

  SamplerParams base;
  base.population_size = 2000;
  base.theta = 0.05;
  base.beta = beta;
  base.estimator = EstimatorMode::count;

  const int n_draws = 100;
  const auto run = [&](std::uint64_t tree_seed, std::uint64_t draw_seed) {
    SamplerParams params = base;
    params.seed = tree_seed;
    SubcubeTree tree(model, params);
    std::mt19937_64 eng(draw_seed);
    std::vector<DrawResult> batch;
    batch.reserve(n_draws);
    for (int d = 0; d < n_draws; ++d)
      batch.push_back(draw(tree, heuristic, eng));
    return weight_diagnostics(weigh(batch, model, beta)).weight_variance;
  };

  const double v1 = run(717171, 818181);
  bool pass = v1 >= 0.3 && v1 <= 3.0;
  std::ostringstream os;
  os.precision(4);
  os << "normalized weight variance " << v1;
  if (!pass) {
    const double v2 = run(727272, 828282);
    pass = v2 >= 0.3 && v2 <= 3.0;
    os << ", rerun " << v2;
  }
  os << " over " << n_draws << " draws, band [0.3, 3]";
  return {pass, os.str()};
}

// One annealing-ladder rung for C5: a cached tree fed by SA with the given
// step count, 50 draws, and the scatter of log q_hat about the Boltzmann
// line (the exact line when log_z is known, best-intercept otherwise).
struct Rung {
  int n_steps = 0;
  double residual_sd = 0.0;
  double fit_slope = 0.0;
};

Rung run_rung(const IsingModel& model, double beta, int n_steps, int sweeps,
              int n_draws, double log_z, std::uint64_t tag) {
  SaSchedule schedule;
  schedule.beta_start = 0.1;
  schedule.n_steps = n_steps;
  schedule.sweeps_per_step = sweeps;
  schedule.order = SaSchedule::Order::random_permutation;
  AnnealHeuristic heuristic(schedule);

  SamplerParams params;
  params.population_size = 2000;
  params.theta = 0.05;
  params.beta = beta;
  params.seed = rng::mix(tag, static_cast<std::uint64_t>(n_steps));
  SubcubeTree tree(model, params);
  std::mt19937_64 eng(rng::mix(tag + 1, static_cast<std::uint64_t>(n_steps)));

  std::vector<double> energies, log_qs;
  energies.reserve(static_cast<std::size_t>(n_draws));
  log_qs.reserve(static_cast<std::size_t>(n_draws));
  for (int d = 0; d < n_draws; ++d) {
    const DrawResult r = draw(tree, heuristic, eng);
    energies.push_back(model.energy(r.state));
    log_qs.push_back(r.log_q);
  }
  const BoltzmannFit fit = fit_boltzmann_line(energies, log_qs, beta, log_z);
  return {n_steps, fit.residual_sd, fit.fit_slope};
}

// C5: more annealing makes the proposal hug the Boltzmann line.  The chain
// instance anneals with single sweeps to beta = 1 and has an exact log Z:
// residual sd about the true line must fall strictly along n_steps in
// {1, 5, 20, 100}, and the 500-draw log Z estimate at the longest schedule
// must land within 2 nats.  The glassy full-scale runs (SK m = 100 and the
// periodic 6x6x6 lattice, no oracle) anneal with 6-sweep steps to beta =
// 1.6, below their glass transitions, the lattice ladder ending at 200
// steps; they are held to the qualitative claims only: strictly falling
// centered residuals, and a fitted energy slope within 15% of -beta at the
// longest schedule.
Outcome criterion5() {
  std::ostringstream os;
  os.precision(4);
  bool pass = true;

  const auto monotone = [&](const std::vector<Rung>& rungs) {
    for (std::size_t i = 1; i < rungs.size(); ++i)
      if (!(rungs[i].residual_sd < rungs[i - 1].residual_sd)) return false;
    return true;
  };
  const auto print_sds = [&](const char* name, const std::vector<Rung>& rungs) {
    os << name << " sd";
    for (const Rung& r : rungs) os << " " << r.residual_sd;
  };

  {
    const double beta = 1.0;
    const IsingModel model = generate_chain(100, 9101);
    const double log_z = exact_logz_chain(model, beta);
    std::vector<Rung> rungs;
    for (int n : {1, 5, 20, 100})
      rungs.push_back(run_rung(model, beta, n, 1, 50, log_z, 21000));
    print_sds("chain", rungs);
    if (!monotone(rungs)) pass = false;

    SaSchedule schedule;
    schedule.n_steps = 100;
    AnnealHeuristic heuristic(schedule);
    SamplerParams params;
    params.population_size = 2000;
    params.theta = 0.05;
    params.beta = beta;
    params.seed = 23001;
    SubcubeTree tree(model, params);
    std::mt19937_64 eng(23002);
    std::vector<DrawResult> batch;
    batch.reserve(500);
    for (int d = 0; d < 500; ++d) batch.push_back(draw(tree, heuristic, eng));
    const double gap =
        std::abs(estimate_logz(weigh(batch, model, beta)).log_z_hat - log_z);
    os << ", |logZhat - logZ| " << gap;
    if (!(gap <= 2.0)) pass = false;
  }

  const auto glassy = [&](const char* name, const IsingModel& model,
                          std::initializer_list<int> ladder,
                          std::uint64_t tag) {
    const double beta = 1.6;
    const double no_oracle = std::numeric_limits<double>::quiet_NaN();
    std::vector<Rung> rungs;
    for (int n : ladder)
      rungs.push_back(run_rung(model, beta, n, 6, 50, no_oracle, tag));
    os << "; ";
    print_sds(name, rungs);
    if (!monotone(rungs)) pass = false;
    const double slope = rungs.back().fit_slope;
    os << " slope " << slope;
    if (!(std::abs(slope + beta) <= 0.15 * beta)) pass = false;
  };
  glassy("sk", generate_sk(100, 9202), {1, 5, 20, 100}, 25000);
  glassy("grid", generate_grid3d(6, 6, 6, true, 9303), {1, 5, 20, 200}, 27000);

  return {pass, os.str()};
}

// C6: the constraining-process Metropolis kernel leaves the Boltzmann law
// invariant.  On an enumerable m = 4 chain, 10^5 steps (minus burn-in) of
// occupancy must match the enumerated distribution within 0.05 total
// variation.
Outcome criterion6() {
  const IsingModel model = generate_chain(4, 3131);
  const double beta = 1.0;
  ExactChainHeuristic heuristic;
  const EnumeratedDistribution target = enumerate_distribution(model, beta);

  SamplerParams params;
  params.population_size = 200;
  params.beta = beta;
  params.seed = 99100;

  const long long n_steps = 100000, burn_in = 5000;
  McmcState mc = mcmc_init(model, beta, 424344);
  std::mt19937_64 eng(454647);
  std::vector<long long> visits(16, 0);
  for (long long s = 0; s < n_steps; ++s) {
    mcmc_step(mc, model, heuristic, params, eng);
    if (s >= burn_in) ++visits[target.index_of(mc.x)];
  }
  const double kept = static_cast<double>(n_steps - burn_in);
  std::vector<double> empirical(16), exact(16);
  for (std::size_t i = 0; i < 16; ++i) {
    empirical[i] = static_cast<double>(visits[i]) / kept;
    exact[i] = target.prob(i);
  }
  const double tv = testutil::tv_distance(empirical, exact);
  std::ostringstream os;
  os.precision(4);
  os << "TV to enumerated target " << tv << " after "
     << static_cast<long long>(kept) << " kept steps, acceptance rate "
     << mc.acceptance_rate();
  return {tv <= 0.05, os.str()};
}

// Full structural audit of a live tree; returns "" when every invariant
// holds, else a description of the first violation found.
std::string check_tree(const SubcubeTree& tree) {
  const int m = tree.model().num_spins();
  std::string bad;
  long long n_nodes = 0;
  double leaf_mass = 0.0;
  tree.for_each_node([&](const TreeNode* n) {
    if (!bad.empty()) return;
    ++n_nodes;
    if (static_cast<bool>(n->plus) != static_cast<bool>(n->minus)) {
      bad = "node with exactly one child";
      return;
    }
    if (!std::isfinite(n->log_q) || n->log_q > 1e-9) {
      bad = "log_q outside (-inf, 0]";
      return;
    }
    if (n->depth < 0 || n->depth > m) {
      bad = "depth out of range";
      return;
    }
    if (n->in_retraction_queue != n->is_subleaf()) {
      bad = "retraction queue out of sync with subleaf set";
      return;
    }
    if (n->is_leaf()) {
      if (n->branch_variable != -1) {
        bad = "leaf with stale branch variable";
        return;
      }
      leaf_mass += std::exp(n->log_q);
    } else {
      if (n->branch_variable < 0 || n->branch_variable >= m) {
        bad = "branch variable out of range";
        return;
      }
      if (n->plus->parent != n || n->minus->parent != n) {
        bad = "child parent link broken";
        return;
      }
      if (n->plus->depth != n->depth + 1 || n->minus->depth != n->depth + 1) {
        bad = "child depth mismatch";
        return;
      }
      if (std::abs(logsumexp2(n->plus->log_q, n->minus->log_q) - n->log_q) >
          1e-9) {
        bad = "children's logQ does not sum to parent's";
        return;
      }
    }
  });
  if (!bad.empty()) return bad;
  if (n_nodes != tree.tree_size()) return "tree_size disagrees with node walk";
  if (tree.tree_size() > tree.params().max_tree_size)
    return "tree over node budget";
  if (std::abs(tree.root()->log_q) > 1e-12) return "root logQ nonzero";
  if (std::abs(leaf_mass - 1.0) > 1e-8) return "leaf masses do not sum to 1";
  return "";
}

// C7: randomized structural stress.  Small models, tiny node budgets (so
// retraction churns constantly), every family / estimator / branch rule
// combination, full invariant audit after every draw, and a hook asserting
// that every accepted branch kept the partition's worst-case KL within
// theta.
Outcome criterion7() {
  std::mt19937_64 cfg_rng(7777);
  const int n_configs = 50, draws_each = 30;
  long long n_audits = 0;
  std::string failure;
  int failed_config = -1;

  for (int cfg = 0; cfg < n_configs && failure.empty(); ++cfg) {
    const int family = static_cast<int>(rng::uniform_below(cfg_rng, 4));
    const int m = 4 + static_cast<int>(rng::uniform_below(cfg_rng, 9));
    IsingModel model = [&]() -> IsingModel {
      const std::uint64_t seed = rng::mix(4000, static_cast<std::uint64_t>(cfg));
      switch (family) {
        case 0: return generate_independent(m, seed);
        case 1: return generate_chain(m, seed);
        case 2: return generate_sk(m, seed);
        default: return generate_grid3d(2, 2, 3, false, seed);
      }
    }();
    const int n_spins = model.num_spins();  // the grid family ignores m

    SamplerParams params;
    params.population_size =
        30 + static_cast<long long>(rng::uniform_below(cfg_rng, 371));
    params.theta =
        std::exp(std::log(0.02) + rng::uniform01(cfg_rng) * std::log(100.0));
    const long long budgets[3] = {9, 17, 33};
    params.max_tree_size = budgets[rng::uniform_below(cfg_rng, 3)];
    const long long thresholds[4] = {0, 0, 1, 3};
    params.count_threshold = thresholds[rng::uniform_below(cfg_rng, 4)];
    params.beta = 0.2 + 1.3 * rng::uniform01(cfg_rng);
    params.estimator = rng::uniform_below(cfg_rng, 2)
                           ? EstimatorMode::rao_blackwell
                           : EstimatorMode::count;
    // bisection needs chain or grid structure, so draw it only there
    const bool structured = family == 1 || family == 3;
    params.branch_rule = static_cast<BranchRule>(
        rng::uniform_below(cfg_rng, structured ? 4 : 3));
    params.seed = rng::mix(2024, static_cast<std::uint64_t>(cfg));

    std::unique_ptr<Heuristic> heuristic;
    if (family <= 1) {
      heuristic = make_exact_heuristic(model);
    } else {
      SaSchedule schedule;
      schedule.n_steps = 25;
      heuristic = std::make_unique<AnnealHeuristic>(schedule);
    }

    SubcubeTree tree(model, params);
    tree.on_branch_accepted = [&](const std::vector<long long>& counts,
                                  const std::vector<double>& alphas,
                                  double kl) {
      if (!failure.empty()) return;
      if (kl > params.theta + 1e-9) failure = "accepted branch beyond theta";
      const double check = worst_case_kl(counts, alphas);
      if (std::abs(check - kl) > 1e-9 * std::max(1.0, std::abs(check)))
        failure = "reported KL disagrees with recomputation";
    };

    std::mt19937_64 eng(rng::mix(5150, static_cast<std::uint64_t>(cfg)));
    for (int d = 0; d < draws_each && failure.empty(); ++d) {
      const DrawResult r = draw(tree, *heuristic, eng);
      if (static_cast<int>(r.state.size()) != n_spins)
        failure = "draw state has wrong length";
      else
        for (int i = 0; i < n_spins; ++i)
          if (r.state[static_cast<std::size_t>(i)] != 1 &&
              r.state[static_cast<std::size_t>(i)] != -1)
            failure = "draw state not in {-1, +1}";
      if (failure.empty() && (!std::isfinite(r.log_q) || r.log_q > 1e-9))
        failure = "draw log_q outside (-inf, 0]";
      if (failure.empty()) failure = check_tree(tree);
      ++n_audits;
    }
    if (!failure.empty()) failed_config = cfg;
  }

  std::ostringstream os;
  if (failure.empty()) {
    os << n_configs << " randomized configs, " << n_audits
       << " full-tree audits, no violations";
    return {true, os.str()};
  }
  os << "config " << failed_config << ": " << failure;
  return {false, os.str()};
}

// One frozen-tree exactness run for C8: grow a tree with 30 draws, freeze
// it, take 10^5 pure ancestral descents, and chi-square the leaf occupancy
// against exp(leaf logQ) with small-expectation cells pooled.
void frozen_check(const char* name, const IsingModel& model,
                  const Heuristic& heuristic, SamplerParams params,
                  std::uint64_t grow_seed, std::uint64_t sample_seed,
                  bool& pass, std::ostringstream& os) {
  SubcubeTree tree(model, params);
  std::mt19937_64 grow(grow_seed);
  for (int d = 0; d < 30; ++d) draw(tree, heuristic, grow);
  tree.set_extension_enabled(false);

  std::vector<const TreeNode*> leaves;
  tree.for_each_leaf([&](const TreeNode* n) { leaves.push_back(n); });
  std::map<const TreeNode*, std::size_t> index;
  for (std::size_t i = 0; i < leaves.size(); ++i) index[leaves[i]] = i;

  const long long n = 100000;
  std::vector<long long> observed(leaves.size(), 0);
  std::mt19937_64 eng(sample_seed);
  for (long long d = 0; d < n; ++d)
    ++observed[index.at(sample_leaf(tree, eng))];

  struct Cell {
    double expected;
    long long observed;
  };
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < leaves.size(); ++i)
    cells.push_back({static_cast<double>(n) * std::exp(leaves[i]->log_q),
                     observed[i]});
  std::sort(cells.begin(), cells.end(),
            [](const Cell& a, const Cell& b) { return a.expected < b.expected; });

  // pool from the small end until every retained cell has expectation >= 5
  std::vector<long long> obs_kept;
  std::vector<double> exp_kept;
  Cell pooled{0.0, 0};
  std::size_t i = 0;
  while (i < cells.size() && (pooled.expected < 5.0 || cells[i].expected < 5.0)) {
    pooled.expected += cells[i].expected;
    pooled.observed += cells[i].observed;
    ++i;
  }
  if (pooled.expected > 0.0) {
    obs_kept.push_back(pooled.observed);
    exp_kept.push_back(pooled.expected);
  }
  for (; i < cells.size(); ++i) {
    obs_kept.push_back(cells[i].observed);
    exp_kept.push_back(cells[i].expected);
  }

  double p_value = 1.0;
  if (obs_kept.size() >= 2) {
    const double stat = testutil::chi2_statistic(obs_kept, exp_kept);
    p_value = testutil::chi2_sf(stat, static_cast<double>(obs_kept.size() - 1));
  }
  os << "; " << name << " p " << p_value << " (" << leaves.size()
     << " leaves, " << obs_kept.size() << " cells)";
  if (!(p_value > 1e-3)) pass = false;
}

// C8: ancestral sampling on a frozen tree follows exp(leaf logQ) exactly,
// across three tree shapes from different families, estimators, and branch
// rules.
Outcome criterion8() {
  std::ostringstream os;
  os.precision(4);
  bool pass = true;

  {
    SamplerParams params;
    params.population_size = 300;
    params.theta = 0.1;
    params.max_tree_size = 121;
    params.beta = 1.0;
    params.estimator = EstimatorMode::count;
    params.branch_rule = BranchRule::bisection;
    params.seed = 46001;
    ExactChainHeuristic heuristic;
    frozen_check("chain", generate_chain(10, 4001), heuristic, params, 48001,
                 50001, pass, os);
  }
  {
    SamplerParams params;
    params.population_size = 250;
    params.theta = 0.15;
    params.max_tree_size = 63;
    params.beta = 0.8;
    params.estimator = EstimatorMode::rao_blackwell;
    params.branch_rule = BranchRule::neighbour;
    params.seed = 46002;
    SaSchedule schedule;
    schedule.n_steps = 40;
    AnnealHeuristic heuristic(schedule);
    frozen_check("sk", generate_sk(8, 4002), heuristic, params, 48002, 50002,
                 pass, os);
  }
  {
    SamplerParams params;
    params.population_size = 200;
    params.theta = 0.2;
    params.max_tree_size = 81;
    params.beta = 0.6;
    params.estimator = EstimatorMode::count;
    params.branch_rule = BranchRule::random;
    params.seed = 46003;
    SaSchedule schedule;
    schedule.n_steps = 40;
    AnnealHeuristic heuristic(schedule);
    frozen_check("grid", generate_grid3d(2, 2, 3, false, 4003), heuristic,
                 params, 48003, 50003, pass, os);
  }

  const std::string detail = os.str();
  return {pass, detail.substr(2)};  // drop the leading "; "
}

}  // namespace

int main(int argc, char** argv) {
  int which = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      which = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: acceptance [--criterion K]\n");
      return 64;
    }
  }

  struct Entry {
    int id;
    Outcome (*fn)();
  };
  const Entry table[] = {{1, criterion1}, {2, criterion2}, {3, criterion3},
                         {4, criterion4}, {5, criterion5}, {6, criterion6},
                         {7, criterion7}, {8, criterion8}};

  int failures = 0;
  for (const Entry& entry : table) {
    if (which != 0 && which != entry.id) continue;
    Outcome out;
    try {
      out = entry.fn();
    } catch (const std::exception& ex) {
      out = {false, std::string("exception: ") + ex.what()};
    }
    std::printf("C%d %s  %s\n", entry.id, out.pass ? "PASS" : "FAIL",
                out.detail.c_str());
    std::fflush(stdout);
    if (!out.pass) ++failures;
  }
  return failures;
}
