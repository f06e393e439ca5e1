#include "doctest.h"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <set>
#include <vector>

#include "sss/branch.hpp"
#include "sss/ising.hpp"

using namespace sss;

TEST_SUITE_BEGIN("branch");

TEST_CASE("fixed rule walks indices in order and is rng-free") {
  IsingModel model = generate_sk(5, 1);
  BranchChooser chooser(BranchRule::fixed, model);
  std::mt19937_64 eng(1), probe(1);

  PartialState sigma(5);
  CHECK(chooser.choose(sigma, eng) == 0);
  sigma.set(0, 1);
  sigma.set(1, -1);
  CHECK(chooser.choose(sigma, eng) == 2);
  CHECK(eng == probe);   // engine untouched

  for (int i = 0; i < 5; ++i) sigma.set(i, 1);
  CHECK_THROWS_AS(chooser.choose(sigma, eng), std::invalid_argument);
  CHECK(chooser.static_order() == std::vector<int>{0, 1, 2, 3, 4});
}

TEST_CASE("random rule picks only free variables and covers them") {
  IsingModel model = generate_sk(6, 2);
  BranchChooser chooser(BranchRule::random, model);
  CHECK(chooser.static_order().empty());

  PartialState sigma(6);
  sigma.set(1, 1);
  sigma.set(4, -1);
  std::mt19937_64 eng(7);
  std::set<int> seen;
  for (int t = 0; t < 400; ++t) {
    int v = chooser.choose(sigma, eng);
    CHECK_FALSE(sigma.assigned(v));
    seen.insert(v);
  }
  CHECK(seen == std::set<int>{0, 2, 3, 5});
}

TEST_CASE("neighbour rule stays adjacent to the assigned region") {
  IsingModel model = generate_chain(5, 3);
  BranchChooser chooser(BranchRule::neighbour, model);

  PartialState sigma(5);
  sigma.set(2, 1);
  std::mt19937_64 eng(9);
  std::set<int> seen;
  for (int t = 0; t < 200; ++t) seen.insert(chooser.choose(sigma, eng));
  CHECK(seen == std::set<int>{1, 3});

  // Nothing assigned yet: falls back to uniform over all variables.
  PartialState empty(5);
  seen.clear();
  for (int t = 0; t < 600; ++t) seen.insert(chooser.choose(empty, eng));
  CHECK(seen == std::set<int>{0, 1, 2, 3, 4});

  // No adjacency at all (independent model): same fallback.
  IsingModel indep = generate_independent(4, 3);
  BranchChooser loner(BranchRule::neighbour, indep);
  PartialState s2(4);
  s2.set(0, 1);
  seen.clear();
  for (int t = 0; t < 400; ++t) seen.insert(loner.choose(s2, eng));
  CHECK(seen == std::set<int>{1, 2, 3});
}

TEST_CASE("chain bisection is the midpoint recursion") {
  CHECK(bisection_order(7, 1, 1, false) ==
        std::vector<int>{3, 1, 5, 0, 2, 4, 6});

  IsingModel chain = generate_chain(7, 5);
  BranchChooser chooser(BranchRule::bisection, chain);
  CHECK(chooser.static_order() == std::vector<int>{3, 1, 5, 0, 2, 4, 6});

  // First choice is the midpoint; after assigning it, the midpoints of the
  // halves follow.
  PartialState sigma(7);
  std::mt19937_64 eng(1);
  CHECK(chooser.choose(sigma, eng) == 3);
  sigma.set(3, 1);
  CHECK(chooser.choose(sigma, eng) == 1);
  sigma.set(1, -1);
  CHECK(chooser.choose(sigma, eng) == 5);
}

TEST_CASE("square sheet bisection emits the central column first") {
  std::vector<int> order = bisection_order(7, 7, 1, false);
  REQUIRE(order.size() == 49);

  std::set<int> first7(order.begin(), order.begin() + 7);
  std::set<int> central;
  for (int y = 0; y < 7; ++y) central.insert(3 + 7 * y);
  CHECK(first7 == central);

  std::vector<int> sorted = order;
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> iota(49);
  std::iota(iota.begin(), iota.end(), 0);
  CHECK(sorted == iota);
}

TEST_CASE("periodic rings are cut twice") {
  // One cut of a ring leaves it connected; the order must open each ring
  // with two parallel planes before recursing.
  std::vector<int> ring = bisection_order(6, 1, 1, true);
  CHECK(std::set<int>(ring.begin(), ring.begin() + 2) == std::set<int>{2, 5});
  std::vector<int> sorted = ring;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == std::vector<int>{0, 1, 2, 3, 4, 5});

  // Full periodic cube: a permutation whose first two planes share an axis.
  std::vector<int> cube = bisection_order(4, 4, 4, true);
  REQUIRE(cube.size() == 64);
  std::vector<int> cs = cube;
  std::sort(cs.begin(), cs.end());
  std::vector<int> iota(64);
  std::iota(iota.begin(), iota.end(), 0);
  CHECK(cs == iota);
  // First 32 entries: the x = 1 and x = 3 planes (two cuts of the x rings).
  std::set<int> first32(cube.begin(), cube.begin() + 32);
  std::set<int> planes;
  for (int z = 0; z < 4; ++z)
    for (int y = 0; y < 4; ++y) {
      planes.insert(1 + 4 * (y + 4 * z));
      planes.insert(3 + 4 * (y + 4 * z));
    }
  CHECK(first32 == planes);

  IsingModel grid = generate_grid3d(4, 4, 4, true, 9);
  BranchChooser chooser(BranchRule::bisection, grid);
  CHECK(chooser.static_order() == cube);
}

TEST_CASE("bisection requires an ordered topology") {
  IsingModel sk = generate_sk(6, 4);
  CHECK_THROWS_AS(BranchChooser(BranchRule::bisection, sk),
                  std::invalid_argument);
}

TEST_CASE("enum round trips") {
  for (BranchRule r : {BranchRule::fixed, BranchRule::random,
                       BranchRule::neighbour, BranchRule::bisection})
    CHECK(branch_rule_from_string(to_string(r)) == r);
  CHECK_THROWS_AS(branch_rule_from_string("widest"), std::invalid_argument);
  for (EstimatorMode e : {EstimatorMode::count, EstimatorMode::rao_blackwell})
    CHECK(estimator_mode_from_string(to_string(e)) == e);
  CHECK(estimator_mode_from_string("rao-blackwell") ==
        EstimatorMode::rao_blackwell);
  CHECK_THROWS_AS(estimator_mode_from_string("mle"), std::invalid_argument);
}

TEST_SUITE_END();
