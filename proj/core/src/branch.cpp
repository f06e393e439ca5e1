#include "sss/branch.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

#include "sss/rng.hpp"

namespace sss {

EstimatorMode estimator_mode_from_string(const std::string& s) {
  if (s == "count") return EstimatorMode::count;
  if (s == "rb" || s == "rao-blackwell") return EstimatorMode::rao_blackwell;
  throw std::invalid_argument("unknown estimator mode: " + s);
}

BranchRule branch_rule_from_string(const std::string& s) {
  if (s == "fixed") return BranchRule::fixed;
  if (s == "random") return BranchRule::random;
  if (s == "neighbour") return BranchRule::neighbour;
  if (s == "bisection") return BranchRule::bisection;
  throw std::invalid_argument("unknown branch rule: " + s);
}

std::string to_string(EstimatorMode m) {
  return m == EstimatorMode::count ? "count" : "rb";
}

std::string to_string(BranchRule r) {
  switch (r) {
    case BranchRule::fixed: return "fixed";
    case BranchRule::random: return "random";
    case BranchRule::neighbour: return "neighbour";
    case BranchRule::bisection: return "bisection";
  }
  return "?";
}

std::vector<int> bisection_order(int lx, int ly, int lz, bool periodic) {
  if (lx <= 0 || ly <= 0 || lz <= 0)
    throw std::invalid_argument("grid dimensions must be positive");
  auto idx = [&](int x, int y, int z) { return x + lx * (y + ly * z); };

  struct Box {
    int lo[3], hi[3];
    bool wrap[3];   // axis is a full unbroken ring
  };
  std::deque<Box> queue;
  Box root{{0, 0, 0},
           {lx - 1, ly - 1, lz - 1},
           {periodic && lx > 2, periodic && ly > 2, periodic && lz > 2}};
  queue.push_back(root);

  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(lx) * ly * lz);
  auto emit_plane = [&](const Box& b, int axis, int coord) {
    int c[3];
    c[axis] = coord;
    int a1 = axis == 0 ? 1 : 0;
    int a2 = axis == 2 ? 1 : 2;
    // iterate the slower remaining axis outermost for row-major output
    for (c[a2] = b.lo[a2]; c[a2] <= b.hi[a2]; ++c[a2])
      for (c[a1] = b.lo[a1]; c[a1] <= b.hi[a1]; ++c[a1])
        order.push_back(idx(c[0], c[1], c[2]));
  };

  while (!queue.empty()) {
    Box b = queue.front();
    queue.pop_front();
    int ext[3];
    for (int a = 0; a < 3; ++a) ext[a] = b.hi[a] - b.lo[a] + 1;
    if (ext[0] == 1 && ext[1] == 1 && ext[2] == 1) {
      order.push_back(idx(b.lo[0], b.lo[1], b.lo[2]));
      continue;
    }
    int axis = 0;
    for (int a = 1; a < 3; ++a)
      if (ext[a] > ext[axis]) axis = a;

    int mid = (b.lo[axis] + b.hi[axis]) / 2;
    emit_plane(b, axis, mid);
    if (b.wrap[axis]) {
      // A ring needs two cuts; take the mid plane and the last plane, which
      // leaves two open segments.
      if (b.hi[axis] != mid) emit_plane(b, axis, b.hi[axis]);
      Box left = b, right = b;
      left.wrap[axis] = right.wrap[axis] = false;
      left.hi[axis] = mid - 1;
      right.lo[axis] = mid + 1;
      right.hi[axis] = b.hi[axis] - 1;
      if (left.lo[axis] <= left.hi[axis]) queue.push_back(left);
      if (right.lo[axis] <= right.hi[axis]) queue.push_back(right);
    } else {
      Box left = b, right = b;
      left.hi[axis] = mid - 1;
      right.lo[axis] = mid + 1;
      if (left.lo[axis] <= left.hi[axis]) queue.push_back(left);
      if (right.lo[axis] <= right.hi[axis]) queue.push_back(right);
    }
  }
  return order;
}

BranchChooser::BranchChooser(BranchRule rule, const IsingModel& model)
    : rule_(rule), model_(&model) {
  if (rule_ == BranchRule::fixed) {
    order_.resize(static_cast<std::size_t>(model.num_spins()));
    for (int i = 0; i < model.num_spins(); ++i)
      order_[static_cast<std::size_t>(i)] = i;
  } else if (rule_ == BranchRule::bisection) {
    switch (model.topology()) {
      case Topology::chain:
        order_ = bisection_order(model.num_spins(), 1, 1, false);
        break;
      case Topology::grid3d: {
        const auto& g = model.grid();
        order_ = bisection_order(g.lx, g.ly, g.lz, g.periodic);
        break;
      }
      default:
        throw std::invalid_argument(
            "bisection branch rule requires a chain or grid model");
    }
  }
}

int BranchChooser::choose(const PartialState& sigma,
                          std::mt19937_64& rng) const {
  int m = sigma.size();
  if (rule_ == BranchRule::fixed || rule_ == BranchRule::bisection) {
    for (int v : order_)
      if (!sigma.assigned(v)) return v;
    throw std::invalid_argument("no free variable to branch on");
  }

  if (rule_ == BranchRule::neighbour) {
    std::vector<int> cands;
    for (int i = 0; i < m; ++i) {
      if (sigma.assigned(i)) continue;
      for (const auto& [j, w] : model_->neighbours(i)) {
        (void)w;
        if (sigma.assigned(j)) {
          cands.push_back(i);
          break;
        }
      }
    }
    if (!cands.empty())
      return cands[rng::uniform_below(rng, cands.size())];
    // fall through to uniform when nothing is assigned or reachable
  }

  std::vector<int> free;
  free.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i)
    if (!sigma.assigned(i)) free.push_back(i);
  if (free.empty()) throw std::invalid_argument("no free variable to branch on");
  return free[rng::uniform_below(rng, free.size())];
}

}  // namespace sss
