#include "sss/ising.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>
#include <string_view>

#include "sss/rng.hpp"

namespace sss {

IsingModel::IsingModel(int m, std::vector<double> h,
                       std::vector<Coupling> couplings, Topology topology,
                       GridDims grid)
    : m_(m),
      h_(std::move(h)),
      couplings_(std::move(couplings)),
      topology_(topology),
      grid_(grid) {
  if (m_ <= 0) throw std::invalid_argument("model must have at least one spin");
  if (h_.empty()) h_.assign(static_cast<std::size_t>(m_), 0.0);
  if (static_cast<int>(h_.size()) != m_)
    throw std::invalid_argument("field vector length != m");

  std::set<std::pair<int, int>> seen;
  for (auto& c : couplings_) {
    if (c.i > c.j) std::swap(c.i, c.j);
    if (c.i == c.j) throw std::invalid_argument("self-coupling not allowed");
    if (c.i < 0 || c.j >= m_)
      throw std::invalid_argument("coupling endpoint out of range");
    if (!seen.insert({c.i, c.j}).second)
      throw std::invalid_argument("duplicate coupling pair");
  }

  // CSR adjacency.
  std::vector<std::size_t> deg(static_cast<std::size_t>(m_) + 1, 0);
  for (const auto& c : couplings_) {
    ++deg[static_cast<std::size_t>(c.i) + 1];
    ++deg[static_cast<std::size_t>(c.j) + 1];
  }
  adj_off_.resize(static_cast<std::size_t>(m_) + 1);
  adj_off_[0] = 0;
  for (int i = 0; i < m_; ++i)
    adj_off_[static_cast<std::size_t>(i) + 1] =
        adj_off_[static_cast<std::size_t>(i)] +
        deg[static_cast<std::size_t>(i) + 1];
  adj_.resize(adj_off_[static_cast<std::size_t>(m_)]);
  std::vector<std::size_t> cur(adj_off_.begin(), adj_off_.end() - 1);
  for (const auto& c : couplings_) {
    adj_[cur[static_cast<std::size_t>(c.i)]++] = {c.j, c.value};
    adj_[cur[static_cast<std::size_t>(c.j)]++] = {c.i, c.value};
  }
}

double IsingModel::energy(const SpinState& y) const {
  if (static_cast<int>(y.size()) != m_)
    throw std::invalid_argument("state length != m");
  double e = 0.0;
  for (int i = 0; i < m_; ++i)
    e += h_[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)];
  for (const auto& c : couplings_)
    e += c.value * y[static_cast<std::size_t>(c.i)] *
         y[static_cast<std::size_t>(c.j)];
  return e;
}

double IsingModel::local_field(const SpinState& y, int i) const {
  double lam = h_[static_cast<std::size_t>(i)];
  for (const auto& [j, w] : neighbours(i))
    lam += w * y[static_cast<std::size_t>(j)];
  return lam;
}

double IsingModel::local_conditional(const SpinState& y, int i,
                                     double beta) const {
  if (i < 0 || i >= m_) throw std::invalid_argument("site index out of range");
  if (static_cast<int>(y.size()) != m_)
    throw std::invalid_argument("state length != m");
  double lam = local_field(y, i);
  // exp(-b s lam) / (2 cosh(b lam)) == 1 / (1 + exp(2 b s lam))
  return 1.0 / (1.0 + std::exp(2.0 * beta * y[static_cast<std::size_t>(i)] *
                               lam));
}

// ---------------------------------------------------------------------------

Family family_from_string(const std::string& s) {
  if (s == "independent") return Family::independent;
  if (s == "chain") return Family::chain;
  if (s == "sk") return Family::sk;
  if (s == "grid3d") return Family::grid3d;
  throw std::invalid_argument("unknown family: " + s);
}

std::string to_string(Family f) {
  switch (f) {
    case Family::independent: return "independent";
    case Family::chain: return "chain";
    case Family::sk: return "sk";
    case Family::grid3d: return "grid3d";
  }
  return "?";
}

std::string to_string(Topology t) {
  switch (t) {
    case Topology::general: return "general";
    case Topology::independent: return "independent";
    case Topology::chain: return "chain";
    case Topology::complete: return "complete";
    case Topology::grid3d: return "grid3d";
  }
  return "?";
}

IsingModel generate_independent(int m, std::uint64_t seed) {
  if (m <= 0) throw std::invalid_argument("m must be positive");
  rng::Gaussian g(rng::mix(seed, 0));
  std::vector<double> h(static_cast<std::size_t>(m));
  for (auto& x : h) x = g();
  return IsingModel(m, std::move(h), {}, Topology::independent);
}

IsingModel generate_chain(int m, std::uint64_t seed) {
  if (m <= 0) throw std::invalid_argument("m must be positive");
  rng::Gaussian g(rng::mix(seed, 0));
  std::vector<Coupling> cs;
  cs.reserve(static_cast<std::size_t>(m) - 1);
  for (int i = 0; i + 1 < m; ++i) cs.push_back({i, i + 1, g()});
  return IsingModel(m, {}, std::move(cs), Topology::chain);
}

IsingModel generate_sk(int m, std::uint64_t seed) {
  if (m <= 0) throw std::invalid_argument("m must be positive");
  rng::Gaussian g(rng::mix(seed, 0));
  double scale = 1.0 / std::sqrt(static_cast<double>(m));
  std::vector<Coupling> cs;
  cs.reserve(static_cast<std::size_t>(m) * (m - 1) / 2);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) cs.push_back({i, j, g() * scale});
  return IsingModel(m, {}, std::move(cs), Topology::complete);
}

IsingModel generate_grid3d(int lx, int ly, int lz, bool periodic,
                           std::uint64_t seed) {
  if (lx <= 0 || ly <= 0 || lz <= 0)
    throw std::invalid_argument("grid dimensions must be positive");
  int m = lx * ly * lz;
  auto idx = [&](int x, int y, int z) { return x + lx * (y + ly * z); };

  // Collect the undirected nearest-neighbour edge set.  A std::set dedupes
  // the wrap-around edge that coincides with the open edge when L = 2.
  std::set<std::pair<int, int>> edges;
  int dims[3] = {lx, ly, lz};
  for (int z = 0; z < lz; ++z)
    for (int y = 0; y < ly; ++y)
      for (int x = 0; x < lx; ++x) {
        int c[3] = {x, y, z};
        for (int a = 0; a < 3; ++a) {
          if (dims[a] == 1) continue;
          int n[3] = {x, y, z};
          n[a] = c[a] + 1;
          if (n[a] == dims[a]) {
            if (!periodic) continue;
            n[a] = 0;
          }
          int u = idx(x, y, z), v = idx(n[0], n[1], n[2]);
          if (u == v) continue;
          edges.insert({std::min(u, v), std::max(u, v)});
        }
      }

  rng::Gaussian g(rng::mix(seed, 0));
  std::vector<Coupling> cs;
  cs.reserve(edges.size());
  for (const auto& [i, j] : edges) cs.push_back({i, j, g()});
  return IsingModel(m, {}, std::move(cs), Topology::grid3d,
                    GridDims{lx, ly, lz, periodic});
}

IsingModel generate_problem(Family family, int m, std::uint64_t seed) {
  switch (family) {
    case Family::independent: return generate_independent(m, seed);
    case Family::chain: return generate_chain(m, seed);
    case Family::sk: return generate_sk(m, seed);
    case Family::grid3d: return generate_grid3d(m, m, m, true, seed);
  }
  throw std::invalid_argument("unknown family");
}

// ---------------------------------------------------------------------------

namespace {

// log(2 cosh x), overflow-safe.
double log_2cosh(double x) {
  double a = std::fabs(x);
  return a + std::log1p(std::exp(-2.0 * a));
}

double logsumexp2(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

}  // namespace

double exact_logz_independent(const IsingModel& model, double beta) {
  if (!model.couplings().empty())
    throw std::invalid_argument(
        "independent-model oracle requires a model without couplings");
  double lz = 0.0;
  for (double h : model.fields()) lz += log_2cosh(beta * h);
  return lz;
}

double exact_logz_chain(const IsingModel& model, double beta) {
  int m = model.num_spins();
  std::vector<double> j(static_cast<std::size_t>(std::max(0, m - 1)), 0.0);
  for (const auto& c : model.couplings()) {
    if (c.j != c.i + 1)
      throw std::invalid_argument("chain oracle requires consecutive couplings");
    j[static_cast<std::size_t>(c.i)] = c.value;
  }
  const auto& h = model.fields();
  // L_k(s) = log sum over prefixes ending with y_k = s.
  double lp = -beta * h[0], lm = beta * h[0];   // s = +1, s = -1
  for (int k = 1; k < m; ++k) {
    double jj = j[static_cast<std::size_t>(k - 1)];
    // transition weight exp(-beta J s s')
    double np = logsumexp2(lp - beta * jj, lm + beta * jj) -
                beta * h[static_cast<std::size_t>(k)];
    double nm = logsumexp2(lp + beta * jj, lm - beta * jj) +
                beta * h[static_cast<std::size_t>(k)];
    lp = np;
    lm = nm;
  }
  return logsumexp2(lp, lm);
}

std::size_t EnumeratedDistribution::index_of(const SpinState& y) const {
  std::size_t idx = 0;
  for (int i = 0; i < m; ++i)
    if (y[static_cast<std::size_t>(i)] > 0) idx |= (std::size_t{1} << i);
  return idx;
}

SpinState EnumeratedDistribution::state_of(std::size_t idx) const {
  SpinState y(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i)
    y[static_cast<std::size_t>(i)] = (idx >> i) & 1 ? Spin{1} : Spin{-1};
  return y;
}

EnumeratedDistribution enumerate_distribution(const IsingModel& model,
                                              double beta) {
  int m = model.num_spins();
  if (m > 24)
    throw SizeError("enumeration refused: m = " + std::to_string(m) +
                    " exceeds the 24-spin guard");
  EnumeratedDistribution d;
  d.m = m;
  std::size_t n = std::size_t{1} << m;
  d.log_prob.resize(n);
  SpinState y(static_cast<std::size_t>(m));
  double max_lw = -std::numeric_limits<double>::infinity();
  for (std::size_t idx = 0; idx < n; ++idx) {
    for (int i = 0; i < m; ++i)
      y[static_cast<std::size_t>(i)] = (idx >> i) & 1 ? Spin{1} : Spin{-1};
    double lw = -beta * model.energy(y);
    d.log_prob[idx] = lw;
    max_lw = std::max(max_lw, lw);
  }
  double s = 0.0;
  for (double lw : d.log_prob) s += std::exp(lw - max_lw);
  d.log_z = max_lw + std::log(s);
  for (double& lw : d.log_prob) lw -= d.log_z;
  return d;
}

// ---------------------------------------------------------------------------

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_problem(std::ostream& out, const IsingModel& model,
                   const std::vector<std::string>& comment_lines) {
  for (const auto& c : comment_lines) out << "# " << c << "\n";
  out << "# topology: " << to_string(model.topology());
  if (model.topology() == Topology::grid3d) {
    const auto& g = model.grid();
    out << ' ' << g.lx << ' ' << g.ly << ' ' << g.lz << ' '
        << (g.periodic ? 1 : 0);
  }
  out << "\n";
  out << "ising " << model.num_spins() << "\n";
  const auto& h = model.fields();
  for (int i = 0; i < model.num_spins(); ++i)
    if (h[static_cast<std::size_t>(i)] != 0.0)
      out << "h " << i << ' ' << fmt_double(h[static_cast<std::size_t>(i)])
          << "\n";
  for (const auto& c : model.couplings())
    out << "J " << c.i << ' ' << c.j << ' ' << fmt_double(c.value) << "\n";
}

IsingModel read_problem(std::istream& in) {
  int m = -1;
  std::vector<double> h;
  std::vector<Coupling> cs;
  Topology topo = Topology::general;
  GridDims grid;
  bool topo_seen = false;

  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw std::invalid_argument("problem file line " + std::to_string(lineno) +
                                ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view sv = line;
    while (!sv.empty() && (sv.back() == '\r' || sv.back() == ' ')) sv.remove_suffix(1);
    while (!sv.empty() && sv.front() == ' ') sv.remove_prefix(1);
    if (sv.empty()) continue;
    if (sv.front() == '#') {
      std::istringstream c(std::string(sv.substr(1)));
      std::string tag;
      c >> tag;
      if (tag == "topology:") {
        std::string name;
        c >> name;
        if (name == "grid3d") {
          int p = 1;
          if (!(c >> grid.lx >> grid.ly >> grid.lz >> p))
            fail("malformed grid3d topology comment");
          grid.periodic = (p != 0);
          topo = Topology::grid3d;
        } else if (name == "independent") {
          topo = Topology::independent;
        } else if (name == "chain") {
          topo = Topology::chain;
        } else if (name == "complete") {
          topo = Topology::complete;
        } else if (name == "general") {
          topo = Topology::general;
        } else {
          fail("unknown topology tag: " + name);
        }
        topo_seen = true;
      }
      continue;
    }
    std::istringstream ls{std::string(sv)};
    std::string kind;
    ls >> kind;
    if (kind == "ising") {
      if (m >= 0) fail("duplicate ising header");
      if (!(ls >> m) || m <= 0) fail("bad spin count");
      h.assign(static_cast<std::size_t>(m), 0.0);
    } else if (kind == "h") {
      if (m < 0) fail("h line before ising header");
      int i;
      double v;
      if (!(ls >> i >> v)) fail("malformed h line");
      if (i < 0 || i >= m) fail("h index out of range");
      h[static_cast<std::size_t>(i)] = v;
    } else if (kind == "J") {
      if (m < 0) fail("J line before ising header");
      int i, j;
      double v;
      if (!(ls >> i >> j >> v)) fail("malformed J line");
      cs.push_back({i, j, v});
    } else {
      fail("unrecognized line kind: " + kind);
    }
  }
  if (m < 0) throw std::invalid_argument("problem file has no ising header");

  if (!topo_seen) {
    // Infer the obvious cases so oracles work on hand-written files.
    if (cs.empty()) {
      topo = Topology::independent;
    } else if (std::all_of(cs.begin(), cs.end(), [](const Coupling& c) {
                 return c.j == c.i + 1 || c.i == c.j + 1;
               })) {
      topo = Topology::chain;
    }
  }
  return IsingModel(m, std::move(h), std::move(cs), topo, grid);
}

IsingModel read_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open problem file: " + path);
  return read_problem(in);
}

void write_problem_file(const std::string& path, const IsingModel& model,
                        const std::vector<std::string>& comment_lines) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write problem file: " + path);
  write_problem(out, model, comment_lines);
}

}  // namespace sss
