#pragma once

// Ising models over y in {+1,-1}^m with energy
//
//     E(y) = sum_i h_i y_i + sum_{(i,j)} J_ij y_i y_j
//
// and Boltzmann law pi(y) proportional to exp(-beta E(y)).  With this sign
// convention the single-site conditional is
//
//     Pr(y_i = s | rest) = exp(-beta s lambda_i) / (2 cosh(beta lambda_i)),
//     lambda_i = h_i + sum_{j ~ i} J_ij y_j,
//
// which the estimator and heuristic modules rely on.  beta is always passed
// explicitly; it is never folded into h or J.
//
// Also here: reproducible generators for the four benchmark families
// (independent fields, open chain, Sherrington-Kirkpatrick, periodic cubic
// lattice), exact log-partition-function oracles for the tractable families,
// and a brute-force enumerator for desk-scale models.

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sss/partial_state.hpp"

namespace sss {

struct Coupling {
  int i = 0, j = 0;     // endpoints, i < j
  double value = 0.0;   // J_ij
  friend bool operator==(const Coupling&, const Coupling&) = default;
};

enum class Topology { general, independent, chain, complete, grid3d };

struct GridDims {
  int lx = 0, ly = 0, lz = 0;
  bool periodic = true;
  friend bool operator==(const GridDims&, const GridDims&) = default;
};

class IsingModel {
 public:
  IsingModel(int m, std::vector<double> h, std::vector<Coupling> couplings,
             Topology topology = Topology::general, GridDims grid = {});

  int num_spins() const { return m_; }
  const std::vector<double>& fields() const { return h_; }
  const std::vector<Coupling>& couplings() const { return couplings_; }
  Topology topology() const { return topology_; }
  const GridDims& grid() const { return grid_; }

  // Neighbours of site i as (site, J) pairs (CSR adjacency).
  std::span<const std::pair<int, double>> neighbours(int i) const {
    return {adj_.data() + adj_off_[static_cast<std::size_t>(i)],
            adj_.data() + adj_off_[static_cast<std::size_t>(i) + 1]};
  }

  double energy(const SpinState& y) const;

  // lambda_i = h_i + sum_{j ~ i} J_ij y_j.  Only neighbours of i are read.
  double local_field(const SpinState& y, int i) const;

  // Pr(y_i = y[i] | y_{-i}) under the Boltzmann law at inverse temperature
  // beta; the probability of the value currently held in y.
  double local_conditional(const SpinState& y, int i, double beta) const;

  friend bool operator==(const IsingModel& a, const IsingModel& b) {
    return a.m_ == b.m_ && a.h_ == b.h_ && a.couplings_ == b.couplings_ &&
           a.topology_ == b.topology_ && a.grid_ == b.grid_;
  }

 private:
  int m_;
  std::vector<double> h_;
  std::vector<Coupling> couplings_;
  Topology topology_;
  GridDims grid_;
  std::vector<std::size_t> adj_off_;            // m+1 offsets
  std::vector<std::pair<int, double>> adj_;     // flattened neighbour lists
};

// Pr(y_i = +1) given the local field lambda_i.
inline double prob_plus(double lambda, double beta) {
  return 1.0 / (1.0 + std::exp(2.0 * beta * lambda));
}

// ---------------------------------------------------------------------------
// Problem generators.  Deterministic in (family, size, seed): the Gaussian
// stream is Box-Muller over mt19937_64 (see rng.hpp) consumed in a fixed
// order, so identical arguments give bit-identical models on any platform.

enum class Family { independent, chain, sk, grid3d };

Family family_from_string(const std::string& s);
std::string to_string(Family f);
std::string to_string(Topology t);

IsingModel generate_independent(int m, std::uint64_t seed);   // h_i ~ N(0,1)
IsingModel generate_chain(int m, std::uint64_t seed);         // J ~ N(0,1), h=0
IsingModel generate_sk(int m, std::uint64_t seed);            // J ~ N(0,1/m) variance
IsingModel generate_grid3d(int lx, int ly, int lz, bool periodic,
                           std::uint64_t seed);               // J ~ N(0,1), h=0

// Dispatcher; for grid3d builds the periodic m x m x m cube.
IsingModel generate_problem(Family family, int m, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Exact oracles.

// log Z = sum_i log(2 cosh(beta h_i)); model must have no couplings.
double exact_logz_independent(const IsingModel& model, double beta);

// log Z by sequential elimination along the chain, in the log domain.
// Model couplings must all be consecutive pairs (i, i+1); missing links are
// treated as J = 0.
double exact_logz_chain(const IsingModel& model, double beta);

// Full enumeration of the Boltzmann distribution; refuses m > 24.
// State index encoding: bit i of the index set => y_i = +1.
struct EnumeratedDistribution {
  int m = 0;
  double log_z = 0.0;
  std::vector<double> log_prob;   // 2^m entries

  double prob(std::size_t idx) const { return std::exp(log_prob[idx]); }
  std::size_t index_of(const SpinState& y) const;
  SpinState state_of(std::size_t idx) const;
};

EnumeratedDistribution enumerate_distribution(const IsingModel& model,
                                              double beta);

// Thrown when a guarded operation would blow up (e.g. enumeration of a large
// model).  The CLI maps it to its own exit code.
struct SizeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Problem file format (text, line oriented):
//
//   # comment                       '#' starts a comment line
//   # topology: chain               structured comment, restored on read
//   ising <m>                       header, must precede h/J lines
//   h <i> <value>                   per-site field, 0-based, omitted => 0
//   J <i> <j> <value>               coupling, i < j after normalization
//
// Values are printed with %.17g so a write/read round trip is bit exact.

void write_problem(std::ostream& out, const IsingModel& model,
                   const std::vector<std::string>& comment_lines = {});
IsingModel read_problem(std::istream& in);
IsingModel read_problem_file(const std::string& path);
void write_problem_file(const std::string& path, const IsingModel& model,
                        const std::vector<std::string>& comment_lines = {});

}  // namespace sss
