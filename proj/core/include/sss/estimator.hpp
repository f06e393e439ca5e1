#pragma once

// Robust Bayesian estimation of multinomial cell probabilities from counts.
//
// Given N samples distributed over k cells with counts #_c, the estimator
// family considered is Dirichlet smoothing with a single total pseudocount:
// priors alpha with alpha_c >= 0 and sum_c alpha_c = 1.  The posterior mean
// is
//
//     q_hat(c) = (#_c + alpha_c) / (N + 1).
//
// The robust member places the pseudocount uniformly on the minimum-count
// cells, which caps the worst-case posterior KL loss against an adversarial
// prior from the same family.  The loss of q_hat under adversarial prior
// alpha' is
//
//     rho(alpha', alpha) = sum_c [(alpha'_c + #_c) / (1 + N)] *
//         [psi(alpha'_c + #_c + 1) - psi(N + 2) - log((alpha_c + #_c)/(1+N))]
//
// (psi = digamma; cells with alpha'_c + #_c = 0 contribute nothing), and the
// worst case over the family is attained at a vertex prior concentrated on a
// minimum-count or second-lowest-count cell.  worst_case_kl evaluates those
// candidates; the brute-force maximum over all vertices is used as a test
// oracle only.
//
// All losses are in nats.

#include <cstdint>
#include <utility>
#include <vector>

#include "sss/ising.hpp"
#include "sss/partial_state.hpp"

namespace sss {

using SamplePopulation = std::vector<SpinState>;

// Number of population members agreeing with every assigned coordinate of
// the pattern.
long long count_matching(const PartialState& pattern,
                         const SamplePopulation& samples);

struct PartitionCounts {
  std::vector<long long> counts;
  long long total() const;
};

// Pseudocount 1/|argmin set| on every minimum-count cell, 0 elsewhere.
std::vector<double> robust_alphas(const std::vector<long long>& counts);

// (# + alpha) / (N + 1) per cell; requires sum(alpha) = 1.
std::vector<double> bayes_estimate(const std::vector<long long>& counts,
                                   const std::vector<double>& alphas);

// #_c / N.  Reference estimator for tests and demos only: zero-count cells
// get zero mass, which invalidates importance sampling, so the sampling path
// never uses it.
std::vector<double> mle_estimate(const std::vector<long long>& counts);

// Digamma, |error| < 1e-12 for x >= 1 (upward recurrence to x >= 10, then an
// asymptotic tail through x^-10).
double digamma(double x);

// rho(alpha', alpha) as defined above; +infinity when the estimate has a
// zero where the adversary has mass.
double posterior_kl_loss(const std::vector<double>& alpha_prime,
                         const std::vector<double>& alpha,
                         const std::vector<long long>& counts);

// Worst case of posterior_kl_loss over the single-pseudocount family, for
// alphas = robust_alphas(counts) (the two-vertex shortcut is only valid for
// the robust member).
double worst_case_kl(const std::vector<long long>& counts,
                     const std::vector<double>& alphas);

// Sum over the listed population members of Pr(y_v = +1 | rest of member)
// under the model's Boltzmann law at beta.
double rb_plus_sum(const IsingModel& model, double beta,
                   const SamplePopulation& pop,
                   const std::vector<std::int32_t>& members, int v);

// Rao-Blackwellised branch estimate: replaces the +/- counts at a branch by
// sums of exact single-site conditionals over the parent's members.
//
//   q_hat(+) = (S_+ + alpha_plus) / (#parent + alpha_plus + alpha_minus)
//
// and symmetrically for -; the two returned values sum to 1.
std::pair<double, double> rao_blackwell_estimate(
    const IsingModel& model, double beta, const SamplePopulation& pop,
    const std::vector<std::int32_t>& parent_members, int branch_variable,
    double alpha_plus, double alpha_minus);

}  // namespace sss
