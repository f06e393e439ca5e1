#include "sss/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace sss {

long long count_matching(const PartialState& pattern,
                         const SamplePopulation& samples) {
  long long n = 0;
  for (const auto& y : samples) n += pattern.matches(y);
  return n;
}

long long PartitionCounts::total() const {
  return std::accumulate(counts.begin(), counts.end(), 0LL);
}

std::vector<double> robust_alphas(const std::vector<long long>& counts) {
  if (counts.empty()) throw std::invalid_argument("no cells");
  long long mn = *std::min_element(counts.begin(), counts.end());
  long long k = std::count(counts.begin(), counts.end(), mn);
  std::vector<double> a(counts.size(), 0.0);
  for (std::size_t c = 0; c < counts.size(); ++c)
    if (counts[c] == mn) a[c] = 1.0 / static_cast<double>(k);
  return a;
}

std::vector<double> bayes_estimate(const std::vector<long long>& counts,
                                   const std::vector<double>& alphas) {
  if (counts.size() != alphas.size())
    throw std::invalid_argument("counts/alphas size mismatch");
  long long n = std::accumulate(counts.begin(), counts.end(), 0LL);
  std::vector<double> q(counts.size());
  for (std::size_t c = 0; c < counts.size(); ++c)
    q[c] = (static_cast<double>(counts[c]) + alphas[c]) /
           (static_cast<double>(n) + 1.0);
  return q;
}

std::vector<double> mle_estimate(const std::vector<long long>& counts) {
  long long n = std::accumulate(counts.begin(), counts.end(), 0LL);
  if (n == 0) throw std::invalid_argument("MLE undefined for empty sample");
  std::vector<double> q(counts.size());
  for (std::size_t c = 0; c < counts.size(); ++c)
    q[c] = static_cast<double>(counts[c]) / static_cast<double>(n);
  return q;
}

double digamma(double x) {
  if (!(x > 0.0)) throw std::invalid_argument("digamma requires x > 0");
  double r = 0.0;
  while (x < 10.0) {
    r -= 1.0 / x;
    x += 1.0;
  }
  // psi(x) ~ ln x - 1/(2x) - 1/(12x^2) + 1/(120x^4) - 1/(252x^6)
  //          + 1/(240x^8) - 1/(132x^10);  next term < 3e-14 for x >= 10.
  double inv = 1.0 / x, inv2 = inv * inv;
  double tail =
      inv2 * (1.0 / 12.0 -
              inv2 * (1.0 / 120.0 -
                      inv2 * (1.0 / 252.0 -
                              inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0)))));
  return r + std::log(x) - 0.5 * inv - tail;
}

double posterior_kl_loss(const std::vector<double>& alpha_prime,
                         const std::vector<double>& alpha,
                         const std::vector<long long>& counts) {
  std::size_t k = counts.size();
  if (alpha_prime.size() != k || alpha.size() != k)
    throw std::invalid_argument("parameter vector size mismatch");
  double n1 = static_cast<double>(
                  std::accumulate(counts.begin(), counts.end(), 0LL)) +
              1.0;
  double psi_n2 = digamma(n1 + 1.0);
  double loss = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    double ap = alpha_prime[c] + static_cast<double>(counts[c]);
    if (ap == 0.0) continue;                      // x psi(x) -> 0 limit
    double a = alpha[c] + static_cast<double>(counts[c]);
    if (a == 0.0) return std::numeric_limits<double>::infinity();
    loss += (ap / n1) * (digamma(ap + 1.0) - psi_n2 - std::log(a / n1));
  }
  return loss;
}

double worst_case_kl(const std::vector<long long>& counts,
                     const std::vector<double>& alphas) {
  std::size_t k = counts.size();
  if (k == 0) throw std::invalid_argument("no cells");
  long long mn = *std::min_element(counts.begin(), counts.end());
  std::size_t first_min = k;
  bool have_second = false;
  long long second = 0;
  std::size_t first_second = 0;
  for (std::size_t c = 0; c < k; ++c) {
    if (counts[c] == mn && first_min == k) first_min = c;
    if (counts[c] > mn && (!have_second || counts[c] < second)) {
      have_second = true;
      second = counts[c];
      first_second = c;
    }
  }

  std::vector<double> vertex(k, 0.0);
  vertex[first_min] = 1.0;
  double worst = posterior_kl_loss(vertex, alphas, counts);
  if (have_second) {
    vertex[first_min] = 0.0;
    vertex[first_second] = 1.0;
    worst = std::max(worst, posterior_kl_loss(vertex, alphas, counts));
  }
  return worst;
}

double rb_plus_sum(const IsingModel& model, double beta,
                   const SamplePopulation& pop,
                   const std::vector<std::int32_t>& members, int v) {
  double s = 0.0;
  for (std::int32_t j : members)
    s += prob_plus(model.local_field(pop[static_cast<std::size_t>(j)], v),
                   beta);
  return s;
}

std::pair<double, double> rao_blackwell_estimate(
    const IsingModel& model, double beta, const SamplePopulation& pop,
    const std::vector<std::int32_t>& parent_members, int branch_variable,
    double alpha_plus, double alpha_minus) {
  double n = static_cast<double>(parent_members.size());
  double denom = n + alpha_plus + alpha_minus;
  if (denom <= 0.0)
    throw std::invalid_argument(
        "Rao-Blackwell estimate undefined: empty parent and zero alphas");
  double sp = rb_plus_sum(model, beta, pop, parent_members, branch_variable);
  double qp = (sp + alpha_plus) / denom;
  double qm = (n - sp + alpha_minus) / denom;
  return {qp, qm};
}

}  // namespace sss
