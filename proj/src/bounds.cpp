#include "lrlab/bounds.hpp"

#include <cmath>

#include "lrlab/errors.hpp"

namespace lrlab {

namespace {

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError(std::string(what) + " must be positive and finite");
}

void require_nonnegative(double x, const char* what) {
  if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError(std::string(what) + " must be nonnegative and finite");
}

}  // namespace

LRConstants::LRConstants(double c_, double v_, double xi_) : c(c_), v(v_), xi(xi_) {
  require_positive(c, "LRConstants.c");
  require_positive(v, "LRConstants.v");
  require_positive(xi, "LRConstants.xi");
}

CorrelationDecay::CorrelationDecay(double c_tilde_, double chi_) : c_tilde(c_tilde_), chi(chi_) {
  require_positive(c_tilde, "CorrelationDecay.c_tilde");
  require_positive(chi, "CorrelationDecay.chi");
}

double lr_bound(const LRConstants& k, int n_min, double L, double t) {
  require_nonnegative(L, "L");
  if (n_min < 1) throw DomainError("lr_bound: n_min must be >= 1");
  return k.c * n_min * std::exp(-(L - k.v * std::abs(t)) / k.xi);
}

double truncation_bound(const LRConstants& k, int size_a, double l, double t) {
  require_nonnegative(l, "l");
  if (size_a < 1) throw DomainError("truncation_bound: |A| must be >= 1");
  return k.c * size_a * std::exp(-(l - k.v * std::abs(t)) / k.xi);
}

double optimal_cut(double chi, double xi, double v, double t, double L) {
  require_positive(chi, "chi");
  require_positive(xi, "xi");
  require_positive(v, "v");
  require_nonnegative(t, "t");
  require_nonnegative(L, "L");
  return (chi * v * t + xi * L) / (chi + 2.0 * xi);
}

SpreadLength::SpreadLength(const CorrelationDecay& decay, const LRConstants& k)
    : chi_prime_(decay.chi + 2.0 * k.xi), v_(k.v) {}

double correlation_spread_bound(double c_bar, const SpreadLength& chi_prime, int size_a, int size_b, double L,
                                double t) {
  require_positive(c_bar, "c_bar");
  require_nonnegative(L, "L");
  require_nonnegative(t, "t");
  if (size_a < 1 || size_b < 1) throw DomainError("correlation_spread_bound: region sizes must be >= 1");
  return c_bar * (size_a + size_b) * std::exp(-(L - 2.0 * chi_prime.velocity() * t) / chi_prime.value());
}

FannesValue fannes_bound(double delta, int n_b, int m) {
  require_nonnegative(delta, "delta");
  if (n_b < 1 || m < 2) throw DomainError("fannes_bound: need nB >= 1 and m >= 2");
  FannesValue out;
  out.valid = delta <= std::exp(-1.0);
  if (delta == 0.0) return out;
  out.bits = delta * n_b * std::log2(static_cast<double>(m)) - delta * std::log2(delta);
  return out;
}

double capacity_bound(double epsilon, int n_b, int m) {
  if (!(epsilon >= 0.0) || epsilon > 2.0) throw DomainError("capacity_bound: epsilon must lie in [0, 2]");
  if (n_b < 1 || m < 2) throw DomainError("capacity_bound: need nB >= 1 and m >= 2");
  if (epsilon == 0.0) return 0.0;
  return 2.0 * epsilon * (n_b * std::log2(static_cast<double>(m)) - std::log2(epsilon));
}

double entangling_rate_profile(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("entangling_rate_profile: x must lie in [0, 1]");
  if (x == 0.0 || x == 1.0) return 0.0;
  return 2.0 * std::sqrt(x * (1.0 - x)) * std::log2(x / (1.0 - x));
}

CStar cstar() {
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = 0.5;
  double b = 1.0 - 1e-15;
  double x1 = b - phi * (b - a);
  double x2 = a + phi * (b - a);
  double f1 = entangling_rate_profile(x1);
  double f2 = entangling_rate_profile(x2);
  while (b - a > 1e-10) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = entangling_rate_profile(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = entangling_rate_profile(x1);
    }
  }
  const double x = 0.5 * (a + b);
  return {entangling_rate_profile(x), x};
}

double entropy_rate_bound(std::span<const double> schedule_values) {
  double sum = 0.0;
  for (double r : schedule_values) sum += std::abs(r);
  static const double c = cstar().value;
  return c * sum;
}

double entropy_budget(double g, int perimeter, double t) {
  require_nonnegative(g, "g");
  require_nonnegative(t, "t");
  if (perimeter < 0) throw DomainError("entropy_budget: perimeter must be >= 0");
  static const double c = cstar().value;
  return c * g * perimeter * t;
}

double tqo_epsilon_propagation(double eps_f, double l_f, const LRConstants& k, double t, int d) {
  require_nonnegative(eps_f, "eps_f");
  require_positive(l_f, "l_f");
  require_nonnegative(t, "t");
  if (d < 1) throw DomainError("tqo_epsilon_propagation: lattice dimension must be >= 1");
  return eps_f + std::pow(l_f, d - 1) * std::exp(-(l_f / 2.0 - k.v * t) / k.xi);
}

}  // namespace lrlab
