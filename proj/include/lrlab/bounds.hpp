#pragma once

#include <span>

namespace lrlab {

/// Lieb-Robinson constants: prefactor c, velocity v (edges per unit time), decay length xi (edges).
struct LRConstants {
  double c;
  double v;
  double xi;

  LRConstants(double c, double v, double xi);
};

/// Exponential clustering c_tilde * exp(-L / chi) of the initial state.
struct CorrelationDecay {
  double c_tilde;
  double chi;

  CorrelationDecay(double c_tilde, double chi);
};

/// c * n_min * exp(-(L - v|t|) / xi), unit-norm observables.
double lr_bound(const LRConstants& k, int n_min, double L, double t);

/// c * |A| * exp(-(l - v|t|) / xi)
double truncation_bound(const LRConstants& k, int size_a, double l, double t);

/// (chi v t + xi L) / (chi + 2 xi)
double optimal_cut(double chi, double xi, double v, double t, double L);

/// Effective correlation length chi' = chi + 2 xi.
class SpreadLength {
 public:
  SpreadLength(const CorrelationDecay& decay, const LRConstants& k);
  double value() const { return chi_prime_; }
  double velocity() const { return v_; }

 private:
  double chi_prime_;
  double v_;
};

/// c_bar (|A| + |B|) exp(-(L - 2 v t) / chi')
double correlation_spread_bound(double c_bar, const SpreadLength& chi_prime, int size_a, int size_b, double L,
                                double t);

struct FannesValue {
  double bits = 0.0;
  bool valid = true;  ///< false when delta > 1/e
};

/// delta * nB * log2 m - delta * log2 delta
FannesValue fannes_bound(double delta, int n_b, int m);

/// 2 eps (nB log2 m - log2 eps); eps in [0, 2], 0 at eps = 0.
double capacity_bound(double epsilon, int n_b, int m);

struct CStar {
  double value;
  double x_star;
};

/// f(x) = 2 sqrt(x(1-x)) log2(x/(1-x)), evaluated on [0, 1] (0 at the ends).
double entangling_rate_profile(double x);

/// Maximum of the profile over (1/2, 1) by golden-section search to 1e-10.
CStar cstar();

/// c* * sum |r_k|
double entropy_rate_bound(std::span<const double> schedule_values);
/// c* * g * P * t
double entropy_budget(double g, int perimeter, double t);

/// eps_f + l_f^(d-1) exp(-(l_f/2 - v t) / xi), with the O(1) constant set to 1.
double tqo_epsilon_propagation(double eps_f, double l_f, const LRConstants& k, double t, int d);

}  // namespace lrlab
