#include <algorithm>
#include <cmath>
#include <string>

#include "lrlab/errors.hpp"
#include "lrlab/hamiltonian.hpp"

namespace lrlab {

Schedule Schedule::constant(double value) {
  if (!std::isfinite(value)) throw DomainError("Schedule::constant: non-finite value");
  Schedule s;
  s.kind_ = Kind::Constant;
  s.constant_ = value;
  s.bound_ = std::abs(value);
  s.label_ = "constant";
  return s;
}

Schedule Schedule::piecewise(std::vector<double> breakpoints, std::vector<double> values) {
  if (breakpoints.size() < 2 || values.size() + 1 != breakpoints.size())
    throw DomainError("Schedule::piecewise: need k+1 breakpoints for k values");
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
    if (!(breakpoints[i] < breakpoints[i + 1]))
      throw DomainError("Schedule::piecewise: breakpoints must be strictly increasing");
  Schedule s;
  s.kind_ = Kind::Piecewise;
  s.bound_ = 0.0;
  for (double v : values) {
    if (!std::isfinite(v)) throw DomainError("Schedule::piecewise: non-finite value");
    s.bound_ = std::max(s.bound_, std::abs(v));
  }
  s.breakpoints_ = std::move(breakpoints);
  s.values_ = std::move(values);
  s.label_ = "piecewise";
  return s;
}

Schedule Schedule::closed_form(std::function<double(double)> f, double bound, std::string label) {
  if (!f) throw DomainError("Schedule::closed_form: empty function");
  if (!(bound >= 0.0)) throw DomainError("Schedule::closed_form: bound must be >= 0");
  Schedule s;
  s.kind_ = Kind::ClosedForm;
  s.f_ = std::move(f);
  s.bound_ = bound;
  s.label_ = std::move(label);
  return s;
}

Schedule Schedule::pulse(double start, double stop, double value) {
  return piecewise({start, stop}, {value});
}

double Schedule::operator()(double t) const {
  switch (kind_) {
    case Kind::Constant:
      return constant_;
    case Kind::Piecewise: {
      if (t < breakpoints_.front() || t >= breakpoints_.back()) return 0.0;
      const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
      return values_[static_cast<std::size_t>(it - breakpoints_.begin()) - 1];
    }
    case Kind::ClosedForm:
      return f_(t);
  }
  return 0.0;
}

Schedule Schedule::scaled(double alpha) const {
  Schedule s = *this;
  s.constant_ *= alpha;
  for (double& v : s.values_) v *= alpha;
  if (kind_ == Kind::ClosedForm) {
    auto f = f_;
    s.f_ = [f, alpha](double t) { return alpha * f(t); };
  }
  s.bound_ = bound_ * std::abs(alpha);
  return s;
}

Schedule Schedule::time_mapped(double a, double b) const {
  if (a == 0.0) throw DomainError("Schedule::time_mapped: a must be nonzero");
  Schedule s = *this;
  if (kind_ == Kind::Piecewise) {
    std::vector<double> bp;
    for (double t : breakpoints_) bp.push_back((t - b) / a);
    std::vector<double> vals = values_;
    if (a < 0.0) {
      std::reverse(bp.begin(), bp.end());
      std::reverse(vals.begin(), vals.end());
    }
    s.breakpoints_ = std::move(bp);
    s.values_ = std::move(vals);
  } else if (kind_ == Kind::ClosedForm) {
    auto f = f_;
    s.f_ = [f, a, b](double t) { return f(a * t + b); };
  }
  return s;
}

}  // namespace lrlab
