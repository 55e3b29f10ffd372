#pragma once

#include <vector>

namespace rdd {

// Continuous piecewise-linear function on [xs.front(), xs.back()], given by
// its breakpoints.
class PiecewiseLinear {
 public:
  PiecewiseLinear() = default;
  PiecewiseLinear(std::vector<double> xs, std::vector<double> ys);

  // y = intercept + slope * x on [lo, hi].
  static PiecewiseLinear line(double lo, double hi, double intercept, double slope);

  double operator()(double x) const;
  const std::vector<double>& xs() const { return xs_; }
  const std::vector<double>& ys() const { return ys_; }
  std::size_t size() const { return xs_.size(); }

 private:
  std::vector<double> xs_;
  std::vector<double> ys_;
};

PiecewiseLinear pointwise_min(const PiecewiseLinear& a, const PiecewiseLinear& b);
PiecewiseLinear pointwise_max(const PiecewiseLinear& a, const PiecewiseLinear& b);
// f(x) + slope * x
PiecewiseLinear add_slope(const PiecewiseLinear& f, double slope);
// x -> min(initial, min_{z <= x} f(z))
PiecewiseLinear running_min(const PiecewiseLinear& f, double initial);

struct ArgMin {
  double value;
  double at;
};
// Smallest z in [lo, x] whose value is within `tol` of min_{[lo, x]} f.
ArgMin prefix_argmin(const PiecewiseLinear& f, double x, double tol);

}  // namespace rdd
