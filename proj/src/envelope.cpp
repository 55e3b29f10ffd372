#include "rdd/envelope.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <stdexcept>

namespace rdd {

PiecewiseLinear::PiecewiseLinear(std::vector<double> xs, std::vector<double> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
  if (xs_.empty() || xs_.size() != ys_.size()) throw std::invalid_argument("malformed piecewise-linear function");
}

PiecewiseLinear PiecewiseLinear::line(double lo, double hi, double intercept, double slope) {
  if (hi <= lo) return PiecewiseLinear({lo}, {intercept + slope * lo});
  return PiecewiseLinear({lo, hi}, {intercept + slope * lo, intercept + slope * hi});
}

double PiecewiseLinear::operator()(double x) const {
  if (x <= xs_.front()) return ys_.front();
  if (x >= xs_.back()) return ys_.back();
  const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  const auto i = static_cast<std::size_t>(it - xs_.begin());
  const double x0 = xs_[i - 1], x1 = xs_[i];
  if (x1 == x0) return ys_[i];
  const double w = (x - x0) / (x1 - x0);
  return ys_[i - 1] + w * (ys_[i] - ys_[i - 1]);
}

namespace {

std::vector<double> merged_breakpoints(const PiecewiseLinear& a, const PiecewiseLinear& b) {
  std::vector<double> xs;
  xs.reserve(a.size() + b.size());
  std::merge(a.xs().begin(), a.xs().end(), b.xs().begin(), b.xs().end(), std::back_inserter(xs));
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

// Combines two functions on the same domain, inserting the crossing points
// so the result stays exact.
PiecewiseLinear combine(const PiecewiseLinear& a, const PiecewiseLinear& b,
                        const std::function<double(double, double)>& pick) {
  const auto grid = merged_breakpoints(a, b);
  std::vector<double> xs, ys;
  xs.reserve(grid.size() * 2);
  ys.reserve(grid.size() * 2);
  double prev_diff = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid[i];
    const double ya = a(x), yb = b(x);
    const double diff = ya - yb;
    if (i > 0 && ((prev_diff < 0 && diff > 0) || (prev_diff > 0 && diff < 0))) {
      const double x0 = grid[i - 1];
      const double xc = x0 + (x - x0) * (prev_diff / (prev_diff - diff));
      if (xc > x0 && xc < x) {
        xs.push_back(xc);
        ys.push_back(pick(a(xc), b(xc)));
      }
    }
    xs.push_back(x);
    ys.push_back(pick(ya, yb));
    prev_diff = diff;
  }
  return PiecewiseLinear(std::move(xs), std::move(ys));
}

}  // namespace

PiecewiseLinear pointwise_min(const PiecewiseLinear& a, const PiecewiseLinear& b) {
  return combine(a, b, [](double x, double y) { return std::min(x, y); });
}

PiecewiseLinear pointwise_max(const PiecewiseLinear& a, const PiecewiseLinear& b) {
  return combine(a, b, [](double x, double y) { return std::max(x, y); });
}

PiecewiseLinear add_slope(const PiecewiseLinear& f, double slope) {
  std::vector<double> ys = f.ys();
  for (std::size_t i = 0; i < ys.size(); ++i) ys[i] += slope * f.xs()[i];
  return PiecewiseLinear(f.xs(), std::move(ys));
}

PiecewiseLinear running_min(const PiecewiseLinear& f, double initial) {
  const auto& fx = f.xs();
  const auto& fy = f.ys();
  std::vector<double> xs{fx.front()}, ys;
  double m = std::min(initial, fy.front());
  ys.push_back(m);
  for (std::size_t i = 1; i < fx.size(); ++i) {
    const double y0 = fy[i - 1], y1 = fy[i];
    if (y1 >= m) {
      xs.push_back(fx[i]);
      ys.push_back(m);
      continue;
    }
    if (y0 > m) {
      const double xc = fx[i - 1] + (fx[i] - fx[i - 1]) * ((y0 - m) / (y0 - y1));
      if (xc > xs.back() && xc < fx[i]) {
        xs.push_back(xc);
        ys.push_back(m);
      }
    }
    xs.push_back(fx[i]);
    ys.push_back(y1);
    m = y1;
  }
  return PiecewiseLinear(std::move(xs), std::move(ys));
}

ArgMin prefix_argmin(const PiecewiseLinear& f, double x, double tol) {
  const auto& fx = f.xs();
  ArgMin best{f(x), x};
  for (std::size_t i = 0; i < fx.size() && fx[i] <= x; ++i)
    if (f.ys()[i] < best.value) best = {f.ys()[i], fx[i]};
  for (std::size_t i = 0; i < fx.size() && fx[i] <= x; ++i)
    if (f.ys()[i] <= best.value + tol) return {f.ys()[i], fx[i]};
  return best;
}

}  // namespace rdd
