#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

namespace corot {

// Parity of a radial grid function across the axis r=0. Even fields mirror,
// odd fields mirror with a sign flip; grids always have r[0]=0 on the axis.
enum class Parity { Even, Odd };

// d/dr by second-order centered differences on a uniform grid. The axis point
// uses the parity ghost (f[-1] = +-f[1]); the outer edge a one-sided 3-point
// stencil of the same order.
std::vector<double> radial_derivative(std::span<const double> f, double dr, Parity parity);

// Midpoint value f(r_{i+1/2}) by 4-point Lagrange interpolation, parity-mirrored
// through the axis and one-sided at the outer edge. O(dr^4).
double midpoint_value(std::span<const double> f, int i, Parity parity);

// 4-point Lagrange interpolation of a grid function at radius r (clamped to the
// grid, parity-mirrored through the axis).
double interp_radial(std::span<const double> f, double dr, double r, Parity parity);

// Composite trapezoid antiderivative: out[i] = integral of f from r[0] to r[i].
std::vector<double> cumulative_trapezoid(std::span<const double> f, double dr);

// Trapezoid integral of grid samples up to radius r, with a linear partial cell.
double trapezoid_to(std::span<const double> f, double dr, double r);

// Monotone cubic (Fritsch-Carlson) interpolant through (x_k, y_k), x strictly
// increasing. Used to resample characteristic fans onto the grid.
class MonotoneCubic {
 public:
  MonotoneCubic() = default;
  MonotoneCubic(std::vector<double> x, std::vector<double> y);
  double operator()(double x) const;
  bool empty() const { return x_.empty(); }
  double x_front() const { return x_.front(); }
  double x_back() const { return x_.back(); }

 private:
  std::vector<double> x_, y_, m_;  // nodes, values, node slopes
};

inline double sq(double x) { return x * x; }

}  // namespace corot
