#include "corot/fd.hpp"

#include <algorithm>
#include <cmath>

namespace corot {

namespace {
double mirrored(std::span<const double> f, int i, Parity parity) {
  if (i >= 0) return f[static_cast<size_t>(i)];
  return parity == Parity::Even ? f[static_cast<size_t>(-i)] : -f[static_cast<size_t>(-i)];
}
}  // namespace

std::vector<double> radial_derivative(std::span<const double> f, double dr, Parity parity) {
  const int n = static_cast<int>(f.size());
  std::vector<double> d(f.size());
  if (n < 3) {
    std::fill(d.begin(), d.end(), 0.0);
    return d;
  }
  // axis: ghost value from parity
  d[0] = (f[1] - mirrored(f, -1, parity)) / (2.0 * dr);
  for (int i = 1; i < n - 1; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * dr);
  d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * dr);
  return d;
}

double midpoint_value(std::span<const double> f, int i, Parity parity) {
  const int n = static_cast<int>(f.size());
  assert(i >= 0 && i + 1 < n);
  if (i + 2 < n) {
    // symmetric stencil i-1..i+2 (i-1 mirrored through the axis when i=0)
    const double fm = mirrored(f, i - 1, parity);
    return (-fm + 9.0 * f[i] + 9.0 * f[i + 1] - f[i + 2]) / 16.0;
  }
  // outer edge: cubic through i-2..i+1 evaluated at i+1/2
  return (f[i - 2] - 5.0 * f[i - 1] + 15.0 * f[i] + 5.0 * f[i + 1]) / 16.0;
}

double interp_radial(std::span<const double> f, double dr, double r, Parity parity) {
  const int n = static_cast<int>(f.size());
  if (n == 1) return f[0];
  double s = r / dr;
  s = std::clamp(s, 0.0, static_cast<double>(n - 1));
  int i = static_cast<int>(std::floor(s));
  i = std::min(i, n - 2);
  const double x = s - i;  // in [0,1]
  if (n < 4) return f[i] * (1.0 - x) + f[i + 1] * x;
  int j = i - 1;  // stencil j..j+3
  // Lagrange weights on nodes {-1,0,1,2} at offset x
  double w[4];
  w[0] = -x * (x - 1.0) * (x - 2.0) / 6.0;
  w[1] = (x + 1.0) * (x - 1.0) * (x - 2.0) / 2.0;
  w[2] = -(x + 1.0) * x * (x - 2.0) / 2.0;
  w[3] = (x + 1.0) * x * (x - 1.0) / 6.0;
  double acc = 0.0;
  for (int k = 0; k < 4; ++k) {
    int idx = j + k;
    double val;
    if (idx < 0)
      val = mirrored(f, idx, parity);
    else if (idx > n - 1)
      val = f[n - 1];  // clamped; callers stay inside the grid
    else
      val = f[idx];
    acc += w[k] * val;
  }
  return acc;
}

std::vector<double> cumulative_trapezoid(std::span<const double> f, double dr) {
  std::vector<double> out(f.size(), 0.0);
  for (size_t i = 1; i < f.size(); ++i)
    out[i] = out[i - 1] + 0.5 * dr * (f[i - 1] + f[i]);
  return out;
}

double trapezoid_to(std::span<const double> f, double dr, double r) {
  const int n = static_cast<int>(f.size());
  double acc = 0.0;
  const double s = std::clamp(r / dr, 0.0, static_cast<double>(n - 1));
  const int m = static_cast<int>(std::floor(s));
  for (int i = 1; i <= m; ++i) acc += 0.5 * dr * (f[i - 1] + f[i]);
  if (m < n - 1) {
    const double x = (s - m) * dr;  // partial cell width
    const double f_end = f[m] + (f[m + 1] - f[m]) * (s - m);
    acc += 0.5 * x * (f[m] + f_end);
  }
  return acc;
}

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const size_t n = x_.size();
  m_.assign(n, 0.0);
  if (n < 2) return;
  std::vector<double> d(n - 1);
  for (size_t i = 0; i + 1 < n; ++i) d[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
  m_[0] = d[0];
  m_[n - 1] = d[n - 2];
  for (size_t i = 1; i + 1 < n; ++i) {
    if (d[i - 1] * d[i] <= 0.0)
      m_[i] = 0.0;
    else
      m_[i] = 0.5 * (d[i - 1] + d[i]);
  }
  // Fritsch-Carlson limiter
  for (size_t i = 0; i + 1 < n; ++i) {
    if (d[i] == 0.0) {
      m_[i] = m_[i + 1] = 0.0;
      continue;
    }
    const double a = m_[i] / d[i], b = m_[i + 1] / d[i];
    const double s = a * a + b * b;
    if (s > 9.0) {
      const double tau = 3.0 / std::sqrt(s);
      m_[i] = tau * a * d[i];
      m_[i + 1] = tau * b * d[i];
    }
  }
}

double MonotoneCubic::operator()(double x) const {
  const size_t n = x_.size();
  if (n == 0) return 0.0;
  if (n == 1 || x <= x_.front()) return y_.front();
  if (x >= x_.back()) return y_.back();
  size_t lo = std::upper_bound(x_.begin(), x_.end(), x) - x_.begin() - 1;
  const double h = x_[lo + 1] - x_[lo];
  const double t = (x - x_[lo]) / h;
  const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
  const double h10 = t * (1 - t) * (1 - t);
  const double h01 = t * t * (3 - 2 * t);
  const double h11 = t * t * (t - 1);
  return h00 * y_[lo] + h10 * h * m_[lo] + h01 * y_[lo + 1] + h11 * h * m_[lo + 1];
}

}  // namespace corot
