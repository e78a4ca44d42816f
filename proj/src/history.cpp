#include "corot/history.hpp"

#include <algorithm>
#include <cmath>

namespace corot {

int History::nearest_index(double tq) const {
  const int i = lower_index(tq);
  if (i + 1 < size() && std::abs(t(i + 1) - tq) < std::abs(t(i) - tq)) return i + 1;
  return i;
}

int History::lower_index(double tq) const {
  if (size() < 2) return 0;
  auto it = std::upper_bound(slices_.begin(), slices_.end(), tq,
                             [](double a, const Slice& s) { return a < s.t; });
  int i = static_cast<int>(it - slices_.begin()) - 1;
  return std::clamp(i, 0, size() - 2);
}

const std::vector<double>& History::field_array(int i, Field f) const {
  const Slice& s = slices_[i];
  switch (f) {
    case Field::V: return s.v;
    case Field::Pi: return s.pi;
    case Field::Gamma: return s.gamma;
    case Field::Omega: return s.omega;
  }
  return s.v;
}

double History::at(Field f, double t, double r) const {
  const Parity p = (f == Field::Pi) ? Parity::Odd : Parity::Even;
  const int i = lower_index(t);
  const double dr = grid().dr;
  const double a = interp_radial(field_array(i, f), dr, r, p);
  if (size() == 1) return a;
  const double b = interp_radial(field_array(i + 1, f), dr, r, p);
  const double w = (t - slices_[i].t) / (slices_[i + 1].t - slices_[i].t);
  return a * (1.0 - w) + b * w;
}

double History::light_speed(double t, double r) const {
  return std::exp(at(Field::Omega, t, r) - at(Field::Gamma, t, r));
}

}  // namespace corot
