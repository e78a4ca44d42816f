#pragma once

#include <vector>

#include "corot/errors.hpp"
#include "corot/slice.hpp"

namespace corot {

// Ordered slices stored at a uniform cadence; the substrate for all
// spacetime diagnostics. Interpolation is linear in t, 4-point Lagrange in r.
class History {
 public:
  History() = default;

  void push(Slice s) {
    if (!slices_.empty() && !(s.t > slices_.back().t))
      throw std::runtime_error("history times must increase");
    slices_.push_back(std::move(s));
  }

  int size() const { return static_cast<int>(slices_.size()); }
  const Slice& slice(int i) const { return slices_.at(i); }
  const Slice& front() const { return slices_.front(); }
  const Slice& back() const { return slices_.back(); }
  double t(int i) const { return slices_.at(i).t; }
  double t_begin() const { return slices_.front().t; }
  double t_end() const { return slices_.back().t; }
  double stored_dt() const { return size() > 1 ? slices_[1].t - slices_[0].t : 0.0; }
  const RadialGrid& grid() const { return slices_.front().grid; }

  // index of the stored slice nearest to t
  int nearest_index(double t) const;
  // bracketing index: largest i with t(i) <= t (clamped to size-2)
  int lower_index(double t) const;

  enum class Field { V, Pi, Gamma, Omega };

  // field value at (t, r): linear in t between stored slices, cubic in r
  double at(Field f, double t, double r) const;

  // exp(Omega - gamma) at (t, r): the coordinate light speed
  double light_speed(double t, double r) const;

 private:
  const std::vector<double>& field_array(int i, Field f) const;
  std::vector<Slice> slices_;
};

}  // namespace corot
