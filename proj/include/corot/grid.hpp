#pragma once

#include <cmath>
#include <cstddef>

#include "corot/errors.hpp"

namespace corot {

// Uniform radial grid with r[0] = 0 on the axis.
struct RadialGrid {
  int n_points = 0;
  double dr = 0.0;
  double r_max = 0.0;

  double r(int i) const { return i * dr; }

  static RadialGrid make(int n_points, double r_max) {
    if (n_points < 33) throw ConfigError("grid needs at least 33 points");
    if (!(r_max > 0.0)) throw ConfigError("grid needs r_max > 0");
    RadialGrid g;
    g.n_points = n_points;
    g.r_max = r_max;
    g.dr = r_max / (n_points - 1);
    return g;
  }

  bool operator==(const RadialGrid&) const = default;
};

}  // namespace corot
