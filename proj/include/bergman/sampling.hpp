#pragma once

// Seeded sampling of points and directions.

#include <cmath>
#include <cstdint>
#include <random>

#include "bergman/core.hpp"
#include "bergman/domains.hpp"

namespace bergman {

using Rng = std::mt19937_64;

/// Uniform point of the domain within `scale` times the circumscribing
/// radius (per coordinate) and at least `margin` from the boundary. Rejection
/// from the bounding box, so works for every domain kind.
inline Point sample_point(const Domain& d, Rng& rng, double scale = 1.0, double margin = 0.0) {
  const double r = d.circumscribing_radius() * scale;
  std::uniform_real_distribution<double> u(-r, r);
  Point z(d.dim());
  for (int attempt = 0; attempt < 1'000'000; ++attempt) {
    for (auto& c : z) c = cplx(u(rng), u(rng));
    if (contains(d, z) && boundary_distance(d, z) >= margin) return z;
  }
  throw Error(ErrorCode::InvalidArgument, "sampling region is empty or too thin");
}

/// Point of a planar domain with modulus uniform in [lo, hi] and uniform angle.
inline Point sample_annular(Rng& rng, double lo, double hi) {
  std::uniform_real_distribution<double> rad(lo, hi);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * kPi);
  const double m = rad(rng);
  return Point{std::polar(m, ang(rng))};
}

/// Unit vector of C^n from complex Gaussian coordinates.
inline Point sample_direction(int n, Rng& rng) {
  std::normal_distribution<double> g;
  Point x(n);
  double s = 0.0;
  do {
    for (auto& c : x) c = cplx(g(rng), g(rng));
    s = norm2(x);
  } while (s == 0.0);
  const double inv = 1.0 / std::sqrt(s);
  for (auto& c : x) c *= inv;
  return x;
}

}  // namespace bergman
