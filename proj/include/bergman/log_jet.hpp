#pragma once

// Mixed partials of log K(z, z) up to total order 4.
//
// Variables 0..n-1 of the jet are the holomorphic slot z, variables n..2n-1
// the polarized conjugate slot s. Expanding K(p + dz, conj(p) + ds) and taking
// the truncated log gives every derivative d^a_z d^b_zbar log K at p as
// a! b! times a Taylor coefficient.

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "bergman/core.hpp"
#include "bergman/domains.hpp"
#include "bergman/jet.hpp"
#include "bergman/kernels.hpp"

namespace bergman {

using MultiIndex = std::vector<int>;

inline double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

inline MultiIndex unit_index(int n, int i) {
  MultiIndex e(n, 0);
  e[i] = 1;
  return e;
}

/// d^a_z d^b_s of the jet's function at its base point.
inline cplx mixed_derivative(const Jet& jet, const MultiIndex& a, const MultiIndex& b) {
  std::vector<int> e(a.begin(), a.end());
  e.insert(e.end(), b.begin(), b.end());
  double scale = 1.0;
  for (int v : e) scale *= factorial(v);
  return scale * jet.coeff(e);
}

/// Jets for the 2n polarized variables expanded around (z, s).
inline std::pair<std::vector<Jet>, std::vector<Jet>> polarized_variables(const Point& z, const Point& s,
                                                                          bool vary_z = true, bool vary_s = true) {
  const int n = static_cast<int>(z.size());
  const auto layout = JetLayout::get(2 * n);
  std::vector<Jet> zj, sj;
  for (int i = 0; i < n; ++i) {
    zj.push_back(vary_z ? Jet::variable(layout, i, z[i]) : Jet(layout, z[i]));
    sj.push_back(vary_s ? Jet::variable(layout, n + i, s[i]) : Jet(layout, s[i]));
  }
  return {std::move(zj), std::move(sj)};
}

inline Jet polarized_jet(const KernelModel& k, const Point& z, const Point& s, bool vary_z = true,
                         bool vary_s = true) {
  auto [zj, sj] = polarized_variables(z, s, vary_z, vary_s);
  return k.polarized(std::span<const Jet>(zj), std::span<const Jet>(sj));
}

class PolarizedJet {
 public:
  PolarizedJet(Point base, Jet log_kernel) : base_(std::move(base)), jet_(std::move(log_kernel)) {}

  const Point& base() const { return base_; }
  int dim() const { return static_cast<int>(base_.size()); }
  const Jet& jet() const { return jet_; }

  /// d^a_z d^b_zbar log K(z, z) at the base point.
  cplx derivative(const MultiIndex& a, const MultiIndex& b) const { return mixed_derivative(jet_, a, b); }

  cplx metric(int alpha, int beta) const {
    return derivative(unit_index(dim(), alpha), unit_index(dim(), beta));
  }

 private:
  Point base_;
  Jet jet_;
};

/// Forces coeff(a, b) = conj(coeff(b, a)) exactly. Used for kernels whose
/// conjugate symmetry holds by construction, so only roundoff is removed.
inline void enforce_reality(Jet& jet, int n) {
  const auto& layout = *jet.layout();
  std::vector<int> swapped(2 * n);
  for (int i = 0; i < layout.size(); ++i) {
    const auto e = layout.exponents(i);
    for (int v = 0; v < n; ++v) {
      swapped[v] = e[n + v];
      swapped[n + v] = e[v];
    }
    const int j = layout.index(swapped);
    if (j < i) continue;
    const cplx x = jet.coeffs()[i];
    const cplx y = jet.coeffs()[j];
    const cplx avg = 0.5 * (x + std::conj(y));
    jet.set_coeff(i, avg);
    jet.set_coeff(j, std::conj(avg));
  }
}

/// Raw polarized log K around (p, conj p), without symmetrization.
inline Jet raw_log_jet(const KernelModel& k, const Point& p) {
  const Jet kj = polarized_jet(k, p, conj(p));
  const cplx k0 = kj.constant();
  if (!(k0.real() > 0.0) || std::abs(k0.imag()) > 1e-8 * k0.real()) {
    throw Error(ErrorCode::JetFailure, "K(p, p) is not positive at the jet base point");
  }
  return log(kj);
}

inline PolarizedJet polarized_log_jet(const KernelModel& k, const Point& p) {
  require_dim(p, k.domain().dim(), "polarized_log_jet");
  if (!contains(k.domain(), p)) throw Error(ErrorCode::OutsideDomain, "jet base point outside the domain");
  Jet lj = raw_log_jet(k, p);
  if (k.symbolic()) enforce_reality(lj, k.domain().dim());
  return PolarizedJet(p, std::move(lj));
}

/// Independent oracle: d^a_z d^b_zbar log K(z, z) by central finite
/// differences in real coordinates, z_j = x_j + i y_j, with
/// d_z = (d_x - i d_y)/2 and d_zbar = (d_x + i d_y)/2, and two Richardson
/// levels (steps h, h/2, h/4). The step scales with the boundary distance.
inline cplx finite_difference_check(const KernelModel& k, const Point& p, const MultiIndex& a,
                                    const MultiIndex& b) {
  const int n = k.domain().dim();
  require_dim(p, n, "finite_difference_check");
  if (static_cast<int>(a.size()) != n || static_cast<int>(b.size()) != n) {
    throw Error(ErrorCode::DimensionMismatch, "multi-index length must equal the dimension");
  }
  int order = 0;
  for (int j = 0; j < n; ++j) order += a[j] + b[j];
  if (order > JetLayout::kOrder) throw Error(ErrorCode::InvalidArgument, "finite differences limited to order 4");

  auto log_k = [&](const std::vector<double>& x) {
    Point z(n);
    for (int j = 0; j < n; ++j) z[j] = cplx(x[2 * j], x[2 * j + 1]);
    return std::log(k.diagonal(z));
  };
  std::vector<double> x0(2 * n);
  for (int j = 0; j < n; ++j) {
    x0[2 * j] = p[j].real();
    x0[2 * j + 1] = p[j].imag();
  }
  if (order == 0) return log_k(x0);

  const double delta = std::min(1.0, boundary_distance(k.domain(), p));
  const double h = (order <= 2 ? 0.01 : 0.04) * delta;
  // Stencil reaches at most order * h in each real coordinate.
  for (int j = 0; j < n; ++j) {
    for (int sx : {-1, 1}) {
      for (int sy : {-1, 1}) {
        Point q = p;
        q[j] += cplx(sx * order * h, sy * order * h);
        if (!contains(k.domain(), q)) throw Error(ErrorCode::StencilExitsDomain, "finite-difference stencil leaves the domain");
      }
    }
  }

  // Each factor d_z or d_zbar picks a real direction (x: 1/2, y: -+i/2).
  struct Factor {
    int coord;
    bool holomorphic;
  };
  std::vector<Factor> factors;
  for (int j = 0; j < n; ++j) {
    for (int t = 0; t < a[j]; ++t) factors.push_back({j, true});
    for (int t = 0; t < b[j]; ++t) factors.push_back({j, false});
  }
  std::map<std::vector<int>, cplx> terms;  // sorted real directions -> coefficient
  for (int mask = 0; mask < (1 << order); ++mask) {
    cplx c = 1.0;
    std::vector<int> dirs;
    for (int f = 0; f < order; ++f) {
      const bool use_y = (mask >> f) & 1;
      dirs.push_back(2 * factors[f].coord + (use_y ? 1 : 0));
      c *= use_y ? cplx(0.0, factors[f].holomorphic ? -0.5 : 0.5) : cplx(0.5, 0.0);
    }
    std::sort(dirs.begin(), dirs.end());
    terms[dirs] += c;
  }

  auto nested = [&](const std::vector<int>& dirs, double step) {
    double sum = 0.0;
    std::vector<double> x(x0.size());
    for (int mask = 0; mask < (1 << order); ++mask) {
      x = x0;
      int sign = 1;
      for (int f = 0; f < order; ++f) {
        const bool minus = (mask >> f) & 1;
        x[dirs[f]] += minus ? -step : step;
        if (minus) sign = -sign;
      }
      sum += sign * log_k(x);
    }
    return sum / std::pow(2.0 * step, order);
  };

  cplx out = 0.0;
  for (const auto& [dirs, coef] : terms) {
    if (coef == cplx(0.0)) continue;
    const double d1 = nested(dirs, h);
    const double d2 = nested(dirs, h / 2);
    const double d3 = nested(dirs, h / 4);
    const double r1 = (4.0 * d2 - d1) / 3.0;
    const double r2 = (4.0 * d3 - d2) / 3.0;
    out += coef * ((16.0 * r2 - r1) / 15.0);
  }
  return out;
}

}  // namespace bergman
