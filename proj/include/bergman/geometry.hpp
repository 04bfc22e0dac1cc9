#pragma once

// Geometry of the Bergman metric from polarized jets of log K.
//
// Index conventions: g_{ab} stands for g_{a bbar} = d_a d_bbar log K, and the
// inverse metric g^{bbar a} is (G^{-1})_{ba}. The curvature tensor is stored
// row-major over (i, jbar, k, lbar).

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "bergman/core.hpp"
#include "bergman/domains.hpp"
#include "bergman/jet.hpp"
#include "bergman/kernels.hpp"
#include "bergman/log_jet.hpp"

namespace bergman {

struct MetricTensor {
  Point base;
  Eigen::MatrixXcd g;

  int dim() const { return static_cast<int>(g.rows()); }
  double det() const { return g.determinant().real(); }
  double min_eigenvalue() const {
    const Eigen::MatrixXcd h = 0.5 * (g + g.adjoint());
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(h, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
  }
  /// sum_{a,b} X_a g_{ab} conj(X_b)
  double norm2(std::span<const cplx> x) const {
    cplx s = 0.0;
    for (int a = 0; a < dim(); ++a) {
      for (int b = 0; b < dim(); ++b) s += x[a] * g(a, b) * std::conj(x[b]);
    }
    return s.real();
  }
};

struct CurvatureTensor {
  Point base;
  int n = 0;
  std::vector<cplx> r;  // row-major (i, jbar, k, lbar)

  cplx operator()(int i, int j, int k, int l) const { return r[((i * n + j) * n + k) * n + l]; }
  cplx& operator()(int i, int j, int k, int l) { return r[((i * n + j) * n + k) * n + l]; }
};

namespace detail {

inline MetricTensor metric_from_jet(const PolarizedJet& lj) {
  const int n = lj.dim();
  MetricTensor m{lj.base(), Eigen::MatrixXcd(n, n)};
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) m.g(a, b) = lj.metric(a, b);
  }
  return m;
}

/// Inverse of the Hermitian part through a Jacobi-scaled LLT, so metrics whose
/// diagonal spans many orders of magnitude still factor. Throws SingularMetric
/// unless positive definite.
inline Eigen::MatrixXcd inverse_metric(const MetricTensor& m) {
  const int n = m.dim();
  const Eigen::MatrixXcd h = 0.5 * (m.g + m.g.adjoint());
  Eigen::VectorXd d(n);
  for (int i = 0; i < n; ++i) {
    const double v = h(i, i).real();
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::SingularMetric, "metric is not positive definite at the base point");
    }
    d(i) = 1.0 / std::sqrt(v);
  }
  const Eigen::MatrixXcd s = d.asDiagonal() * h * d.asDiagonal();
  Eigen::LLT<Eigen::MatrixXcd> llt(s);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::SingularMetric, "metric is not positive definite at the base point");
  }
  const Eigen::MatrixXcd sinv = llt.solve(Eigen::MatrixXcd::Identity(n, n));
  return d.asDiagonal() * sinv * d.asDiagonal();
}

inline MultiIndex pair_index(int n, int i, int k) {
  MultiIndex e(n, 0);
  ++e[i];
  ++e[k];
  return e;
}

inline cplx jet_coeff(const Jet& jet, const MultiIndex& a, const MultiIndex& b) {
  std::vector<int> e(a.begin(), a.end());
  e.insert(e.end(), b.begin(), b.end());
  return jet.coeff(e);
}

/// |K(z, w)| / sqrt(K(z, z) K(w, w)); zero exactly at a kernel zero.
inline double normalized_kernel_modulus(const KernelModel& k, const Point& z, const Point& w) {
  return std::abs(k.eval(z, w)) / std::sqrt(k.diagonal(z) * k.diagonal(w));
}

inline constexpr double kKernelZeroThreshold = 1e-14;

inline void require_nonzero_pair(const KernelModel& k, const Point& z, const Point& w, const char* what) {
  if (normalized_kernel_modulus(k, z, w) <= kKernelZeroThreshold) {
    throw Error(ErrorCode::KernelZeroAtPair, std::string(what) + ": K vanishes at the point pair");
  }
}

inline void require_inside(const KernelModel& k, const Point& z, const char* what) {
  require_dim(z, k.domain().dim(), what);
  if (!contains(k.domain(), z)) throw Error(ErrorCode::OutsideDomain, std::string(what) + ": point outside the domain");
}

/// Polarized diastasis Phi_{z0}(z, s) = log K(z, s) - log K(z, conj z0)
/// - log K(z0, s) + log K(z0, conj z0), expanded around (p, conj p).
inline Jet diastasis_jet(const KernelModel& k, const Point& z0, const Point& p) {
  const Point pc = conj(p);
  const Point z0c = conj(z0);
  const Jet a = log(polarized_jet(k, p, pc));
  const Jet b = log(polarized_jet(k, p, z0c, true, false));
  const Jet c = log(polarized_jet(k, z0, pc, false, true));
  const cplx d = std::log(k.diagonal(z0));
  return a - b - c + Jet(d);
}

/// sum_{a,b} u_a (G^{-1})_{ba} v_b with u the holomorphic and v the
/// antiholomorphic first derivatives of a jet.
inline double gradient_norm2(const Jet& jet, const Eigen::MatrixXcd& ginv, int n) {
  const MultiIndex zero(n, 0);
  cplx s = 0.0;
  for (int a = 0; a < n; ++a) {
    const cplx u = jet_coeff(jet, unit_index(n, a), zero);
    for (int b = 0; b < n; ++b) s += u * ginv(b, a) * jet_coeff(jet, zero, unit_index(n, b));
  }
  return s.real();
}

}  // namespace detail

inline MetricTensor metric_at(const KernelModel& k, const Point& p) {
  return detail::metric_from_jet(polarized_log_jet(k, p));
}

inline CurvatureTensor curvature_tensor(const PolarizedJet& lj, const MetricTensor& m) {
  const int n = lj.dim();
  const Eigen::MatrixXcd ginv = detail::inverse_metric(m);
  CurvatureTensor t{lj.base(), n, std::vector<cplx>(static_cast<std::size_t>(n * n * n * n))};
  // Third derivatives d_i d_k d_bbar and d_a d_jbar d_lbar.
  std::vector<cplx> hol(n * n * n), anti(n * n * n);
  for (int i = 0; i < n; ++i) {
    for (int k2 = 0; k2 < n; ++k2) {
      for (int c = 0; c < n; ++c) {
        hol[(i * n + k2) * n + c] = lj.derivative(detail::pair_index(n, i, k2), unit_index(n, c));
        anti[(i * n + k2) * n + c] = lj.derivative(unit_index(n, c), detail::pair_index(n, i, k2));
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k2 = 0; k2 < n; ++k2) {
        for (int l = 0; l < n; ++l) {
          cplx v = -lj.derivative(detail::pair_index(n, i, k2), detail::pair_index(n, j, l));
          for (int a = 0; a < n; ++a) {
            for (int b = 0; b < n; ++b) {
              v += ginv(b, a) * hol[(i * n + k2) * n + b] * anti[(j * n + l) * n + a];
            }
          }
          t(i, j, k2, l) = v;
        }
      }
    }
  }
  return t;
}

inline CurvatureTensor curvature_tensor(const KernelModel& k, const Point& p) {
  const PolarizedJet lj = polarized_log_jet(k, p);
  return curvature_tensor(lj, detail::metric_from_jet(lj));
}

/// Holomorphic sectional curvature before taking the real part. The imaginary
/// part is roundoff and serves as a consistency check.
inline cplx hsc_complex(const CurvatureTensor& t, const MetricTensor& m, std::span<const cplx> x) {
  const int n = t.n;
  require_dim(x, n, "hsc direction");
  if (norm2(x) == 0.0) throw Error(ErrorCode::ZeroDirection, "hsc needs a nonzero direction");
  cplx num = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const cplx xij = x[i] * std::conj(x[j]);
      for (int k2 = 0; k2 < n; ++k2) {
        for (int l = 0; l < n; ++l) num += t(i, j, k2, l) * xij * x[k2] * std::conj(x[l]);
      }
    }
  }
  const double den = m.norm2(x);
  return num / (den * den);
}

inline double hsc(const CurvatureTensor& t, const MetricTensor& m, std::span<const cplx> x) {
  return hsc_complex(t, m, x).real();
}

inline double hsc(const KernelModel& k, const Point& p, const Point& x) {
  require_dim(x, k.domain().dim(), "hsc direction");
  if (norm2(x) == 0.0) throw Error(ErrorCode::ZeroDirection, "hsc needs a nonzero direction");
  const PolarizedJet lj = polarized_log_jet(k, p);
  const MetricTensor m = detail::metric_from_jet(lj);
  return hsc(curvature_tensor(lj, m), m, x);
}

struct RepCoords {
  Eigen::VectorXcd w;
  MetricTensor base_metric;
  Eigen::MatrixXcd jacobian;  // d w_a / d z_c at the query point

  /// sum w_a g_{ab}(p) conj(w_b)
  double quadratic_form() const {
    return base_metric.norm2(std::span<const cplx>(w.data(), static_cast<std::size_t>(w.size())));
  }
  cplx jacobian_det() const { return jacobian.determinant(); }
};

/// Bergman representative coordinates of z with base p:
///   w_a(z) = sum_j (G^{-1})_{ja} (d_{s_j} log K(z, s)|_{s = conj p} - d_{zbar_j} log K(p, p)).
inline RepCoords rep_coords(const KernelModel& k, const Point& p, const Point& z) {
  detail::require_inside(k, p, "rep_coords base");
  detail::require_inside(k, z, "rep_coords point");
  const int n = k.domain().dim();
  if (z != p) detail::require_nonzero_pair(k, z, p, "rep_coords");

  const PolarizedJet base_jet = polarized_log_jet(k, p);
  MetricTensor gp = detail::metric_from_jet(base_jet);
  const Eigen::MatrixXcd ginv = detail::inverse_metric(gp);

  const Jet at_base = raw_log_jet(k, p);
  const Jet at_z = log(polarized_jet(k, z, conj(p)));
  const MultiIndex zero(n, 0);
  Eigen::VectorXcd v(n);
  Eigen::MatrixXcd c(n, n);  // c(j, g) = d_{z_g} d_{s_j} log K(z, s)
  for (int j = 0; j < n; ++j) {
    v(j) = detail::jet_coeff(at_z, zero, unit_index(n, j)) - detail::jet_coeff(at_base, zero, unit_index(n, j));
    for (int g = 0; g < n; ++g) c(j, g) = detail::jet_coeff(at_z, unit_index(n, g), unit_index(n, j));
  }
  RepCoords out{ginv.transpose() * v, std::move(gp), ginv.transpose() * c};
  return out;
}

/// Diastasis Phi_{z0}(z) = log(K(z, z) K(z0, z0) / |K(z, z0)|^2); +infinity
/// at a kernel zero.
inline double diastasis(const KernelModel& k, const Point& z0, const Point& z) {
  detail::require_inside(k, z0, "diastasis base");
  detail::require_inside(k, z, "diastasis point");
  if (z == z0) return 0.0;
  const double kz0 = std::abs(k.eval(z, z0));
  if (kz0 == 0.0) return std::numeric_limits<double>::infinity();
  return std::log(k.diagonal(z)) + std::log(k.diagonal(z0)) - 2.0 * std::log(kz0);
}

/// (-2/c^2) log(1 - (c^2/2) Q) with Q the quadratic form of rep_coords(p, z).
inline double diastasis_closed_form(const KernelModel& k, const Point& p, const Point& z, double c2) {
  if (!(c2 > 0.0)) throw Error(ErrorCode::InvalidArgument, "curvature constant c^2 must be positive");
  const double q = rep_coords(k, p, z).quadratic_form();
  const double arg = 1.0 - 0.5 * c2 * q;
  if (!(arg > 0.0)) {
    throw Error(ErrorCode::QuadraticFormOutOfRange, "1 - (c^2/2) Q is not positive");
  }
  return (-2.0 / c2) * std::log1p(-0.5 * c2 * q);
}

struct GradientLength {
  double via_metric;      // d Phi contracted with the inverse metric at p
  double via_rep_coords;  // Q(w(z0)) with base p
};

inline GradientLength gradient_length_sq_both(const KernelModel& k, const Point& z0, const Point& p) {
  detail::require_inside(k, z0, "gradient_length_sq base");
  detail::require_inside(k, p, "gradient_length_sq point");
  if (z0 == p) return {0.0, 0.0};
  detail::require_nonzero_pair(k, p, z0, "gradient_length_sq");
  const int n = k.domain().dim();
  const MetricTensor m = metric_at(k, p);
  const Eigen::MatrixXcd ginv = detail::inverse_metric(m);
  const double route1 = detail::gradient_norm2(detail::diastasis_jet(k, z0, p), ginv, n);
  const double route2 = rep_coords(k, p, z0).quadratic_form();
  return {route1, route2};
}

/// |d Phi_{z0}|^2_g at p.
inline double gradient_length_sq(const KernelModel& k, const Point& z0, const Point& p) {
  return gradient_length_sq_both(k, z0, p).via_metric;
}

struct VolumeIdentity {
  double volume;            // V(z) = det g(z)
  double jacobian_abs2;     // |D_T(z)|^2
  double base_det;          // det g(p), the normalization factor
  double quadratic_form;    // Q(w(z))
  double rhs;               // |D_T|^2 det g(p) (1 - c^2 Q / 2)^{-(n+1)}
  double rhs_unnormalized;  // same without det g(p)
  double residual;          // |V - rhs| / V
};

inline VolumeIdentity volume_identity(const KernelModel& k, const Point& p, const Point& z, double c2) {
  const int n = k.domain().dim();
  const RepCoords rc = rep_coords(k, p, z);
  VolumeIdentity out{};
  out.volume = metric_at(k, z).det();
  out.jacobian_abs2 = std::norm(rc.jacobian_det());
  out.base_det = rc.base_metric.det();
  out.quadratic_form = rc.quadratic_form();
  const double arg = 1.0 - 0.5 * c2 * out.quadratic_form;
  if (!(arg > 0.0)) throw Error(ErrorCode::QuadraticFormOutOfRange, "1 - (c^2/2) Q is not positive");
  out.rhs_unnormalized = out.jacobian_abs2 * std::pow(arg, -(n + 1));
  out.rhs = out.rhs_unnormalized * out.base_det;
  out.residual = std::abs(out.volume - out.rhs) / out.volume;
  return out;
}

inline double volume_identity_residual(const KernelModel& k, const Point& p, const Point& z, double c2) {
  return volume_identity(k, p, z, c2).residual;
}

/// phi = -1 / (c^2 Phi_{z0}(z) / 4 + 1)
inline double exhaustion_phi(const KernelModel& k, const Point& z0, const Point& z, double c2) {
  if (z != z0) detail::require_nonzero_pair(k, z, z0, "exhaustion_phi");
  return -1.0 / (0.25 * c2 * diastasis(k, z0, z) + 1.0);
}

/// Complex Hessian d_a d_bbar phi at z.
inline Eigen::MatrixXcd exhaustion_hessian(const KernelModel& k, const Point& z0, const Point& z, double c2) {
  detail::require_inside(k, z0, "exhaustion base");
  detail::require_inside(k, z, "exhaustion point");
  if (z != z0) detail::require_nonzero_pair(k, z, z0, "exhaustion_hessian");
  const int n = k.domain().dim();
  const Jet phi_d = detail::diastasis_jet(k, z0, z);
  const Jet phi = -reciprocal(0.25 * c2 * phi_d + Jet(1.0));
  Eigen::MatrixXcd h(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) h(a, b) = detail::jet_coeff(phi, unit_index(n, a), unit_index(n, b));
  }
  return h;
}

inline double hessian_min_eig(const KernelModel& k, const Point& z0, const Point& z, double c2) {
  const Eigen::MatrixXcd h = exhaustion_hessian(k, z0, z, c2);
  const Eigen::MatrixXcd herm = 0.5 * (h + h.adjoint());
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(herm, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

/// |psi'(w)/psi(w)| (1 - |w|^2) for psi(w) = exp((w + 1)/(w - 1)). The
/// logarithmic derivative is -2/(w - 1)^2, which avoids underflow of psi.
inline double zimmer_quantity(cplx w) {
  if (!(std::abs(w) < 1.0)) throw Error(ErrorCode::InvalidArgument, "zimmer_quantity needs |w| < 1");
  const cplx d = w - 1.0;
  return 2.0 / std::norm(d) * (1.0 - std::norm(w));
}

/// 2 log(1/|psi(w)|), the other side of the covering isometry identity.
inline double zimmer_log_modulus(cplx w) { return -2.0 * std::log(std::abs(BiholoMap::psi(w))); }

/// |d log K(z, z)|_g
inline double property_star_star_length(const KernelModel& k, const Point& z) {
  const PolarizedJet lj = polarized_log_jet(k, z);
  const Eigen::MatrixXcd ginv = detail::inverse_metric(detail::metric_from_jet(lj));
  return std::sqrt(std::max(0.0, detail::gradient_norm2(lj.jet(), ginv, lj.dim())));
}

/// Declared curvature constant c^2 for the constant-curvature model domains.
inline std::optional<double> declared_c2(const Domain& d) {
  switch (d.kind()) {
    case DomainKind::disc:
    case DomainKind::punctured_disc: return 1.0;
    case DomainKind::ball: return 2.0 / (d.dim() + 1.0);
    case DomainKind::pushforward: return declared_c2(d.base());
    default: return std::nullopt;
  }
}

/// Kernel of F(D) with F(z) = A (z - p) and A = transpose of the Hermitian
/// square root of g(p); its metric at the origin is the identity.
inline KernelPtr normalize_at(const KernelPtr& k, const Point& p) {
  const MetricTensor m = metric_at(*k, p);
  const Eigen::MatrixXcd h = 0.5 * (m.g + m.g.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  if (!(es.eigenvalues().minCoeff() > 0.0)) throw Error(ErrorCode::SingularMetric, "metric is not positive definite");
  const Eigen::MatrixXcd root = es.operatorSqrt();
  const Eigen::MatrixXcd a = root.transpose();
  Eigen::VectorXcd pv(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) pv(static_cast<Eigen::Index>(i)) = p[i];
  return pushforward_kernel(k, BiholoMap::linear(a, -a * pv));
}

struct HscSample {
  Point direction;
  double value;
};

struct GeometryReport {
  Point base;
  Point point;
  double kernel_diagonal = 0.0;
  MetricTensor metric;
  CurvatureTensor curvature;
  std::vector<HscSample> hsc_samples;
  Eigen::VectorXcd rep_coords;
  double quadratic_form = 0.0;
  double diastasis = 0.0;
  double gradient_length_sq = 0.0;
  double gradient_length_sq_rep = 0.0;
  double volume_coeff = 0.0;
  double c2_estimate = 0.0;
  std::optional<double> c2_declared;
  std::optional<double> volume_residual;
  std::optional<double> diastasis_closed_form_residual;
};

/// Everything at z relative to the base p. HSC is sampled along the given
/// directions; the curvature constant estimate is minus their mean.
inline GeometryReport geometry_report(const KernelModel& k, const Point& p, const Point& z,
                                      const std::vector<Point>& directions) {
  GeometryReport r;
  r.base = p;
  r.point = z;
  r.kernel_diagonal = k.diagonal(z);
  const PolarizedJet lj = polarized_log_jet(k, z);
  r.metric = detail::metric_from_jet(lj);
  r.curvature = curvature_tensor(lj, r.metric);
  double sum = 0.0;
  for (const auto& x : directions) {
    const double v = hsc(r.curvature, r.metric, x);
    r.hsc_samples.push_back({x, v});
    sum += v;
  }
  if (!directions.empty()) r.c2_estimate = -sum / directions.size();
  r.volume_coeff = r.metric.det();
  r.c2_declared = declared_c2(k.domain());
  r.diastasis = diastasis(k, p, z);
  if (std::isfinite(r.diastasis)) {
    const RepCoords rc = rep_coords(k, p, z);
    r.rep_coords = rc.w;
    r.quadratic_form = rc.quadratic_form();
    const GradientLength gl = gradient_length_sq_both(k, p, z);
    r.gradient_length_sq = gl.via_metric;
    r.gradient_length_sq_rep = gl.via_rep_coords;
    if (r.c2_declared) {
      const double c2 = *r.c2_declared;
      if (1.0 - 0.5 * c2 * r.quadratic_form > 0.0) {
        r.volume_residual = volume_identity_residual(k, p, z, c2);
        const double closed = diastasis_closed_form(k, p, z, c2);
        r.diastasis_closed_form_residual = std::abs(closed - r.diastasis);
      }
    }
  }
  return r;
}

}  // namespace bergman
