#pragma once

// Numerical Bergman kernel from a finite (Laurent) monomial basis:
//
//   K_N(z, w) = b(z)^T G^{-1} conj(b(w)),   G_ij = <b_j, b_i> = int conj(b_i) b_j
//
// with G assembled by quadrature. On Reinhardt domains (and on pushforwards
// whose pulled-back monomials stay torus-equivariant) distinct monomials are
// orthogonal, so only the diagonal is integrated and G is diagonal by
// construction. Otherwise the full matrix is assembled and factored with a
// Cholesky decomposition.

#include <algorithm>
#include <cmath>
#include <cstring>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "bergman/core.hpp"
#include "bergman/domains.hpp"
#include "bergman/jet.hpp"
#include "bergman/kernels.hpp"
#include "bergman/quadrature.hpp"

namespace bergman {

inline constexpr double kMaxGramCondition = 1e12;

struct GramBasis {
  std::vector<std::vector<int>> exponents;
  Eigen::MatrixXcd gram;
  Eigen::MatrixXcd factor;  // lower-triangular L with G = L L^H
  bool diagonal = false;
  double condition_estimate = 1.0;  // of the Jacobi-scaled Gram matrix
  int degree = 0;
  int quad_order = 0;
};

namespace detail {

inline void total_degree_exponents(int dim, int degree, const std::vector<bool>& laurent,
                                   std::vector<std::vector<int>>& out) {
  std::vector<int> e(dim, 0);
  // Enumerate by increasing sum of |e_j|.
  for (int total = 0; total <= degree; ++total) {
    auto rec = [&](auto&& self, int var, int remaining) -> void {
      if (var == dim) {
        if (remaining == 0) out.push_back(e);
        return;
      }
      for (int a = 0; a <= remaining; ++a) {
        e[var] = a;
        self(self, var + 1, remaining - a);
        if (a > 0 && laurent[var]) {
          e[var] = -a;
          self(self, var + 1, remaining - a);
        }
      }
      e[var] = 0;
    };
    rec(rec, 0, total);
  }
}

inline void collect_laurent(const Domain& d, std::vector<bool>& laurent) {
  switch (d.kind()) {
    case DomainKind::annulus: laurent.push_back(true); return;
    case DomainKind::product:
      for (const auto& f : d.factors()) collect_laurent(f, laurent);
      return;
    case DomainKind::pushforward:
      throw Error(ErrorCode::UnsupportedDomain, "product factors of a Gram domain must be model domains");
    default:
      for (int j = 0; j < d.dim(); ++j) laurent.push_back(false);
  }
}

inline std::vector<std::vector<int>> basis_exponents(const Domain& d, int degree) {
  std::vector<std::vector<int>> out;
  if (d.kind() == DomainKind::pushforward) {
    const BiholoMap& f = d.map();
    if (f.kind() == MapKind::hartogs) {
      // x1^a x2^b on the Hartogs triangle pulls back (times the Jacobian z2) to
      // z1^a z2^(a+b+1); square-integrable iff a >= 0 and b >= -a-1.
      for (int a = 0; a <= degree; ++a) {
        for (int c = 0; a + c <= degree; ++c) out.push_back({a, c - a - 1});
      }
      std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
        return x[0] + (x[0] + x[1] + 1) < y[0] + (y[0] + y[1] + 1);
      });
      return out;
    }
    if (f.kind() == MapKind::linear) {
      std::vector<bool> laurent;
      collect_laurent(d.base(), laurent);
      if (std::find(laurent.begin(), laurent.end(), true) != laurent.end()) {
        throw Error(ErrorCode::UnsupportedDomain, "Gram basis for linear images of annuli is not supported");
      }
      total_degree_exponents(d.dim(), degree, std::vector<bool>(d.dim(), false), out);
      return out;
    }
    throw Error(ErrorCode::UnsupportedDomain, std::string("no Gram basis for ") + to_string(f.kind()) + " images");
  }
  std::vector<bool> laurent;
  collect_laurent(d, laurent);
  total_degree_exponents(d.dim(), degree, laurent, out);
  return out;
}

inline bool monomials_orthogonal(const Domain& d) {
  if (d.is_reinhardt()) return true;
  if (d.kind() != DomainKind::pushforward) return false;
  const BiholoMap& f = d.map();
  if (f.kind() == MapKind::hartogs) return true;
  if (f.kind() == MapKind::linear) {
    const auto& a = f.matrix();
    const bool diagonal_a = (a - Eigen::MatrixXcd(a.diagonal().asDiagonal())).norm() == 0.0;
    return diagonal_a && f.offset().norm() == 0.0 && d.base().is_reinhardt();
  }
  return false;
}

/// Values of every basis monomial at x. Integer powers are tabulated per
/// coordinate so each monomial costs dim - 1 multiplications.
template <class S>
std::vector<S> basis_values(const std::vector<std::vector<int>>& exps, std::span<const S> x) {
  const int dim = static_cast<int>(x.size());
  std::vector<int> lo(dim, 0), hi(dim, 0);
  for (const auto& e : exps) {
    for (int j = 0; j < dim; ++j) {
      lo[j] = std::min(lo[j], e[j]);
      hi[j] = std::max(hi[j], e[j]);
    }
  }
  std::vector<std::vector<S>> table(dim);
  for (int j = 0; j < dim; ++j) {
    table[j].resize(hi[j] - lo[j] + 1);
    table[j][-lo[j]] = S(1.0);
    for (int p = 1; p <= hi[j]; ++p) table[j][p - lo[j]] = table[j][p - 1 - lo[j]] * x[j];
    if (lo[j] < 0) {
      const S inv = S(1.0) / x[j];
      for (int p = -1; p >= lo[j]; --p) table[j][p - lo[j]] = table[j][p + 1 - lo[j]] * inv;
    }
  }
  std::vector<S> out;
  out.reserve(exps.size());
  for (const auto& e : exps) {
    S v = table[0][e[0] - lo[0]];
    for (int j = 1; j < dim; ++j) v = v * table[j][e[j] - lo[j]];
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace detail

/// Assembles and factors the Gram matrix of the degree-`degree` basis.
inline GramBasis build_gram_basis(const Domain& d, int degree, int quad_order) {
  if (degree < 0) throw Error(ErrorCode::InvalidArgument, "Gram degree must be >= 0");
  if (2 * quad_order < degree + d.dim()) {
    throw Error(ErrorCode::InvalidArgument, "quadrature order too small for the requested degree");
  }
  GramBasis basis;
  basis.degree = degree;
  basis.quad_order = quad_order;
  basis.exponents = detail::basis_exponents(d, degree);
  const auto n = static_cast<Eigen::Index>(basis.exponents.size());
  const QuadratureRule rule = quadrature(d, quad_order);
  basis.diagonal = detail::monomials_orthogonal(d);
  basis.gram = Eigen::MatrixXcd::Zero(n, n);

  if (basis.diagonal) {
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
    rule.for_each_radial([&](const Point& x, double w) {
      const auto b = detail::basis_values<cplx>(basis.exponents, std::span<const cplx>(x));
      for (Eigen::Index i = 0; i < n; ++i) diag(i) += w * std::norm(b[i]);
    });
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!(diag(i) > 0.0)) throw Error(ErrorCode::IllConditionedGram, "non-positive Gram pivot");
      basis.gram(i, i) = diag(i);
    }
    basis.factor = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) basis.factor(i, i) = std::sqrt(diag(i));
    basis.condition_estimate = 1.0;
    return basis;
  }

  if (quad_order < degree) {
    throw Error(ErrorCode::InvalidArgument, "full Gram assembly needs quad_order >= degree (angular exactness)");
  }
  Eigen::VectorXcd bv(n);
  rule.for_each([&](const Point& x, double w) {
    const auto b = detail::basis_values<cplx>(basis.exponents, std::span<const cplx>(x));
    for (Eigen::Index i = 0; i < n; ++i) bv(i) = b[i];
    basis.gram.noalias() += w * bv.conjugate() * bv.transpose();
  });
  // Exact Hermitian symmetry; assembly roundoff is below 1e-15 relative.
  basis.gram = 0.5 * (basis.gram + basis.gram.adjoint()).eval();

  Eigen::VectorXd scale(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double gii = basis.gram(i, i).real();
    if (!(gii > 0.0)) throw Error(ErrorCode::IllConditionedGram, "non-positive Gram pivot");
    scale(i) = 1.0 / std::sqrt(gii);
  }
  const Eigen::MatrixXcd scaled = scale.asDiagonal() * basis.gram * scale.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(scaled, Eigen::EigenvaluesOnly);
  const double lmin = eig.eigenvalues().minCoeff();
  const double lmax = eig.eigenvalues().maxCoeff();
  basis.condition_estimate = lmin > 0.0 ? lmax / lmin : std::numeric_limits<double>::infinity();
  if (basis.condition_estimate > kMaxGramCondition) {
    throw Error(ErrorCode::IllConditionedGram,
                "scaled Gram condition estimate " + std::to_string(basis.condition_estimate) + " exceeds 1e12");
  }
  Eigen::LLT<Eigen::MatrixXcd> llt(basis.gram);
  if (llt.info() != Eigen::Success) throw Error(ErrorCode::IllConditionedGram, "Cholesky factorization failed");
  basis.factor = llt.matrixL();
  return basis;
}

class GramKernel final : public KernelModel {
 public:
  GramKernel(Domain d, GramBasis basis)
      : KernelModel(std::move(d), ProvenanceInfo{Provenance::gram_numerical, basis.degree, basis.quad_order,
                                                 basis.condition_estimate}),
        basis_(std::move(basis)) {}

  const GramBasis& basis() const { return basis_; }

  cplx polarized(std::span<const cplx> z, std::span<const cplx> s) const override { return apply<cplx>(z, s); }
  Jet polarized(std::span<const Jet> z, std::span<const Jet> s) const override { return apply<Jet>(z, s); }

 private:
  // The basis monomials have real coefficients, so conj(b(conj s)) = b(s).
  template <class S>
  S apply(std::span<const S> z, std::span<const S> s) const {
    const auto bz = detail::basis_values<S>(basis_.exponents, z);
    const auto bs = detail::basis_values<S>(basis_.exponents, s);
    const std::vector<S> y = solve<S>(bs);
    S out(0.0);
    for (std::size_t i = 0; i < bz.size(); ++i) out = out + bz[i] * y[i];
    return out;
  }

  template <class S>
  std::vector<S> solve(const std::vector<S>& rhs) const {
    const auto n = static_cast<Eigen::Index>(rhs.size());
    if (basis_.diagonal) {
      std::vector<S> y;
      y.reserve(rhs.size());
      for (Eigen::Index i = 0; i < n; ++i) y.push_back(rhs[i] * (1.0 / basis_.gram(i, i).real()));
      return y;
    }
    const auto lower = basis_.factor.template triangularView<Eigen::Lower>();
    if constexpr (std::is_same_v<S, cplx>) {
      Eigen::VectorXcd v(n);
      for (Eigen::Index i = 0; i < n; ++i) v(i) = rhs[i];
      lower.solveInPlace(v);
      lower.adjoint().solveInPlace(v);
      return std::vector<cplx>(v.data(), v.data() + n);
    } else {
      // The factor is constant, so each Taylor coefficient solves independently.
      std::shared_ptr<const JetLayout> layout;
      for (const auto& r : rhs)
        if (r.layout()) layout = r.layout();
      if (!layout) {
        std::vector<cplx> c(rhs.size());
        for (std::size_t i = 0; i < rhs.size(); ++i) c[i] = rhs[i].constant();
        const auto y = solve<cplx>(c);
        return std::vector<Jet>(y.begin(), y.end());
      }
      const int m = layout->size();
      Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(n, m);
      for (Eigen::Index i = 0; i < n; ++i) {
        if (rhs[i].layout()) {
          for (int c = 0; c < m; ++c) v(i, c) = rhs[i].coeffs()[c];
        } else {
          v(i, 0) = rhs[i].constant();
        }
      }
      lower.solveInPlace(v);
      lower.adjoint().solveInPlace(v);
      std::vector<Jet> y;
      y.reserve(rhs.size());
      for (Eigen::Index i = 0; i < n; ++i) {
        Jet j(layout, 0.0);
        for (int c = 0; c < m; ++c) j.set_coeff(c, v(i, c));
        y.push_back(std::move(j));
      }
      return y;
    }
  }

  GramBasis basis_;
};

/// Gram-matrix kernel oracle of total degree `degree` (Laurent degree for
/// annulus coordinates).
inline KernelPtr gram_kernel(const Domain& d, int degree, int quad_order) {
  return std::make_shared<GramKernel>(d, build_gram_basis(d, degree, quad_order));
}

/// Byte-level equality of two Gram bases (same exponents, same matrices).
inline bool bitwise_equal(const GramBasis& a, const GramBasis& b) {
  if (a.exponents != b.exponents || a.diagonal != b.diagonal) return false;
  auto same = [](const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y) {
    return x.rows() == y.rows() && x.cols() == y.cols() &&
           std::memcmp(x.data(), y.data(), sizeof(cplx) * static_cast<std::size_t>(x.size())) == 0;
  };
  return same(a.gram, b.gram) && same(a.factor, b.factor);
}

}  // namespace bergman
