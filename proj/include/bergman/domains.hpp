#pragma once

// Bounded model domains in C^n and their biholomorphic images.

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bergman/core.hpp"
#include "bergman/jet.hpp"

namespace bergman {

enum class DomainKind { disc, ball, polydisc, annulus, punctured_disc, product, pushforward };
enum class MapKind { hartogs, zimmer, linear };

inline const char* to_string(DomainKind k) {
  switch (k) {
    case DomainKind::disc: return "disc";
    case DomainKind::ball: return "ball";
    case DomainKind::polydisc: return "polydisc";
    case DomainKind::annulus: return "annulus";
    case DomainKind::punctured_disc: return "punctured_disc";
    case DomainKind::product: return "product";
    case DomainKind::pushforward: return "pushforward";
  }
  return "unknown";
}

inline const char* to_string(MapKind k) {
  switch (k) {
    case MapKind::hartogs: return "hartogs";
    case MapKind::zimmer: return "zimmer";
    case MapKind::linear: return "linear";
  }
  return "unknown";
}

/// Biholomorphic map F with closed-form inverse and Jacobian determinant.
///
///   hartogs: (z1, z2) -> (z1 z2, z2), D x D* onto {|x1| < |x2| < 1}
///   zimmer:  (z1, z2) -> (psi(z2) z1, z2), psi(w) = exp((w + 1)/(w - 1))
///   linear:  z -> A z + b
///
/// The `conjugate` flag evaluates the map whose power-series coefficients are
/// the complex conjugates of F's, i.e. s -> conj(F(conj(s))). Polarized
/// kernels need it to push the anti-holomorphic slot through F.
class BiholoMap {
 public:
  static BiholoMap hartogs() { return BiholoMap(MapKind::hartogs, 2); }
  static BiholoMap zimmer() { return BiholoMap(MapKind::zimmer, 2); }

  static BiholoMap linear(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& b) {
    if (a.rows() != a.cols() || a.rows() != b.size() || a.rows() == 0) {
      throw Error(ErrorCode::InvalidArgument, "linear map needs square A and matching b");
    }
    BiholoMap m(MapKind::linear, static_cast<int>(a.rows()));
    m.a_ = a;
    m.b_ = b;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
    m.det_ = lu.determinant();
    if (std::abs(m.det_) == 0.0) throw Error(ErrorCode::InvalidArgument, "linear map is singular");
    m.a_inv_ = lu.inverse();
    return m;
  }

  MapKind kind() const { return kind_; }
  int dim() const { return dim_; }
  const Eigen::MatrixXcd& matrix() const { return a_; }
  const Eigen::VectorXcd& offset() const { return b_; }

  /// psi(w) = exp((w + 1)/(w - 1)), a covering of the punctured disc by D.
  template <class S>
  static S psi(const S& w) {
    using std::exp;
    return exp((w + 1.0) / (w - 1.0));
  }

  template <class S>
  std::vector<S> apply(std::span<const S> z, bool conjugate = false) const {
    check(z.size());
    switch (kind_) {
      case MapKind::hartogs: return {z[0] * z[1], z[1]};
      case MapKind::zimmer: return {psi(z[1]) * z[0], z[1]};
      case MapKind::linear: {
        std::vector<S> out(dim_);
        for (int i = 0; i < dim_; ++i) {
          S acc(coef(b_(i), conjugate));
          for (int j = 0; j < dim_; ++j) acc = acc + coef(a_(i, j), conjugate) * z[j];
          out[i] = acc;
        }
        return out;
      }
    }
    return {};
  }

  template <class S>
  std::vector<S> inverse(std::span<const S> x, bool conjugate = false) const {
    check(x.size());
    switch (kind_) {
      case MapKind::hartogs:
        if (point_value(x[1]) == cplx(0.0)) {
          throw Error(ErrorCode::MapNotInvertibleAtPoint, "hartogs inverse needs x2 != 0");
        }
        return {x[0] / x[1], x[1]};
      case MapKind::zimmer:
        if (std::abs(point_value(x[1])) >= 1.0) {
          throw Error(ErrorCode::MapNotInvertibleAtPoint, "zimmer inverse needs |x2| < 1");
        }
        return {x[0] / psi(x[1]), x[1]};
      case MapKind::linear: {
        std::vector<S> out(dim_);
        for (int i = 0; i < dim_; ++i) {
          S acc(0.0);
          for (int j = 0; j < dim_; ++j) acc = acc + coef(a_inv_(i, j), conjugate) * (x[j] - coef(b_(j), conjugate));
          out[i] = acc;
        }
        return out;
      }
    }
    return {};
  }

  template <class S>
  S jacobian_det(std::span<const S> z, bool conjugate = false) const {
    check(z.size());
    switch (kind_) {
      case MapKind::hartogs: return z[1];
      case MapKind::zimmer: return psi(z[1]);
      case MapKind::linear: return S(coef(det_, conjugate));
    }
    return S(0.0);
  }

  /// Smallest singular value of A (linear maps only); scales boundary distance.
  double min_singular_value() const {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a_);
    return svd.singularValues().minCoeff();
  }

 private:
  BiholoMap(MapKind kind, int dim) : kind_(kind), dim_(dim) {}

  void check(std::size_t n) const {
    if (static_cast<int>(n) != dim_) {
      throw Error(ErrorCode::DimensionMismatch, std::string(to_string(kind_)) + " map has dimension " + std::to_string(dim_));
    }
  }

  static cplx coef(cplx v, bool conjugate) { return conjugate ? std::conj(v) : v; }

  static cplx point_value(const cplx& v) { return v; }
  static cplx point_value(const Jet& v) { return v.constant(); }

  MapKind kind_;
  int dim_;
  Eigen::MatrixXcd a_;
  Eigen::MatrixXcd a_inv_;
  Eigen::VectorXcd b_;
  cplx det_{1.0};
};

/// Immutable description of a bounded domain. Cheap to copy (shared tree).
class Domain {
 public:
  static Domain disc() { return Domain(make(DomainKind::disc, 1)); }
  static Domain punctured_disc() { return Domain(make(DomainKind::punctured_disc, 1)); }

  static Domain ball(int n) {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "ball dimension must be positive");
    return Domain(make(DomainKind::ball, n));
  }

  static Domain polydisc(int n) {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "polydisc dimension must be positive");
    return Domain(make(DomainKind::polydisc, n));
  }

  static Domain annulus(double r) {
    if (!(r > 0.0 && r < 1.0)) throw Error(ErrorCode::InvalidArgument, "annulus requires 0 < r < 1");
    auto node = make(DomainKind::annulus, 1);
    node->inner_radius = r;
    return Domain(std::move(node));
  }

  static Domain product(std::vector<Domain> factors) {
    if (factors.empty()) throw Error(ErrorCode::InvalidArgument, "product needs at least one factor");
    int dim = 0;
    for (const auto& f : factors) dim += f.dim();
    auto node = make(DomainKind::product, dim);
    node->factors = std::move(factors);
    return Domain(std::move(node));
  }

  static Domain pushforward(Domain base, BiholoMap map) {
    if (map.dim() != base.dim()) throw Error(ErrorCode::DimensionMismatch, "map and base dimensions differ");
    auto node = make(DomainKind::pushforward, base.dim());
    node->factors = {std::move(base)};
    node->map = std::make_shared<const BiholoMap>(std::move(map));
    return Domain(std::move(node));
  }

  DomainKind kind() const { return node_->kind; }
  int dim() const { return node_->dim; }
  double inner_radius() const { return node_->inner_radius; }
  const std::vector<Domain>& factors() const { return node_->factors; }
  const Domain& base() const { return node_->factors.front(); }
  const BiholoMap& map() const { return *node_->map; }

  /// Radius of a Euclidean ball about the origin containing the domain.
  double circumscribing_radius() const {
    switch (kind()) {
      case DomainKind::disc:
      case DomainKind::punctured_disc:
      case DomainKind::annulus:
      case DomainKind::ball: return 1.0;
      case DomainKind::polydisc: return std::sqrt(static_cast<double>(dim()));
      case DomainKind::product: {
        double s = 0.0;
        for (const auto& f : factors()) s += f.circumscribing_radius() * f.circumscribing_radius();
        return std::sqrt(s);
      }
      case DomainKind::pushforward: {
        const double rb = base().circumscribing_radius();
        switch (map().kind()) {
          // |psi| < 1 on D, so |x1| <= |z1| and |x2| = |z2|.
          case MapKind::hartogs:
          case MapKind::zimmer: return rb;
          case MapKind::linear: {
            Eigen::JacobiSVD<Eigen::MatrixXcd> svd(map().matrix());
            return svd.singularValues().maxCoeff() * rb + map().offset().norm();
          }
        }
      }
    }
    return std::numeric_limits<double>::infinity();
  }

  /// True for domains invariant under the torus action z_j -> e^{i t_j} z_j.
  bool is_reinhardt() const {
    switch (kind()) {
      case DomainKind::pushforward: return false;
      case DomainKind::product:
        return std::all_of(factors().begin(), factors().end(), [](const Domain& f) { return f.is_reinhardt(); });
      default: return true;
    }
  }

  friend bool operator==(const Domain& a, const Domain& b) { return a.node_ == b.node_; }

 private:
  struct Node {
    DomainKind kind;
    int dim;
    double inner_radius = 0.0;
    std::vector<Domain> factors;
    std::shared_ptr<const BiholoMap> map;
  };

  static std::shared_ptr<Node> make(DomainKind kind, int dim) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->dim = dim;
    return n;
  }

  explicit Domain(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

inline bool contains(const Domain& d, std::span<const cplx> z);

namespace detail {

inline bool contains_impl(const Domain& d, std::span<const cplx> z) {
  switch (d.kind()) {
    case DomainKind::disc: return std::abs(z[0]) < 1.0;
    case DomainKind::punctured_disc: return std::abs(z[0]) < 1.0 && z[0] != cplx(0.0);
    case DomainKind::annulus: {
      const double m = std::abs(z[0]);
      return m > d.inner_radius() && m < 1.0;
    }
    case DomainKind::ball: return norm2(z) < 1.0;
    case DomainKind::polydisc:
      return std::all_of(z.begin(), z.end(), [](const cplx& v) { return std::abs(v) < 1.0; });
    case DomainKind::product: {
      std::size_t offset = 0;
      for (const auto& f : d.factors()) {
        if (!contains(f, z.subspan(offset, f.dim()))) return false;
        offset += f.dim();
      }
      return true;
    }
    case DomainKind::pushforward: {
      Point pre;
      try {
        pre = d.map().inverse<cplx>(z);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::MapNotInvertibleAtPoint) return false;
        throw;
      }
      for (const auto& v : pre)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
      return contains(d.base(), pre);
    }
  }
  return false;
}

}  // namespace detail

/// Membership in the open domain. Pushforward domains invert the map first.
inline bool contains(const Domain& d, std::span<const cplx> z) {
  require_dim(z, d.dim(), "contains");
  return detail::contains_impl(d, z);
}

inline bool contains(const Domain& d, const Point& z) { return contains(d, std::span<const cplx>(z)); }

/// Euclidean distance to the boundary. Exact for model domains and products
/// of them; for pushforwards it is an estimate:
///  - hartogs: min(1 - |x2|, (|x2| - |x1|)/sqrt 2), the distance to the union
///    of the two constraint hypersurfaces;
///  - linear: sigma_min(A) times the base distance of the preimage (a lower bound);
///  - zimmer: min distance to the images of a fixed sample of the base sphere.
inline double boundary_distance(const Domain& d, std::span<const cplx> z) {
  if (!contains(d, z)) throw Error(ErrorCode::OutsideDomain, "boundary_distance at a point outside the domain");
  switch (d.kind()) {
    case DomainKind::disc: return 1.0 - std::abs(z[0]);
    case DomainKind::punctured_disc: return std::min(std::abs(z[0]), 1.0 - std::abs(z[0]));
    case DomainKind::annulus: {
      const double m = std::abs(z[0]);
      return std::min(m - d.inner_radius(), 1.0 - m);
    }
    case DomainKind::ball: return 1.0 - std::sqrt(norm2(z));
    case DomainKind::polydisc: {
      double best = 1.0;
      for (const auto& v : z) best = std::min(best, 1.0 - std::abs(v));
      return best;
    }
    case DomainKind::product: {
      double best = std::numeric_limits<double>::infinity();
      std::size_t offset = 0;
      for (const auto& f : d.factors()) {
        best = std::min(best, boundary_distance(f, z.subspan(offset, f.dim())));
        offset += f.dim();
      }
      return best;
    }
    case DomainKind::pushforward: {
      const BiholoMap& f = d.map();
      switch (f.kind()) {
        case MapKind::hartogs: {
          const double a = std::abs(z[0]);
          const double b = std::abs(z[1]);
          return std::min(1.0 - b, (b - a) / std::sqrt(2.0));
        }
        case MapKind::linear: {
          const Point pre = f.inverse<cplx>(z);
          return f.min_singular_value() * boundary_distance(d.base(), pre);
        }
        case MapKind::zimmer: {
          // Base is B^2; sample its sphere on a fixed grid.
          constexpr int kPolar = 64;
          constexpr int kAzimuth = 64;
          double best = std::numeric_limits<double>::infinity();
          for (int i = 0; i <= kPolar; ++i) {
            const double t = 0.5 * kPi * i / kPolar;
            for (int j = 0; j < kAzimuth; ++j) {
              for (int k = 0; k < kAzimuth; ++k) {
                const double a1 = 2.0 * kPi * j / kAzimuth;
                const double a2 = 2.0 * kPi * k / kAzimuth;
                const Point b{std::polar(std::cos(t), a1), std::polar(std::sin(t), a2)};
                if (std::abs(b[1] - cplx(1.0)) < 1e-12) continue;
                const Point img = f.apply<cplx>(b);
                best = std::min(best, std::sqrt(norm2(Point{img[0] - z[0], img[1] - z[1]})));
              }
            }
          }
          return best;
        }
      }
    }
  }
  return 0.0;
}

inline double boundary_distance(const Domain& d, const Point& z) {
  return boundary_distance(d, std::span<const cplx>(z));
}

}  // namespace bergman
