#pragma once

// Quadrature for L^2 inner products on the model domains.
//
// Every model domain is Reinhardt, so a rule factors into a "radial" part
// (moduli |z_j| with weights) and a uniform angular trapezoid in each
// coordinate. The radial part integrates in t_j = |z_j|^2, where monomial
// integrands become polynomials:
//
//   disc:      t in [0, 1]
//   annulus:   t in [r^2, 1]
//   ball(n):   t in the simplex {sum t_j < 1}, collapsed coordinates
//   polydisc, product: tensor products of the factors
//
// Pushforward domains never get their own nodes: integrals are pulled back to
// the base with the weight |det F'|^2.

#include <cmath>
#include <memory>
#include <vector>

#include "bergman/core.hpp"
#include "bergman/domains.hpp"

namespace bergman {

struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [a, b] (Newton iteration on P_n).
inline GaussLegendre gauss_legendre(int n, double a, double b) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "Gauss-Legendre needs at least one node");
  GaussLegendre rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = mid - half * x;
    rule.nodes[n - 1 - i] = mid + half * x;
    rule.weights[i] = half * w;
    rule.weights[n - 1 - i] = half * w;
  }
  return rule;
}

struct RadialNode {
  std::vector<double> moduli;
  double weight;  // includes the full angular measure (2 pi)^n
};

class QuadratureRule {
 public:
  QuadratureRule(int dim, int order, int angular, std::vector<RadialNode> radial,
                 std::shared_ptr<const BiholoMap> pullback = nullptr)
      : dim_(dim), order_(order), angular_(angular), radial_(std::move(radial)), pullback_(std::move(pullback)) {}

  int dim() const { return dim_; }
  int order() const { return order_; }
  int angular_points() const { return angular_; }
  const std::vector<RadialNode>& radial() const { return radial_; }
  const BiholoMap* pullback() const { return pullback_.get(); }

  std::size_t size() const {
    std::size_t n = radial_.size();
    for (int j = 0; j < dim_; ++j) n *= static_cast<std::size_t>(angular_);
    return n;
  }

  /// Visits every node x with its weight. Order is fixed (radial-major, then
  /// angles in lexicographic order) so sums are deterministic.
  template <class Fn>
  void for_each(Fn&& fn) const {
    std::vector<cplx> phases(angular_);
    for (int k = 0; k < angular_; ++k) phases[k] = std::polar(1.0, 2.0 * kPi * (k + 0.5) / angular_);
    const double angular_weight = std::pow(static_cast<double>(angular_), -dim_);
    std::vector<int> idx(dim_, 0);
    Point z(dim_);
    for (const auto& node : radial_) {
      std::fill(idx.begin(), idx.end(), 0);
      while (true) {
        for (int j = 0; j < dim_; ++j) z[j] = node.moduli[j] * phases[idx[j]];
        emit(z, node.weight * angular_weight, fn);
        int j = dim_ - 1;
        while (j >= 0 && ++idx[j] == angular_) idx[j--] = 0;
        if (j < 0) break;
      }
    }
  }

  /// Visits one representative per radial node (all angles zero) carrying the
  /// weight of its whole torus orbit. Exact for integrands that, pulled back
  /// to the base, depend on the moduli only.
  template <class Fn>
  void for_each_radial(Fn&& fn) const {
    Point z(dim_);
    for (const auto& node : radial_) {
      for (int j = 0; j < dim_; ++j) z[j] = node.moduli[j];
      emit(z, node.weight, fn);
    }
  }

  double sum_weights() const {
    double s = 0.0;
    if (!pullback_) {
      for (const auto& node : radial_) s += node.weight;
      return s;
    }
    for_each([&](const Point&, double w) { s += w; });
    return s;
  }

 private:
  template <class Fn>
  void emit(const Point& z, double w, Fn& fn) const {
    if (!pullback_) {
      fn(z, w);
      return;
    }
    const cplx jac = pullback_->jacobian_det<cplx>(z);
    fn(pullback_->apply<cplx>(z), w * std::norm(jac));
  }

  int dim_;
  int order_;
  int angular_;
  std::vector<RadialNode> radial_;
  std::shared_ptr<const BiholoMap> pullback_;
};

namespace detail {

inline std::vector<RadialNode> interval_rule(int order, double t_lo, double t_hi) {
  const auto gl = gauss_legendre(order, t_lo, t_hi);
  std::vector<RadialNode> out;
  out.reserve(order);
  // r dr dtheta = (1/2) dt dtheta; the angular integral contributes 2 pi.
  for (int i = 0; i < order; ++i) out.push_back({{std::sqrt(gl.nodes[i])}, kPi * gl.weights[i]});
  return out;
}

inline std::vector<RadialNode> tensor(const std::vector<RadialNode>& a, const std::vector<RadialNode>& b) {
  std::vector<RadialNode> out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a) {
    for (const auto& y : b) {
      RadialNode n{x.moduli, x.weight * y.weight};
      n.moduli.insert(n.moduli.end(), y.moduli.begin(), y.moduli.end());
      out.push_back(std::move(n));
    }
  }
  return out;
}

inline std::vector<RadialNode> simplex_rule(int n, int order) {
  const auto gl = gauss_legendre(order, 0.0, 1.0);
  std::vector<RadialNode> out;
  std::vector<int> idx(n, 0);
  while (true) {
    RadialNode node{std::vector<double>(n), 1.0};
    double remaining = 1.0;
    double w = std::pow(kPi, n);
    for (int j = 0; j < n; ++j) {
      const double u = gl.nodes[idx[j]];
      const double t = remaining * u;
      node.moduli[j] = std::sqrt(t);
      // Jacobian of the collapsed coordinates: prod_j (1 - u_j)^(n - 1 - j).
      w *= gl.weights[idx[j]] * std::pow(1.0 - u, n - 1 - j);
      remaining *= (1.0 - u);
    }
    node.weight = w;
    out.push_back(std::move(node));
    int j = n - 1;
    while (j >= 0 && ++idx[j] == order) idx[j--] = 0;
    if (j < 0) break;
  }
  return out;
}

inline std::vector<RadialNode> radial_rule(const Domain& d, int order) {
  switch (d.kind()) {
    case DomainKind::disc:
    case DomainKind::punctured_disc: return interval_rule(order, 0.0, 1.0);
    case DomainKind::annulus: return interval_rule(order, d.inner_radius() * d.inner_radius(), 1.0);
    case DomainKind::ball: return simplex_rule(d.dim(), order);
    case DomainKind::polydisc: {
      auto one = interval_rule(order, 0.0, 1.0);
      auto out = one;
      for (int j = 1; j < d.dim(); ++j) out = tensor(out, one);
      return out;
    }
    case DomainKind::product: {
      auto out = radial_rule(d.factors().front(), order);
      for (std::size_t i = 1; i < d.factors().size(); ++i) out = tensor(out, radial_rule(d.factors()[i], order));
      return out;
    }
    case DomainKind::pushforward: break;
  }
  throw Error(ErrorCode::UnsupportedDomain, std::string("no radial rule for ") + to_string(d.kind()));
}

}  // namespace detail

/// Deterministic product rule with `order` Gauss-Legendre points per radial
/// direction and 2*order + 2 angles per coordinate. The punctured disc gets
/// the disc rule unchanged (no node sits at the origin).
inline QuadratureRule quadrature(const Domain& d, int order) {
  if (order < 1) throw Error(ErrorCode::InvalidArgument, "quadrature order must be >= 1");
  const int angular = 2 * order + 2;
  if (d.kind() == DomainKind::pushforward) {
    const Domain& base = d.base();
    if (!base.is_reinhardt()) {
      throw Error(ErrorCode::UnsupportedDomain, "pushforward quadrature needs a model base domain");
    }
    return QuadratureRule(d.dim(), order, angular, detail::radial_rule(base, order),
                          std::make_shared<const BiholoMap>(d.map()));
  }
  return QuadratureRule(d.dim(), order, angular, detail::radial_rule(d, order));
}

}  // namespace bergman
