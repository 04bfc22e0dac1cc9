#pragma once

// Bergman kernel models.
//
// A kernel is evaluated through its polarized form K(z, s), holomorphic in all
// 2n arguments, with K(z, w) = K(z, conj w). Every model implements the
// polarized form for complex scalars and for jets from the same template
// formula, so derivatives come out of exact series arithmetic.

#include <cmath>
#include <memory>
#include <string>
#include <type_traits>
#include <vector>

#include "bergman/annulus_series.hpp"
#include "bergman/core.hpp"
#include "bergman/domains.hpp"
#include "bergman/jet.hpp"

namespace bergman {

enum class Provenance { closed_form, pushforward, gram_numerical };

inline const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::closed_form: return "closed_form";
    case Provenance::pushforward: return "pushforward";
    case Provenance::gram_numerical: return "gram_numerical";
  }
  return "unknown";
}

struct ProvenanceInfo {
  Provenance kind = Provenance::closed_form;
  int degree = 0;
  int quad_order = 0;
  double condition_estimate = 0.0;
};

class KernelModel {
 public:
  KernelModel(Domain domain, ProvenanceInfo provenance) : domain_(std::move(domain)), provenance_(provenance) {}
  virtual ~KernelModel() = default;

  const Domain& domain() const { return domain_; }
  const ProvenanceInfo& provenance() const { return provenance_; }

  /// Closed-form and pushforward kernels are conjugate-symmetric by
  /// construction; numerical ones only up to roundoff.
  bool symbolic() const { return provenance_.kind != Provenance::gram_numerical; }

  virtual cplx polarized(std::span<const cplx> z, std::span<const cplx> s) const = 0;
  virtual Jet polarized(std::span<const Jet> z, std::span<const Jet> s) const = 0;

  cplx eval(std::span<const cplx> z, std::span<const cplx> w) const {
    require_dim(z, domain_.dim(), "kernel eval (z)");
    require_dim(w, domain_.dim(), "kernel eval (w)");
    const Point s = conj(w);
    return polarized(z, std::span<const cplx>(s));
  }

  cplx eval(const Point& z, const Point& w) const {
    return eval(std::span<const cplx>(z), std::span<const cplx>(w));
  }

  /// K(z, z), real and positive in the domain.
  double diagonal(const Point& z) const { return eval(z, z).real(); }

 private:
  Domain domain_;
  ProvenanceInfo provenance_;
};

using KernelPtr = std::shared_ptr<const KernelModel>;

/// Adapts a formula object with a templated call operator
/// `S operator()(span<const S> z, span<const S> s)` to the KernelModel interface.
template <class Formula>
class FormulaKernel final : public KernelModel {
 public:
  FormulaKernel(Domain d, ProvenanceInfo p, Formula f) : KernelModel(std::move(d), p), formula_(std::move(f)) {}

  cplx polarized(std::span<const cplx> z, std::span<const cplx> s) const override { return formula_(z, s); }
  Jet polarized(std::span<const Jet> z, std::span<const Jet> s) const override { return formula_(z, s); }

  const Formula& formula() const { return formula_; }

 private:
  Formula formula_;
};

namespace formulas {

/// pi^{-1} (1 - z s)^{-2}
struct Disc {
  template <class S>
  S operator()(std::span<const S> z, std::span<const S> s) const {
    const S t = 1.0 - z[0] * s[0];
    return (1.0 / kPi) / (t * t);
  }
};

/// n! pi^{-n} (1 - <z, s>)^{-(n+1)}
struct Ball {
  int n;

  template <class S>
  S operator()(std::span<const S> z, std::span<const S> s) const {
    S t(1.0);
    for (int j = 0; j < n; ++j) t = t - z[j] * s[j];
    double c = 1.0;
    for (int j = 1; j <= n; ++j) c *= j / kPi;
    return c * ipow(t, -(n + 1));
  }
};

struct Polydisc {
  int n;

  template <class S>
  S operator()(std::span<const S> z, std::span<const S> s) const {
    S out(1.0);
    for (int j = 0; j < n; ++j) {
      const S t = 1.0 - z[j] * s[j];
      out = out * ((1.0 / kPi) / (t * t));
    }
    return out;
  }
};

struct Annulus {
  AnnulusSeries series;

  template <class S>
  S operator()(std::span<const S> z, std::span<const S> s) const {
    const S u = z[0] * s[0];
    if constexpr (std::is_same_v<S, Jet>) {
      const auto t = series.taylor(u.constant(), AnnulusSeries::kMaxDeriv);
      return compose(u, t);
    } else {
      return series.value(u);
    }
  }
};

struct Product {
  std::vector<KernelPtr> factors;

  template <class S>
  S operator()(std::span<const S> z, std::span<const S> s) const {
    S out(1.0);
    std::size_t offset = 0;
    for (const auto& f : factors) {
      const std::size_t d = f->domain().dim();
      out = out * f->polarized(z.subspan(offset, d), s.subspan(offset, d));
      offset += d;
    }
    return out;
  }
};

/// K_image(x, y) = K_base(F^{-1} x, conjF^{-1} y) / (J(F^{-1} x) conjJ(conjF^{-1} y))
struct Pushforward {
  KernelPtr base;
  std::shared_ptr<const BiholoMap> map;

  template <class S>
  S operator()(std::span<const S> x, std::span<const S> y) const {
    const std::vector<S> z = map->inverse<S>(x, false);
    const std::vector<S> s = map->inverse<S>(y, true);
    const S jz = map->jacobian_det<S>(std::span<const S>(z), false);
    const S js = map->jacobian_det<S>(std::span<const S>(s), true);
    return base->polarized(std::span<const S>(z), std::span<const S>(s)) / (jz * js);
  }
};

}  // namespace formulas

template <class Formula>
KernelPtr make_formula_kernel(Domain d, ProvenanceInfo p, Formula f) {
  return std::make_shared<FormulaKernel<Formula>>(std::move(d), p, std::move(f));
}

/// Closed-form kernels of the model domains and their products. The punctured
/// disc reuses the disc evaluator: the origin is removable for L^2 holomorphic
/// functions.
inline KernelPtr closed_form_kernel(const Domain& d) {
  const ProvenanceInfo p{Provenance::closed_form};
  switch (d.kind()) {
    case DomainKind::disc:
    case DomainKind::punctured_disc: return make_formula_kernel(d, p, formulas::Disc{});
    case DomainKind::ball: return make_formula_kernel(d, p, formulas::Ball{d.dim()});
    case DomainKind::polydisc: return make_formula_kernel(d, p, formulas::Polydisc{d.dim()});
    case DomainKind::annulus: return make_formula_kernel(d, p, formulas::Annulus{AnnulusSeries(d.inner_radius())});
    case DomainKind::product: {
      formulas::Product f;
      for (const auto& factor : d.factors()) f.factors.push_back(closed_form_kernel(factor));
      return make_formula_kernel(d, p, std::move(f));
    }
    case DomainKind::pushforward: break;
  }
  throw Error(ErrorCode::UnsupportedDomain,
              std::string("no closed form for ") + to_string(d.kind()) + " (use pushforward_kernel)");
}

/// Transformation rule: the kernel of F(base domain).
inline KernelPtr pushforward_kernel(const KernelPtr& base, const BiholoMap& map) {
  Domain image = Domain::pushforward(base->domain(), map);
  ProvenanceInfo p = base->provenance();
  if (p.kind == Provenance::closed_form) p.kind = Provenance::pushforward;
  return make_formula_kernel(std::move(image), p,
                             formulas::Pushforward{base, std::make_shared<const BiholoMap>(map)});
}

/// Closed form where one exists, otherwise the transformation rule applied to
/// the closed form of the base (recursively).
inline KernelPtr kernel_for(const Domain& d) {
  if (d.kind() == DomainKind::pushforward) return pushforward_kernel(kernel_for(d.base()), d.map());
  return closed_form_kernel(d);
}

/// Skwarczynski distance: rho = sqrt(1 - |K(z, z0)| / sqrt(K(z, z) K(z0, z0))).
/// At a kernel zero this returns exactly 1.
inline double skwarczynski_rho(const KernelModel& k, const Point& z0, const Point& z) {
  if (!contains(k.domain(), z0) || !contains(k.domain(), z)) {
    throw Error(ErrorCode::OutsideDomain, "skwarczynski_rho needs both points in the domain");
  }
  if (z0 == z) return 0.0;
  const double kzz = k.diagonal(z);
  const double k00 = k.diagonal(z0);
  const double ratio = std::abs(k.eval(z, z0)) / std::sqrt(kzz * k00);
  return std::sqrt(std::max(0.0, 1.0 - ratio));
}

struct KernelZero {
  Point zeta;      // K(zeta, z0) = 0
  Point z0;
  double residual;  // |K(zeta, z0)|
};

/// Locates a zero of x -> K(x, x0) on a real segment of a planar domain. The
/// restriction is real-valued when the kernel has real Taylor coefficients
/// (true for the annulus series). A sign change on a uniform grid is refined
/// by bisection, then polished by complex Newton steps with the derivative
/// taken from a jet.
inline KernelZero find_real_kernel_zero(const KernelModel& k, double x0, double lo, double hi, int grid = 400) {
  if (k.domain().dim() != 1) throw Error(ErrorCode::UnsupportedDomain, "real zero scan needs a planar domain");
  const Point base{cplx(x0)};
  auto f = [&](double x) { return k.eval(Point{cplx(x)}, base).real(); };
  double a = 0.0, b = 0.0, fa = 0.0;
  bool found = false;
  double prev_x = lo + (hi - lo) * 0.5 / grid;
  double prev_f = f(prev_x);
  for (int i = 1; i < grid; ++i) {
    const double x = lo + (hi - lo) * (i + 0.5) / grid;
    const double fx = f(x);
    if ((prev_f < 0.0) != (fx < 0.0)) {
      a = prev_x;
      b = x;
      fa = prev_f;
      found = true;
      break;
    }
    prev_x = x;
    prev_f = fx;
  }
  if (!found) throw Error(ErrorCode::KernelZeroAtPair, "no sign change of K(x, x0) on the scanned segment");
  for (int it = 0; it < 200 && b - a > 1e-16 * std::max(1.0, std::abs(a)); ++it) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if (fm == 0.0) {
      a = b = m;
      break;
    }
    if ((fa < 0.0) == (fm < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  cplx zeta = 0.5 * (a + b);
  const auto layout = JetLayout::get(2);
  const Jet s{cplx(x0)};
  for (int it = 0; it < 8; ++it) {
    const Jet zj = Jet::variable(layout, 0, zeta);
    const Jet zs[1] = {zj};
    const Jet ss[1] = {s};
    const Jet kv = k.polarized(std::span<const Jet>(zs), std::span<const Jet>(ss));
    const int e[2] = {1, 0};
    const cplx d = kv.coeff(e);
    if (d == cplx(0.0)) break;
    const cplx step = kv.constant() / d;
    zeta -= step;
    if (std::abs(step) < 1e-17) break;
  }
  KernelZero out{{zeta}, {cplx(x0)}, 0.0};
  out.residual = std::abs(k.eval(out.zeta, out.z0));
  return out;
}

}  // namespace bergman
