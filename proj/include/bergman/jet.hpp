#pragma once

// Truncated multivariate Taylor arithmetic, total order 4.
//
// A Jet stores the Taylor coefficients (not derivatives) of a function of
// `nvars` complex variables around a base point. Coefficients are kept in a
// dense vector whose layout (exponent table, product table) is shared between
// all jets with the same number of variables.

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <vector>

#include "bergman/core.hpp"

namespace bergman {

class JetLayout {
 public:
  static constexpr int kOrder = 4;
  static constexpr int kMaxVars = 8;

  struct Product {
    int lhs;
    int rhs;
    int out;
  };

  static std::shared_ptr<const JetLayout> get(int nvars) {
    if (nvars < 1 || nvars > kMaxVars) {
      throw Error(ErrorCode::JetFailure, "jet variable count out of range: " + std::to_string(nvars));
    }
    static std::mutex mu;
    static std::map<int, std::shared_ptr<const JetLayout>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[nvars];
    if (!slot) slot = std::shared_ptr<const JetLayout>(new JetLayout(nvars));
    return slot;
  }

  int nvars() const { return nvars_; }
  int size() const { return static_cast<int>(degree_.size()); }
  int degree(int idx) const { return degree_[idx]; }

  std::span<const int> exponents(int idx) const {
    return {exps_.data() + static_cast<std::size_t>(idx) * nvars_, static_cast<std::size_t>(nvars_)};
  }

  /// Index of the monomial with the given exponents, or -1 when its total
  /// degree exceeds the truncation order.
  int index(std::span<const int> e) const {
    if (static_cast<int>(e.size()) != nvars_) return -1;
    int total = 0;
    int key = 0;
    int scale = 1;
    for (int v = 0; v < nvars_; ++v) {
      if (e[v] < 0) return -1;
      total += e[v];
      if (total > kOrder) return -1;
      key += e[v] * scale;
      scale *= kOrder + 1;
    }
    return lookup_[key];
  }

  const std::vector<Product>& products() const { return products_; }

 private:
  explicit JetLayout(int nvars) : nvars_(nvars) {
    std::vector<int> current(nvars, 0);
    for (int d = 0; d <= kOrder; ++d) enumerate(0, d, current);

    int table = 1;
    for (int v = 0; v < nvars; ++v) table *= kOrder + 1;
    lookup_.assign(table, -1);
    for (int i = 0; i < size(); ++i) {
      int key = 0;
      int scale = 1;
      for (int v = 0; v < nvars; ++v) {
        key += exponents(i)[v] * scale;
        scale *= kOrder + 1;
      }
      lookup_[key] = i;
    }

    std::vector<int> sum(nvars);
    for (int i = 0; i < size(); ++i) {
      for (int j = 0; j < size(); ++j) {
        if (degree_[i] + degree_[j] > kOrder) continue;
        for (int v = 0; v < nvars; ++v) sum[v] = exponents(i)[v] + exponents(j)[v];
        products_.push_back({i, j, index(sum)});
      }
    }
  }

  // Monomials of exact degree `remaining` in variables [var, nvars), graded
  // lexicographic order.
  void enumerate(int var, int remaining, std::vector<int>& current) {
    if (var == nvars_ - 1) {
      current[var] = remaining;
      exps_.insert(exps_.end(), current.begin(), current.end());
      degree_.push_back(std::accumulate(current.begin(), current.end(), 0));
      current[var] = 0;
      return;
    }
    for (int e = remaining; e >= 0; --e) {
      current[var] = e;
      enumerate(var + 1, remaining - e, current);
    }
    current[var] = 0;
  }

  int nvars_;
  std::vector<int> exps_;
  std::vector<int> degree_;
  std::vector<int> lookup_;
  std::vector<Product> products_;
};

/// Truncated power series. A jet without a layout is a plain constant; it
/// adopts the layout of whatever it is combined with, so generic code can
/// write `1.0 - z * s` for both complex scalars and jets.
class Jet {
 public:
  Jet() : c_{cplx(0.0)} {}
  Jet(double v) : c_{cplx(v)} {}  // NOLINT(google-explicit-constructor)
  Jet(cplx v) : c_{v} {}          // NOLINT(google-explicit-constructor)

  Jet(std::shared_ptr<const JetLayout> layout, cplx value)
      : layout_(std::move(layout)), c_(layout_->size(), cplx(0.0)) {
    c_[0] = value;
  }

  static Jet variable(const std::shared_ptr<const JetLayout>& layout, int var, cplx value) {
    Jet j(layout, value);
    std::vector<int> e(layout->nvars(), 0);
    e[var] = 1;
    j.c_[layout->index(e)] = 1.0;
    return j;
  }

  const std::shared_ptr<const JetLayout>& layout() const { return layout_; }
  bool is_constant_only() const { return layout_ == nullptr; }
  cplx constant() const { return c_[0]; }
  std::span<const cplx> coeffs() const { return c_; }

  /// Taylor coefficient of the monomial with exponents `e` (zero when the
  /// monomial is beyond the truncation order).
  cplx coeff(std::span<const int> e) const {
    if (!layout_) {
      for (int v : e)
        if (v != 0) return 0.0;
      return c_[0];
    }
    const int idx = layout_->index(e);
    return idx < 0 ? cplx(0.0) : c_[idx];
  }

  void set_coeff(int idx, cplx v) { c_[idx] = v; }

  Jet& operator+=(const Jet& o) {
    adopt(o);
    if (!o.layout_) {
      c_[0] += o.c_[0];
    } else {
      for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    }
    return *this;
  }

  Jet& operator-=(const Jet& o) {
    adopt(o);
    if (!o.layout_) {
      c_[0] -= o.c_[0];
    } else {
      for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    }
    return *this;
  }

  Jet& operator*=(const Jet& o) {
    *this = *this * o;
    return *this;
  }

  Jet& operator/=(const Jet& o) {
    *this = *this / o;
    return *this;
  }

  friend Jet operator-(Jet a) {
    for (auto& v : a.c_) v = -v;
    return a;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }

  friend Jet operator*(const Jet& a, const Jet& b) {
    if (!a.layout_) return scale(b, a.c_[0]);
    if (!b.layout_) return scale(a, b.c_[0]);
    check_compatible(a, b);
    Jet out(a.layout_, 0.0);
    for (const auto& p : a.layout_->products()) out.c_[p.out] += a.c_[p.lhs] * b.c_[p.rhs];
    return out;
  }

  friend Jet operator/(const Jet& a, const Jet& b) {
    if (!b.layout_) return scale(a, 1.0 / b.c_[0]);
    return a * reciprocal(b);
  }

  /// f(x) for a univariate f given its normalized Taylor coefficients
  /// f^(m)(x0)/m! at the constant term x0 of x, m = 0..4.
  friend Jet compose(const Jet& x, const std::array<cplx, JetLayout::kOrder + 1>& taylor) {
    if (!x.layout_) return Jet(taylor[0]);
    Jet h = x;
    h.c_[0] = 0.0;
    Jet out(x.layout_, taylor[0]);
    Jet power = h;
    for (int m = 1; m <= JetLayout::kOrder; ++m) {
      for (std::size_t i = 0; i < out.c_.size(); ++i) out.c_[i] += taylor[m] * power.c_[i];
      if (m < JetLayout::kOrder) power = power * h;
    }
    return out;
  }

  friend Jet reciprocal(const Jet& x) {
    const cplx x0 = x.constant();
    if (x0 == cplx(0.0)) throw Error(ErrorCode::JetFailure, "reciprocal of a jet with zero constant term");
    std::array<cplx, JetLayout::kOrder + 1> t{};
    for (int m = 0; m <= JetLayout::kOrder; ++m) t[m] = (m % 2 == 0 ? 1.0 : -1.0);
    return scale(compose(unit_constant(x), t), 1.0 / x0);
  }

  friend Jet log(const Jet& x) {
    const cplx x0 = x.constant();
    if (x0 == cplx(0.0)) throw Error(ErrorCode::JetFailure, "log of a jet with zero constant term");
    std::array<cplx, JetLayout::kOrder + 1> t{};
    t[0] = std::log(x0);
    for (int m = 1; m <= JetLayout::kOrder; ++m) t[m] = (m % 2 == 1 ? 1.0 : -1.0) / static_cast<double>(m);
    return compose(unit_constant(x), t);
  }

  friend Jet exp(const Jet& x) {
    const cplx e0 = std::exp(x.constant());
    std::array<cplx, JetLayout::kOrder + 1> t{};
    double fact = 1.0;
    for (int m = 0; m <= JetLayout::kOrder; ++m) {
      if (m > 0) fact *= m;
      t[m] = e0 / fact;
    }
    return compose(x, t);
  }

  /// x^a on the principal branch.
  friend Jet pow(const Jet& x, double a) {
    const cplx x0 = x.constant();
    if (x0 == cplx(0.0)) throw Error(ErrorCode::JetFailure, "pow of a jet with zero constant term");
    std::array<cplx, JetLayout::kOrder + 1> t{};
    double binom = 1.0;  // a(a-1)...(a-m+1)/m!
    for (int m = 0; m <= JetLayout::kOrder; ++m) {
      if (m > 0) binom *= (a - (m - 1)) / m;
      t[m] = binom;
    }
    return scale(compose(unit_constant(x), t), std::pow(x0, a));
  }

  friend Jet sqrt(const Jet& x) { return pow(x, 0.5); }

 private:
  // x / x0, so that series in (x - x0) stay within range for tiny or huge x0.
  static Jet unit_constant(const Jet& x) {
    if (!x.layout_) return Jet(1.0);
    Jet y = scale(x, 1.0 / x.constant());
    y.c_[0] = 1.0;
    return y;
  }

  static Jet scale(Jet a, cplx s) {
    for (auto& v : a.c_) v *= s;
    return a;
  }

  static void check_compatible(const Jet& a, const Jet& b) {
    if (a.layout_ != b.layout_) throw Error(ErrorCode::JetFailure, "jets with different layouts combined");
  }

  void adopt(const Jet& o) {
    if (!o.layout_) return;
    if (!layout_) {
      const cplx c0 = c_[0];
      layout_ = o.layout_;
      c_.assign(layout_->size(), cplx(0.0));
      c_[0] = c0;
      return;
    }
    check_compatible(*this, o);
  }

  std::shared_ptr<const JetLayout> layout_;
  std::vector<cplx> c_;
};

/// Integer power, negative exponents allowed (Laurent monomials).
template <class S>
S ipow(const S& x, int k) {
  if (k < 0) return S(1.0) / ipow(x, -k);
  S result(1.0);
  S base = x;
  while (k > 0) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return result;
}

}  // namespace bergman
