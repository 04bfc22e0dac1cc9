#pragma once

// Laurent series of the annulus kernel as a function of u = z * conj(w):
//
//   f(u) = sum_{k in Z} u^k / nu_k,
//   nu_k = pi (1 - r^(2k+2)) / (k + 1)   (k != -1),
//   nu_{-1} = 2 pi log(1/r).
//
// Summation is adaptive in both directions and stops once a certified
// geometric bound on the remaining tail drops below the requested relative
// tolerance. Term ratios are bounded by
//
//   k >= 0 (m-th derivative):  q (k + 2) / (k + 1 - m),        q = |u|
//   k = -j, j >= 2:            (r^2 / q) (j + m) / (j - 1)
//
// both decreasing, so |t_k| rho / (1 - rho) bounds everything after t_k.

#include <array>
#include <cmath>
#include <cstdint>

#include "bergman/core.hpp"
#include "bergman/jet.hpp"

namespace bergman {

class AnnulusSeries {
 public:
  static constexpr int kMaxDeriv = JetLayout::kOrder;
  using Taylor = std::array<cplx, kMaxDeriv + 1>;

  struct Stats {
    std::int64_t positive_terms = 0;
    std::int64_t negative_terms = 0;
    double tail_bound = 0.0;  // relative to the absolute sum, worst derivative
  };

  explicit AnnulusSeries(double r, double rel_tol = 3e-17, std::int64_t max_terms = 40'000'000)
      : r_(r), r2_(r * r), rel_tol_(rel_tol), max_terms_(max_terms) {
    if (!(r > 0.0 && r < 1.0)) throw Error(ErrorCode::InvalidArgument, "annulus requires 0 < r < 1");
  }

  double inner_radius() const { return r_; }

  double nu(int k) const {
    if (k == -1) return 2.0 * kPi * std::log(1.0 / r_);
    return kPi * (1.0 - std::pow(r_, 2.0 * k + 2.0)) / (k + 1.0);
  }

  /// Normalized Taylor coefficients f^(m)(u)/m! for m = 0..max_deriv.
  Taylor taylor(cplx u, int max_deriv = 0, Stats* stats = nullptr) const {
    const double q = std::abs(u);
    if (!(q > r2_ && q < 1.0)) {
      throw Error(ErrorCode::TruncationNotConverged,
                  "Laurent series needs r^2 < |z conj(w)| < 1, got " + std::to_string(q));
    }
    Taylor out{};
    std::array<double, kMaxDeriv + 1> abs_sum{};
    std::array<cplx, kMaxDeriv + 1> inv_pow{};
    inv_pow[0] = 1.0;
    for (int m = 1; m <= kMaxDeriv; ++m) inv_pow[m] = inv_pow[m - 1] / u;

    // k >= 0
    std::int64_t k = 0;
    cplx uk = 1.0;
    double r_pow = r2_;  // r^(2k+2)
    double worst_tail = 0.0;
    for (;; ++k) {
      if (k > max_terms_) {
        throw Error(ErrorCode::TruncationNotConverged, "positive Laurent tail did not converge");
      }
      const cplx base = uk * (static_cast<double>(k + 1) / (kPi * (1.0 - r_pow)));
      bool done = k >= max_deriv;
      double tail = 0.0;
      double binom = 1.0;  // C(k, m)
      for (int m = 0; m <= max_deriv; ++m) {
        if (m > 0) binom *= static_cast<double>(k - m + 1) / m;
        if (m > k) break;
        const cplx t = binom * base * inv_pow[m];
        out[m] += t;
        abs_sum[m] += std::abs(t);
        if (done) {
          const double rho = q * (k + 2.0) / (k + 1.0 - m);
          if (rho >= 1.0) {
            done = false;
            continue;
          }
          const double bound = std::abs(t) * rho / (1.0 - rho);
          const double rel = abs_sum[m] > 0.0 ? bound / abs_sum[m] : 0.0;
          tail = std::max(tail, rel);
          if (rel > rel_tol_) done = false;
        }
      }
      if (done) {
        worst_tail = std::max(worst_tail, tail);
        break;
      }
      uk *= u;
      r_pow *= r2_;
    }

    // k = -j, j >= 1
    const cplx v = r2_ / u;  // |v| < 1
    std::int64_t j = 1;
    {
      const cplx base = 1.0 / (u * nu(-1));
      add_negative(out, abs_sum, base, 1, max_deriv, inv_pow);
    }
    cplx vj = v;
    double r_pow_neg = 1.0;  // r^(2j-2)
    for (j = 2;; ++j) {
      if (j > max_terms_) {
        throw Error(ErrorCode::TruncationNotConverged, "negative Laurent tail did not converge");
      }
      vj *= v;
      r_pow_neg *= r2_;
      const cplx base = vj * ((j - 1.0) / (kPi * r2_ * (1.0 - r_pow_neg)));
      const auto terms = add_negative(out, abs_sum, base, j, max_deriv, inv_pow);
      bool done = true;
      double tail = 0.0;
      for (int m = 0; m <= max_deriv; ++m) {
        const double rho = (r2_ / q) * (j + m) / (j - 1.0);
        if (rho >= 1.0) {
          done = false;
          break;
        }
        const double bound = terms[m] * rho / (1.0 - rho);
        const double rel = abs_sum[m] > 0.0 ? bound / abs_sum[m] : 0.0;
        tail = std::max(tail, rel);
        if (rel > rel_tol_) done = false;
      }
      if (done) {
        worst_tail = std::max(worst_tail, tail);
        break;
      }
    }
    if (stats) {
      stats->positive_terms = k + 1;
      stats->negative_terms = j;
      stats->tail_bound = worst_tail;
    }
    return out;
  }

  cplx value(cplx u) const { return taylor(u, 0)[0]; }

 private:
  // Adds the contribution of u^{-j}/nu_{-j} (given as `base`) to each
  // normalized derivative: C(-j, m) u^{-m} base. Returns |term| per m.
  static std::array<double, kMaxDeriv + 1> add_negative(Taylor& out, std::array<double, kMaxDeriv + 1>& abs_sum,
                                                        cplx base, std::int64_t j, int max_deriv,
                                                        const std::array<cplx, kMaxDeriv + 1>& inv_pow) {
    std::array<double, kMaxDeriv + 1> mags{};
    double binom = 1.0;  // C(j + m - 1, m)
    for (int m = 0; m <= max_deriv; ++m) {
      if (m > 0) binom *= static_cast<double>(j + m - 1) / m;
      const double sign = (m % 2 == 0) ? 1.0 : -1.0;
      const cplx t = sign * binom * base * inv_pow[m];
      out[m] += t;
      mags[m] = std::abs(t);
      abs_sum[m] += mags[m];
    }
    return mags;
  }

  double r_;
  double r2_;
  double rel_tol_;
  std::int64_t max_terms_;
};

}  // namespace bergman
