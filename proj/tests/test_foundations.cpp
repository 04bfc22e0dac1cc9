// Jets, domains and quadrature.

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "bergman/domains.hpp"
#include "bergman/jet.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/sampling.hpp"

namespace bergman {
namespace {

// Taylor coefficient of a one-variable jet, extracted by exponent.
cplx c1(const Jet& j, int k) {
  const int e[1] = {k};
  return j.coeff(e);
}

TEST(Jet, LayoutSizeIsBinomial) {
  // C(m + 4, 4) monomials of total degree <= 4 in m variables.
  EXPECT_EQ(JetLayout::get(1)->size(), 5);
  EXPECT_EQ(JetLayout::get(2)->size(), 15);
  EXPECT_EQ(JetLayout::get(4)->size(), 70);
  EXPECT_EQ(JetLayout::get(6)->size(), 210);
}

TEST(Jet, ProductTruncatesAtOrderFour) {
  const auto l = JetLayout::get(1);
  const Jet x = Jet::variable(l, 0, 0.0);
  const Jet p = (1.0 + x) * (1.0 + x) * (1.0 + x) * (1.0 + x) * (1.0 + x);
  const double binom[] = {1, 5, 10, 10, 5};
  for (int k = 0; k <= 4; ++k) EXPECT_DOUBLE_EQ(c1(p, k).real(), binom[k]);
}

TEST(Jet, ElementaryFunctionsMatchTaylorSeries) {
  const auto l = JetLayout::get(1);
  const double x0 = 0.7;
  const Jet x = Jet::variable(l, 0, x0);
  const Jet e = exp(x);
  const Jet lg = log(x);
  const Jet r = reciprocal(x);
  const Jet s = sqrt(x);
  double fact = 1.0;
  for (int k = 0; k <= 4; ++k) {
    if (k > 0) fact *= k;
    EXPECT_NEAR(c1(e, k).real(), std::exp(x0) / fact, 1e-14);
    EXPECT_NEAR(c1(r, k).real(), std::pow(-1.0, k) / std::pow(x0, k + 1), 1e-12);
    if (k > 0) EXPECT_NEAR(c1(lg, k).real(), std::pow(-1.0, k + 1) / (k * std::pow(x0, k)), 1e-13);
  }
  EXPECT_NEAR(c1(lg, 0).real(), std::log(x0), 1e-15);
  // sqrt(x0 + t) = sqrt(x0) (1 + t/(2 x0) - t^2/(8 x0^2) + ...)
  EXPECT_NEAR(c1(s, 1).real(), 0.5 / std::sqrt(x0), 1e-14);
  EXPECT_NEAR(c1(s, 2).real(), -0.125 / std::pow(x0, 1.5), 1e-14);
}

TEST(Jet, ReciprocalAndLogSurviveExtremeConstants) {
  // x = x0 (1 + t): every coefficient of 1/x and log x is representable even
  // though x0^5 is not.
  const auto l = JetLayout::get(1);
  for (double x0 : {1e-200, 1e250}) {
    const Jet x = x0 * (1.0 + Jet::variable(l, 0, 0.0));
    const Jet r = reciprocal(x);
    const Jet lg = log(x);
    for (int k = 0; k <= 4; ++k) {
      EXPECT_NEAR(c1(r, k).real() * x0, std::pow(-1.0, k), 1e-14) << x0 << " " << k;
      if (k > 0) EXPECT_NEAR(c1(lg, k).real(), std::pow(-1.0, k + 1) / k, 1e-14);
    }
    EXPECT_NEAR(c1(lg, 0).real(), std::log(x0), 1e-12);
  }
}

TEST(Jet, DivisionInvertsMultiplication) {
  const auto l = JetLayout::get(3);
  const Jet a = Jet::variable(l, 0, cplx(0.3, 0.1)) + 2.0 * Jet::variable(l, 1, 0.2);
  const Jet b = 1.5 + Jet::variable(l, 2, cplx(0.0, 0.4)) * Jet::variable(l, 0, 0.3);
  const Jet back = (a / b) * b;
  for (int i = 0; i < l->size(); ++i) EXPECT_NEAR(std::abs(back.coeffs()[i] - a.coeffs()[i]), 0.0, 1e-14);
}

TEST(Jet, MixedCoefficientOfProductOfVariables) {
  const auto l = JetLayout::get(2);
  const Jet x = Jet::variable(l, 0, 2.0);
  const Jet y = Jet::variable(l, 1, 3.0);
  const Jet f = x * x * y;  // 12 + 12 dx + 4 dy + 3 dx^2 + 4 dx dy + dx^2 dy
  const int e21[2] = {2, 1}, e11[2] = {1, 1}, e00[2] = {0, 0};
  EXPECT_DOUBLE_EQ(f.coeff(e00).real(), 12.0);
  EXPECT_DOUBLE_EQ(f.coeff(e11).real(), 4.0);
  EXPECT_DOUBLE_EQ(f.coeff(e21).real(), 1.0);
}

TEST(Jet, IpowHandlesNegativeExponents) {
  EXPECT_NEAR(std::abs(ipow(cplx(0.5, 0.5), -3) * ipow(cplx(0.5, 0.5), 3) - 1.0), 0.0, 1e-15);
  EXPECT_EQ(ipow(cplx(2.0), 0), cplx(1.0));
}

TEST(Jet, TooManyVariablesIsAJetFailure) {
  try {
    JetLayout::get(JetLayout::kMaxVars + 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::JetFailure);
  }
}

TEST(Domains, MembershipExamples) {
  EXPECT_TRUE(contains(Domain::disc(), Point{0.0}));
  EXPECT_FALSE(contains(Domain::annulus(0.5), Point{0.25}));
  const Domain h = Domain::pushforward(Domain::ball(2), BiholoMap::hartogs());
  const Domain hartogs_tri = Domain::pushforward(
      Domain::product({Domain::disc(), Domain::punctured_disc()}), BiholoMap::hartogs());
  EXPECT_TRUE(contains(hartogs_tri, Point{0.25, 0.5}));
  EXPECT_FALSE(contains(hartogs_tri, Point{0.6, 0.5}));
  EXPECT_FALSE(contains(Domain::punctured_disc(), Point{0.0}));
  EXPECT_FALSE(contains(Domain::disc(), Point{1.0}));
  EXPECT_FALSE(contains(Domain::ball(2), Point{0.8, 0.6}));
  EXPECT_TRUE(contains(h, Point{0.1, 0.5}));
}

TEST(Domains, BoundaryDistanceExamples) {
  EXPECT_DOUBLE_EQ(boundary_distance(Domain::disc(), Point{0.0}), 1.0);
  EXPECT_DOUBLE_EQ(boundary_distance(Domain::annulus(0.5), Point{0.75}), 0.25);
  EXPECT_NEAR(boundary_distance(Domain::ball(2), Point{0.6, 0.0}), 0.4, 1e-15);
  EXPECT_NEAR(boundary_distance(Domain::polydisc(2), Point{0.5, cplx(0.0, 0.9)}), 0.1, 1e-15);
  EXPECT_NEAR(boundary_distance(Domain::punctured_disc(), Point{0.3}), 0.3, 1e-15);
}

TEST(Domains, BoundaryDistanceIsOneLipschitzAlongSegments) {
  Rng rng(7);
  const std::vector<Domain> ds{Domain::disc(), Domain::ball(2), Domain::polydisc(2), Domain::annulus(0.4),
                               Domain::product({Domain::disc(), Domain::annulus(0.5)})};
  for (const auto& d : ds) {
    for (int t = 0; t < 50; ++t) {
      const Point a = sample_point(d, rng);
      const Point b = sample_point(d, rng);
      Point prev = a;
      for (int s = 1; s <= 20; ++s) {
        Point q(a.size());
        for (std::size_t j = 0; j < a.size(); ++j) q[j] = a[j] + (b[j] - a[j]) * (s / 20.0);
        if (!contains(d, q)) break;
        Point diff(a.size());
        for (std::size_t j = 0; j < a.size(); ++j) diff[j] = q[j] - prev[j];
        EXPECT_LE(std::abs(boundary_distance(d, q) - boundary_distance(d, prev)), std::sqrt(norm2(diff)) + 1e-14);
        prev = q;
      }
    }
  }
}

TEST(Domains, PushforwardMembershipRoundTrips) {
  Rng rng(11);
  const Domain base = Domain::ball(2);
  for (const BiholoMap& f : {BiholoMap::hartogs(), BiholoMap::zimmer()}) {
    const Domain image = Domain::pushforward(base, f);
    for (int i = 0; i < 1000; ++i) {
      const Point z = sample_point(base, rng);
      if (z[1] == cplx(0.0)) continue;
      const Point x = f.apply<cplx>(z);
      ASSERT_TRUE(contains(image, x));
      const Point back = f.inverse<cplx>(x);
      EXPECT_NEAR(std::sqrt(norm2(Point{back[0] - z[0], back[1] - z[1]})), 0.0, 1e-12);
    }
  }
}

TEST(Domains, ConstructorsRejectBadParameters) {
  EXPECT_THROW(Domain::annulus(1.0), Error);
  EXPECT_THROW(Domain::annulus(0.0), Error);
  EXPECT_THROW(Domain::ball(0), Error);
  EXPECT_THROW(Domain::product({}), Error);
  EXPECT_THROW(Domain::pushforward(Domain::disc(), BiholoMap::hartogs()), Error);
  EXPECT_THROW(BiholoMap::linear(Eigen::MatrixXcd::Zero(2, 2), Eigen::VectorXcd::Zero(2)), Error);
}

TEST(Domains, MapInverseFailsWhereNotInvertible) {
  try {
    BiholoMap::hartogs().inverse<cplx>(Point{0.1, 0.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MapNotInvertibleAtPoint);
  }
}

TEST(Quadrature, GaussLegendreIntegratesPolynomialsExactly) {
  const auto gl = gauss_legendre(10, -1.0, 2.0);
  double s = 0.0;
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) s += gl.weights[i] * std::pow(gl.nodes[i], 19);
  EXPECT_NEAR(s, (std::pow(2.0, 20) - 1.0) / 20.0, 1e-9);
}

TEST(Quadrature, AreasOfModelDomains) {
  EXPECT_NEAR(quadrature(Domain::disc(), 40).sum_weights(), kPi, 1e-10);
  EXPECT_NEAR(quadrature(Domain::annulus(0.5), 40).sum_weights(), 0.75 * kPi, 1e-10);
  EXPECT_NEAR(quadrature(Domain::ball(2), 20).sum_weights(), kPi * kPi / 2.0, 1e-10);
  EXPECT_NEAR(quadrature(Domain::ball(3), 12).sum_weights(), std::pow(kPi, 3) / 6.0, 1e-10);
  EXPECT_NEAR(quadrature(Domain::polydisc(2), 20).sum_weights(), kPi * kPi, 1e-10);
  EXPECT_NEAR(quadrature(Domain::annulus(0.2), 40).sum_weights(), kPi * (1.0 - 0.04), 1e-10);
}

TEST(Quadrature, PuncturedDiscSharesTheDiscRule) {
  const auto a = quadrature(Domain::disc(), 24);
  const auto b = quadrature(Domain::punctured_disc(), 24);
  ASSERT_EQ(a.radial().size(), b.radial().size());
  for (std::size_t i = 0; i < a.radial().size(); ++i) {
    EXPECT_EQ(a.radial()[i].weight, b.radial()[i].weight);
    EXPECT_EQ(a.radial()[i].moduli, b.radial()[i].moduli);
  }
}

TEST(Quadrature, MonomialInnerProductsOnTheDisc) {
  const auto rule = quadrature(Domain::disc(), 20);
  for (int a = 0; a <= 6; ++a) {
    for (int b = 0; b <= 6; ++b) {
      cplx s = 0.0;
      rule.for_each([&](const Point& z, double w) { s += w * ipow(z[0], a) * ipow(std::conj(z[0]), b); });
      const double expect = a == b ? kPi / (a + 1.0) : 0.0;
      EXPECT_NEAR(std::abs(s - expect), 0.0, 1e-10 * std::max(1.0, expect)) << a << "," << b;
    }
  }
}

TEST(Quadrature, MonomialNormsOnAnnulusAndBall) {
  // Annulus: int |z|^{2k} = pi (1 - r^{2k+2})/(k+1), and 2 pi log(1/r) at k = -1.
  const double r = 0.5;
  const auto ann = quadrature(Domain::annulus(r), 40);
  for (int k = -4; k <= 6; ++k) {
    double s = 0.0;
    ann.for_each_radial([&](const Point& z, double w) { s += w * std::pow(std::abs(z[0]), 2 * k); });
    const double expect = k == -1 ? 2 * kPi * std::log(1 / r) : kPi * (1 - std::pow(r, 2 * k + 2)) / (k + 1);
    EXPECT_NEAR(s / expect, 1.0, 1e-10) << k;
  }
  // Ball(2): int |z1|^{2a}|z2|^{2b} = pi^2 a! b! / (a + b + 2)!
  const auto ball = quadrature(Domain::ball(2), 20);
  auto fact = [](int n) { return std::tgamma(n + 1.0); };
  for (int a = 0; a <= 4; ++a) {
    for (int b = 0; b <= 4; ++b) {
      double s = 0.0;
      ball.for_each_radial([&](const Point& z, double w) {
        s += w * std::pow(std::abs(z[0]), 2 * a) * std::pow(std::abs(z[1]), 2 * b);
      });
      EXPECT_NEAR(s / (kPi * kPi * fact(a) * fact(b) / fact(a + b + 2)), 1.0, 1e-10);
    }
  }
  // int_disc |z|^2 = pi/2
  double s = 0.0;
  quadrature(Domain::disc(), 40).for_each_radial([&](const Point& z, double w) { s += w * std::norm(z[0]); });
  EXPECT_NEAR(s, kPi / 2, 1e-12);
}

TEST(Quadrature, PushforwardPullsBackWithJacobian) {
  // Area of the Hartogs image of D x D is int |z2|^2 over the bidisc = pi^2/2.
  const Domain d = Domain::pushforward(Domain::polydisc(2), BiholoMap::hartogs());
  EXPECT_NEAR(quadrature(d, 20).sum_weights(), kPi * kPi / 2.0, 1e-10);
  // A linear map scales volume by |det A|^2.
  Eigen::MatrixXcd a(1, 1);
  a(0, 0) = cplx(0.0, 2.0);
  const Domain big = Domain::pushforward(Domain::disc(), BiholoMap::linear(a, Eigen::VectorXcd::Constant(1, 0.3)));
  EXPECT_NEAR(quadrature(big, 20).sum_weights(), 4.0 * kPi, 1e-10);
}

TEST(Quadrature, WeightsBoundedByCircumscribingBox) {
  for (const auto& d : {Domain::disc(), Domain::ball(2), Domain::annulus(0.3), Domain::polydisc(2)}) {
    const double r = d.circumscribing_radius();
    EXPECT_LE(quadrature(d, 10).sum_weights(), std::pow(2 * r, 2 * d.dim()));
  }
}

TEST(Sampling, PointsAreInsideAndDirectionsAreUnit) {
  Rng rng(3);
  const Domain d = Domain::annulus(0.5);
  for (int i = 0; i < 200; ++i) {
    const Point z = sample_point(d, rng, 1.0, 0.02);
    EXPECT_TRUE(contains(d, z));
    EXPECT_GE(boundary_distance(d, z), 0.02);
    EXPECT_NEAR(norm2(sample_direction(3, rng)), 1.0, 1e-14);
  }
}

TEST(Sampling, SameSeedSameSequence) {
  Rng a(42), b(42);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(sample_point(Domain::ball(3), a), sample_point(Domain::ball(3), b));
}

}  // namespace
}  // namespace bergman
