// Closed-form, pushforward and Gram kernels.

#include <gtest/gtest.h>

#include <cmath>

#include "bergman/annulus_series.hpp"
#include "bergman/gram.hpp"
#include "bergman/kernels.hpp"
#include "bergman/sampling.hpp"

namespace bergman {
namespace {

cplx disc_kernel(cplx z, cplx w) {
  const cplx t = 1.0 - z * std::conj(w);
  return 1.0 / (kPi * t * t);
}

// Plain long-double Laurent sum over |k| <= n_terms.
std::complex<long double> annulus_naive(long double r, cplx u, int n_terms) {
  std::complex<long double> s = 0.0L;
  const std::complex<long double> ul(u.real(), u.imag());
  for (int k = -n_terms; k <= n_terms; ++k) {
    const long double nu = k == -1 ? 2.0L * kPi * std::log(1.0L / r)
                                   : kPi * (1.0L - std::pow(r, 2.0L * k + 2.0L)) / (k + 1.0L);
    s += std::pow(ul, k) / nu;
  }
  return s;
}

TEST(Kernels, CenterValues) {
  EXPECT_NEAR(kernel_for(Domain::disc())->diagonal(Point{0.0}), 1.0 / kPi, 1e-15);
  EXPECT_NEAR(kernel_for(Domain::ball(2))->diagonal(Point{0.0, 0.0}), 2.0 / (kPi * kPi), 1e-15);
  EXPECT_NEAR(kernel_for(Domain::ball(3))->diagonal(Point{0.0, 0.0, 0.0}), 6.0 / std::pow(kPi, 3), 1e-15);
  EXPECT_NEAR(kernel_for(Domain::polydisc(2))->diagonal(Point{0.0, 0.0}), 1.0 / (kPi * kPi), 1e-15);
}

TEST(Kernels, HermitianSymmetryAndDiagonalPositivity) {
  Rng rng(5);
  const std::vector<Domain> ds{Domain::disc(), Domain::ball(2), Domain::ball(3), Domain::polydisc(2),
                               Domain::annulus(0.5), Domain::product({Domain::disc(), Domain::annulus(0.4)}),
                               Domain::pushforward(Domain::ball(2), BiholoMap::hartogs()),
                               Domain::pushforward(Domain::ball(2), BiholoMap::zimmer())};
  for (const auto& d : ds) {
    const KernelPtr k = kernel_for(d);
    for (int i = 0; i < 50; ++i) {
      const Point z = sample_point(d, rng, 1.0, 0.05);
      const Point w = sample_point(d, rng, 1.0, 0.05);
      const cplx a = k->eval(z, w);
      const cplx b = std::conj(k->eval(w, z));
      EXPECT_LE(std::abs(a - b), 1e-12 * std::max(1.0, std::abs(a))) << to_string(d.kind());
      const cplx diag = k->eval(z, z);
      EXPECT_GT(diag.real(), 0.0);
      EXPECT_LE(std::abs(diag.imag()), 1e-12 * diag.real());
    }
  }
}

TEST(Kernels, DiscAutomorphismInvariance) {
  // K(phi z, phi w) phi'(z) conj(phi'(w)) = K(z, w) for phi(z) = (z - a)/(1 - conj(a) z).
  Rng rng(9);
  const KernelPtr k = kernel_for(Domain::disc());
  for (int i = 0; i < 100; ++i) {
    const cplx a = sample_point(Domain::disc(), rng, 0.9)[0];
    const cplx z = sample_point(Domain::disc(), rng, 0.9)[0];
    const cplx w = sample_point(Domain::disc(), rng, 0.9)[0];
    auto phi = [&](cplx x) { return (x - a) / (1.0 - std::conj(a) * x); };
    auto dphi = [&](cplx x) { return (1.0 - std::norm(a)) / std::pow(1.0 - std::conj(a) * x, 2); };
    const cplx lhs = k->eval(Point{phi(z)}, Point{phi(w)}) * dphi(z) * std::conj(dphi(w));
    const cplx rhs = k->eval(Point{z}, Point{w});
    EXPECT_LE(std::abs(lhs - rhs), 1e-10 * std::abs(rhs));
  }
}

TEST(Kernels, LinearPushforwardScalesTheKernel) {
  // z -> 2z maps the disc to the disc of radius 2, whose kernel is K(z/2, w/2)/4.
  Eigen::MatrixXcd a(1, 1);
  a(0, 0) = 2.0;
  const KernelPtr k = pushforward_kernel(kernel_for(Domain::disc()), BiholoMap::linear(a, Eigen::VectorXcd::Zero(1)));
  Rng rng(2);
  for (int i = 0; i < 100; ++i) {
    const cplx z = 2.0 * sample_point(Domain::disc(), rng)[0];
    const cplx w = 2.0 * sample_point(Domain::disc(), rng)[0];
    EXPECT_LE(std::abs(k->eval(Point{z}, Point{w}) - disc_kernel(z / 2.0, w / 2.0) / 4.0), 1e-12 * std::abs(disc_kernel(z / 2.0, w / 2.0)));
  }
  EXPECT_EQ(k->provenance().kind, Provenance::pushforward);
}

TEST(Kernels, IdentityPushforwardEqualsBase) {
  const KernelPtr base = kernel_for(Domain::ball(2));
  const KernelPtr k = pushforward_kernel(base, BiholoMap::linear(Eigen::MatrixXcd::Identity(2, 2), Eigen::VectorXcd::Zero(2)));
  Rng rng(4);
  for (int i = 0; i < 1000; ++i) {
    const Point z = sample_point(Domain::ball(2), rng);
    const Point w = sample_point(Domain::ball(2), rng);
    EXPECT_EQ(k->eval(z, w), base->eval(z, w));
  }
}

TEST(Kernels, HartogsImageOfPolydiscHasExplicitKernel) {
  // F(z1, z2) = (z1 z2, z2) on D x D: K(x, y) = K_D2(F^-1 x, F^-1 y) / (x2 conj(y2)).
  const KernelPtr k = kernel_for(Domain::pushforward(Domain::polydisc(2), BiholoMap::hartogs()));
  const Point x{cplx(0.1, 0.2), cplx(0.5, -0.3)};
  const Point y{cplx(-0.2, 0.1), cplx(0.6, 0.1)};
  const cplx expect = disc_kernel(x[0] / x[1], y[0] / y[1]) * disc_kernel(x[1], y[1]) / (x[1] * std::conj(y[1]));
  EXPECT_LE(std::abs(k->eval(x, y) - expect), 1e-13 * std::abs(expect));
}

TEST(Kernels, ProductKernelFactorizes) {
  const KernelPtr k = kernel_for(Domain::product({Domain::disc(), Domain::disc()}));
  const KernelPtr p = kernel_for(Domain::polydisc(2));
  const Point z{cplx(0.3, 0.1), cplx(-0.2, 0.5)};
  const Point w{cplx(0.1, -0.4), cplx(0.6, 0.0)};
  EXPECT_LE(std::abs(k->eval(z, w) - p->eval(z, w)), 1e-15 * std::abs(p->eval(z, w)));
}

TEST(Kernels, AnnulusSeriesMatchesNaiveLongDoubleSum) {
  for (double r : {0.2, 0.5, 0.8}) {
    const AnnulusSeries series(r);
    Rng rng(17);
    for (int i = 0; i < 40; ++i) {
      const double q = r * r + (1.0 - r * r) * (0.1 + 0.8 * std::uniform_real_distribution<double>()(rng));
      const cplx u = std::polar(q, 2.0 * kPi * std::uniform_real_distribution<double>()(rng));
      const auto ref = annulus_naive(r, u, 4000);
      const cplx got = series.value(u);
      const double scale = std::abs(annulus_naive(r, cplx(q), 4000));
      EXPECT_LE(std::abs(got - cplx(double(ref.real()), double(ref.imag()))), 1e-13 * scale) << r << " " << u;
    }
  }
}

TEST(Kernels, AnnulusSeriesRejectsOutOfRangeArguments) {
  const AnnulusSeries series(0.5);
  EXPECT_THROW(series.value(cplx(0.2)), Error);
  EXPECT_THROW(series.value(cplx(1.0)), Error);
}

TEST(Kernels, AnnulusKernelIsRealOnTheRealAxis) {
  const KernelPtr k = kernel_for(Domain::annulus(0.5));
  for (double x : {-0.9, -0.7, 0.6, 0.95}) EXPECT_EQ(k->eval(Point{cplx(x)}, Point{cplx(0.7)}).imag(), 0.0);
}

TEST(Kernels, AnnulusKernelZeroIsLocated) {
  const KernelPtr k = kernel_for(Domain::annulus(0.5));
  const KernelZero z = find_real_kernel_zero(*k, 0.7, -1.0 + 1e-6, -0.5 - 1e-6);
  EXPECT_LT(z.residual, 1e-10);
  EXPECT_LT(z.zeta[0].real(), -0.5);
  EXPECT_GT(z.zeta[0].real(), -1.0);
  EXPECT_NEAR(z.zeta[0].imag(), 0.0, 1e-12);
  EXPECT_DOUBLE_EQ(skwarczynski_rho(*k, z.z0, z.zeta), 1.0);
}

TEST(Kernels, SkwarczynskiExamples) {
  const KernelPtr k = kernel_for(Domain::disc());
  EXPECT_EQ(skwarczynski_rho(*k, Point{0.3}, Point{0.3}), 0.0);
  EXPECT_NEAR(skwarczynski_rho(*k, Point{0.0}, Point{0.5}), 0.5, 1e-15);
  EXPECT_THROW(skwarczynski_rho(*k, Point{0.0}, Point{1.5}), Error);
}

TEST(Kernels, EvalChecksDimensions) {
  try {
    kernel_for(Domain::ball(2))->eval(Point{0.1}, Point{0.1, 0.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

TEST(Kernels, NoClosedFormForPushforwardDomain) {
  EXPECT_THROW(closed_form_kernel(Domain::pushforward(Domain::ball(2), BiholoMap::hartogs())), Error);
}

TEST(Gram, MatchesClosedFormsAtLowRadius) {
  Rng rng(21);
  for (const auto& d : {Domain::disc(), Domain::ball(2), Domain::polydisc(2)}) {
    const KernelPtr exact = kernel_for(d);
    const KernelPtr gram = gram_kernel(d, 30, 40);
    EXPECT_EQ(gram->provenance().kind, Provenance::gram_numerical);
    for (int i = 0; i < 50; ++i) {
      const Point z = sample_point(d, rng, 0.5);
      const Point w = sample_point(d, rng, 0.5);
      if (norm2(z) > 0.25 || norm2(w) > 0.25) continue;
      const cplx e = exact->eval(z, w);
      EXPECT_LE(std::abs(gram->eval(z, w) - e), 1e-8 * std::abs(e));
    }
  }
}

TEST(Gram, AnnulusGramMatchesSeries) {
  const Domain d = Domain::annulus(0.5);
  const KernelPtr exact = kernel_for(d);
  const KernelPtr gram = gram_kernel(d, 40, 60);
  const Point z{std::polar(0.7, 0.3)}, w{std::polar(0.72, -1.1)};
  const double scale = std::sqrt(exact->diagonal(z) * exact->diagonal(w));
  EXPECT_LE(std::abs(gram->eval(z, w) - exact->eval(z, w)), 1e-9 * scale);
}

TEST(Gram, HartogsImageUsesPulledBackQuadrature) {
  const Domain d = Domain::pushforward(Domain::polydisc(2), BiholoMap::hartogs());
  const KernelPtr exact = kernel_for(d);
  const KernelPtr gram = gram_kernel(d, 16, 24);
  const Point x{cplx(0.05, 0.02), cplx(0.3, 0.1)};
  const cplx e = exact->eval(x, x);
  EXPECT_LE(std::abs(gram->eval(x, x) - e), 1e-6 * std::abs(e));
}

TEST(Gram, PuncturedDiscIsBitIdenticalToDisc) {
  const GramBasis a = build_gram_basis(Domain::disc(), 30, 32);
  const GramBasis b = build_gram_basis(Domain::punctured_disc(), 30, 32);
  EXPECT_TRUE(bitwise_equal(a, b));
}

TEST(Gram, DiagonalForRadialDomains) {
  EXPECT_TRUE(build_gram_basis(Domain::ball(2), 10, 12).diagonal);
  EXPECT_TRUE(build_gram_basis(Domain::annulus(0.5), 10, 12).diagonal);
}

TEST(Gram, RefusesInsufficientQuadrature) {
  EXPECT_THROW(build_gram_basis(Domain::disc(), 30, 4), Error);
}

}  // namespace
}  // namespace bergman
