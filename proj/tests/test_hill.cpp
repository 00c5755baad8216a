#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "maryland/hill.hpp"

using namespace maryland;

namespace {

double eta_free(double lambda) {
  return lambda >= 0.0 ? 2.0 * std::cos(std::sqrt(lambda)) : 2.0 * std::cosh(std::sqrt(-lambda));
}

Potential step_potential() { return Potential::piecewise({0.0, 0.5, 1.0}, {0.0, 30.0}); }

Potential three_piece() { return Potential::piecewise({0.0, 0.2, 0.7, 1.0}, {-4.0, 12.5, 3.0}); }

}  // namespace

TEST(Hill, ZeroPotentialDiscriminantMatchesClosedForm) {
  const Potential q = Potential::zero();
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double lambda = -50.0 + 250.0 * i / 199.0;
    worst = std::max(worst, std::abs(discriminant(q, lambda) - eta_free(lambda)));
  }
  EXPECT_LE(worst, 1e-8);
}

TEST(Hill, ZeroPotentialFundamentalSolutions) {
  const Potential q = Potential::zero();
  for (double lambda : {-7.3, -0.5, 1e-9, 0.3, 4.0, 55.0}) {
    const TransferData t = integrate_fundamental(q, cplx(lambda, 0.0));
    const cplx k = std::sqrt(cplx(lambda, 0.0));
    EXPECT_NEAR(std::abs(t.c1 - std::cos(k)), 0.0, 1e-12);
    const cplx s = std::abs(k) < 1e-6 ? cplx(1.0) : std::sin(k) / k;
    EXPECT_NEAR(std::abs(t.s1 - s), 0.0, 1e-12);
  }
}

TEST(Hill, ConstantPotentialShiftsSpectralParameter) {
  const Potential q = Potential::constant(3.5);
  for (double lambda : {-20.0, 0.0, 3.5, 7.25, 60.0})
    EXPECT_NEAR(discriminant(q, lambda), eta_free(lambda - 3.5), 1e-10 * std::max(1.0, std::abs(eta_free(lambda - 3.5))));
}

TEST(Hill, WronskianIsOneForRandomComplexZ) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> re(-50.0, 200.0), im(-10.0, 10.0);
  for (const Potential& q : {Potential::zero(), Potential::constant(-2.0), step_potential(), three_piece()}) {
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const cplx z(re(rng), im(rng));
      worst = std::max(worst, std::abs(integrate_fundamental(q, z).wronskian() - 1.0));
    }
    EXPECT_LE(worst, 1e-8) << Potential::kind_name(q.kind());
  }
}

TEST(Hill, RefinementLeavesDiscriminantUnchanged) {
  const Potential q = three_piece();
  const Potential fine = q.refined().refined();
  EXPECT_EQ(fine.pieces(), 4 * q.pieces());
  for (double lambda : {-10.0, 0.0, 2.5, 17.0, 90.0}) {
    const double coarse = discriminant(q, lambda);
    EXPECT_NEAR(discriminant(fine, lambda), coarse, 1e-11 * std::max(1.0, std::abs(coarse)));
  }
}

TEST(Hill, DiscriminantIsRealOnRealAxis) {
  const Potential q = step_potential();
  for (double lambda : {-3.0, 5.0, 44.0}) EXPECT_EQ(discriminant(q, cplx(lambda, 0.0)).imag(), 0.0);
}

TEST(Hill, BandsOfZeroPotential) {
  const BandList bands = hill_bands(Potential::zero(), -5.0, 50.0);
  ASSERT_EQ(bands.size(), 1u);
  EXPECT_NEAR(bands[0].lo, 0.0, 1e-10);
  EXPECT_EQ(bands[0].hi, 50.0);
  EXPECT_TRUE(hill_bands(Potential::zero(), -5.0, -1.0).empty());
}

TEST(Hill, ConstantPotentialShiftsBands) {
  const BandList base = hill_bands(Potential::zero(), -5.0, 50.0);
  const BandList shifted = hill_bands(Potential::constant(2.0), -3.0, 52.0);
  ASSERT_EQ(shifted.size(), base.size());
  EXPECT_NEAR(shifted[0].lo, base[0].lo + 2.0, 1e-10);
}

TEST(Hill, BandEdgesOfStepPotential) {
  const Potential q = step_potential();
  const BandList bands = hill_bands(q, -2.0, 200.0);
  ASSERT_GE(bands.size(), 3u);
  for (std::size_t i = 0; i < bands.size(); ++i) {
    const Band& b = bands[i];
    ASSERT_LT(b.lo, b.hi);
    if (b.lo > -2.0) {
      EXPECT_NEAR(std::abs(discriminant(q, b.lo)), 2.0, 1e-8);
    }
    if (b.hi < 200.0) {
      EXPECT_NEAR(std::abs(discriminant(q, b.hi)), 2.0, 1e-8);
    }
    EXPECT_LT(std::abs(discriminant(q, 0.5 * (b.lo + b.hi))), 2.0);
    if (i + 1 < bands.size()) {
      ASSERT_LT(b.hi, bands[i + 1].lo);
      EXPECT_GT(std::abs(discriminant(q, 0.5 * (b.hi + bands[i + 1].lo))), 2.0);
    }
  }
}

TEST(Hill, NarrowBandBetweenScanPointsIsFound) {
  const Potential q = step_potential();
  const BandList fine = hill_bands(q, -2.0, 120.0, 0.001);
  const BandList coarse = hill_bands(q, -2.0, 120.0, 0.5);
  ASSERT_EQ(fine.size(), coarse.size());
  for (std::size_t i = 0; i < fine.size(); ++i) {
    EXPECT_NEAR(fine[i].lo, coarse[i].lo, 1e-9);
    EXPECT_NEAR(fine[i].hi, coarse[i].hi, 1e-9);
  }
}

TEST(Hill, DirichletPointsOfZeroPotential) {
  const auto points = dirichlet_points(Potential::zero(), -5.0, 400.0);
  ASSERT_EQ(points.size(), 6u);
  for (std::size_t k = 0; k < points.size(); ++k) {
    const double expected = std::pow((k + 1) * std::numbers::pi, 2);
    EXPECT_NEAR(points[k], expected, 1e-9 * expected);
    EXPECT_GE(std::abs(discriminant(Potential::zero(), points[k])), 2.0 - 1e-6);
  }
}

TEST(Hill, DirichletPointsLieOutsideOpenBands) {
  for (const Potential& q : {step_potential(), three_piece()}) {
    for (double x : dirichlet_points(q, -10.0, 300.0)) {
      EXPECT_NEAR(std::abs(integrate_fundamental(q, cplx(x, 0.0)).s1), 0.0, 1e-10);
      EXPECT_GE(std::abs(discriminant(q, x)), 2.0 - 1e-6);
    }
  }
}

TEST(Hill, ACoefficientRaisesAtDirichletPoint) {
  const double pi2 = std::numbers::pi * std::numbers::pi;
  EXPECT_THROW(a_coeff(Potential::zero(), cplx(pi2, 0.0)), DirichletPoint);
  EXPECT_NO_THROW(a_coeff(Potential::zero(), cplx(pi2 + 1e-3, 0.0)));
  EXPECT_NEAR(std::abs(a_coeff(Potential::zero(), cplx(std::pow(std::numbers::pi / 2, 2), 0.0))),
              std::numbers::pi / 2, 1e-12);
}

TEST(Hill, OverflowIsReported) {
  EXPECT_THROW(integrate_fundamental(Potential::zero(), cplx(-1e7, 0.0)), OutOfRange);
}

TEST(Hill, PotentialValidation) {
  EXPECT_THROW(Potential::piecewise({0.0, 0.6, 0.4, 1.0}, {1.0, 2.0, 3.0}), DomainError);
  EXPECT_THROW(Potential::piecewise({0.0, 1.0}, {1.0, 2.0}), DomainError);
  EXPECT_THROW(Potential::piecewise({0.1, 1.0}, {1.0}), DomainError);
  EXPECT_THROW(Potential::constant(std::nan("")), DomainError);
  EXPECT_DOUBLE_EQ(three_piece().at(0.5), 12.5);
}
