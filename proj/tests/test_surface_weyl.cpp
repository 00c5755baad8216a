#include <fftw3.h>
#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "maryland/spectrum.hpp"
#include "maryland/surface_weyl.hpp"

using namespace maryland;

namespace {

ModelParams desk() {
  ModelParams p;
  p.d1 = 1;
  p.d2 = 1;
  p.g = 1.0;
  p.omega = {0.6180339887498949};
  p.phi = 0.1;
  return p;
}

ModelParams desk_primed() { return primed_params(desk()); }

// Coefficients c(p) = N^{-1} sum_k f(k) e^{-i p k} via FFTW's forward transform.
std::vector<cplx> fftw_coefficients(const std::vector<cplx>& samples) {
  const int n = static_cast<int>(samples.size());
  std::vector<cplx> in(samples), out(samples.size());
  fftw_plan plan = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(in.data()),
                                    reinterpret_cast<fftw_complex*>(out.data()), FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  for (auto& c : out) c /= static_cast<double>(n);
  return out;
}

}  // namespace

TEST(SurfaceWeyl, SymbolIsHerglotzAndCayleyContracts) {
  const ModelParams p = desk_primed();
  const Potential q = Potential::zero();
  const TorusGrid grid(1, 128);
  for (cplx z : {cplx(-3.0, 0.1), cplx(-0.5, 0.5), cplx(1.5, 0.2), cplx(5.0, 1.0), cplx(30.0, 0.3)}) {
    const SurfaceSymbol symbol(p, q, z);
    double sup_b = 0.0;
    for (cplx n : symbol.sample(grid)) {
      EXPECT_GT(n.imag(), 0.0) << z;
      sup_b = std::max(sup_b, std::abs(cayley(p.g, n)));
    }
    EXPECT_LT(sup_b, 1.0) << z;
  }
}

TEST(SurfaceWeyl, CayleyIsUnimodularInGaps) {
  const ModelParams p = desk_primed();
  const TorusGrid grid(1, 64);
  for (double lambda : {-4.0, -1.0, -0.2}) {
    const SurfaceSymbol symbol(p, Potential::zero(), cplx(lambda, 0.0));
    for (cplx n : symbol.sample(grid)) EXPECT_NEAR(std::abs(cayley(p.g, n)), 1.0, 1e-12);
  }
}

TEST(SurfaceWeyl, SymbolDependsOnlyOnDeltaOfK) {
  const ModelParams p = desk_primed();
  const std::vector<double> k{0.7}, minus_k{-0.7};
  const cplx z(-2.0, 0.0);
  EXPECT_NEAR(std::abs(n_symbol(p, Potential::zero(), k, z) - n_symbol(p, Potential::zero(), minus_k, z)), 0.0,
              1e-14);
}

TEST(SurfaceWeyl, FourierCoefficientsMatchFftw) {
  const ModelParams p = desk_primed();
  const TorusGrid grid(1, 256);
  const auto samples = SurfaceSymbol(p, Potential::zero(), cplx(-1.3, 0.0)).sample(grid);
  const auto ours = fourier_coefficients(samples, grid, 10);
  const auto ref = fftw_coefficients(samples);
  ASSERT_EQ(ours.size(), 21u);
  for (int off = -10; off <= 10; ++off) {
    const cplx expected = ref[static_cast<std::size_t>((off + 256) % 256)];
    EXPECT_NEAR(std::abs(ours[static_cast<std::size_t>(off + 10)] - expected), 0.0, 1e-13) << off;
    const std::vector<int> m{off};
    EXPECT_NEAR(std::abs(n_matrix_element(p, Potential::zero(), m, cplx(-1.3, 0.0), grid) - expected), 0.0, 1e-13);
  }
}

TEST(SurfaceWeyl, SeparableTransformMatchesDirectSum) {
  ModelParams p;
  p.d1 = 1;
  p.d2 = 2;
  p.g = 1.0;
  p.omega = {0.6180339887498949, 0.4142135623730951};
  p.phi = 0.13;
  const TorusGrid grid(2, 16);
  const auto samples = SurfaceSymbol(p, Potential::zero(), cplx(-2.0, 0.0)).sample(grid);
  const auto coeff = fourier_coefficients(samples, grid, 2);
  for_each_in_box(2, 2, [&](std::span<const int> off) {
    cplx direct = 0.0;
    std::size_t idx = 0;
    grid.for_each_node([&](std::span<const double> k) {
      direct += samples[idx++] * std::polar(1.0, -(off[0] * k[0] + off[1] * k[1]));
    });
    direct /= static_cast<double>(grid.node_count());
    EXPECT_NEAR(std::abs(coeff[box_index(off, 2)] - direct), 0.0, 1e-13);
  });
}

TEST(SurfaceWeyl, WeylApplyMatchesBoxOperator) {
  const ModelParams p = desk();
  const Potential q = Potential::constant(0.7);
  const double lambda = 2.2;
  LatticeFunction xi;
  xi[{0, 0}] = 1.0;
  xi[{1, -1}] = -0.5;
  xi[{0, 2}] = 0.25;
  const LatticeFunction out = weyl_apply(p, q, cplx(lambda, 0.0), xi);
  const auto op = full_box_operator(q, lambda, 2, 2, [](std::span<const int>) { return 0.0; });
  Eigen::VectorXd v = Eigen::VectorXd::Zero(op.cols());
  for (const auto& [site, value] : xi) v[static_cast<Eigen::Index>(box_index(site, 2))] = value.real();
  const Eigen::VectorXd w = op * v;
  for_each_in_box(2, 2, [&](std::span<const int> m) {
    const Site s(m.begin(), m.end());
    const auto it = out.find(s);
    const double expected = it == out.end() ? 0.0 : it->second.real();
    EXPECT_NEAR(w[static_cast<Eigen::Index>(box_index(m, 2))], expected, 1e-13);
  });
}

TEST(SurfaceWeyl, SigmaMonotoneAndBounded) {
  const ModelParams p = desk_primed();
  const SigmaTable t = sigma_table(p, Potential::zero(), -5.0, -0.1, 40, TorusGrid(1, 512));
  EXPECT_TRUE(t.strictly_increasing());
  EXPECT_TRUE(t.within_range());
  EXPECT_GT(t.sigma.front(), 0.0);
  EXPECT_LT(t.sigma.back(), std::numbers::pi / 2);
}

TEST(SurfaceWeyl, SigmaDerivativeMatchesQuadrature) {
  const ModelParams p = desk_primed();
  const TorusGrid grid(1, 512);
  for (double lambda : {-4.0, -2.0, -0.8}) {
    const double h = 1e-4;
    const double fd = (sigma(p, Potential::zero(), lambda + h, grid) - sigma(p, Potential::zero(), lambda - h, grid)) /
                      (2.0 * h);
    const double quad = sigma_derivative_quadrature(p, Potential::zero(), lambda, 1e-5, grid);
    EXPECT_GT(quad, 0.0);
    EXPECT_NEAR(fd, quad, 1e-4 * std::abs(quad)) << lambda;
  }
}

TEST(SurfaceWeyl, F0EqualsTwoISigmaOnRealAxis) {
  const ModelParams p = desk_primed();
  const TorusGrid grid(1, 512);
  for (double lambda : {-4.5, -1.7, -0.3}) {
    const cplx f = f0(p, Potential::zero(), cplx(lambda, 0.0), grid);
    const double s = sigma(p, Potential::zero(), lambda, grid);
    EXPECT_NEAR(std::abs(f - cplx(0.0, 2.0 * s)), 0.0, 1e-10);
  }
}

TEST(SurfaceWeyl, F0HasNegativeRealPartInUpperHalfPlane) {
  const ModelParams p = desk_primed();
  const TorusGrid grid(1, 512);
  for (cplx z : {cplx(-4.0, 0.05), cplx(-2.0, 0.1), cplx(-0.5, 0.02)})
    EXPECT_LT(f0(p, Potential::zero(), z, grid).real(), 0.0) << z;
}

TEST(SurfaceWeyl, F0RejectsWideStrip) {
  const ModelParams p = desk_primed();
  EXPECT_THROW(f0(p, Potential::zero(), cplx(0.5, 0.01), TorusGrid(1, 64)), BranchViolation);
}

TEST(SurfaceWeyl, CFunctionIsUnimodularForRealSymbol) {
  for (double n : {-5.0, -0.3, 0.0, 2.0, 40.0}) EXPECT_NEAR(std::abs(c_function(0.8, n)), 1.0, 1e-15);
  EXPECT_LT(std::abs(c_function(0.8, cplx(0.4, 0.2))), 1.0);
}

TEST(SurfaceWeyl, GapOnlyQuantitiesRejectBands) {
  const ModelParams p = desk_primed();
  EXPECT_THROW(sigma(p, Potential::zero(), 1.0, TorusGrid(1, 64)), GapViolation);
  EXPECT_THROW(sigma(p, Potential::zero(), 0.0, TorusGrid(1, 64)), GapViolation);
  ModelParams negative = desk();
  negative.g = -1.0;
  EXPECT_THROW(sigma(negative, Potential::zero(), -1.0, TorusGrid(1, 64)), DomainError);
  EXPECT_THROW(SurfaceSymbol(p, Potential::zero(), cplx(std::numbers::pi * std::numbers::pi, 0.0)), DirichletPoint);
}
