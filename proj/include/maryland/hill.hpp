#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "maryland/bisection.hpp"
#include "maryland/errors.hpp"
#include "maryland/potential.hpp"

namespace maryland {

using cplx = std::complex<double>;

/// Values at t = 1 of the solutions s, c of -y'' + q y = z y with
/// s(0) = c'(0) = 0, s'(0) = c(0) = 1.
struct TransferData {
  cplx z;
  cplx s1, ds1, c1, dc1;

  cplx wronskian() const { return c1 * ds1 - dc1 * s1; }
  cplx discriminant() const { return c1 + ds1; }
};

struct Band {
  double lo;
  double hi;

  bool contains(double x) const { return lo <= x && x <= hi; }
};

using BandList = std::vector<Band>;

namespace detail {

struct Transfer2x2 {
  cplx a11, a12, a21, a22;

  Transfer2x2 then(const Transfer2x2& next) const {
    return {next.a11 * a11 + next.a12 * a21, next.a11 * a12 + next.a12 * a22,
            next.a21 * a11 + next.a22 * a21, next.a21 * a12 + next.a22 * a22};
  }
};

// Exact propagator of (y, y') across a piece of length h on which y'' = -w y.
// All entries are even in sqrt(w), so the branch of the square root is irrelevant.
inline Transfer2x2 piece_transfer(cplx w, double h) {
  const cplx x = w * (h * h);
  cplx cos_kh, sin_kh_over_k, k_sin_kh;
  if (std::abs(x) < 1e-4) {
    const cplx x2 = x * x;
    cos_kh = 1.0 - x / 2.0 + x2 / 24.0 - x2 * x / 720.0;
    const cplx sinc = 1.0 - x / 6.0 + x2 / 120.0 - x2 * x / 5040.0;
    sin_kh_over_k = h * sinc;
    k_sin_kh = w * h * sinc;
  } else {
    const cplx k = std::sqrt(w);
    const cplx kh = k * h;
    cos_kh = std::cos(kh);
    const cplx s = std::sin(kh);
    sin_kh_over_k = s / k;
    k_sin_kh = k * s;
  }
  return {cos_kh, sin_kh_over_k, -k_sin_kh, cos_kh};
}

inline bool finite(cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

}  // namespace detail

/// Boundary values of the fundamental solutions at t = 1.
///
/// q is piecewise constant, so each piece is crossed with its exact transfer
/// matrix; the result is accurate to rounding and `tol` only guards the input.
inline TransferData integrate_fundamental(const Potential& q, cplx z, double tol = 1e-12) {
  if (!(tol > 0.0)) throw DomainError("integrate_fundamental: tol must be positive");
  const auto bp = q.breakpoints();
  const auto vals = q.values();
  detail::Transfer2x2 m{1.0, 0.0, 0.0, 1.0};
  for (std::size_t i = 0; i < vals.size(); ++i)
    m = m.then(detail::piece_transfer(z - vals[i], bp[i + 1] - bp[i]));
  TransferData t{z, m.a12, m.a22, m.a11, m.a21};
  if (!detail::finite(t.s1) || !detail::finite(t.ds1) || !detail::finite(t.c1) ||
      !detail::finite(t.dc1))
    throw OutOfRange("integrate_fundamental: non-finite solution (|z| too large)");
  return t;
}

/// Hill discriminant eta(z) = c(1;z) + s'(1;z), the trace of the monodromy.
inline cplx discriminant(const Potential& q, cplx z) {
  return integrate_fundamental(q, z).discriminant();
}

inline double discriminant(const Potential& q, double lambda) {
  return discriminant(q, cplx(lambda, 0.0)).real();
}

inline constexpr double kDirichletThreshold = 1e-10;

/// a(z) = 1 / s(1;z).
inline cplx a_coeff(const Potential& q, cplx z) {
  const cplx s1 = integrate_fundamental(q, z).s1;
  if (std::abs(s1) < kDirichletThreshold)
    throw DirichletPoint("a_coeff: s(1;z) vanishes, z is in the Dirichlet spectrum");
  return 1.0 / s1;
}

namespace detail {

inline std::vector<double> scan_grid(double lo, double hi, double step) {
  if (!(lo < hi)) throw DomainError("scan window must satisfy min < max");
  if (!(step > 0.0)) throw DomainError("scan step must be positive");
  const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / step));
  std::vector<double> grid(n + 1);
  for (std::size_t i = 0; i <= n; ++i)
    grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n);
  grid.back() = hi;
  return grid;
}

// Root of f in [lo, hi] given a sign change; falls back to the midpoint only if
// rounding hides the sign change.
template <typename F>
double edge_root(F&& f, double lo, double hi, double root_tol) {
  auto r = bisect(f, lo, hi, root_tol);
  return r ? r->x : 0.5 * (lo + hi);
}

}  // namespace detail

/// Connected components of {lambda : |eta(lambda)| <= 2} inside the window.
///
/// eta is sampled with `scan_step`; every transition is refined by bisection on
/// eta - 2 or eta + 2. A whole band falling between two samples is caught when
/// eta jumps from above 2 to below -2 (or back). Bands narrower than the step
/// and not crossing zero of eta are missed.
inline BandList hill_bands(const Potential& q, double lambda_min, double lambda_max,
                           double scan_step = 0.01, double root_tol = 1e-12) {
  const auto grid = detail::scan_grid(lambda_min, lambda_max, scan_step);
  std::vector<double> eta(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) eta[i] = discriminant(q, grid[i]);

  auto eta_minus = [&](double level) {
    return [&q, level](double x) { return discriminant(q, x) - level; };
  };

  BandList bands;
  bool open = std::abs(eta[0]) <= 2.0;
  double open_at = grid[0];
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double a = grid[i - 1], b = grid[i];
    const double ea = eta[i - 1], eb = eta[i];
    const bool in_a = std::abs(ea) <= 2.0, in_b = std::abs(eb) <= 2.0;
    if (!in_a && in_b) {
      open = true;
      open_at = detail::edge_root(eta_minus(ea > 0 ? 2.0 : -2.0), a, b, root_tol);
    } else if (in_a && !in_b) {
      const double edge = detail::edge_root(eta_minus(eb > 0 ? 2.0 : -2.0), a, b, root_tol);
      if (open && open_at < edge) bands.push_back({open_at, edge});
      open = false;
    } else if (!in_a && !in_b && (ea > 0) != (eb > 0)) {
      const double first = detail::edge_root(eta_minus(ea > 0 ? 2.0 : -2.0), a, b, root_tol);
      const double second = detail::edge_root(eta_minus(ea > 0 ? -2.0 : 2.0), a, b, root_tol);
      if (first < second) bands.push_back({first, second});
    }
  }
  if (open && open_at < grid.back()) bands.push_back({open_at, grid.back()});
  return bands;
}

/// Zeros of lambda -> s(1;lambda) in the window, sorted: the Dirichlet spectrum.
inline std::vector<double> dirichlet_points(const Potential& q, double lambda_min,
                                            double lambda_max, double root_tol = 1e-12,
                                            double scan_step = 0.01) {
  const auto grid = detail::scan_grid(lambda_min, lambda_max, scan_step);
  auto s1 = [&q](double x) { return integrate_fundamental(q, cplx(x, 0.0)).s1.real(); };
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = s1(grid[i]);

  std::vector<double> zeros;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (values[i] == 0.0) {
      zeros.push_back(grid[i]);
      continue;
    }
    if (i + 1 < grid.size() && values[i + 1] != 0.0 &&
        std::signbit(values[i]) != std::signbit(values[i + 1]))
      zeros.push_back(detail::edge_root(s1, grid[i], grid[i + 1], root_tol));
  }
  return zeros;
}

}  // namespace maryland
