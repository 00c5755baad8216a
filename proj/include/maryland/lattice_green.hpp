#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "maryland/errors.hpp"
#include "maryland/lattice_box.hpp"
#include "maryland/summation.hpp"

namespace maryland {

using cplx = std::complex<double>;

/// Uniform grid on the torus [0, 2pi)^dimension with nodes 2 pi j / N.
class TorusGrid {
 public:
  static constexpr std::size_t kNodeBudget = std::size_t{1} << 24;

  TorusGrid(int dimension, int points_per_axis)
      : dimension_(dimension), points_(points_per_axis) {
    if (dimension < 1) throw DomainError("TorusGrid: dimension must be positive");
    if (points_per_axis < 4) throw DomainError("TorusGrid: need at least 4 points per axis");
    std::size_t n = 1;
    for (int i = 0; i < dimension; ++i) {
      n *= static_cast<std::size_t>(points_per_axis);
      if (n > kNodeBudget) throw DomainError("TorusGrid: node count exceeds budget");
    }
    nodes_ = n;
  }

  /// 512 points per axis up to dimension 2, 128 in dimension 3, 32 beyond.
  static int default_points(int dimension) {
    return dimension <= 2 ? 512 : dimension == 3 ? 128 : 32;
  }

  static TorusGrid with_default_points(int dimension) {
    return TorusGrid(dimension, default_points(dimension));
  }

  int dimension() const { return dimension_; }
  int points_per_axis() const { return points_; }
  std::size_t node_count() const { return nodes_; }

  double phase(int j) const {
    return 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(points_);
  }

  /// Calls f(k) for every node, lexicographic in the axis indices.
  template <typename F>
  void for_each_node(F&& f) const {
    std::vector<int> idx(static_cast<std::size_t>(dimension_), 0);
    std::vector<double> k(static_cast<std::size_t>(dimension_), 0.0);
    while (true) {
      for (std::size_t a = 0; a < idx.size(); ++a) k[a] = phase(idx[a]);
      f(std::span<const double>(k));
      int axis = dimension_ - 1;
      while (axis >= 0 && idx[static_cast<std::size_t>(axis)] == points_ - 1) {
        idx[static_cast<std::size_t>(axis)] = 0;
        --axis;
      }
      if (axis < 0) return;
      ++idx[static_cast<std::size_t>(axis)];
    }
  }

 private:
  int dimension_;
  int points_;
  std::size_t nodes_;
};

/// Symbol of the lattice Laplacian: sum_j 2 cos k_j.
inline double symbol_delta(std::span<const double> k) {
  double s = 0.0;
  for (double kj : k) s += 2.0 * std::cos(kj);
  return s;
}

inline constexpr double kSpectrumMargin = 1e-6;
inline constexpr int kMaxGreenDimension = 3;

namespace detail {

// Sum over the product grid of 1 / (sum_j c[i_j] - lambda), c = 2 cos(phase).
template <typename T>
T green_sum(int n, const std::vector<double>& c, T lambda) {
  const auto N = c.size();
  CompensatedSum<T> acc;
  if (n == 1) {
    for (std::size_t i = 0; i < N; ++i) acc.add(T(1) / (c[i] - lambda));
  } else if (n == 2) {
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) acc.add(T(1) / (c[i] + c[j] - lambda));
  } else {
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) {
        const double cij = c[i] + c[j];
        for (std::size_t l = 0; l < N; ++l) acc.add(T(1) / (cij + c[l] - lambda));
      }
  }
  return acc.value();
}

}  // namespace detail

/// Trapezoidal quadrature of G_n(0; lambda), the diagonal element of
/// (Delta_n - lambda)^{-1} on Z^n, with the cosine table of the grid cached.
///
/// Off the spectrum [-2n, 2n] the integrand is periodic and analytic, so the
/// error decays like exp(-N * rho) with rho ~ acosh(1 + dist / 2).
class GreenQuadrature {
 public:
  GreenQuadrature(int n, const TorusGrid& grid, double margin = kSpectrumMargin)
      : n_(n), margin_(margin), scale_(1.0 / static_cast<double>(grid.node_count())) {
    if (n < 1 || n > kMaxGreenDimension)
      throw DomainError("green_diag: dimension must be between 1 and 3");
    if (grid.dimension() != n) throw DomainError("green_diag: grid dimension mismatch");
    const int N = grid.points_per_axis();
    cos_table_.resize(static_cast<std::size_t>(N));
    for (int j = 0; j < N; ++j)
      cos_table_[static_cast<std::size_t>(j)] = 2.0 * std::cos(grid.phase(j));
  }

  int dimension() const { return n_; }

  cplx operator()(cplx lambda) const {
    if (lambda.imag() == 0.0) return cplx((*this)(lambda.real()), 0.0);
    return detail::green_sum<cplx>(n_, cos_table_, lambda) * scale_;
  }

  double operator()(double lambda) const {
    const double dist = std::max({0.0, lambda - 2.0 * n_, -2.0 * n_ - lambda});
    if (dist < margin_)
      throw InsideSpectrum("green_diag: real lambda within margin of [-2n, 2n]");
    return detail::green_sum<double>(n_, cos_table_, lambda) * scale_;
  }

 private:
  int n_;
  double margin_;
  double scale_;
  std::vector<double> cos_table_;
};

inline cplx green_diag(int n, cplx lambda, const TorusGrid& grid,
                       double margin = kSpectrumMargin) {
  return GreenQuadrature(n, grid, margin)(lambda);
}

inline double green_diag(int n, double lambda, const TorusGrid& grid,
                         double margin = kSpectrumMargin) {
  return GreenQuadrature(n, grid, margin)(lambda);
}

/// Closed form in one dimension: G_1(0; lambda) = -sgn(lambda) / sqrt(lambda^2 - 4).
inline double green_diag_1d_closed(double lambda) {
  if (!(std::abs(lambda) > 2.0)) throw DomainError("green_diag_1d_closed: need |lambda| > 2");
  return -std::copysign(1.0, lambda) / std::sqrt((lambda - 2.0) * (lambda + 2.0));
}

namespace detail {

// Closed-walk counts at the origin of Z^n for lengths 0..max_len, by repeated
// application of the nearest-neighbour step kernel on a box large enough that
// no returning walk leaves it.
template <typename Count>
std::vector<Count> closed_walk_counts(int n, int max_len) {
  const int radius = max_len / 2;
  const std::size_t size = box_size(n, radius);
  const auto side = static_cast<std::size_t>(2 * radius + 1);
  std::vector<std::size_t> stride(static_cast<std::size_t>(n));
  std::size_t s = 1;
  for (int a = n - 1; a >= 0; --a) {
    stride[static_cast<std::size_t>(a)] = s;
    s *= side;
  }
  std::vector<Count> cur(size, Count{0}), next(size, Count{0});
  const std::size_t origin = (size - 1) / 2;
  cur[origin] = Count{1};

  std::vector<Count> counts{Count{1}};
  for (int step = 1; step <= max_len; ++step) {
    std::fill(next.begin(), next.end(), Count{0});
    for (std::size_t idx = 0; idx < size; ++idx) {
      const Count v = cur[idx];
      if (v == Count{0}) continue;
      for (std::size_t a = 0; a < stride.size(); ++a) {
        const std::size_t coord = (idx / stride[a]) % side;
        if (coord > 0) next[idx - stride[a]] += v;
        if (coord + 1 < side) next[idx + stride[a]] += v;
      }
    }
    std::swap(cur, next);
    counts.push_back(cur[origin]);
  }
  return counts;
}

}  // namespace detail

/// Exact closed-walk counts m_0, m_2, ..., m_{k_max} at the origin of Z^n; these
/// are the even moments of Delta_n (odd ones vanish).
inline std::vector<std::uint64_t> walk_moments(int n, int k_max) {
  if (n < 1) throw DomainError("walk_moments: dimension must be positive");
  if (k_max < 0 || k_max % 2 != 0 || k_max > 20)
    throw DomainError("walk_moments: k_max must be even and at most 20");
  if (std::pow(2.0 * n, k_max) >= 9.2e18)
    throw DomainError("walk_moments: counts would overflow 64 bits");
  const auto all = detail::closed_walk_counts<std::uint64_t>(n, k_max);
  std::vector<std::uint64_t> even;
  for (std::size_t i = 0; i < all.size(); i += 2) even.push_back(all[i]);
  return even;
}

/// Neumann-series value -sum_{k <= order/2} m_{2k} / lambda^{2k+1} of G_n(0; lambda).
/// Moments come from the walk-counting recursion carried in double precision,
/// so orders beyond the 64-bit range are allowed.
inline double moment_series_oracle(int n, double lambda, int order) {
  if (n < 1) throw DomainError("moment_series_oracle: dimension must be positive");
  if (!(std::abs(lambda) > 2.0 * n + 1.0))
    throw DomainError("moment_series_oracle: need |lambda| > 2n + 1");
  if (order < 0 || order % 2 != 0) throw DomainError("moment_series_oracle: order must be even");
  const auto counts = detail::closed_walk_counts<double>(n, order);
  const double inv = 1.0 / lambda;
  const double inv2 = inv * inv;
  double power = inv;
  CompensatedSum<double> acc;
  for (int k = 0; 2 * k <= order; ++k) {
    acc.add(counts[static_cast<std::size_t>(2 * k)] * power);
    power *= inv2;
  }
  return -acc.value();
}

/// Upper bound of the neglected tail of moment_series_oracle.
inline double moment_series_tail_bound(int n, double lambda, int order) {
  const double r = 2.0 * n / std::abs(lambda);
  return std::pow(r, order + 2) / (std::abs(lambda) - 2.0 * n);
}

}  // namespace maryland
