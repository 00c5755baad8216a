#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "maryland/errors.hpp"
#include "maryland/hill.hpp"
#include "maryland/lattice_box.hpp"
#include "maryland/lattice_green.hpp"
#include "maryland/model.hpp"
#include "maryland/potential.hpp"
#include "maryland/summation.hpp"

namespace maryland {

/// Finitely supported function on Z^d.
using LatticeFunction = std::map<Site, cplx>;

/// M(z) xi = a(z) (Delta_d xi - d eta(z) xi); the support grows by one shell.
inline LatticeFunction weyl_apply(const ModelParams& params, const Potential& q, cplx z,
                                  const LatticeFunction& xi) {
  const int d = params.dimension();
  const TransferData t = integrate_fundamental(q, z);
  if (std::abs(t.s1) < kDirichletThreshold)
    throw DirichletPoint("weyl_apply: z is in the Dirichlet spectrum");
  const cplx a = 1.0 / t.s1;
  const cplx eta = t.discriminant();

  LatticeFunction out;
  for (const auto& [site, value] : xi) {
    if (static_cast<int>(site.size()) != d) throw DomainError("weyl_apply: site has wrong dimension");
    out[site] -= a * static_cast<double>(d) * eta * value;
    Site nb = site;
    for (std::size_t j = 0; j < site.size(); ++j) {
      for (int step : {-1, 1}) {
        nb[j] = site[j] + step;
        out[nb] += a * value;
      }
      nb[j] = site[j];
    }
  }
  return out;
}

/// Surface symbol N(k2; z) = -a(z)^{-1} G_{d1}(0; d eta(z) - Delta_{d2}(k2)) at fixed z.
///
/// Construction evaluates the edge data once; calls only pay the d1-dimensional
/// Green quadrature.
class SurfaceSymbol {
 public:
  SurfaceSymbol(const ModelParams& params, const Potential& q, cplx z,
                std::optional<TorusGrid> green_grid = std::nullopt)
      : d2_(params.d2),
        green_(params.d1, green_grid ? *green_grid : TorusGrid::with_default_points(params.d1)) {
    const TransferData t = integrate_fundamental(q, z);
    if (std::abs(t.s1) < kDirichletThreshold)
      throw DirichletPoint("n_symbol: z is in the Dirichlet spectrum");
    inv_a_ = t.s1;
    shift_ = static_cast<double>(params.dimension()) * t.discriminant();
  }

  cplx operator()(std::span<const double> k2) const {
    if (static_cast<int>(k2.size()) != d2_) throw DomainError("n_symbol: k2 has wrong dimension");
    return -inv_a_ * green_(shift_ - symbol_delta(k2));
  }

  /// Symbol values on every node of a d2-dimensional grid, in node order.
  std::vector<cplx> sample(const TorusGrid& grid) const {
    if (grid.dimension() != d2_) throw DomainError("n_symbol: surface grid dimension mismatch");
    std::vector<cplx> values;
    values.reserve(grid.node_count());
    grid.for_each_node([&](std::span<const double> k) { values.push_back((*this)(k)); });
    return values;
  }

  /// d eta(z), the spectral argument fed to the d1-dimensional Green function.
  cplx green_shift() const { return shift_; }

 private:
  int d2_;
  GreenQuadrature green_;
  cplx inv_a_;
  cplx shift_;
};

inline cplx n_symbol(const ModelParams& params, const Potential& q, std::span<const double> k2,
                     cplx z, std::optional<TorusGrid> green_grid = std::nullopt) {
  return SurfaceSymbol(params, q, z, green_grid)(k2);
}

/// Fourier coefficients c(p) = mean_k f(k) exp(-i p.k) of grid samples, for every
/// offset p in the cube |p|_inf <= max_offset (box order). Separable: one axis at
/// a time.
inline std::vector<cplx> fourier_coefficients(std::span<const cplx> samples, const TorusGrid& grid,
                                              int max_offset) {
  const int n = grid.dimension();
  const int N = grid.points_per_axis();
  const int P = 2 * max_offset + 1;
  if (samples.size() != grid.node_count()) throw DomainError("fourier_coefficients: sample count");

  std::vector<cplx> twiddle(static_cast<std::size_t>(N));
  for (int j = 0; j < N; ++j) twiddle[static_cast<std::size_t>(j)] = std::polar(1.0, -grid.phase(j));

  // data is laid out as [done axes: P each][remaining axes: N each].
  std::vector<cplx> data(samples.begin(), samples.end());
  std::size_t outer = 1;
  for (int axis = 0; axis < n; ++axis) {
    std::size_t inner = 1;
    for (int a = axis + 1; a < n; ++a) inner *= static_cast<std::size_t>(N);
    std::vector<cplx> next(outer * static_cast<std::size_t>(P) * inner);
    for (std::size_t o = 0; o < outer; ++o)
      for (int p = -max_offset; p <= max_offset; ++p)
        for (std::size_t i = 0; i < inner; ++i) {
          CompensatedSum<cplx> acc;
          for (int j = 0; j < N; ++j) {
            const long long r = ((static_cast<long long>(p) * j) % N + N) % N;
            acc.add(data[(o * static_cast<std::size_t>(N) + static_cast<std::size_t>(j)) * inner + i] *
                    twiddle[static_cast<std::size_t>(r)]);
          }
          next[(o * static_cast<std::size_t>(P) + static_cast<std::size_t>(p + max_offset)) * inner + i] =
              acc.value() / static_cast<double>(N);
        }
    data = std::move(next);
    outer *= static_cast<std::size_t>(P);
  }
  return data;
}

/// Matrix element N(m2 - m2'; z) for offset = m2 - m2', via torus quadrature of
/// the symbol.
inline cplx n_matrix_element(const ModelParams& params, const Potential& q,
                             std::span<const int> offset, cplx z, const TorusGrid& grid,
                             std::optional<TorusGrid> green_grid = std::nullopt) {
  if (static_cast<int>(offset.size()) != params.d2)
    throw DomainError("n_matrix_element: offset has wrong dimension");
  const SurfaceSymbol symbol(params, q, z, green_grid);
  CompensatedSum<cplx> acc;
  grid.for_each_node([&](std::span<const double> k) {
    double phase = 0.0;
    for (std::size_t j = 0; j < k.size(); ++j) phase += offset[j] * k[j];
    acc.add(symbol(k) * std::polar(1.0, -phase));
  });
  return acc.value() / static_cast<double>(grid.node_count());
}

/// Cayley transform (gN - i)/(gN + i) of a symbol value.
inline cplx cayley(double g, cplx n) {
  const cplx i(0.0, 1.0);
  return (g * n - i) / (g * n + i);
}

/// b(k2, z) = (g N(k2; z) - i)(g N(k2; z) + i)^{-1}.
inline cplx b_symbol(const ModelParams& params, const Potential& q, std::span<const double> k2,
                     cplx z, std::optional<TorusGrid> green_grid = std::nullopt) {
  return cayley(params.g, n_symbol(params, q, k2, z, green_grid));
}

namespace detail {

inline void require_gap(const Potential& q, double lambda, const char* who) {
  const double eta = discriminant(q, lambda);
  if (!(std::abs(eta) > 2.0))
    throw GapViolation(std::string(who) + ": lambda = " + std::to_string(lambda) +
                       " is not in a spectral gap (|eta| <= 2)");
}

inline void require_positive_coupling(const ModelParams& p, const char* who) {
  if (!(p.g > 0.0))
    throw DomainError(std::string(who) + ": expects the normalized coupling (g > 0)");
}

}  // namespace detail

/// Torus average of arctan(N / g) over already sampled symbol values.
inline double sigma_from_samples(std::span<const cplx> symbol, double g) {
  CompensatedSum<double> acc;
  for (cplx n : symbol) acc.add(std::atan(n.real() / g));
  return acc.value() / static_cast<double>(symbol.size());
}

/// Rotation number sigma(lambda) = mean over T^{d2} of arctan(N(k2; lambda) / g).
///
/// `params` must carry the normalized coupling g > 0 (see primed_params); lambda
/// must lie in a gap. The value lies in (-pi/2, pi/2) and is strictly
/// increasing in lambda on every gap interval free of Dirichlet points.
inline double sigma(const ModelParams& params, const Potential& q, double lambda,
                    const TorusGrid& grid, std::optional<TorusGrid> green_grid = std::nullopt) {
  detail::require_positive_coupling(params, "sigma");
  detail::require_gap(q, lambda, "sigma");
  const SurfaceSymbol symbol(params, q, cplx(lambda, 0.0), green_grid);
  return sigma_from_samples(symbol.sample(grid), params.g);
}

/// sigma'(lambda) by quadrature of g N' / (N^2 + g^2), with N' from central
/// differences of step h.
inline double sigma_derivative_quadrature(const ModelParams& params, const Potential& q,
                                          double lambda, double h, const TorusGrid& grid,
                                          std::optional<TorusGrid> green_grid = std::nullopt) {
  detail::require_positive_coupling(params, "sigma_derivative_quadrature");
  detail::require_gap(q, lambda, "sigma_derivative_quadrature");
  const auto n0 = SurfaceSymbol(params, q, cplx(lambda, 0.0), green_grid).sample(grid);
  const auto np = SurfaceSymbol(params, q, cplx(lambda + h, 0.0), green_grid).sample(grid);
  const auto nm = SurfaceSymbol(params, q, cplx(lambda - h, 0.0), green_grid).sample(grid);
  const double g = params.g;
  CompensatedSum<double> acc;
  for (std::size_t i = 0; i < n0.size(); ++i) {
    const double n = n0[i].real();
    const double dn = (np[i].real() - nm[i].real()) / (2.0 * h);
    acc.add(g * dn / (n * n + g * g));
  }
  return acc.value() / static_cast<double>(n0.size());
}

/// C(N) = -(N - i g)(N + i g)^{-1}; |C| = 1 for real N and |C| < 1 for Im N > 0.
inline cplx c_function(double g, cplx n) {
  const cplx ig(0.0, g);
  return -(n - ig) / (n + ig);
}

/// f0(z) = torus average of log C(N(k2; z)), principal branch.
///
/// For real lambda in a gap f0 = 2 i sigma(lambda); Re f0 < 0 when Im z > 0.
/// Fails with BranchViolation if |Im N| exceeds g/2 or C reaches (-inf, 0] at
/// a node.
inline cplx f0(const ModelParams& params, const Potential& q, cplx z, const TorusGrid& grid,
               std::optional<TorusGrid> green_grid = std::nullopt) {
  detail::require_positive_coupling(params, "f0");
  const SurfaceSymbol symbol(params, q, z, green_grid);
  const double g = params.g;
  CompensatedSum<cplx> acc;
  for (cplx n : symbol.sample(grid)) {
    if (std::abs(n.imag()) > 0.5 * g)
      throw BranchViolation("f0: |Im N| > g/2, z is outside the admissible strip");
    const cplx c = c_function(g, n);
    if (c.real() <= 0.0 && std::abs(c.imag()) <= 1e-14 * std::abs(c))
      throw BranchViolation("f0: C(k2, z) lies on the cut (-inf, 0]");
    acc.add(std::log(c));
  }
  return acc.value() / static_cast<double>(grid.node_count());
}

/// Sampled sigma on an interval inside a gap.
struct SigmaTable {
  double a = 0.0;
  double b = 0.0;
  std::vector<double> lambda;
  std::vector<double> sigma;

  bool strictly_increasing() const {
    for (std::size_t i = 1; i < sigma.size(); ++i)
      if (!(sigma[i] > sigma[i - 1])) return false;
    return true;
  }

  bool within_range() const {
    for (double s : sigma)
      if (!(std::abs(s) < std::numbers::pi / 2)) return false;
    return true;
  }
};

/// `samples` equally spaced points on [a, b] (both ends included). Throws
/// DomainError if the monotonicity or range invariant fails.
inline SigmaTable sigma_table(const ModelParams& params, const Potential& q, double a, double b,
                              int samples, const TorusGrid& grid,
                              std::optional<TorusGrid> green_grid = std::nullopt) {
  if (!(a < b) || samples < 2) throw DomainError("sigma_table: need a < b and at least 2 samples");
  SigmaTable table{a, b, {}, {}};
  for (int i = 0; i < samples; ++i) {
    const double x = i + 1 == samples ? b : a + (b - a) * i / (samples - 1);
    table.lambda.push_back(x);
    table.sigma.push_back(sigma(params, q, x, grid, green_grid));
  }
  if (!table.strictly_increasing()) throw DomainError("sigma_table: sigma is not strictly increasing");
  if (!table.within_range()) throw DomainError("sigma_table: sigma left (-pi/2, pi/2)");
  return table;
}

}  // namespace maryland
