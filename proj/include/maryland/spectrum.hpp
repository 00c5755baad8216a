#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "maryland/bisection.hpp"
#include "maryland/errors.hpp"
#include "maryland/hill.hpp"
#include "maryland/lanczos.hpp"
#include "maryland/lattice_box.hpp"
#include "maryland/lattice_green.hpp"
#include "maryland/model.hpp"
#include "maryland/parallel.hpp"
#include "maryland/potential.hpp"
#include "maryland/surface_weyl.hpp"

namespace maryland {

/// Numerical knobs shared by the solver, the report and the CLI.
struct Numerics {
  double ode_tol = 1e-12;
  int quad_points_per_axis = 512;  // surface torus T^{d2}
  int green_points_per_axis = 0;   // torus T^{d1}; 0 selects TorusGrid::default_points(d1)
  double bisect_tol = 1e-12;       // residual |sigma - target| in radians
  std::vector<int> box_sizes{32, 64, 128};
  int M_max = 8;
  int M_check = 200;
  double beta = 1.0;
  double scan_step = 0.01;
  double root_tol = 1e-12;
  double edge_margin = 0.05;
  double window_min = -5.0;
  double window_max = 12.0;
  int threads = 1;

  TorusGrid surface_grid(int d2) const { return TorusGrid(d2, quad_points_per_axis); }

  std::optional<TorusGrid> green_grid(int d1) const {
    if (green_points_per_axis <= 0) return std::nullopt;
    return TorusGrid(d1, green_points_per_axis);
  }
};

/// Parameters normalized so that the surface parameter operator reads
/// B(m2) = g' tan pi(omega' . m2 + phi') with g' > 0.
///
/// B is the multiplication by -g^{-1} cot pi(omega . m2 + phi). For g > 0 this
/// is g^{-1} tan pi(omega . m2 + phi + 1/2); for g < 0 both angles change sign.
/// The returned g' = 1/|g| is the coupling that enters sigma.
inline ModelParams primed_params(const ModelParams& params) {
  if (params.g == 0.0) throw DomainError("primed_params: g must be nonzero");
  ModelParams p = params;
  p.g = 1.0 / std::abs(params.g);
  if (params.g > 0.0) {
    p.phi = params.phi + 0.5;
  } else {
    for (double& w : p.omega) w = -w;
    p.phi = -params.phi - 0.5;
  }
  return p;
}

/// B(m2) = -g^{-1} cot pi(omega . m2 + phi), from the original parameters.
inline double surface_parameter(const ModelParams& params, std::span<const int> m2) {
  return -1.0 / (params.g * std::tan(std::numbers::pi * params.phase(m2)));
}

/// B(m2) = g' tan pi(omega' . m2 + phi'), from normalized parameters.
inline double primed_surface_parameter(const ModelParams& primed, std::span<const int> m2) {
  return primed.coupling(m2);
}

struct Target {
  Site m;
  double phase;  // radians, in (-pi/2, pi/2)
};

/// Representatives in (-pi/2, pi/2) of pi (omega . m + phi) mod pi for every
/// |m|_inf <= M_max, in box order. Coinciding phases (mod pi, within 1e-12)
/// raise ArithmeticClash: the eigenvalues they label would coincide.
inline std::vector<Target> enumerate_targets(const ModelParams& primed, int M_max) {
  if (M_max < 0) throw DomainError("enumerate_targets: M_max must be non-negative");
  std::vector<Target> targets;
  for_each_in_box(primed.d2, M_max, [&](std::span<const int> m) {
    const double y = primed.phase(m);
    const double r = y - std::round(y);
    if (std::abs(std::abs(r) - 0.5) < 1e-12)
      throw ArithmeticClash("enumerate_targets: phase at m = " + format_site(m) +
                            " is pi/2 mod pi");
    targets.push_back({Site(m.begin(), m.end()), std::numbers::pi * r});
  });

  std::vector<std::size_t> order(targets.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return targets[a].phase < targets[b].phase; });
  auto clash = [&](std::size_t a, std::size_t b) {
    throw ArithmeticClash("enumerate_targets: targets for m = " + format_site(targets[a].m) +
                          " and m = " + format_site(targets[b].m) + " coincide mod pi");
  };
  for (std::size_t i = 1; i < order.size(); ++i)
    if (targets[order[i]].phase - targets[order[i - 1]].phase < 1e-12) clash(order[i - 1], order[i]);
  if (order.size() > 1 &&
      targets[order.front()].phase + std::numbers::pi - targets[order.back()].phase < 1e-12)
    clash(order.back(), order.front());
  return targets;
}

struct OracleGap {
  int box;
  double value;
};

struct EigenvalueRecord {
  Site m;
  double target_phase = 0.0;
  double lambda = 0.0;
  double residual = 0.0;
  std::vector<OracleGap> oracle_gaps;  // smallest |eig| of the truncated surface matrix per box

  /// Oracle value for the largest box, or NaN if none was attached.
  double oracle_gap() const {
    return oracle_gaps.empty() ? std::numeric_limits<double>::quiet_NaN() : oracle_gaps.back().value;
  }
};

/// Solves sigma(lambda) = target on [a, b] by bisection. nullopt (no root) when
/// the target is outside [sigma(a), sigma(b)]; sigma is strictly increasing, so
/// a root is unique when it exists.
inline std::optional<EigenvalueRecord> solve_eigenvalue(
    const ModelParams& primed, const Potential& q, double a, double b, const Target& target,
    double tol, const TorusGrid& grid, std::optional<TorusGrid> green_grid = std::nullopt) {
  if (!(a < b)) throw DomainError("solve_eigenvalue: need a < b");
  if (!(std::abs(target.phase) < std::numbers::pi / 2))
    throw DomainError("solve_eigenvalue: target must lie in (-pi/2, pi/2)");
  auto f = [&](double x) { return sigma(primed, q, x, grid, green_grid) - target.phase; };
  const auto root = bisect(f, a, b, 0.0, tol);
  if (!root) return std::nullopt;
  if (std::abs(root->fx) > tol)
    throw Error("solve_eigenvalue: bisection stalled at residual " + std::to_string(std::abs(root->fx)));
  return EigenvalueRecord{target.m, target.phase, root->x, std::abs(root->fx), {}};
}

struct DiophantineReport {
  double beta = 0.0;
  double C_estimate = 0.0;
  Site worst_m;
  int M_max = 0;

  bool passes() const { return C_estimate > 0.0; }
};

/// min over 0 < |m|_inf <= M_max of |omega . m - round(omega . m)| |m|_2^beta,
/// with the minimizing m.
inline DiophantineReport diophantine_check(std::span<const double> omega, double beta, int M_max) {
  if (M_max < 1 || !(beta > 0.0)) throw DomainError("diophantine_check: need M_max >= 1, beta > 0");
  DiophantineReport report{beta, std::numeric_limits<double>::infinity(), {}, M_max};
  double best_norm2 = 0.0;
  for_each_in_box(static_cast<int>(omega.size()), M_max, [&](std::span<const int> m) {
    double y = 0.0, norm2 = 0.0;
    for (std::size_t j = 0; j < m.size(); ++j) {
      y += omega[j] * m[j];
      norm2 += static_cast<double>(m[j]) * m[j];
    }
    if (norm2 == 0.0) return;
    const double c = std::abs(y - std::round(y)) * std::pow(std::sqrt(norm2), beta);
    // ties go to the shorter m, then to m with positive leading entry
    const bool tie = c == report.C_estimate &&
                     (norm2 < best_norm2 || (norm2 == best_norm2 && std::lexicographical_compare(
                                                                         report.worst_m.begin(), report.worst_m.end(),
                                                                         m.begin(), m.end())));
    if (c < report.C_estimate || tie) {
      best_norm2 = norm2;
      report.C_estimate = c;
      report.worst_m.assign(m.begin(), m.end());
    }
  });
  return report;
}

inline constexpr std::size_t kDenseBoxCap = 4096;

struct SurfaceTruncation {
  Eigen::MatrixXd matrix;
  double smallest_abs_eigenvalue;
};

/// [N(m2 - m2'; lambda)] - diag(B(m2)) on the box |m2|_inf <= L, built from the
/// original parameters, with its eigenvalue of smallest modulus. A small value
/// means lambda is close to an eigenvalue of the graph operator.
///
/// The surface grid is enlarged to at least 8L points per axis so that aliasing
/// of the Fourier coefficients up to offset 2L stays negligible.
inline SurfaceTruncation truncated_surface_matrix(const ModelParams& params, const Potential& q,
                                                  double lambda, int L, const TorusGrid& grid,
                                                  std::optional<TorusGrid> green_grid = std::nullopt) {
  if (L < 0) throw DomainError("truncated_surface_matrix: L must be non-negative");
  detail::require_gap(q, lambda, "truncated_surface_matrix");
  const std::size_t dim = box_size(params.d2, L);
  if (dim > kDenseBoxCap) throw DomainError("truncated_surface_matrix: box exceeds dense cap");

  const TorusGrid fine(params.d2, std::max(grid.points_per_axis(), 8 * L));
  const SurfaceSymbol symbol(params, q, cplx(lambda, 0.0), green_grid);
  const auto coeff = fourier_coefficients(symbol.sample(fine), fine, 2 * L);

  std::vector<Site> sites;
  for_each_in_box(params.d2, L, [&](std::span<const int> m) { sites.emplace_back(m.begin(), m.end()); });
  Eigen::MatrixXd h(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  Site diff(static_cast<std::size_t>(params.d2));
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) {
      for (std::size_t a = 0; a < diff.size(); ++a) diff[a] = sites[i][a] - sites[j][a];
      h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = coeff[box_index(diff, 2 * L)].real();
    }
  for (std::size_t i = 0; i < dim; ++i)
    h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) -= surface_parameter(params, sites[i]);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error("truncated_surface_matrix: eigensolver failed");
  return {std::move(h), es.eigenvalues().cwiseAbs().minCoeff()};
}

/// Vertex coupling as a function of the full site m = (m1, m2).
using CouplingFn = std::function<double(std::span<const int>)>;

/// Coupling of the model: alpha(m) on the surface m1 = 0, zero elsewhere.
inline CouplingFn surface_coupling(const ModelParams& params) {
  return [params](std::span<const int> m) {
    for (int i = 0; i < params.d1; ++i)
      if (m[static_cast<std::size_t>(i)] != 0) return 0.0;
    return params.coupling(m.subspan(static_cast<std::size_t>(params.d1)));
  };
}

/// Sparse a(lambda)(Delta_d - d eta(lambda)) - diag(alpha(m)) applied to
/// vectors supported in the box |m|_inf <= L of Z^d.
///
/// Columns are the box sites. Rows are the box sites when `with_shell` is
/// false (the square restriction P (M - A) P); with `with_shell` the rows also
/// cover the adjacent shell |m|_inf = L + 1, so the matrix is exactly
/// (M - A) restricted to box-supported vectors. Rows are indexed in the box of
/// radius L + 1 and empty rows are dropped.
inline Eigen::SparseMatrix<double> full_box_operator(const Potential& q, double lambda, int d, int L,
                                                     const CouplingFn& alpha, bool with_shell = false) {
  if (L < 0 || d < 1) throw DomainError("full_box_operator: need d >= 1 and L >= 0");
  const std::size_t dim = box_size(d, L);
  if (dim > (std::size_t{1} << 22)) throw DomainError("full_box_operator: box too large");
  const TransferData t = integrate_fundamental(q, cplx(lambda, 0.0));
  if (std::abs(t.s1) < kDirichletThreshold)
    throw DirichletPoint("truncated_full_matrix: lambda is in the Dirichlet spectrum");
  const double a = 1.0 / t.s1.real();
  const double eta = t.discriminant().real();

  // Row numbering: box sites first (same order as columns), then shell sites.
  std::vector<int> shell_row;
  if (with_shell) shell_row.assign(box_size(d, L + 1), -1);
  int rows = static_cast<int>(dim);

  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(dim * static_cast<std::size_t>(2 * d + 1));
  Site nb(static_cast<std::size_t>(d));
  for_each_in_box(d, L, [&](std::span<const int> m) {
    const auto col = static_cast<int>(box_index(m, L));
    entries.emplace_back(col, col, -a * d * eta - alpha(m));
    std::copy(m.begin(), m.end(), nb.begin());
    for (std::size_t j = 0; j < nb.size(); ++j) {
      for (int step : {-1, 1}) {
        nb[j] = m[j] + step;
        if (in_box(nb, L)) {
          entries.emplace_back(static_cast<int>(box_index(nb, L)), col, a);
        } else if (with_shell) {
          int& row = shell_row[box_index(nb, L + 1)];
          if (row < 0) row = rows++;
          entries.emplace_back(row, col, a);
        }
      }
      nb[j] = m[j];
    }
  });
  Eigen::SparseMatrix<double> op(rows, static_cast<Eigen::Index>(dim));
  op.setFromTriplets(entries.begin(), entries.end());
  return op;
}

/// Smallest singular value of M(lambda) - A on vectors supported in the box
/// |m|_inf <= L of Z^d: min over such v of |(M - A) v| / |v|.
///
/// This is non-increasing in L (the admissible vectors are nested) and tends
/// to 0 exactly when lambda is in the spectrum of the graph operator.
inline double truncated_full_matrix(const ModelParams& params, const Potential& q, double lambda, int L) {
  return smallest_singular_value(
      full_box_operator(q, lambda, params.dimension(), L, surface_coupling(params), true));
}

struct SpectralReport {
  ModelParams params;
  ModelParams primed;
  Numerics numerics;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  BandList bands;
  std::vector<double> dirichlet;
  BandList gap_intervals;  // subintervals actually searched for eigenvalues
  std::vector<Target> targets;
  std::vector<EigenvalueRecord> eigenvalues;  // sorted by lambda
};

/// Gap pieces of [lambda_min, lambda_max]: complement of the bands, split at
/// Dirichlet points, each end pulled in by `margin` (except window ends).
inline BandList gap_subintervals(double lambda_min, double lambda_max, const BandList& bands,
                                 const std::vector<double>& dirichlet, double margin) {
  BandList raw;
  double start = lambda_min;
  for (const Band& band : bands) {
    if (band.lo > start) raw.push_back({start, band.lo});
    start = std::max(start, band.hi);
  }
  if (start < lambda_max) raw.push_back({start, lambda_max});

  BandList pieces;
  for (const Band& gap : raw) {
    std::vector<double> ends{gap.lo};
    for (double p : dirichlet)
      if (p > gap.lo && p < gap.hi) ends.push_back(p);
    ends.push_back(gap.hi);
    for (std::size_t i = 0; i + 1 < ends.size(); ++i) {
      const double lo = ends[i] == lambda_min ? lambda_min : ends[i] + margin;
      const double hi = ends[i + 1] == lambda_max ? lambda_max : ends[i + 1] - margin;
      if (lo < hi) pieces.push_back({lo, hi});
    }
  }
  return pieces;
}

/// Bands, Dirichlet points and the eigenvalues labelled by |m|_inf <= M_max in
/// the window, with truncation-oracle values for every box in numerics.box_sizes.
inline SpectralReport spectral_report(const ModelParams& params, const Potential& q, double lambda_min,
                                      double lambda_max, int M_max, const Numerics& numerics) {
  if (!(lambda_min < lambda_max) || !std::isfinite(lambda_min) || !std::isfinite(lambda_max))
    throw DomainError("spectral_report: window must be finite with min < max");
  in_context("model parameters", [&] { params.validate(numerics.M_check); });

  SpectralReport report;
  report.params = params;
  report.primed = primed_params(params);
  report.numerics = numerics;
  report.lambda_min = lambda_min;
  report.lambda_max = lambda_max;
  report.bands = in_context("hill_bands", [&] {
    return hill_bands(q, lambda_min, lambda_max, numerics.scan_step, numerics.root_tol);
  });
  report.dirichlet = in_context("dirichlet_points", [&] {
    return dirichlet_points(q, lambda_min, lambda_max, numerics.root_tol, numerics.scan_step);
  });
  report.gap_intervals =
      gap_subintervals(lambda_min, lambda_max, report.bands, report.dirichlet, numerics.edge_margin);
  report.targets = in_context("enumerate_targets", [&] { return enumerate_targets(report.primed, M_max); });

  const TorusGrid grid = numerics.surface_grid(params.d2);
  const auto green_grid = numerics.green_grid(params.d1);

  struct Task {
    std::size_t gap;
    std::size_t target;
  };
  std::vector<Task> tasks;
  for (std::size_t gi = 0; gi < report.gap_intervals.size(); ++gi) {
    const Band& gap = report.gap_intervals[gi];
    const double s_lo = in_context("sigma at gap start", [&] { return sigma(report.primed, q, gap.lo, grid, green_grid); });
    const double s_hi = in_context("sigma at gap end", [&] { return sigma(report.primed, q, gap.hi, grid, green_grid); });
    for (std::size_t ti = 0; ti < report.targets.size(); ++ti) {
      const double t = report.targets[ti].phase;
      if (t >= s_lo && t <= s_hi) tasks.push_back({gi, ti});
    }
  }

  std::vector<std::optional<EigenvalueRecord>> solved(tasks.size());
  parallel_for(tasks.size(), numerics.threads, [&](std::size_t i) {
    const Band& gap = report.gap_intervals[tasks[i].gap];
    const Target& target = report.targets[tasks[i].target];
    solved[i] = in_context("solve_eigenvalue m = " + format_site(target.m), [&] {
      return solve_eigenvalue(report.primed, q, gap.lo, gap.hi, target, numerics.bisect_tol, grid, green_grid);
    });
  });
  for (auto& s : solved)
    if (s) report.eigenvalues.push_back(std::move(*s));
  std::sort(report.eigenvalues.begin(), report.eigenvalues.end(),
            [](const EigenvalueRecord& x, const EigenvalueRecord& y) { return x.lambda < y.lambda; });

  parallel_for(report.eigenvalues.size(), numerics.threads, [&](std::size_t i) {
    auto& rec = report.eigenvalues[i];
    for (int L : numerics.box_sizes) {
      const double gap = in_context("truncated_surface_matrix", [&] {
        return truncated_surface_matrix(params, q, rec.lambda, L, grid, green_grid).smallest_abs_eigenvalue;
      });
      rec.oracle_gaps.push_back({L, gap});
    }
  });

  for (std::size_t i = 0; i < report.eigenvalues.size(); ++i) {
    const double x = report.eigenvalues[i].lambda;
    if (!(std::abs(discriminant(q, x)) > 2.0))
      throw Error("spectral_report: eigenvalue " + std::to_string(x) + " lies in a band");
    for (const Band& band : report.bands)
      if (band.contains(x)) throw Error("spectral_report: eigenvalue inside band");
    if (i > 0 && !(x > report.eigenvalues[i - 1].lambda))
      throw Error("spectral_report: eigenvalues are not distinct");
  }
  return report;
}

}  // namespace maryland
