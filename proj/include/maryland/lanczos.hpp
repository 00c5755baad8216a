#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <cmath>
#include <random>

#include "maryland/errors.hpp"

namespace maryland {

namespace detail {

// Largest |eigenvalue| of the symmetric operator v -> solve(v) of size n, by
// Lanczos with full reorthogonalization. Deterministic start vector.
template <typename Solve>
double largest_abs_eigenvalue(Eigen::Index n, Solve&& solve, int max_steps, double rel_tol) {
  const Eigen::Index steps = std::min<Eigen::Index>(n, max_steps);
  Eigen::MatrixXd basis(n, steps);
  std::vector<double> alpha, beta;

  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = unif(rng);
  v.normalize();

  double estimate = 0.0;
  for (Eigen::Index k = 0; k < steps; ++k) {
    basis.col(k) = v;
    Eigen::VectorXd w = solve(v);
    alpha.push_back(v.dot(w));
    // two passes of classical Gram-Schmidt against the whole basis
    for (int pass = 0; pass < 2; ++pass)
      w -= basis.leftCols(k + 1) * (basis.leftCols(k + 1).transpose() * w);
    const double b = w.norm();

    const auto m = static_cast<Eigen::Index>(alpha.size());
    const bool last = m == n || k + 1 == steps || b <= 1e-14 * std::abs(alpha.back());
    if (last || (m >= 10 && m % 5 == 0)) {
      Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(alpha.data(), m);
      Eigen::VectorXd sub = m > 1 ? Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(beta.data(), m - 1))
                                  : Eigen::VectorXd();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
      es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
      Eigen::Index idx = 0;
      es.eigenvalues().cwiseAbs().maxCoeff(&idx);
      estimate = std::abs(es.eigenvalues()[idx]);
      const double residual = b * std::abs(es.eigenvectors()(m - 1, idx));
      if (last || b <= 1e-14 * estimate || residual <= rel_tol * estimate) break;
    }
    beta.push_back(b);
    v = w / b;
  }
  return estimate;
}

}  // namespace detail

/// Smallest singular value of a real symmetric sparse matrix, i.e. its smallest
/// |eigenvalue|, by Lanczos on A^{-1}. Returns 0 when the LU factorization
/// reports an exactly singular matrix.
inline double smallest_singular_symmetric(const Eigen::SparseMatrix<double>& a,
                                          int max_steps = 300, double rel_tol = 1e-10) {
  const Eigen::Index n = a.rows();
  if (n == 0 || a.cols() != n) throw DomainError("smallest_singular_symmetric: need a square matrix");
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.analyzePattern(a);
  lu.factorize(a);
  if (lu.info() != Eigen::Success) return 0.0;
  const double estimate = detail::largest_abs_eigenvalue(
      n, [&](const Eigen::VectorXd& v) -> Eigen::VectorXd { return lu.solve(v); }, max_steps, rel_tol);
  if (!(estimate > 0.0) || !std::isfinite(estimate)) return 0.0;
  return 1.0 / estimate;
}

/// Smallest singular value of a sparse matrix with rows >= cols, as
/// sqrt(lambda_min(R^T R)) by Lanczos on (R^T R)^{-1}.
inline double smallest_singular_value(const Eigen::SparseMatrix<double>& r, int max_steps = 300,
                                      double rel_tol = 1e-10) {
  if (r.cols() == 0 || r.rows() < r.cols())
    throw DomainError("smallest_singular_value: need rows >= cols > 0");
  const Eigen::SparseMatrix<double> gram = Eigen::SparseMatrix<double>(r.transpose()) * r;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(gram);
  if (ldlt.info() != Eigen::Success) return 0.0;
  const double estimate = detail::largest_abs_eigenvalue(
      gram.rows(), [&](const Eigen::VectorXd& v) -> Eigen::VectorXd { return ldlt.solve(v); },
      max_steps, rel_tol);
  if (!(estimate > 0.0) || !std::isfinite(estimate)) return 0.0;
  return 1.0 / std::sqrt(estimate);
}

}  // namespace maryland
