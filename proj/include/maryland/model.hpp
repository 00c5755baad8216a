#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "maryland/errors.hpp"
#include "maryland/lattice_box.hpp"

namespace maryland {

/// Parameters of the quasiperiodic surface coupling on Z^d = Z^{d1} x Z^{d2}.
///
/// Vertices m = (m1, m2) with m1 = 0 carry the Kirchhoff coupling
/// alpha(m) = g tan pi(omega . m2 + phi); all other vertices are ideal.
/// omega and phi are measured in turns.
struct ModelParams {
  int d1 = 1;
  int d2 = 1;
  double g = 1.0;
  std::vector<double> omega{0.0};
  double phi = 0.0;

  int dimension() const { return d1 + d2; }

  /// omega . m2 + phi, in turns.
  double phase(std::span<const int> m2) const {
    double y = phi;
    for (std::size_t j = 0; j < omega.size(); ++j) y += omega[j] * m2[j];
    return y;
  }

  /// Kirchhoff coupling at surface site m2.
  double coupling(std::span<const int> m2) const {
    return g * std::tan(std::numbers::pi * phase(m2));
  }

  /// chi = exp(-2 pi i phi).
  std::complex<double> chi() const { return std::polar(1.0, -2.0 * std::numbers::pi * phi); }

  /// Structural checks plus the finite-range surrogate of phi != omega . m2 mod 1/2:
  /// every phase in the box |m2|_inf <= m_check stays 1e-9 away from (1/2) Z.
  void validate(int m_check = 200) const {
    if (d1 < 1 || d2 < 1) throw DomainError("model: d1 and d2 must be positive");
    if (static_cast<int>(omega.size()) != d2)
      throw DomainError("model: omega must have d2 components");
    if (!std::isfinite(g) || g == 0.0) throw DomainError("model: coupling g must be finite and nonzero");
    if (!std::isfinite(phi)) throw DomainError("model: phi must be finite");
    for (double w : omega)
      if (!std::isfinite(w)) throw DomainError("model: omega must be finite");
    for_each_in_box(d2, m_check, [&](std::span<const int> m2) {
      const double twice = 2.0 * phase(m2);
      if (std::abs(twice - std::round(twice)) < 2e-9) {
        std::ostringstream msg;
        msg << "model: omega . m2 + phi hits (1/2)Z at m2 = (";
        for (std::size_t i = 0; i < m2.size(); ++i) msg << (i ? "," : "") << m2[i];
        msg << ")";
        throw ArithmeticClash(msg.str());
      }
    });
  }
};

inline std::string format_site(std::span<const int> m) {
  std::string s = "(";
  for (std::size_t i = 0; i < m.size(); ++i) s += (i ? "," : "") + std::to_string(m[i]);
  return s + ")";
}

}  // namespace maryland
