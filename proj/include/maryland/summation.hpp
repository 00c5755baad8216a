#pragma once

#include <cmath>
#include <complex>

namespace maryland {

/// Neumaier-compensated accumulator. Summation order is the caller's loop order,
/// so results are reproducible run to run.
template <typename T>
class CompensatedSum {
 public:
  void add(T x) {
    if constexpr (std::is_floating_point_v<T>) {
      add_real(sum_, comp_, x);
    } else {
      auto re = sum_.real(), re_c = comp_.real();
      auto im = sum_.imag(), im_c = comp_.imag();
      add_real(re, re_c, x.real());
      add_real(im, im_c, x.imag());
      sum_ = T(re, im);
      comp_ = T(re_c, im_c);
    }
  }

  T value() const { return sum_ + comp_; }

 private:
  template <typename R>
  static void add_real(R& sum, R& comp, R x) {
    const R t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }

  T sum_{};
  T comp_{};
};

}  // namespace maryland
