#pragma once

#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "maryland/errors.hpp"

namespace maryland {

/// Real edge potential q on [0, 1], piecewise constant.
///
/// Every edge of the graph carries the same q. Zero and constant potentials are
/// stored as a single piece; kind() remembers how the potential was specified.
class Potential {
 public:
  enum class Kind { zero, constant, piecewise };

  static Potential zero() { return Potential(Kind::zero, {0.0, 1.0}, {0.0}); }

  static Potential constant(double value) {
    return Potential(Kind::constant, {0.0, 1.0}, {value});
  }

  /// breakpoints: 0 = x_0 < x_1 < ... < x_n = 1; values[i] is q on [x_i, x_{i+1}).
  static Potential piecewise(std::vector<double> breakpoints, std::vector<double> values) {
    return Potential(Kind::piecewise, std::move(breakpoints), std::move(values));
  }

  Kind kind() const { return kind_; }
  std::span<const double> breakpoints() const { return breakpoints_; }
  std::span<const double> values() const { return values_; }
  std::size_t pieces() const { return values_.size(); }

  double at(double x) const {
    for (std::size_t i = 0; i + 1 < breakpoints_.size(); ++i)
      if (x < breakpoints_[i + 1]) return values_[i];
    return values_.back();
  }

  /// Same function with every piece split in half.
  Potential refined() const {
    std::vector<double> bp{breakpoints_.front()};
    std::vector<double> v;
    for (std::size_t i = 0; i < values_.size(); ++i) {
      bp.push_back(0.5 * (breakpoints_[i] + breakpoints_[i + 1]));
      bp.push_back(breakpoints_[i + 1]);
      v.push_back(values_[i]);
      v.push_back(values_[i]);
    }
    return Potential(Kind::piecewise, std::move(bp), std::move(v));
  }

  static const char* kind_name(Kind k) {
    switch (k) {
      case Kind::zero: return "zero";
      case Kind::constant: return "constant";
      case Kind::piecewise: return "piecewise";
    }
    return "?";
  }

 private:
  Potential(Kind kind, std::vector<double> breakpoints, std::vector<double> values)
      : kind_(kind), breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
    if (values_.empty() || breakpoints_.size() != values_.size() + 1)
      throw DomainError("potential: need one more breakpoint than values");
    if (breakpoints_.front() != 0.0 || breakpoints_.back() != 1.0)
      throw DomainError("potential: breakpoints must start at 0 and end at 1");
    for (std::size_t i = 0; i + 1 < breakpoints_.size(); ++i)
      if (!(breakpoints_[i] < breakpoints_[i + 1]))
        throw DomainError("potential: breakpoints must be strictly increasing");
    for (double v : values_)
      if (!std::isfinite(v)) throw DomainError("potential: values must be finite");
  }

  Kind kind_;
  std::vector<double> breakpoints_;
  std::vector<double> values_;
};

}  // namespace maryland
