#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace maryland {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numeric failures: the computation could not produce a trustworthy number.

/// Non-finite result, typically overflow of cosh-like solutions at huge |z|.
class OutOfRange : public Error {
 public:
  using Error::Error;
};

/// The Cayley-type function C left the slit plane; the strip around the gap is too wide.
class BranchViolation : public Error {
 public:
  using Error::Error;
};

// Domain violations: the caller asked for a point where the quantity is undefined.

class DomainError : public Error {
 public:
  using Error::Error;
};

/// z is (numerically) a zero of s(1;z), where a(z) = 1/s(1;z) blows up.
class DirichletPoint : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Green function argument hits the spectrum [-2n, 2n] of the lattice Laplacian.
class InsideSpectrum : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A gap-only quantity was requested at |eta(lambda)| <= 2.
class GapViolation : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Coinciding phases: frequency/phase arithmetic conditions fail.
class ArithmeticClash : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Runs f() and rethrows any library error as the same type with `context` prepended.
template <typename F>
decltype(auto) in_context(const std::string& context, F&& f) {
  try {
    return std::forward<F>(f)();
  } catch (const DirichletPoint& e) {
    throw DirichletPoint(context + ": " + e.what());
  } catch (const InsideSpectrum& e) {
    throw InsideSpectrum(context + ": " + e.what());
  } catch (const GapViolation& e) {
    throw GapViolation(context + ": " + e.what());
  } catch (const ArithmeticClash& e) {
    throw ArithmeticClash(context + ": " + e.what());
  } catch (const DomainError& e) {
    throw DomainError(context + ": " + e.what());
  } catch (const OutOfRange& e) {
    throw OutOfRange(context + ": " + e.what());
  } catch (const BranchViolation& e) {
    throw BranchViolation(context + ": " + e.what());
  } catch (const Error& e) {
    throw Error(context + ": " + e.what());
  }
}

}  // namespace maryland
