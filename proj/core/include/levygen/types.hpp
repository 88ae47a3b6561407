#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace levygen {

/// Largest state/frequency dimension supported. Vectors live on the stack.
inline constexpr int kMaxDim = 8;

using Vector = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim, kMaxDim>;
using Complex = std::complex<double>;

using ScalarField = std::function<double(const Vector&)>;
using VectorField = std::function<Vector(const Vector&)>;
using MatrixField = std::function<Matrix(const Vector&)>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kPi = 3.14159265358979323846;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter lies outside the range where a formula is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation does not hold.
class ContractError : public Error {
 public:
  using Error::Error;
};

/// The generator form requested at a point is not backed by enough regularity.
class InsufficientRegularity : public Error {
 public:
  using Error::Error;
};

/// A quadrature did not reach its tolerance. Carries what was obtained.
class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, Complex partial, double residual)
      : Error(what), partial_(partial), residual_(residual) {}
  Complex partial() const { return partial_; }
  double residual() const { return residual_; }

 private:
  Complex partial_;
  double residual_;
};

/// Malformed or schema-violating configuration input.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& path, const std::string& what)
      : Error(path.empty() ? what : path + ": " + what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

inline Vector zeros(int d) { return Vector::Zero(d); }

inline void require_dimension(int d) {
  if (d < 1 || d > kMaxDim)
    throw DomainError("dimension must lie in [1, " + std::to_string(kMaxDim) + "], got " + std::to_string(d));
}

}  // namespace levygen
