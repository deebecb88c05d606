#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace forge {

using cplx = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kImag{0.0, 1.0};

// Physical constants (SI), used only by the noise/catalog unit bridges.
inline constexpr double kHbar = 1.054571817e-34;      // J s
inline constexpr double kBoltzmann = 1.380649e-23;    // J/K
inline constexpr double kMassRb87 = 1.44316060e-25;   // kg
inline constexpr double kMassCs133 = 2.20694650e-25;  // kg
inline constexpr double kSpeedOfLight = 2.99792458e8; // m/s

/// Raised when a config file or serialized artifact fails validation.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

inline void validate(bool cond, const std::string& msg) {
  if (!cond) throw ValidationError(msg);
}

}  // namespace forge
