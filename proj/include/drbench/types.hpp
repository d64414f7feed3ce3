#ifndef DRBENCH_TYPES_HPP
#define DRBENCH_TYPES_HPP

#include <Eigen/Core>

#include <random>
#include <stdexcept>
#include <string>

namespace drbench {

typedef double Real;

/// Number of controlled hours in one simulated office day.
inline constexpr int kHours = 10;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

typedef Vector<Real> VectorX;
typedef Matrix<Real> MatrixX;
typedef Eigen::Matrix<Real, kHours, 1> HourVector;

/// Hourly prices offered to the worker (currency per kWh).
typedef HourVector PriceVector;
/// Hourly energy demand of the worker (kWh).
typedef HourVector DemandProfile;
/// Utility time-of-use prices (currency per kWh).
typedef HourVector GridPriceSchedule;

/// All randomness in a run flows from one of these, seeded explicitly.
typedef std::mt19937_64 Rng;

/// Raised when a value leaves the domain an operation is defined on.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace drbench

#endif  // DRBENCH_TYPES_HPP
