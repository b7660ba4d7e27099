#pragma once

#include <Eigen/Dense>

#include <functional>
#include <stdexcept>
#include <string>

namespace bihyp {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Ambient chart coordinates (y_1..y_m, t).
using Point = Eigen::VectorXd;

/// Scalar/vector fields in chart coordinates. Vector fields return chart
/// components; covector fields reuse VectorField and hold component arrays.
using ScalarField = std::function<double(const Vec&)>;
using VectorField = std::function<Vec(const Vec&)>;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Metric matrix not symmetric positive definite at a queried point.
struct DegenerateMetricError : Error {
  using Error::Error;
};

/// Requested derivative order exceeds what the field provides.
struct CapabilityError : Error {
  using Error::Error;
};

/// Evaluation point (or its finite-difference stencil) leaves the domain.
struct BoundaryError : Error {
  using Error::Error;
};

/// Induced metric numerically singular; the map is not an immersion there.
struct ImmersionDegenerateError : Error {
  using Error::Error;
};

/// Checker precondition |tau_2| <= tol failed.
struct NotBiharmonicError : Error {
  using Error::Error;
};

/// Least-squares system for a pointwise fit is rank deficient.
struct DegenerateFitError : Error {
  using Error::Error;
};

/// Ambient Ricci tensor does not have the assumed a<,> + b theta x theta form.
struct NotThetaEinsteinError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

inline void check_point(const Point& p, int dim) {
  if (p.size() != dim)
    throw Error("point dimension " + std::to_string(p.size()) +
                " does not match chart dimension " + std::to_string(dim));
  if (!p.allFinite()) throw Error("point has non-finite coordinates");
}

}  // namespace bihyp
