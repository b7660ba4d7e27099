#pragma once

#include <limits>

#include "bihyp/metric_field.hpp"
#include "bihyp/tensor_core.hpp"
#include "bihyp/types.hpp"

namespace bihyp {

/// Open interval of admissible t values.
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  static Interval all() { return {}; }
  bool contains(double t) const { return lo < t && t < hi; }
  bool is_all() const { return !(lo > -1e300) && !(hi < 1e300); }
};

/// Parameters of the warped product metric
///   (dy_1^2 + ... + dy_m^2) / (u + v t^2) + dt^2
/// on R^m x I in chart coordinates (y_1..y_m, t). v = 0 is admitted only in
/// flat-limit mode, where the metric degenerates to the flat one.
struct ModelParams {
  double u = 1.0;
  double v = 1.0;
  int m = 2;
  Interval t_interval = Interval::all();
  bool flat_limit = false;

  int ambient_dim() const { return m + 1; }
  double s(double t) const { return u + v * t * t; }
  void validate() const;
};

/// Warping scalar beta(t) = v t / (u + v t^2). The orthonormal frame
/// e_i = sqrt(s) d_i (i <= m), e_{m+1} = d_t satisfies
///   nab_{e_i} e_i = beta e_{m+1},  nab_{e_i} e_{m+1} = -beta e_i,
/// all other frame derivatives zero.
double model_beta(const ModelParams& params, double t);

class ModelMetric final : public MetricField {
 public:
  explicit ModelMetric(ModelParams params);
  const ModelParams& params() const noexcept { return params_; }

  std::vector<Mat> d1(const Point& p) const override;
  std::vector<std::vector<Mat>> d2(const Point& p) const override;
  std::vector<std::vector<std::vector<Mat>>> d3(const Point& p) const override;

 protected:
  Mat eval(const Point& p) const override;

 private:
  ModelParams params_;
};

/// Orthonormal frame e_1..e_{m+1} at p, chart components.
std::vector<Vec> model_frame(const ModelParams& params, const Point& p);

/// Closed-form connection in that frame.
struct FrameConnection {
  double tangential_to_normal;  // nab_{e_i} e_i        = this * e_{m+1}
  double normal_to_tangential;  // nab_{e_i} e_{m+1}    = this * e_i
};
FrameConnection closed_form_connection(const ModelParams& params,
                                       const Point& p);

/// Closed-form Christoffel symbols in chart coordinates.
Christoffel closed_form_christoffel(const ModelParams& params, double t);

/// Closed-form frame curvature components, i != j both tangential, N = m+1:
///   curvature_ijij = <R(e_i,e_j) e_i, e_j> =  v^2 t^2 / s^2
///   curvature_inin = <R(e_i,e_N) e_i, e_N> = -v (u - 2 v t^2) / s^2
double curvature_ijij(const ModelParams& params, double t);
double curvature_inin(const ModelParams& params, double t);

/// Sectional curvatures K(X,Y) = <R(X,Y)Y, X> / |X ^ Y|^2 of the coordinate
/// planes. Tangential planes are nonpositively curved for all t.
double sectional_tangent_plane(const ModelParams& params, double t);
double sectional_mixed_plane(const ModelParams& params, double t);

/// Ric = a <,> + b theta x theta with theta the unit covector dual to d_t.
struct ThetaEinsteinScalars {
  double a;
  double b;
};
ThetaEinsteinScalars theta_einstein_scalars(const ModelParams& params,
                                            double t);

/// Unit torse-forming field P = d_t with its scalars:
///   nab_X P = mu X + omega(X) P,  mu = -beta,  omega = beta theta.
struct StfField {
  VectorField P;
  ScalarField beta;
  ScalarField mu;
  VectorField omega;  // covector components
  VectorField theta;  // covector components of P-flat
};
StfField stf_field(const ModelParams& params);

}  // namespace bihyp
