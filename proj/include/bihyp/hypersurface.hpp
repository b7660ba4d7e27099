#pragma once

#include <memory>
#include <vector>

#include "bihyp/height_function.hpp"
#include "bihyp/metric_field.hpp"
#include "bihyp/tensor_core.hpp"
#include "bihyp/types.hpp"

namespace bihyp {

/// Axis-aligned closed box in R^m, the chart domain of a graph.
struct Box {
  Vec lo, hi;

  static Box cube(int m, double lo, double hi);
  int dim() const { return static_cast<int>(lo.size()); }
  Vec center() const { return 0.5 * (lo + hi); }
  /// margin is in units of max(1, |x_a|) per axis.
  bool contains(const Vec& x, double margin = 0.0) const;
};

/// Graph hypersurface x -> (x, F(x)) inside an ambient chart of dimension
/// m + 1. flip_normal selects the opposite orientation of the unit normal;
/// the default orientation has positive last chart component.
class GraphImmersion {
 public:
  GraphImmersion(std::shared_ptr<const MetricField> ambient,
                 std::shared_ptr<const HeightFunction> height, Box domain,
                 bool flip_normal = false);

  int m() const noexcept { return height_->dim(); }
  int ambient_dim() const noexcept { return ambient_->dim(); }
  const MetricField& ambient() const noexcept { return *ambient_; }
  const HeightFunction& height() const noexcept { return *height_; }
  const Box& domain() const noexcept { return domain_; }
  bool flip_normal() const noexcept { return flip_; }
  GraphImmersion flipped() const;

  Point image(const Vec& x) const;
  /// Coordinate tangent X_a = d_a + (d_a F) d_t, chart components.
  Vec tangent(const Vec& x, int a) const;

 private:
  std::shared_ptr<const MetricField> ambient_;
  std::shared_ptr<const HeightFunction> height_;
  Box domain_;
  bool flip_;
};

/// First and second order data of the immersion at a domain point. The shape
/// operator follows A(X) = -(nab_X eta)^T, so spheres about the origin in
/// flat space get positive mean curvature for the inward normal.
struct HypersurfaceFrame {
  Vec x;
  Point p;
  Mat ambient_g;              // ambient metric at p
  std::vector<Vec> tangents;  // X_a, chart components
  Mat g;                      // induced metric, g(a,b) = <X_a, X_b>
  Mat g_inv;
  Vec eta;                    // unit normal, chart components
  Mat shape;                  // A(X_a) = sum_b shape(b, a) X_b
  Mat second_fund;            // B(a,b) = <A(X_a), X_b>, symmetrized
  double f;                   // mean curvature, tr(shape) / m
  double A2;                  // |A|^2 = tr(shape^2)

  /// Ambient inner product at p.
  double inner(const Vec& a, const Vec& b) const { return a.dot(ambient_g * b); }
  double norm(const Vec& a) const;
  /// Chart components of a tangent vector given in X-basis coordinates.
  Vec to_chart(const Vec& basis_coords) const;
  /// X-basis coordinates of the tangential part of a chart vector.
  Vec tangential_coords(const Vec& chart) const;
};

/// Throws BoundaryError if x (plus finite-difference reach) leaves the
/// domain, ImmersionDegenerateError if the induced metric is numerically
/// singular there.
HypersurfaceFrame frame_at(const GraphImmersion& imm, const Vec& x);

/// Induced metric only; cheaper than frame_at, no curvature data.
Mat induced_metric(const GraphImmersion& imm, const Vec& x);

/// Margin check for operators that difference fields over the domain.
void require_interior(const GraphImmersion& imm, const Vec& x);

Christoffel induced_christoffel(const GraphImmersion& imm, const Vec& x);

/// Laplace-Beltrami of a domain scalar, analyst's sign: Delta|x|^2 > 0.
double laplace_beltrami(const GraphImmersion& imm, const ScalarField& h,
                        const Vec& x);

/// Intrinsic gradient in X-basis coordinates: g^{ab} d_b h.
Vec intrinsic_gradient(const GraphImmersion& imm, const ScalarField& h,
                       const Vec& x);

/// Divergence of a tangent field given in X-basis coordinates.
double divergence(const GraphImmersion& imm, const VectorField& w_basis,
                  const Vec& x);

double mean_curvature(const GraphImmersion& imm, const Vec& x);

/// Tension tau = m f eta, chart components.
Vec tension(const GraphImmersion& imm, const Vec& x);

/// Residuals of the normal and tangential biharmonicity equations:
///   N = -Delta f + f |A|^2 - f Ric(eta, eta)
///   T = 2 A(grad f) + m f grad f - 2 f (Ricci eta)^T
/// A graph is biharmonic iff N = 0 and T = 0.
struct SystemResiduals {
  double normal;
  Vec tangential;        // chart components
  Vec tangential_basis;  // X-basis coordinates
  double tangential_norm;
  double delta_f;
  Vec grad_f_basis;
};

SystemResiduals system_residuals(const GraphImmersion& imm, const Vec& x);

/// Bitension through the second variation formula,
///   tau2 = -m sum_i { R(H, e_i) e_i + nab_{e_i} nab_{e_i} H
///                     - nab_{nab^M_{e_i} e_i} H },
/// contracted over an orthonormal tangent frame. Equals m (N eta + T).
struct BitensionResult {
  HypersurfaceFrame frame;
  Vec tau;              // chart components
  Vec tau2;             // chart components
  double tau2_normal;   // <tau2, eta>
  Vec tau2_tangent;     // chart components
  Vec tau2_tangent_basis;
  double tau2_norm;     // |tau2| in the ambient metric
};

BitensionResult bitension(const GraphImmersion& imm, const Vec& x);

}  // namespace bihyp
