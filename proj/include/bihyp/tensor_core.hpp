#pragma once

#include <vector>

#include "bihyp/metric_field.hpp"
#include "bihyp/types.hpp"

namespace bihyp {

/// Connection coefficients at a point. gamma[k](i,j) = Gamma^k_ij, symmetric
/// in (i,j) by the Koszul construction.
struct Christoffel {
  std::vector<Mat> gamma;

  /// Gamma(X, Y)^k = Gamma^k_ij X^i Y^j.
  Vec apply(const Vec& x, const Vec& y) const;
};

Christoffel christoffel(const MetricField& metric, const Point& p);

/// d1[s][k](i,j) = d_s Gamma^k_ij, from metric jets of order 2.
std::vector<std::vector<Mat>> christoffel_d1(const MetricField& metric,
                                             const Point& p);

/// Gram-Schmidt orthonormal frame for the inner product with Gram matrix g,
/// seeded with the chart basis in index order. Row i holds the coefficients
/// of frame vector i in the original basis.
std::vector<Vec> orthonormal_frame(const Mat& g);

/// All curvature data of a metric at one point, assembled once from analytic
/// or synthesized metric jets. Convention:
///   R(X,Y)Z = nab_X nab_Y Z - nab_Y nab_X Z - nab_[X,Y] Z,
///   Ric(X,Y) = sum_a <R(E_a, X) Y, E_a> over an orthonormal frame E_a.
class CurvatureTensor {
 public:
  CurvatureTensor(const MetricField& metric, const Point& p);

  int dim() const noexcept { return n_; }
  const Mat& g() const noexcept { return g_; }
  const Mat& g_inv() const noexcept { return ginv_; }
  const std::vector<Vec>& frame() const noexcept { return frame_; }

  double inner(const Vec& x, const Vec& y) const { return x.dot(g_ * y); }
  double norm(const Vec& x) const;

  /// R^l_kij, so that (R(X,Y)Z)^l = R^l_kij X^i Y^j Z^k.
  double component(int l, int k, int i, int j) const {
    return R_[((static_cast<std::size_t>(l) * n_ + k) * n_ + i) * n_ + j];
  }

  Vec apply(const Vec& x, const Vec& y, const Vec& z) const;
  double lowered(const Vec& x, const Vec& y, const Vec& z, const Vec& w) const;
  double ricci(const Vec& x, const Vec& y) const;
  /// Ricci operator: <ricci_operator(X), Y> = Ric(X, Y).
  Vec ricci_operator(const Vec& x) const;
  /// Sectional curvature of span(X, Y); throws on degenerate spans.
  double sectional(const Vec& x, const Vec& y) const;

  /// Ricci recomputed with a caller-supplied orthonormal frame. Used to test
  /// frame independence.
  double ricci_with_frame(const Vec& x, const Vec& y,
                          const std::vector<Vec>& frame) const;

 private:
  int n_;
  Mat g_, ginv_;
  std::vector<double> R_;
  std::vector<Vec> frame_;
};

/// One-shot wrappers.
Vec riemann(const MetricField& metric, const Point& p, const Vec& x,
            const Vec& y, const Vec& z);
double ricci(const MetricField& metric, const Point& p, const Vec& x,
             const Vec& y);
Vec ricci_operator(const MetricField& metric, const Point& p, const Vec& x);

/// Covariant derivative of the vector field w along direction x at p, by a
/// directional difference of the components plus the connection term.
Vec covariant_derivative(const MetricField& metric, const VectorField& w,
                         const Point& p, const Vec& x);

}  // namespace bihyp
