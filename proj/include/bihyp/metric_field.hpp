#pragma once

#include <vector>

#include "bihyp/types.hpp"

namespace bihyp {

/// A Riemannian metric on a chart domain of R^n, queried pointwise together
/// with its coordinate derivatives ("jets"). The base class synthesizes
/// derivative jets by finite differences of eval(); subclasses with closed
/// forms override d1/d2/d3. jet_order caps what callers may request.
class MetricField {
 public:
  MetricField(int dim, int jet_order = 3);
  virtual ~MetricField() = default;

  int dim() const noexcept { return dim_; }
  int jet_order() const noexcept { return jet_order_; }

  /// Metric matrix at p. Checked: finite, symmetric, positive definite.
  Mat metric(const Point& p) const;
  Mat inverse_metric(const Point& p) const;

  /// d1(p)[s](i,j) = d_s g_ij.
  virtual std::vector<Mat> d1(const Point& p) const;
  /// d2(p)[s][r](i,j) = d_s d_r g_ij.
  virtual std::vector<std::vector<Mat>> d2(const Point& p) const;
  /// d3(p)[s][r][q](i,j) = d_s d_r d_q g_ij.
  virtual std::vector<std::vector<std::vector<Mat>>> d3(const Point& p) const;

  /// Throws CapabilityError unless jet_order() >= order.
  void require_jets(int order) const;

 protected:
  /// Raw metric matrix, unchecked. Must be defined wherever stencils of the
  /// d1/d2/d3 defaults land.
  virtual Mat eval(const Point& p) const = 0;

 private:
  int dim_;
  int jet_order_;
};

/// Flat metric, identity in the chart. Jets vanish identically.
class EuclideanMetric final : public MetricField {
 public:
  explicit EuclideanMetric(int dim) : MetricField(dim) {}
  std::vector<Mat> d1(const Point& p) const override;
  std::vector<std::vector<Mat>> d2(const Point& p) const override;
  std::vector<std::vector<std::vector<Mat>>> d3(const Point& p) const override;

 protected:
  Mat eval(const Point& p) const override;
};

}  // namespace bihyp
