#include "bihyp/metric_field.hpp"

#include <Eigen/Cholesky>

#include <algorithm>

#include "bihyp/fd.hpp"

namespace bihyp {

MetricField::MetricField(int dim, int jet_order)
    : dim_(dim), jet_order_(jet_order) {
  if (dim < 2) throw ConfigError("metric dimension must be at least 2");
  if (jet_order < 0 || jet_order > 3)
    throw ConfigError("metric jet order must be in 0..3");
}

Mat MetricField::metric(const Point& p) const {
  check_point(p, dim_);
  Mat g = eval(p);
  if (!g.allFinite())
    throw DegenerateMetricError("metric has non-finite entries");
  double scale = 1.0 + g.cwiseAbs().maxCoeff();
  if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw DegenerateMetricError("metric matrix is not symmetric");
  Eigen::LLT<Mat> llt(g);
  if (llt.info() != Eigen::Success)
    throw DegenerateMetricError("metric matrix is not positive definite");
  return g;
}

Mat MetricField::inverse_metric(const Point& p) const {
  Mat g = metric(p);
  Eigen::LLT<Mat> llt(g);
  return llt.solve(Mat::Identity(dim_, dim_));
}

void MetricField::require_jets(int order) const {
  if (order > jet_order_)
    throw CapabilityError("metric jets of order " + std::to_string(order) +
                          " requested, field provides order " +
                          std::to_string(jet_order_));
}

namespace {

// Entry-wise FD of the checked metric. Symmetrized over derivative axes by
// using a single multi-index per combination.
Mat fd_entry(const MetricField& m, const Point& p, std::vector<int> counts) {
  auto field = [&](const Vec& q) { return m.metric(q); };
  return fd::partial_multi(field, p, counts);
}

}  // namespace

std::vector<Mat> MetricField::d1(const Point& p) const {
  require_jets(1);
  check_point(p, dim_);
  std::vector<Mat> out(dim_);
  for (int s = 0; s < dim_; ++s) {
    std::vector<int> counts(dim_, 0);
    counts[s] = 1;
    out[s] = fd_entry(*this, p, counts);
  }
  return out;
}

std::vector<std::vector<Mat>> MetricField::d2(const Point& p) const {
  require_jets(2);
  check_point(p, dim_);
  std::vector<std::vector<Mat>> out(dim_, std::vector<Mat>(dim_));
  for (int s = 0; s < dim_; ++s)
    for (int r = s; r < dim_; ++r) {
      std::vector<int> counts(dim_, 0);
      counts[s] += 1;
      counts[r] += 1;
      out[s][r] = fd_entry(*this, p, counts);
      if (r != s) out[r][s] = out[s][r];
    }
  return out;
}

std::vector<std::vector<std::vector<Mat>>> MetricField::d3(
    const Point& p) const {
  require_jets(3);
  check_point(p, dim_);
  std::vector<std::vector<std::vector<Mat>>> out(
      dim_, std::vector<std::vector<Mat>>(dim_, std::vector<Mat>(dim_)));
  for (int s = 0; s < dim_; ++s)
    for (int r = s; r < dim_; ++r)
      for (int q = r; q < dim_; ++q) {
        std::vector<int> counts(dim_, 0);
        counts[s] += 1;
        counts[r] += 1;
        counts[q] += 1;
        Mat val = fd_entry(*this, p, counts);
        int perm[3] = {s, r, q};
        std::sort(perm, perm + 3);
        do {
          out[perm[0]][perm[1]][perm[2]] = val;
        } while (std::next_permutation(perm, perm + 3));
      }
  return out;
}

Mat EuclideanMetric::eval(const Point& p) const {
  return Mat::Identity(dim(), dim());
}

std::vector<Mat> EuclideanMetric::d1(const Point& p) const {
  check_point(p, dim());
  return std::vector<Mat>(dim(), Mat::Zero(dim(), dim()));
}

std::vector<std::vector<Mat>> EuclideanMetric::d2(const Point& p) const {
  check_point(p, dim());
  return std::vector<std::vector<Mat>>(
      dim(), std::vector<Mat>(dim(), Mat::Zero(dim(), dim())));
}

std::vector<std::vector<std::vector<Mat>>> EuclideanMetric::d3(
    const Point& p) const {
  check_point(p, dim());
  return std::vector<std::vector<std::vector<Mat>>>(
      dim(), std::vector<std::vector<Mat>>(
                 dim(), std::vector<Mat>(dim(), Mat::Zero(dim(), dim()))));
}

}  // namespace bihyp
