#include "bihyp/tensor_core.hpp"

#include <cmath>

#include "bihyp/fd.hpp"

namespace bihyp {

Vec Christoffel::apply(const Vec& x, const Vec& y) const {
  const int n = static_cast<int>(gamma.size());
  Vec out(n);
  for (int k = 0; k < n; ++k) out[k] = x.dot(gamma[k] * y);
  return out;
}

Christoffel christoffel(const MetricField& metric, const Point& p) {
  metric.require_jets(1);
  const int n = metric.dim();
  Mat ginv = metric.inverse_metric(p);
  std::vector<Mat> dg = metric.d1(p);

  // Gamma_{l,ij} = (d_i g_jl + d_j g_il - d_l g_ij) / 2, then raise l.
  Christoffel ch;
  ch.gamma.assign(n, Mat::Zero(n, n));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Vec lower(n);
      for (int l = 0; l < n; ++l)
        lower[l] = 0.5 * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
      Vec upper = ginv * lower;
      for (int k = 0; k < n; ++k) {
        ch.gamma[k](i, j) = upper[k];
        ch.gamma[k](j, i) = upper[k];
      }
    }
  return ch;
}

std::vector<std::vector<Mat>> christoffel_d1(const MetricField& metric,
                                             const Point& p) {
  metric.require_jets(2);
  const int n = metric.dim();
  Mat ginv = metric.inverse_metric(p);
  std::vector<Mat> dg = metric.d1(p);
  std::vector<std::vector<Mat>> ddg = metric.d2(p);

  // d_s g^{kl} = -(g^-1 d_s g g^-1)^{kl}.
  std::vector<Mat> dginv(n);
  for (int s = 0; s < n; ++s) dginv[s] = -ginv * dg[s] * ginv;

  std::vector<std::vector<Mat>> out(n, std::vector<Mat>(n, Mat::Zero(n, n)));
  for (int s = 0; s < n; ++s)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        Vec lower(n), dlower(n);
        for (int l = 0; l < n; ++l) {
          lower[l] = 0.5 * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
          dlower[l] =
              0.5 * (ddg[s][i](j, l) + ddg[s][j](i, l) - ddg[s][l](i, j));
        }
        Vec dupper = dginv[s] * lower + ginv * dlower;
        for (int k = 0; k < n; ++k) {
          out[s][k](i, j) = dupper[k];
          out[s][k](j, i) = dupper[k];
        }
      }
  return out;
}

std::vector<Vec> orthonormal_frame(const Mat& g) {
  const int n = static_cast<int>(g.rows());
  std::vector<Vec> frame;
  frame.reserve(n);
  for (int i = 0; i < n; ++i) {
    Vec e = Vec::Unit(n, i);
    for (const Vec& f : frame) e -= f.dot(g * e) * f;
    double norm2 = e.dot(g * e);
    if (!(norm2 > 1e-14))
      throw DegenerateMetricError("orthonormal frame construction failed");
    frame.push_back(e / std::sqrt(norm2));
  }
  return frame;
}

CurvatureTensor::CurvatureTensor(const MetricField& metric, const Point& p)
    : n_(metric.dim()) {
  metric.require_jets(2);
  g_ = metric.metric(p);
  ginv_ = metric.inverse_metric(p);
  Christoffel ch = christoffel(metric, p);
  std::vector<std::vector<Mat>> dch = christoffel_d1(metric, p);

  // R^l_kij = d_i Gamma^l_jk - d_j Gamma^l_ik
  //         + Gamma^l_im Gamma^m_jk - Gamma^l_jm Gamma^m_ik.
  R_.assign(static_cast<std::size_t>(n_) * n_ * n_ * n_, 0.0);
  auto at = [&](int l, int k, int i, int j) -> double& {
    return R_[((static_cast<std::size_t>(l) * n_ + k) * n_ + i) * n_ + j];
  };
  for (int l = 0; l < n_; ++l)
    for (int k = 0; k < n_; ++k)
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) {
          double val = dch[i][l](j, k) - dch[j][l](i, k);
          for (int m = 0; m < n_; ++m)
            val += ch.gamma[l](i, m) * ch.gamma[m](j, k) -
                   ch.gamma[l](j, m) * ch.gamma[m](i, k);
          at(l, k, i, j) = val;
        }
  frame_ = orthonormal_frame(g_);
}

double CurvatureTensor::norm(const Vec& x) const {
  return std::sqrt(std::max(0.0, inner(x, x)));
}

Vec CurvatureTensor::apply(const Vec& x, const Vec& y, const Vec& z) const {
  Vec out = Vec::Zero(n_);
  for (int l = 0; l < n_; ++l) {
    double val = 0.0;
    for (int k = 0; k < n_; ++k)
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
          val += component(l, k, i, j) * x[i] * y[j] * z[k];
    out[l] = val;
  }
  return out;
}

double CurvatureTensor::lowered(const Vec& x, const Vec& y, const Vec& z,
                                const Vec& w) const {
  return inner(apply(x, y, z), w);
}

double CurvatureTensor::ricci_with_frame(const Vec& x, const Vec& y,
                                         const std::vector<Vec>& frame) const {
  double val = 0.0;
  for (const Vec& e : frame) val += lowered(e, x, y, e);
  return val;
}

double CurvatureTensor::ricci(const Vec& x, const Vec& y) const {
  return ricci_with_frame(x, y, frame_);
}

Vec CurvatureTensor::ricci_operator(const Vec& x) const {
  Vec covector(n_);
  for (int j = 0; j < n_; ++j) covector[j] = ricci(x, Vec::Unit(n_, j));
  return ginv_ * covector;
}

double CurvatureTensor::sectional(const Vec& x, const Vec& y) const {
  double gram = inner(x, x) * inner(y, y) - inner(x, y) * inner(x, y);
  double span_scale = inner(x, x) * inner(y, y);
  if (!(gram > 1e-12 * std::max(span_scale, 1e-300)))
    throw Error("sectional curvature of a degenerate span");
  return lowered(x, y, y, x) / gram;
}

Vec riemann(const MetricField& metric, const Point& p, const Vec& x,
            const Vec& y, const Vec& z) {
  return CurvatureTensor(metric, p).apply(x, y, z);
}

double ricci(const MetricField& metric, const Point& p, const Vec& x,
             const Vec& y) {
  return CurvatureTensor(metric, p).ricci(x, y);
}

Vec ricci_operator(const MetricField& metric, const Point& p, const Vec& x) {
  return CurvatureTensor(metric, p).ricci_operator(x);
}

Vec covariant_derivative(const MetricField& metric, const VectorField& w,
                         const Point& p, const Vec& x) {
  Vec dw = fd::directional(w, p, x);
  return dw + christoffel(metric, p).apply(x, w(p));
}

}  // namespace bihyp
