#include "bihyp/model_space.hpp"

#include <cmath>

namespace bihyp {

void ModelParams::validate() const {
  if (!(u > 0.0)) throw ConfigError("model parameter u must be positive");
  if (flat_limit) {
    if (v != 0.0)
      throw ConfigError("flat-limit mode requires v = 0");
  } else if (!(v > 0.0)) {
    throw ConfigError("model parameter v must be positive (use flat-limit mode for v = 0)");
  }
  if (m < 2) throw ConfigError("model dimension m must be at least 2");
  if (!(t_interval.lo < t_interval.hi))
    throw ConfigError("empty t interval");
}

double model_beta(const ModelParams& params, double t) {
  return params.v * t / params.s(t);
}

ModelMetric::ModelMetric(ModelParams params)
    : MetricField(params.ambient_dim(), 3), params_(params) {
  params_.validate();
}

namespace {

// Derivatives in t of w(t) = 1 / s(t), s = u + v t^2.
struct WarpJet {
  double w, w1, w2, w3;
};

WarpJet warp_jet(const ModelParams& p, double t) {
  double s = p.s(t);
  double s1 = 2.0 * p.v * t;
  double s2 = 2.0 * p.v;
  WarpJet j;
  j.w = 1.0 / s;
  j.w1 = -s1 / (s * s);
  j.w2 = -s2 / (s * s) + 2.0 * s1 * s1 / (s * s * s);
  j.w3 = 6.0 * s1 * s2 / (s * s * s) - 6.0 * s1 * s1 * s1 / (s * s * s * s);
  return j;
}

double t_of(const Point& p) { return p[p.size() - 1]; }

void check_t(const ModelParams& params, const Point& p) {
  if (!params.t_interval.contains(t_of(p)))
    throw BoundaryError("t coordinate outside the model interval");
}

Mat diag_warp(int n, double tangential, double normal) {
  Mat g = Mat::Zero(n, n);
  for (int i = 0; i < n - 1; ++i) g(i, i) = tangential;
  g(n - 1, n - 1) = normal;
  return g;
}

}  // namespace

Mat ModelMetric::eval(const Point& p) const {
  check_t(params_, p);
  return diag_warp(dim(), warp_jet(params_, t_of(p)).w, 1.0);
}

std::vector<Mat> ModelMetric::d1(const Point& p) const {
  check_point(p, dim());
  check_t(params_, p);
  const int n = dim();
  std::vector<Mat> out(n, Mat::Zero(n, n));
  out[n - 1] = diag_warp(n, warp_jet(params_, t_of(p)).w1, 0.0);
  return out;
}

std::vector<std::vector<Mat>> ModelMetric::d2(const Point& p) const {
  check_point(p, dim());
  check_t(params_, p);
  const int n = dim();
  std::vector<std::vector<Mat>> out(n,
                                    std::vector<Mat>(n, Mat::Zero(n, n)));
  out[n - 1][n - 1] = diag_warp(n, warp_jet(params_, t_of(p)).w2, 0.0);
  return out;
}

std::vector<std::vector<std::vector<Mat>>> ModelMetric::d3(
    const Point& p) const {
  check_point(p, dim());
  check_t(params_, p);
  const int n = dim();
  std::vector<std::vector<std::vector<Mat>>> out(
      n, std::vector<std::vector<Mat>>(n,
                                       std::vector<Mat>(n, Mat::Zero(n, n))));
  out[n - 1][n - 1][n - 1] = diag_warp(n, warp_jet(params_, t_of(p)).w3, 0.0);
  return out;
}

std::vector<Vec> model_frame(const ModelParams& params, const Point& p) {
  const int n = params.ambient_dim();
  check_point(p, n);
  double root_s = std::sqrt(params.s(t_of(p)));
  std::vector<Vec> frame(n);
  for (int i = 0; i < n - 1; ++i) frame[i] = root_s * Vec::Unit(n, i);
  frame[n - 1] = Vec::Unit(n, n - 1);
  return frame;
}

FrameConnection closed_form_connection(const ModelParams& params,
                                       const Point& p) {
  double beta = model_beta(params, t_of(p));
  return {beta, -beta};
}

Christoffel closed_form_christoffel(const ModelParams& params, double t) {
  const int n = params.ambient_dim();
  double s = params.s(t);
  Christoffel ch;
  ch.gamma.assign(n, Mat::Zero(n, n));
  // Gamma^t_ii = v t / s^2, Gamma^i_{it} = Gamma^i_{ti} = -v t / s.
  for (int i = 0; i < n - 1; ++i) {
    ch.gamma[n - 1](i, i) = params.v * t / (s * s);
    ch.gamma[i](i, n - 1) = -params.v * t / s;
    ch.gamma[i](n - 1, i) = -params.v * t / s;
  }
  return ch;
}

double curvature_ijij(const ModelParams& params, double t) {
  double s = params.s(t);
  return params.v * params.v * t * t / (s * s);
}

double curvature_inin(const ModelParams& params, double t) {
  double s = params.s(t);
  return -params.v * (params.u - 2.0 * params.v * t * t) / (s * s);
}

double sectional_tangent_plane(const ModelParams& params, double t) {
  return -curvature_ijij(params, t);
}

double sectional_mixed_plane(const ModelParams& params, double t) {
  return -curvature_inin(params, t);
}

ThetaEinsteinScalars theta_einstein_scalars(const ModelParams& params,
                                            double t) {
  double s = params.s(t);
  double a = params.v * (params.u - params.v * (params.m + 1) * t * t) /
             (s * s);
  double b = params.v * (params.m - 1) * (params.u - params.v * t * t) /
             (s * s);
  return {a, b};
}

StfField stf_field(const ModelParams& params) {
  const int n = params.ambient_dim();
  ModelParams copy = params;
  StfField f;
  f.P = [n](const Vec&) { return Vec(Vec::Unit(n, n - 1)); };
  f.theta = [n](const Vec&) { return Vec(Vec::Unit(n, n - 1)); };
  f.beta = [copy](const Vec& p) { return model_beta(copy, p[p.size() - 1]); };
  f.mu = [copy](const Vec& p) { return -model_beta(copy, p[p.size() - 1]); };
  f.omega = [copy, n](const Vec& p) {
    return Vec(model_beta(copy, p[p.size() - 1]) * Vec::Unit(n, n - 1));
  };
  return f;
}

}  // namespace bihyp
