#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <memory>
#include <vector>

#include "bihyp/hypersurface.hpp"
#include "bihyp/model_space.hpp"
#include "bihyp/verifier.hpp"

using namespace bihyp;

namespace {

std::shared_ptr<const MetricField> make_model(double u, double v, int m = 2) {
  ModelParams prm;
  prm.u = u;
  prm.v = v;
  prm.m = m;
  return std::make_shared<ModelMetric>(prm);
}

Vec pt2(double a, double b) {
  Vec x(2);
  x << a, b;
  return x;
}

GraphImmersion quadratic_graph(double u, double v) {
  Mat q(2, 2);
  q << 0.3, 0.1, 0.1, -0.2;
  Vec b = pt2(0.05, -0.1);
  auto height = std::make_shared<PolynomialHeight>(
      PolynomialHeight::quadratic(q, b, 0.2));
  return GraphImmersion(make_model(u, v), height, Box::cube(2, -1.0, 1.0));
}

// Closed forms on the level graph t = c: f = beta(c), A = beta Id,
// tau2 . eta = m^2 v^2 c (3 v c^2 - u) / s^3.
double level_tau2_normal(double u, double v, int m, double c) {
  double s = u + v * c * c;
  return m * m * v * v * c * (3.0 * v * c * c - u) / (s * s * s);
}

// Height with hidden jets: forces the finite-difference defaults.
struct OpaqueHeight final : HeightFunction {
  explicit OpaqueHeight(std::shared_ptr<const HeightFunction> inner)
      : HeightFunction(inner->dim(), false), inner_(std::move(inner)) {}
  double value(const Vec& x) const override { return inner_->value(x); }

 private:
  std::shared_ptr<const HeightFunction> inner_;
};

}  // namespace

TEST_CASE("level graph frame matches the closed forms") {
  // u = 1, v = 3, c = 1/3: s = 4/3, beta = 3 c / s = 0.75.
  auto ambient = make_model(1.0, 3.0);
  Box box = Box::cube(2, -1.0, 1.0);
  GraphImmersion imm = hyperplane_immersion(ambient, box, 1.0 / 3.0);
  Vec x = pt2(0.2, -0.5);
  HypersurfaceFrame fr = frame_at(imm, x);

  CHECK(std::abs(fr.f - 0.75) < 1e-13);
  CHECK((fr.shape - 0.75 * Mat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-13);
  CHECK(std::abs(fr.A2 - 1.125) < 1e-12);
  CHECK(std::abs(fr.eta[2] - 1.0) < 1e-14);
  CHECK(std::abs(fr.eta[0]) < 1e-14);
  // Induced metric is the ambient tangential block: 1/s = 0.75.
  CHECK((fr.g - 0.75 * Mat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-13);

  Vec tau = tension(imm, x);
  CHECK(std::abs(tau[2] - 1.5) < 1e-12);
  CHECK(std::abs(tau[0]) + std::abs(tau[1]) < 1e-13);
}

TEST_CASE("intrinsic operators on a level graph have closed forms") {
  auto ambient = make_model(1.0, 3.0);
  GraphImmersion imm =
      hyperplane_immersion(ambient, Box::cube(2, -1.0, 1.0), 1.0 / 3.0);
  Vec x = pt2(0.1, 0.3);
  double s = 4.0 / 3.0;

  // Delta x1^2 = 2 s, grad x1 = s d_1, div(x1 d_1) = 1 (metric is constant
  // over the level graph).
  ScalarField sq = [](const Vec& y) { return y[0] * y[0]; };
  CHECK(std::abs(laplace_beltrami(imm, sq, x) - 2.0 * s) < 1e-8);

  ScalarField lin = [](const Vec& y) { return y[0]; };
  Vec grad = intrinsic_gradient(imm, lin, x);
  CHECK(std::abs(grad[0] - s) < 1e-9);
  CHECK(std::abs(grad[1]) < 1e-9);

  VectorField w = [](const Vec& y) {
    Vec out(2);
    out << y[0], 0.0;
    return out;
  };
  CHECK(std::abs(divergence(imm, w, x) - 1.0) < 1e-9);
}

TEST_CASE("level graph bitension matches the closed form across c") {
  auto ambient = make_model(1.0, 1.0);
  Box box = Box::cube(2, -1.0, 1.0);
  Vec x = pt2(0.0, 0.0);

  BitensionResult bt =
      bitension(hyperplane_immersion(ambient, box, 1.0), x);
  CHECK(std::abs(bt.tau2_normal - 1.0) < 1e-7);
  CHECK(std::abs(bt.tau2[2] - 1.0) < 1e-7);
  CHECK(bt.tau2_tangent.cwiseAbs().maxCoeff() < 1e-8);

  for (int k = 0; k < 15; ++k) {
    double c = -1.8 + 3.6 * k / 14.0;
    double want = level_tau2_normal(1.0, 1.0, 2, c);
    BitensionResult sweep =
        bitension(hyperplane_immersion(ambient, box, c), x);
    CHECK(std::abs(sweep.tau2_normal - want) <
          std::max(1e-6 * std::abs(want), 1e-8));
    CHECK(sweep.tau2_tangent.cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("the biharmonic level sits at c = sqrt(u / 3v) and is not minimal") {
  double u = 1.0, v = 3.0;
  double cstar = std::sqrt(u / (3.0 * v));
  auto ambient = make_model(u, v);
  GraphImmersion imm =
      hyperplane_immersion(ambient, Box::cube(2, -1.0, 1.0), cstar);
  Vec x = pt2(-0.3, 0.4);

  BitensionResult bt = bitension(imm, x);
  CHECK(bt.tau2_norm < 1e-8);
  CHECK(bt.frame.norm(bt.tau) > 0.5);  // proper: tension does not vanish

  SystemResiduals sys = system_residuals(imm, x);
  CHECK(std::abs(sys.normal) < 1e-9);
  CHECK(sys.tangential_norm < 1e-9);
}

TEST_CASE("bitension equals m times the system residual pair") {
  GraphImmersion imm = quadratic_graph(1.0, 1.0);
  Vec x = pt2(0.15, -0.2);
  BitensionResult bt = bitension(imm, x);
  SystemResiduals sys = system_residuals(imm, x);
  const int m = 2;

  double scale = std::max(1.0, bt.tau2_norm);
  CHECK(std::abs(bt.tau2_normal - m * sys.normal) < 1e-4 * scale);
  CHECK((bt.tau2_tangent - Vec(m * sys.tangential)).cwiseAbs().maxCoeff() <
        1e-4 * scale);
}

TEST_CASE("the bitension to system factor is the graph dimension") {
  // Least squares over several immersions and points; both ratios freeze to
  // m = 2 well inside 1e-3.
  auto ambient = make_model(1.0, 1.0);
  std::vector<GraphImmersion> imms;
  imms.push_back(quadratic_graph(1.0, 1.0));
  {
    std::vector<PlaneWaveHeight::Wave> waves;
    waves.push_back({0.15, pt2(0.9, -0.4), 0.3});
    waves.push_back({0.1, pt2(-0.3, 0.8), 1.1});
    imms.push_back(GraphImmersion(
        ambient, std::make_shared<PlaneWaveHeight>(2, std::move(waves)),
        Box::cube(2, -1.0, 1.0)));
  }
  std::vector<Vec> xs = {pt2(0.1, 0.2), pt2(-0.25, 0.3), pt2(0.4, -0.35),
                         pt2(-0.15, -0.3)};

  double nn = 0.0, nd = 0.0, tn = 0.0, td = 0.0;
  for (const GraphImmersion& imm : imms)
    for (const Vec& x : xs) {
      BitensionResult bt = bitension(imm, x);
      SystemResiduals sys = system_residuals(imm, x);
      nn += bt.tau2_normal * sys.normal;
      nd += sys.normal * sys.normal;
      Vec t_chart = sys.tangential;
      tn += bt.frame.inner(bt.tau2_tangent, t_chart);
      td += bt.frame.inner(t_chart, t_chart);
    }
  CHECK(nd > 1e-4);  // regression data must not be degenerate
  CHECK(td > 1e-6);
  CHECK(std::abs(nn / nd - 2.0) < 1e-3);
  CHECK(std::abs(tn / td - 2.0) < 1e-3);
}

TEST_CASE("orientation flip negates the scalars but not the equations") {
  GraphImmersion imm = quadratic_graph(1.0, 2.0);
  GraphImmersion rev = imm.flipped();
  Vec x = pt2(0.2, 0.1);

  HypersurfaceFrame a = frame_at(imm, x);
  HypersurfaceFrame b = frame_at(rev, x);
  CHECK((a.eta + b.eta).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(std::abs(a.f + b.f) < 1e-12);
  CHECK((a.shape + b.shape).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(std::abs(a.A2 - b.A2) < 1e-12);
  CHECK((a.g - b.g).cwiseAbs().maxCoeff() == 0.0);

  // tau = m f eta and tau2 are orientation free.
  CHECK((tension(imm, x) - tension(rev, x)).cwiseAbs().maxCoeff() < 1e-12);
  BitensionResult bt1 = bitension(imm, x);
  BitensionResult bt2 = bitension(rev, x);
  CHECK((bt1.tau2 - bt2.tau2).cwiseAbs().maxCoeff() < 1e-7);

  SystemResiduals s1 = system_residuals(imm, x);
  SystemResiduals s2 = system_residuals(rev, x);
  CHECK(std::abs(s1.normal + s2.normal) < 1e-7);
  CHECK(std::abs(s1.tangential_norm - s2.tangential_norm) < 1e-7);
}

TEST_CASE("affine graphs in flat ambient space are totally geodesic") {
  auto flat = std::make_shared<EuclideanMetric>(3);
  auto height = std::make_shared<PolynomialHeight>(
      PolynomialHeight::affine(pt2(0.3, -0.2), 0.1));
  GraphImmersion imm(flat, height, Box::cube(2, -1.0, 1.0));
  Vec x = pt2(0.25, -0.4);

  HypersurfaceFrame fr = frame_at(imm, x);
  CHECK(fr.shape.cwiseAbs().maxCoeff() < 1e-14);
  CHECK(std::abs(fr.f) < 1e-14);
  CHECK(tension(imm, x).cwiseAbs().maxCoeff() < 1e-14);
  BitensionResult bt = bitension(imm, x);
  CHECK(bt.tau2_norm < 1e-10);
  SystemResiduals sys = system_residuals(imm, x);
  CHECK(std::abs(sys.normal) < 1e-10);
  CHECK(sys.tangential_norm < 1e-10);
}

TEST_CASE("hidden height jets fall back to stencils and stay consistent") {
  Mat q(2, 2);
  q << 0.2, -0.1, -0.1, 0.3;
  auto exact = std::make_shared<PolynomialHeight>(
      PolynomialHeight::quadratic(q, pt2(0.1, 0.0), -0.05));
  auto opaque = std::make_shared<OpaqueHeight>(exact);
  auto ambient = make_model(1.0, 1.0);
  Box box = Box::cube(2, -1.0, 1.0);
  GraphImmersion a(ambient, exact, box);
  GraphImmersion b(ambient, opaque, box);
  Vec x = pt2(0.1, 0.2);

  HypersurfaceFrame fa = frame_at(a, x);
  HypersurfaceFrame fb = frame_at(b, x);
  CHECK(std::abs(fa.f - fb.f) < 1e-7);
  CHECK((fa.shape - fb.shape).cwiseAbs().maxCoeff() < 1e-7);
  CHECK((tension(a, x) - tension(b, x)).cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("near-singular induced metrics are rejected") {
  auto ambient = make_model(1.0, 1.0);
  auto steep = std::make_shared<PolynomialHeight>(
      PolynomialHeight::affine(pt2(1e8, 1e8), 0.0));
  GraphImmersion imm(ambient, steep, Box::cube(2, -1.0, 1.0));
  CHECK_THROWS_AS(frame_at(imm, pt2(0.0, 0.0)), ImmersionDegenerateError);
}

TEST_CASE("domain and stencil margins raise boundary errors") {
  auto ambient = make_model(1.0, 1.0);
  GraphImmersion imm =
      hyperplane_immersion(ambient, Box::cube(2, -1.0, 1.0), 0.5);

  CHECK_NOTHROW(frame_at(imm, pt2(1.0, 0.0)));
  CHECK_THROWS_AS(frame_at(imm, pt2(1.01, 0.0)), BoundaryError);

  ScalarField sq = [](const Vec& y) { return y[0] * y[0]; };
  CHECK_THROWS_AS(laplace_beltrami(imm, sq, pt2(0.999, 0.0)), BoundaryError);
  CHECK_THROWS_AS(bitension(imm, pt2(0.0, -0.995)), BoundaryError);
  CHECK_NOTHROW(laplace_beltrami(imm, sq, pt2(0.97, 0.0)));
}

TEST_CASE("immersion wiring rejects mismatched dimensions") {
  auto ambient = make_model(1.0, 1.0);  // dimension 3
  auto height3 = std::make_shared<PolynomialHeight>(
      PolynomialHeight::constant(3, 0.1));
  CHECK_THROWS_AS(GraphImmersion(ambient, height3, Box::cube(3, -1.0, 1.0)),
                  ConfigError);
  auto height2 = std::make_shared<PolynomialHeight>(
      PolynomialHeight::constant(2, 0.1));
  CHECK_THROWS_AS(GraphImmersion(ambient, height2, Box::cube(3, -1.0, 1.0)),
                  ConfigError);
}
