#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <memory>
#include <vector>

#include "bihyp/hypersurface.hpp"
#include "bihyp/model_space.hpp"
#include "bihyp/torse_forming.hpp"
#include "bihyp/verifier.hpp"

using namespace bihyp;

namespace {

ModelParams params_uv(double u, double v, int m = 2) {
  ModelParams p;
  p.u = u;
  p.v = v;
  p.m = m;
  return p;
}

Vec pt2(double a, double b) {
  Vec x(2);
  x << a, b;
  return x;
}

// Generic graph with a visible shape operator and a slanted tangential part
// of the unit field, over the u = v = 1 warped product.
struct TorseLab {
  ModelParams prm = params_uv(1.0, 1.0);
  std::shared_ptr<const MetricField> ambient =
      std::make_shared<ModelMetric>(params_uv(1.0, 1.0));
  std::shared_ptr<const HeightFunction> height;
  GraphImmersion imm;
  TorseFormingData data = model_torse_data(params_uv(1.0, 1.0));

  TorseLab()
      : height(make_height()), imm(ambient, height, Box::cube(2, -1.0, 1.0)) {}

  static std::shared_ptr<const HeightFunction> make_height() {
    Mat q(2, 2);
    q << 0.8, 0.2, 0.2, 0.6;
    Vec b = pt2(0.3, -0.4);
    return std::make_shared<PolynomialHeight>(
        PolynomialHeight::quadratic(q, b, 0.1));
  }
};

double g_norm(const Vec& v, const Mat& g) {
  return std::sqrt(std::max(0.0, v.dot(g * v)));
}

Mat bumpy_matrix(const Point& p) {
  Mat g = Mat::Identity(3, 3);
  g(0, 0) += 0.4 * std::sin(p[1]);
  g(1, 1) += 0.3 * std::cos(p[0] + p[2]);
  g(2, 2) += 0.2 * std::sin(p[0]) * std::sin(p[1]);
  g(0, 1) = g(1, 0) = 0.2 * std::sin(p[2]);
  g(1, 2) = g(2, 1) = 0.15 * std::cos(p[0]);
  return g;
}

struct BumpyMetric final : MetricField {
  BumpyMetric() : MetricField(3) {}

 protected:
  Mat eval(const Point& p) const override { return bumpy_matrix(p); }
};

}  // namespace

TEST_CASE("splitting the unit field preserves norms and level graph limits") {
  TorseLab lab;
  Vec x = pt2(0.2, -0.3);
  TorseSplit sp = split(lab.imm, lab.data, x);

  // |P|^2 = phi^2 + |V|^2 and V is tangential.
  double v2 = sp.v_basis.dot(sp.frame.g * sp.v_basis);
  CHECK(std::abs(sp.phi * sp.phi + v2 - 1.0) < 1e-12);
  CHECK(std::abs(sp.frame.inner(sp.v_chart, sp.frame.eta)) < 1e-12);
  CHECK(v2 > 0.05);  // the slope makes the tangential part visible

  // On a level graph the field is purely normal and omega restricts to zero.
  GraphImmersion level =
      hyperplane_immersion(lab.ambient, Box::cube(2, -1.0, 1.0), 0.4);
  TorseSplit lv = split(level, lab.data, x);
  CHECK(std::abs(lv.phi - 1.0) < 1e-13);
  CHECK(lv.v_basis.cwiseAbs().maxCoeff() < 1e-13);
  CHECK(lv.omega_m.cwiseAbs().maxCoeff() < 1e-14);
  CHECK(std::abs(lv.omega_norm2_m) < 1e-14);
}

TEST_CASE("structure identities hold along a generic graph") {
  TorseLab lab;
  for (const Vec& x : {pt2(0.2, -0.3), pt2(-0.35, 0.15), pt2(0.1, 0.4)}) {
    CHECK(lemma_gradient_v_residual(lab.imm, lab.data, x, pt2(0.7, -0.4)) <
          1e-5);
    CHECK(lemma_gradient_v_residual(lab.imm, lab.data, x, pt2(-0.2, 0.9)) <
          1e-5);
    CHECK(lemma_gradient_phi_residual(lab.imm, lab.data, x) < 1e-5);
    CHECK(lemma_laplacian_phi_residual(lab.imm, lab.data, x) < 1e-4);
    CHECK(connection_pairing_check(lab.imm, lab.data, x).residual < 1e-4);
  }
}

TEST_CASE("flipping the shape term in the gradient identity is detected") {
  TorseLab lab;
  Vec x = pt2(0.2, -0.3);
  TorseSplit sp = split(lab.imm, lab.data, x);
  const HypersurfaceFrame& fr = sp.frame;

  auto phi_field = [&lab](const Vec& y) {
    return split(lab.imm, lab.data, y).phi;
  };
  Vec grad_phi = intrinsic_gradient(lab.imm, phi_field, x);
  Vec av = fr.shape * sp.v_basis;
  CHECK(g_norm(av, fr.g) > 0.05);  // the control must bite

  Vec right = sp.phi * sp.omega_sharp_basis - av;
  CHECK(g_norm(Vec(grad_phi - right), fr.g) < 1e-5);
  // Wrong sign on A(V) leaves exactly twice that term.
  Vec wrong = sp.phi * sp.omega_sharp_basis + av;
  double leftover = g_norm(Vec(grad_phi - wrong), fr.g);
  double want = g_norm(Vec(2.0 * av), fr.g);
  CHECK(std::abs(leftover - want) < 0.01 * want + 1e-5);
}

TEST_CASE("doubling the covector side of the pairing identity is detected") {
  TorseLab lab;
  Vec x = pt2(0.4, -0.5);
  PairingCheck pc = connection_pairing_check(lab.imm, lab.data, x);
  CHECK(std::abs(pc.lhs) > 1e-3);
  double wrong = std::abs(2.0 * pc.lhs - pc.rhs);
  CHECK(std::abs(wrong - std::abs(pc.lhs)) < 0.01 * std::abs(pc.lhs) + 1e-5);
}

TEST_CASE("laplacian pairing identity needs a biharmonic point") {
  TorseLab lab;
  CHECK_THROWS_AS(
      lemma_laplacian_pairing_residual(lab.imm, lab.data, pt2(0.2, -0.3), 1e-6),
      NotBiharmonicError);

  // Off the biharmonic level the gate rejects the level graph too.
  GraphImmersion off =
      hyperplane_immersion(lab.ambient, Box::cube(2, -1.0, 1.0), 1.2);
  CHECK_THROWS_AS(lemma_laplacian_pairing_residual(off, lab.data,
                                                   pt2(0.0, 0.0), 1e-6),
                  NotBiharmonicError);
}

TEST_CASE("laplacian pairing cancels through two opposite sizable terms") {
  // On the biharmonic level c = sqrt(u / 3v) the identity reduces to
  // f phi Ric(eta, eta) = -m mu f^2, both sides well above 1e-2 on the
  // {1,2,3}^2 parameter lattice.
  for (double u : {1.0, 2.0, 3.0})
    for (double v : {1.0, 2.0, 3.0}) {
      ModelParams prm = params_uv(u, v);
      auto ambient = std::make_shared<ModelMetric>(prm);
      double cstar = std::sqrt(u / (3.0 * v));
      GraphImmersion level =
          hyperplane_immersion(ambient, Box::cube(2, -1.0, 1.0), cstar);
      TorseFormingData data = model_torse_data(prm);
      Vec x = pt2(0.15, -0.25);

      LaplacianPairingBreakdown br =
          lemma_laplacian_pairing_residual(level, data, x, 1e-6);
      CHECK(br.residual < 1e-6);
      CHECK(std::abs(br.term_ric_eta) > 1e-2);
      CHECK(std::abs(br.term_mu) > 1e-2);
      CHECK(std::abs(br.term_ric_eta + br.term_mu) < 1e-9);
      CHECK(std::abs(br.term_ric_v) < 1e-12);
      CHECK(std::abs(br.term_conn) < 1e-9);
      CHECK(std::abs(br.lhs) < 1e-7);

      // Normal-tangential pairing: f Ric(eta, V) vanishes here since V = 0.
      CHECK(std::abs(normal_ricci_pairing(level, data, x)) < 1e-8);
    }
}

TEST_CASE("theta fit separates the two scalars or refuses") {
  ModelParams prm = params_uv(2.0, 1.0, 3);
  ModelMetric metric(prm);
  Point p(4);
  p << 0.1, -0.2, 0.3, 0.6;
  ThetaFit fit = theta_einstein_fit_at(
      metric, [](const Vec&) { return Vec(Vec::Unit(4, 3)); }, p);
  ThetaEinsteinScalars sc = theta_einstein_scalars(prm, 0.6);
  CHECK(std::abs(fit.a - sc.a) < 1e-10);
  CHECK(std::abs(fit.b - sc.b) < 1e-10);
  CHECK(fit.residual < 1e-10);

  // A vanishing covector cannot separate a from b.
  EuclideanMetric flat(3);
  CHECK_THROWS_AS(theta_einstein_fit_at(
                      flat, [](const Vec&) { return Vec(Vec::Zero(3)); },
                      Vec(Vec::Zero(3))),
                  DegenerateFitError);
}

TEST_CASE("obstruction scan classifies level graphs and generic graphs") {
  ModelParams prm = params_uv(1.0, 3.0);
  auto ambient = std::make_shared<ModelMetric>(prm);
  TorseFormingData data = model_torse_data(prm);
  VectorField theta = [](const Vec&) { return Vec(Vec::Unit(3, 2)); };
  Box box = Box::cube(2, -1.0, 1.0);
  std::vector<Vec> pts = {pt2(0.1, 0.2), pt2(-0.3, 0.45), pt2(0.5, -0.5)};
  ObstructionOptions opt;

  double cstar = std::sqrt(1.0 / 9.0);
  GraphImmersion bih = hyperplane_immersion(ambient, box, cstar);
  ObstructionResult res = obstruction_check(bih, data, theta, pts, opt);
  CHECK(res.status == ObstructionStatus::satisfied);
  CHECK(res.biharmonic_count == 3);
  CHECK(res.violations == 0);

  GraphImmersion off = hyperplane_immersion(ambient, box, 2.0 * cstar);
  res = obstruction_check(off, data, theta, pts, opt);
  CHECK(res.status == ObstructionStatus::no_biharmonic_points);
  CHECK(res.biharmonic_count == 0);

  // An impossible zero tolerance turns every biharmonic point into a
  // violation; exercises the reporting path the theorem forbids naturally.
  ObstructionOptions impossible = opt;
  impossible.zero_tol = -1.0;
  res = obstruction_check(bih, data, theta, pts, impossible);
  CHECK(res.status == ObstructionStatus::violated);
  CHECK(res.violations == res.biharmonic_count);
  CHECK(res.violating_indices.size() == 3);

  // Ambients whose Ricci form is not a <,> + b theta x theta are refused.
  auto bumpy = std::make_shared<BumpyMetric>();
  GraphImmersion generic(
      bumpy,
      std::make_shared<PolynomialHeight>(
          PolynomialHeight::affine(pt2(0.2, -0.1), 0.0)),
      box);
  CHECK_THROWS_AS(obstruction_check(generic, data, theta, pts, opt),
                  NotThetaEinsteinError);
}

TEST_CASE("flat limit: parallel unit field on an affine graph") {
  ModelParams prm = params_uv(1.0, 0.0);
  prm.flat_limit = true;
  auto ambient = std::make_shared<ModelMetric>(prm);
  TorseFormingData data = model_torse_data(prm);
  auto height = std::make_shared<PolynomialHeight>(
      PolynomialHeight::affine(pt2(0.4, -0.3), 0.2));
  GraphImmersion imm(ambient, height, Box::cube(2, -1.0, 1.0));
  Vec x = pt2(0.1, -0.2);

  CHECK(torse_residual(*ambient, data, imm.image(x), Vec(Vec::Unit(3, 0))) <
        1e-12);
  CHECK(lemma_gradient_v_residual(imm, data, x, pt2(1.0, 0.5)) < 1e-8);
  CHECK(lemma_gradient_phi_residual(imm, data, x) < 1e-8);
  CHECK(lemma_laplacian_phi_residual(imm, data, x) < 1e-8);

  VectorField theta = [](const Vec&) { return Vec(Vec::Unit(3, 2)); };
  // Affine flat graphs are minimal, hence biharmonic with f = 0 everywhere.
  std::vector<Vec> pts = {x, pt2(-0.4, 0.3)};
  ObstructionResult res =
      obstruction_check(imm, data, theta, pts, ObstructionOptions{});
  CHECK(res.status == ObstructionStatus::satisfied);
  CHECK(res.biharmonic_count == 2);
  CHECK(res.violations == 0);
}
