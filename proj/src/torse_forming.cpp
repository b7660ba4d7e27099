#include "bihyp/torse_forming.hpp"

#include <Eigen/SVD>

#include <cmath>

#include "bihyp/fd.hpp"

namespace bihyp {

TorseFormingData model_torse_data(const ModelParams& params) {
  StfField f = stf_field(params);
  return {f.P, f.mu, f.omega};
}

double torse_residual(const MetricField& metric, const TorseFormingData& data,
                      const Point& p, const Vec& x_dir) {
  Vec nab = covariant_derivative(metric, data.P, p, x_dir);
  Vec res = nab - data.mu(p) * x_dir - data.omega(p).dot(x_dir) * data.P(p);
  Mat g = metric.metric(p);
  return std::sqrt(std::max(0.0, res.dot(g * res)));
}

TorseSplit split(const GraphImmersion& imm, const TorseFormingData& data,
                 const Vec& x) {
  TorseSplit sp;
  sp.frame = frame_at(imm, x);
  const HypersurfaceFrame& fr = sp.frame;
  const int m = imm.m();

  Vec p0 = data.P(fr.p);
  sp.phi = fr.inner(p0, fr.eta);
  sp.v_chart = p0 - sp.phi * fr.eta;
  sp.v_basis = fr.tangential_coords(p0);
  sp.mu = data.mu(fr.p);
  sp.omega_chart = data.omega(fr.p);
  sp.omega_m.resize(m);
  for (int a = 0; a < m; ++a) sp.omega_m[a] = sp.omega_chart.dot(fr.tangents[a]);
  sp.omega_sharp_basis = fr.g_inv * sp.omega_m;
  sp.omega_norm2_m = sp.omega_m.dot(sp.omega_sharp_basis);
  return sp;
}

namespace {

// Scalar and vector fields over the domain, one lemma evaluation each.
ScalarField phi_field(const GraphImmersion& imm, const TorseFormingData& data) {
  return [&imm, &data](const Vec& y) { return split(imm, data, y).phi; };
}

ScalarField mean_curvature_field(const GraphImmersion& imm) {
  return [&imm](const Vec& y) { return frame_at(imm, y).f; };
}

VectorField v_chart_field(const GraphImmersion& imm,
                          const TorseFormingData& data) {
  return [&imm, &data](const Vec& y) { return split(imm, data, y).v_chart; };
}

VectorField omega_sharp_field(const GraphImmersion& imm,
                              const TorseFormingData& data) {
  return
      [&imm, &data](const Vec& y) { return split(imm, data, y).omega_sharp_basis; };
}

VectorField mean_curvature_vector_field(const GraphImmersion& imm) {
  return [&imm](const Vec& y) {
    HypersurfaceFrame fr = frame_at(imm, y);
    return Vec(fr.f * fr.eta);
  };
}

/// nab_X W for a chart-component field W along M; direction given in basis
/// coordinates, so the stencil stays inside the domain.
Vec ambient_derivative_along(const GraphImmersion& imm,
                             const HypersurfaceFrame& fr, const VectorField& w,
                             const Vec& x, const Vec& dir_basis) {
  Vec dw = fd::directional(w, x, dir_basis);
  Christoffel ch = christoffel(imm.ambient(), fr.p);
  return dw + ch.apply(fr.to_chart(dir_basis), w(x));
}

}  // namespace

double lemma_gradient_v_residual(const GraphImmersion& imm,
                                 const TorseFormingData& data, const Vec& x,
                                 const Vec& x_basis) {
  require_interior(imm, x);
  TorseSplit sp = split(imm, data, x);
  const HypersurfaceFrame& fr = sp.frame;

  Vec nab_v =
      ambient_derivative_along(imm, fr, v_chart_field(imm, data), x, x_basis);
  Vec lhs = nab_v - fr.inner(nab_v, fr.eta) * fr.eta;

  Vec x_chart = fr.to_chart(x_basis);
  Vec ax_chart = fr.to_chart(Vec(fr.shape * x_basis));
  Vec rhs = sp.mu * x_chart + sp.omega_chart.dot(x_chart) * sp.v_chart +
            sp.phi * ax_chart;
  return fr.norm(lhs - rhs);
}

double lemma_gradient_phi_residual(const GraphImmersion& imm,
                                   const TorseFormingData& data,
                                   const Vec& x) {
  require_interior(imm, x);
  TorseSplit sp = split(imm, data, x);
  const HypersurfaceFrame& fr = sp.frame;

  Vec grad_phi = intrinsic_gradient(imm, phi_field(imm, data), x);
  Vec rhs = sp.phi * sp.omega_sharp_basis - fr.shape * sp.v_basis;
  Vec diff = grad_phi - rhs;
  return std::sqrt(std::max(0.0, diff.dot(fr.g * diff)));
}

double lemma_laplacian_phi_residual(const GraphImmersion& imm,
                                    const TorseFormingData& data,
                                    const Vec& x) {
  require_interior(imm, x);
  const int m = imm.m();
  TorseSplit sp = split(imm, data, x);
  const HypersurfaceFrame& fr = sp.frame;

  double delta_phi = laplace_beltrami(imm, phi_field(imm, data), x);
  double div_sharp = divergence(imm, omega_sharp_field(imm, data), x);
  double v_of_f =
      fd::directional(mean_curvature_field(imm), x, sp.v_basis);
  Vec av_chart = fr.to_chart(Vec(fr.shape * sp.v_basis));
  double omega_av = sp.omega_chart.dot(av_chart);

  // The Codazzi trace gives <div A, V> = m V(f) - Ric(V, eta), so the
  // ambient Ricci term survives whenever the ambient is not a space form.
  CurvatureTensor ct(imm.ambient(), fr.p);
  double ric_eta_v = ct.ricci(fr.eta, sp.v_chart);

  double rhs = sp.phi * sp.omega_norm2_m - 2.0 * omega_av +
               sp.phi * div_sharp - m * v_of_f + ric_eta_v -
               m * sp.mu * fr.f - sp.phi * fr.A2;
  return std::abs(delta_phi - rhs);
}

PairingCheck connection_pairing_check(const GraphImmersion& imm,
                                      const TorseFormingData& data,
                                      const Vec& x) {
  require_interior(imm, x);
  TorseSplit sp = split(imm, data, x);
  const HypersurfaceFrame& fr = sp.frame;

  Vec nab_h = ambient_derivative_along(
      imm, fr, mean_curvature_vector_field(imm), x, sp.omega_sharp_basis);
  Vec p0 = data.P(fr.p);
  PairingCheck out;
  out.lhs = fr.inner(nab_h, p0);

  Vec grad_f = intrinsic_gradient(imm, mean_curvature_field(imm), x);
  Vec grad_f_chart = fr.to_chart(grad_f);
  Vec av_chart = fr.to_chart(Vec(fr.shape * sp.v_basis));
  out.rhs = sp.phi * sp.omega_chart.dot(grad_f_chart) -
            fr.f * sp.omega_chart.dot(av_chart);
  out.residual = std::abs(out.lhs - out.rhs);
  return out;
}

LaplacianPairingBreakdown lemma_laplacian_pairing_residual(
    const GraphImmersion& imm, const TorseFormingData& data, const Vec& x,
    double bih_tol) {
  require_interior(imm, x);
  const int m = imm.m();

  BitensionResult bt = bitension(imm, x);
  if (!(bt.tau2_norm <= bih_tol))
    throw NotBiharmonicError("laplacian pairing identity requires |tau_2| <= " +
                             std::to_string(bih_tol) + " at the point");

  TorseSplit sp = split(imm, data, x);
  const HypersurfaceFrame& fr = sp.frame;
  CurvatureTensor ct(imm.ambient(), fr.p);

  auto pairing_field = [&imm, &data](const Vec& y) {
    TorseSplit s2 = split(imm, data, y);
    return s2.frame.f * s2.phi;
  };

  LaplacianPairingBreakdown out;
  out.tau2_norm = bt.tau2_norm;
  out.lhs = laplace_beltrami(imm, pairing_field, x);

  Vec nab_h = ambient_derivative_along(
      imm, fr, mean_curvature_vector_field(imm), x, sp.omega_sharp_basis);
  double div_sharp = divergence(imm, omega_sharp_field(imm, data), x);
  double fphi = fr.f * sp.phi;

  out.term_ric_v = -fr.f * ct.ricci(fr.eta, sp.v_chart);
  out.term_ric_eta = -fphi * ct.ricci(fr.eta, fr.eta);
  out.term_mu = -m * sp.mu * fr.f * fr.f;
  out.term_conn = 2.0 * fr.inner(nab_h, data.P(fr.p));
  out.term_div = fphi * div_sharp;
  out.term_omega = fphi * sp.omega_norm2_m;

  double rhs = out.term_ric_v + out.term_ric_eta + out.term_mu +
               out.term_conn + out.term_div + out.term_omega;
  out.residual = std::abs(out.lhs - rhs);
  return out;
}

double normal_ricci_pairing(const GraphImmersion& imm,
                            const TorseFormingData& data, const Vec& x) {
  TorseSplit sp = split(imm, data, x);
  CurvatureTensor ct(imm.ambient(), sp.frame.p);
  return sp.frame.f * ct.ricci(sp.frame.eta, sp.v_chart);
}

ThetaFit theta_einstein_fit_at(const MetricField& metric,
                               const VectorField& theta, const Point& p) {
  CurvatureTensor ct(metric, p);
  Vec th = theta(p);
  const auto& frame = ct.frame();
  const int n = ct.dim();

  const int rows = n * (n + 1) / 2;
  Mat a(rows, 2);
  Vec r(rows);
  int row = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j, ++row) {
      a(row, 0) = i == j ? 1.0 : 0.0;
      a(row, 1) = th.dot(frame[i]) * th.dot(frame[j]);
      r[row] = ct.ricci(frame[i], frame[j]);
    }

  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (!(svd.singularValues()[1] >
        1e-10 * std::max(svd.singularValues()[0], 1e-300)))
    throw DegenerateFitError(
        "theta fit is rank deficient; a and b are not separable here");
  Vec sol = svd.solve(r);
  ThetaFit out;
  out.a = sol[0];
  out.b = sol[1];
  out.residual = (a * sol - r).cwiseAbs().maxCoeff();
  return out;
}

ObstructionResult obstruction_check(const GraphImmersion& imm,
                                    const TorseFormingData& data,
                                    const VectorField& theta,
                                    const std::vector<Vec>& points,
                                    const ObstructionOptions& options) {
  ObstructionResult out;
  out.status = ObstructionStatus::no_biharmonic_points;
  for (int idx = 0; idx < static_cast<int>(points.size()); ++idx) {
    const Vec& x = points[idx];
    BitensionResult bt = bitension(imm, x);
    ThetaFit fit = theta_einstein_fit_at(imm.ambient(), theta, bt.frame.p);
    if (fit.residual > options.fit_tol)
      throw NotThetaEinsteinError(
          "ambient Ricci tensor does not have the a<,> + b theta x theta form");
    if (!(bt.tau2_norm <= options.bih_tol)) continue;
    ++out.biharmonic_count;

    TorseSplit sp = split(imm, data, x);
    double v_norm2 = sp.v_basis.dot(sp.frame.g * sp.v_basis);
    bool ok = std::abs(sp.frame.f) <= options.zero_tol ||
              std::abs(fit.b) <= options.zero_tol ||
              std::abs(sp.phi) <= options.zero_tol ||
              v_norm2 <= options.zero_tol;
    if (!ok) {
      ++out.violations;
      out.violating_indices.push_back(idx);
    }
  }
  if (out.biharmonic_count > 0)
    out.status = out.violations == 0 ? ObstructionStatus::satisfied
                                     : ObstructionStatus::violated;
  return out;
}

}  // namespace bihyp
