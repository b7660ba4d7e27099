#include "bihyp/hypersurface.hpp"

#include <Eigen/Cholesky>

#include <cmath>

#include "bihyp/fd.hpp"

namespace bihyp {

namespace {

// Margin (in units of max(1, |x_a|)) reserved for the finite-difference
// stencils of the intrinsic operators, including one nested layer.
constexpr double kInteriorMargin = 0.02;

}  // namespace

Box Box::cube(int m, double lo, double hi) {
  if (!(lo < hi)) throw ConfigError("empty box");
  Box b;
  b.lo = Vec::Constant(m, lo);
  b.hi = Vec::Constant(m, hi);
  return b;
}

bool Box::contains(const Vec& x, double margin) const {
  if (x.size() != lo.size()) return false;
  for (int a = 0; a < dim(); ++a) {
    double pad = margin * std::max(1.0, std::abs(x[a]));
    if (!(x[a] >= lo[a] + pad && x[a] <= hi[a] - pad)) return false;
  }
  return true;
}

GraphImmersion::GraphImmersion(std::shared_ptr<const MetricField> ambient,
                               std::shared_ptr<const HeightFunction> height,
                               Box domain, bool flip_normal)
    : ambient_(std::move(ambient)),
      height_(std::move(height)),
      domain_(std::move(domain)),
      flip_(flip_normal) {
  if (!ambient_ || !height_) throw ConfigError("null immersion data");
  if (ambient_->dim() != height_->dim() + 1)
    throw ConfigError("ambient dimension must be the graph dimension plus 1");
  if (domain_.dim() != height_->dim())
    throw ConfigError("domain dimension must match the graph dimension");
}

GraphImmersion GraphImmersion::flipped() const {
  return GraphImmersion(ambient_, height_, domain_, !flip_);
}

Point GraphImmersion::image(const Vec& x) const {
  check_point(x, m());
  Point p(ambient_dim());
  p.head(m()) = x;
  p[m()] = height_->value(x);
  return p;
}

Vec GraphImmersion::tangent(const Vec& x, int a) const {
  Vec t = Vec::Unit(ambient_dim(), a);
  t[m()] = height_->d1(x, a);
  return t;
}

double HypersurfaceFrame::norm(const Vec& a) const {
  return std::sqrt(std::max(0.0, inner(a, a)));
}

Vec HypersurfaceFrame::to_chart(const Vec& basis_coords) const {
  Vec out = Vec::Zero(p.size());
  for (int a = 0; a < static_cast<int>(tangents.size()); ++a)
    out += basis_coords[a] * tangents[a];
  return out;
}

Vec HypersurfaceFrame::tangential_coords(const Vec& chart) const {
  const int m = static_cast<int>(tangents.size());
  Vec proj = chart - inner(chart, eta) * eta;
  Vec rhs(m);
  for (int a = 0; a < m; ++a) rhs[a] = inner(proj, tangents[a]);
  return g_inv * rhs;
}

namespace {

double height_margin(const GraphImmersion& imm) {
  // FD-backed heights difference themselves near the evaluation point.
  return imm.height().analytic_jets() ? 0.0 : 3.0 * fd::base_step(2);
}

void check_in_domain(const GraphImmersion& imm, const Vec& x) {
  check_point(x, imm.m());
  if (!imm.domain().contains(x, height_margin(imm)))
    throw BoundaryError("evaluation point outside the graph domain");
}

}  // namespace

void require_interior(const GraphImmersion& imm, const Vec& x) {
  check_point(x, imm.m());
  if (!imm.domain().contains(x, kInteriorMargin + height_margin(imm)))
    throw BoundaryError(
        "finite-difference stencil would leave the graph domain");
}

Mat induced_metric(const GraphImmersion& imm, const Vec& x) {
  check_in_domain(imm, x);
  const int m = imm.m();
  Mat G = imm.ambient().metric(imm.image(x));
  std::vector<Vec> tang(m);
  for (int a = 0; a < m; ++a) tang[a] = imm.tangent(x, a);
  Mat g(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = a; b < m; ++b) {
      g(a, b) = tang[a].dot(G * tang[b]);
      g(b, a) = g(a, b);
    }
  return g;
}

HypersurfaceFrame frame_at(const GraphImmersion& imm, const Vec& x) {
  check_in_domain(imm, x);
  const int m = imm.m();
  const int n = m + 1;
  const MetricField& amb = imm.ambient();

  HypersurfaceFrame fr;
  fr.x = x;
  fr.p = imm.image(x);
  fr.ambient_g = amb.metric(fr.p);
  Mat Ginv = amb.inverse_metric(fr.p);

  Vec grad_f = imm.height().gradient(x);
  fr.tangents.resize(m);
  for (int a = 0; a < m; ++a) {
    Vec t = Vec::Unit(n, a);
    t[m] = grad_f[a];
    fr.tangents[a] = t;
  }

  fr.g.resize(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = a; b < m; ++b) {
      fr.g(a, b) = fr.tangents[a].dot(fr.ambient_g * fr.tangents[b]);
      fr.g(b, a) = fr.g(a, b);
    }
  Eigen::LLT<Mat> llt(fr.g);
  double scale = std::max(fr.g.trace() / m, 0.0);
  if (llt.info() != Eigen::Success ||
      !(fr.g.determinant() > 1e-12 * std::pow(scale, m)))
    throw ImmersionDegenerateError(
        "induced metric numerically singular; not an immersion here");
  fr.g_inv = llt.solve(Mat::Identity(m, m));

  // Unit normal eta = sign * G^-1 nu / l with nu = (-grad F, 1). The default
  // orientation has positive t component.
  Vec nu = Vec::Zero(n);
  nu.head(m) = -grad_f;
  nu[m] = 1.0;
  Vec w = Ginv * nu;
  double l2 = nu.dot(w);
  if (!(l2 > 0.0) || !w.allFinite())
    throw ImmersionDegenerateError("degenerate normal direction");
  double l = std::sqrt(l2);
  if (std::abs(w[m]) <= 1e-14 * w.norm())
    throw Error("cannot orient the normal by its t component");
  double sign = w[m] > 0.0 ? 1.0 : -1.0;
  if (imm.flip_normal()) sign = -sign;
  fr.eta = sign / l * w;

  // Shape operator from the exact pointwise derivative of eta along the
  // graph, D_a = d_a + (d_a F) d_t, plus the connection term.
  Christoffel ch = christoffel(amb, fr.p);
  std::vector<Mat> dG = amb.d1(fr.p);
  Mat hess_f = imm.height().hessian(x);
  Mat braw(m, m);
  for (int a = 0; a < m; ++a) {
    Mat DaG = dG[a] + grad_f[a] * dG[n - 1];
    Vec Danu = Vec::Zero(n);
    Danu.head(m) = -hess_f.col(a);
    Vec Daw = Ginv * (Danu - DaG * w);
    double Dal2 = Danu.dot(w) + nu.dot(Daw);
    Vec Daeta = sign * (Daw / l - w * (Dal2 / (2.0 * l * l2)));
    Vec nab = Daeta + ch.apply(fr.tangents[a], fr.eta);
    Vec tangential = nab - fr.inner(nab, fr.eta) * fr.eta;
    for (int b = 0; b < m; ++b)
      braw(b, a) = -fr.inner(tangential, fr.tangents[b]);
  }
  fr.second_fund = 0.5 * (braw + braw.transpose());
  fr.shape = fr.g_inv * fr.second_fund;
  fr.f = fr.shape.trace() / m;
  fr.A2 = (fr.shape * fr.shape).trace();
  return fr;
}

Christoffel induced_christoffel(const GraphImmersion& imm, const Vec& x) {
  require_interior(imm, x);
  const int m = imm.m();
  auto g_field = [&imm](const Vec& y) { return induced_metric(imm, y); };
  Mat g = induced_metric(imm, x);
  Eigen::LLT<Mat> llt(g);
  Mat ginv = llt.solve(Mat::Identity(m, m));
  std::vector<Mat> dg(m);
  for (int a = 0; a < m; ++a) dg[a] = fd::partial(g_field, x, a);

  Christoffel ch;
  ch.gamma.assign(m, Mat::Zero(m, m));
  for (int a = 0; a < m; ++a)
    for (int b = a; b < m; ++b) {
      Vec lower(m);
      for (int c = 0; c < m; ++c)
        lower[c] = 0.5 * (dg[a](b, c) + dg[b](a, c) - dg[c](a, b));
      Vec upper = ginv * lower;
      for (int k = 0; k < m; ++k) {
        ch.gamma[k](a, b) = upper[k];
        ch.gamma[k](b, a) = upper[k];
      }
    }
  return ch;
}

double laplace_beltrami(const GraphImmersion& imm, const ScalarField& h,
                        const Vec& x) {
  require_interior(imm, x);
  const int m = imm.m();
  Mat g = induced_metric(imm, x);
  Mat ginv = Eigen::LLT<Mat>(g).solve(Mat::Identity(m, m));
  Christoffel ch = induced_christoffel(imm, x);
  Vec grad(m);
  for (int c = 0; c < m; ++c) grad[c] = fd::partial(h, x, c);
  double total = 0.0;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      double hess = a <= b ? fd::partial2(h, x, a, b)
                           : fd::partial2(h, x, b, a);
      double corr = 0.0;
      for (int c = 0; c < m; ++c) corr += ch.gamma[c](a, b) * grad[c];
      total += ginv(a, b) * (hess - corr);
    }
  return total;
}

Vec intrinsic_gradient(const GraphImmersion& imm, const ScalarField& h,
                       const Vec& x) {
  require_interior(imm, x);
  const int m = imm.m();
  Mat g = induced_metric(imm, x);
  Vec grad(m);
  for (int c = 0; c < m; ++c) grad[c] = fd::partial(h, x, c);
  return Eigen::LLT<Mat>(g).solve(grad);
}

double divergence(const GraphImmersion& imm, const VectorField& w_basis,
                  const Vec& x) {
  require_interior(imm, x);
  const int m = imm.m();
  auto g_field = [&imm](const Vec& y) { return induced_metric(imm, y); };
  Mat g = induced_metric(imm, x);
  Mat ginv = Eigen::LLT<Mat>(g).solve(Mat::Identity(m, m));
  Vec w0 = w_basis(x);
  double total = 0.0;
  for (int a = 0; a < m; ++a) {
    total += fd::partial(w_basis, x, a)[a];
    Mat dga = fd::partial(g_field, x, a);
    total += 0.5 * w0[a] * (ginv * dga).trace();
  }
  return total;
}

double mean_curvature(const GraphImmersion& imm, const Vec& x) {
  return frame_at(imm, x).f;
}

Vec tension(const GraphImmersion& imm, const Vec& x) {
  HypersurfaceFrame fr = frame_at(imm, x);
  return imm.m() * fr.f * fr.eta;
}

SystemResiduals system_residuals(const GraphImmersion& imm, const Vec& x) {
  require_interior(imm, x);
  const int m = imm.m();
  HypersurfaceFrame fr = frame_at(imm, x);
  CurvatureTensor ct(imm.ambient(), fr.p);

  auto f_field = [&imm](const Vec& y) { return frame_at(imm, y).f; };
  SystemResiduals out;
  out.delta_f = laplace_beltrami(imm, f_field, x);
  out.grad_f_basis = intrinsic_gradient(imm, f_field, x);

  out.normal = -out.delta_f + fr.f * fr.A2 - fr.f * ct.ricci(fr.eta, fr.eta);

  Vec ric_eta = ct.ricci_operator(fr.eta);
  Vec ric_tan = fr.tangential_coords(ric_eta);
  Vec t_basis = 2.0 * (fr.shape * out.grad_f_basis) +
                m * fr.f * out.grad_f_basis - 2.0 * fr.f * ric_tan;
  out.tangential_basis = t_basis;
  out.tangential = fr.to_chart(t_basis);
  out.tangential_norm = std::sqrt(std::max(0.0, t_basis.dot(fr.g * t_basis)));
  return out;
}

BitensionResult bitension(const GraphImmersion& imm, const Vec& x) {
  require_interior(imm, x);
  const int m = imm.m();
  const int n = m + 1;
  const MetricField& amb = imm.ambient();

  BitensionResult out;
  out.frame = frame_at(imm, x);
  const HypersurfaceFrame& fr = out.frame;
  CurvatureTensor ct(amb, fr.p);
  Christoffel ch = christoffel(amb, fr.p);

  Vec H0 = fr.f * fr.eta;
  out.tau = m * H0;

  auto H_field = [&imm](const Vec& y) {
    HypersurfaceFrame f2 = frame_at(imm, y);
    return Vec(f2.f * f2.eta);
  };
  // Columns: Gamma(X_b, H) at y, so that differencing the matrix field gives
  // d_a of each connection term without nesting stencils.
  auto conn_field = [&imm, &amb, n, m](const Vec& y) {
    HypersurfaceFrame f2 = frame_at(imm, y);
    Christoffel ch2 = christoffel(amb, f2.p);
    Vec h2 = f2.f * f2.eta;
    Mat cols(n, m);
    for (int b = 0; b < m; ++b)
      cols.col(b) = ch2.apply(f2.tangents[b], h2);
    return cols;
  };

  std::vector<Vec> nabH(m);
  for (int b = 0; b < m; ++b)
    nabH[b] = fd::partial(H_field, x, b) + ch.apply(fr.tangents[b], H0);

  std::vector<Mat> dconn(m);
  for (int a = 0; a < m; ++a) dconn[a] = fd::partial(conn_field, x, a);

  Christoffel ind = induced_christoffel(imm, x);

  // Contraction coefficients from a Gram-Schmidt orthonormal tangent frame;
  // equal to g^{ab} in exact arithmetic.
  std::vector<Vec> frame = orthonormal_frame(fr.g);
  Mat M = Mat::Zero(m, m);
  for (const Vec& e : frame) M += e * e.transpose();

  Vec sum = Vec::Zero(n);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      Vec ddh = a <= b ? fd::partial2(H_field, x, a, b)
                       : fd::partial2(H_field, x, b, a);
      Vec hess = ddh + dconn[a].col(b) + ch.apply(fr.tangents[a], nabH[b]);
      for (int c = 0; c < m; ++c) hess -= ind.gamma[c](a, b) * nabH[c];
      Vec curv = ct.apply(H0, fr.tangents[a], fr.tangents[b]);
      sum += M(a, b) * (curv + hess);
    }
  out.tau2 = -m * sum;

  out.tau2_normal = fr.inner(out.tau2, fr.eta);
  out.tau2_tangent = out.tau2 - out.tau2_normal * fr.eta;
  out.tau2_tangent_basis = fr.tangential_coords(out.tau2);
  out.tau2_norm = fr.norm(out.tau2);
  return out;
}

}  // namespace bihyp
