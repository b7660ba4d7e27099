#pragma once

#include <vector>

#include "bihyp/hypersurface.hpp"
#include "bihyp/model_space.hpp"
#include "bihyp/types.hpp"

namespace bihyp {

/// A candidate torse-forming unit field P on the ambient space, with the
/// scalars of its structure equation nab_X P = mu X + omega(X) P. omega holds
/// ambient covector components.
struct TorseFormingData {
  VectorField P;
  ScalarField mu;
  VectorField omega;
};

TorseFormingData model_torse_data(const ModelParams& params);

/// |nab_X P - mu X - omega(X) P| in the ambient metric at p.
double torse_residual(const MetricField& metric, const TorseFormingData& data,
                      const Point& p, const Vec& x_dir);

/// Decomposition P = phi eta + V along the immersion at a domain point.
struct TorseSplit {
  HypersurfaceFrame frame;
  double phi;             // <P, eta>
  Vec v_chart;            // tangential part, chart components
  Vec v_basis;            // X-basis coordinates
  double mu;
  Vec omega_chart;        // ambient covector components
  Vec omega_m;            // omega(X_a)
  Vec omega_sharp_basis;  // g^{ab} omega(X_b)
  double omega_norm2_m;   // |omega|^2 restricted to the tangent bundle
};

TorseSplit split(const GraphImmersion& imm, const TorseFormingData& data,
                 const Vec& x);

/// nab_X V = mu X + omega(X) V + phi A(X), X tangent in basis coordinates.
double lemma_gradient_v_residual(const GraphImmersion& imm,
                                 const TorseFormingData& data, const Vec& x,
                                 const Vec& x_basis);

/// grad phi = phi omega#_M - A(V).
double lemma_gradient_phi_residual(const GraphImmersion& imm,
                                   const TorseFormingData& data, const Vec& x);

/// Delta phi = phi |omega|^2_M - 2 omega(A(V)) + phi div omega#_M
///             - m V(f) - m mu f - phi |A|^2.
double lemma_laplacian_phi_residual(const GraphImmersion& imm,
                                    const TorseFormingData& data,
                                    const Vec& x);

/// <nab_{omega#_M} H, P> = phi omega(grad f) - f omega(A(V)).
struct PairingCheck {
  double lhs;
  double rhs;
  double residual;
};
PairingCheck connection_pairing_check(const GraphImmersion& imm,
                                      const TorseFormingData& data,
                                      const Vec& x);

/// Delta<H,P> identity at biharmonic points:
///   Delta(f phi) = -f Ric(eta, V) - f phi Ric(eta, eta) - m mu f^2
///                  + 2 <nab_{omega#_M} H, P> + f phi div omega#_M
///                  + f phi |omega|^2_M.
/// Throws NotBiharmonicError unless |tau_2| <= bih_tol at x.
struct LaplacianPairingBreakdown {
  double residual;
  double lhs;           // Delta(f phi)
  double term_ric_v;    // -f Ric(eta, V)
  double term_ric_eta;  // -f phi Ric(eta, eta)
  double term_mu;       // -m mu f^2
  double term_conn;     // 2 <nab_{omega#} H, P>
  double term_div;      // f phi div omega#_M
  double term_omega;    // f phi |omega|^2_M
  double tau2_norm;
};
LaplacianPairingBreakdown lemma_laplacian_pairing_residual(
    const GraphImmersion& imm, const TorseFormingData& data, const Vec& x,
    double bih_tol);

/// f Ric(eta, V); vanishes at biharmonic points by the structure equations.
double normal_ricci_pairing(const GraphImmersion& imm,
                            const TorseFormingData& data, const Vec& x);

/// Pointwise fit Ric = a <,> + b theta x theta over an orthonormal frame.
struct ThetaFit {
  double a;
  double b;
  double residual;
};
ThetaFit theta_einstein_fit_at(const MetricField& metric,
                               const VectorField& theta, const Point& p);

/// Obstruction scan: every biharmonic point must have f = 0, b = 0, phi = 0
/// or V = 0 within zero_tol.
enum class ObstructionStatus { satisfied, no_biharmonic_points, violated };

struct ObstructionOptions {
  double bih_tol = 1e-6;
  double zero_tol = 1e-7;
  double fit_tol = 1e-6;
};

struct ObstructionResult {
  ObstructionStatus status;
  int biharmonic_count = 0;
  int violations = 0;
  std::vector<int> violating_indices;
};

ObstructionResult obstruction_check(const GraphImmersion& imm,
                                    const TorseFormingData& data,
                                    const VectorField& theta,
                                    const std::vector<Vec>& points,
                                    const ObstructionOptions& options);

}  // namespace bihyp
