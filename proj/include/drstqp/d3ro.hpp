#pragma once

#include <optional>

#include "drstqp/exec.hpp"
#include "drstqp/rng.hpp"
#include "drstqp/stqp.hpp"
#include "drstqp/symlin.hpp"

namespace drstqp {

/// Decision-dependent ambiguity radius theta(x). Four tractable shapes:
///   Const(theta)      theta(x) = theta
///   InvNormSq(gamma)  theta(x) = gamma / x^T x      -> nominal problem + gamma
///   InvQuad(R)        theta(x) = 1 / x^T R x        (R strictly copositive)
///   GammaOverQ(gamma) theta(x) = gamma / x^T qbar x (qbar strictly copositive)
struct RadiusFn {
  enum class Kind { Const, InvNormSq, InvQuad, GammaOverQ };

  Kind kind = Kind::Const;
  double gamma = 0.0;  // Const radius or gamma factor
  std::optional<SymMat> r;

  static RadiusFn constant(double theta);
  static RadiusFn inv_norm_sq(double gamma);
  static RadiusFn inv_quad(SymMat r);
  static RadiusFn gamma_over_q(double gamma);

  /// theta(x); qbar supplies the quadratic for GammaOverQ.
  [[nodiscard]] double theta(std::span<const double> x, const SymMat& qbar) const;
};

/// f(x) = u + gamma v / u with u = x^T qbar x and v = x^T x: the deterministic
/// equivalent objective for the radius gamma / (x^T qbar x). Requires u > 0,
/// which strict copositivity of qbar guarantees on the simplex.
double d3_objective(const SymMat& qbar, double gamma, std::span<const double> x);

/// Exact gradient 2 qbar x + 2 gamma (u x - v qbar x) / u^2.
std::vector<double> d3_gradient(const SymMat& qbar, double gamma,
                                std::span<const double> x);

/// Exact Hessian 2 qbar + (2 gamma / u^3) A(x) with
/// A(x) = u^2 I - 2u (qbar x x^T + x x^T qbar) - v u qbar + 4 v qbar x x^T qbar.
SymMat d3_hessian(const SymMat& qbar, double gamma, std::span<const double> x);

/// Spectral thresholds for the sampled-mean matrix qbar_beta = q_nom + beta R:
///   beta_max   noise level below which qbar_beta is guaranteed indefinite
///              (+inf when q_nom is already PSD);
///   beta_conv  exact PSD threshold -lambda_min(R^{-1/2} q_nom R^{-1/2}),
///              present only when R is positive definite;
///   gamma_conv largest gamma with a provably convex objective
///              2 lambda_min / C(qbar_beta, n), present when qbar_beta is PD,
///   with C(Q,n) = n (2/lmin + 10 lmax/lmin^2 + 8 lmax^2/lmin^3).
/// In the indefinite regime no finite gamma restores convexity near the zero
/// level set of x^T qbar_beta x (curvature tangent to the level set stays
/// negative however large gamma gets), so only the regime labels are exposed.
struct SpectralRegime {
  double beta = 0.0;
  double beta_max = 0.0;
  std::optional<double> beta_conv;
  double lam_min = 0.0;
  double lam_max = 0.0;
  std::optional<double> c_const;
  std::optional<double> gamma_conv;

  [[nodiscard]] bool indefinite() const { return lam_min < 0.0; }
};

SpectralRegime spectral_regime(const SymMat& q_nom, const SymMat& r, double beta);

/// PSD threshold in beta; throws NotPd when R is not positive definite.
double beta_conv(const SymMat& q_nom, const SymMat& r);

/// Convexity constant C(Q, n) of a positive definite Q; throws NotPd otherwise.
double convexity_constant(const SymMat& q_pd);

struct D3Options {
  double support_tol = 1e-8;
  int max_iter = 5000;
  double grad_tol = 1e-9;
  double armijo_slope = 1e-4;
  double armijo_shrink = 0.5;
  int grid_dim_cap = 8;   // exhaustive simplex-grid pass up to this dimension
  int grid_resolution = 24;
  Exec exec = Exec::Par;
};

/// Minimizes x^T qbar x + theta(x) x^T x over the simplex. Const and
/// InvNormSq reduce exactly to nominal solves; the fractional radii run
/// multi-start projected gradient descent with Armijo backtracking from
/// `starts` Dirichlet(1) points plus all vertices and the barycenter, with an
/// exhaustive simplex-grid refinement pass for small dimension. Solutions are
/// certified global only on the exact paths.
///
/// The fractional objective also admits an epigraph form suited to external
/// branch-and-bound engines (min t + gamma*y s.t. t = x^T qbar x,
/// t*y >= x^T x, x in the simplex, y >= 0); it is documented here for
/// interoperability but not used as a solve path.
StqpSolution solve_d3(const SymMat& qbar, const RadiusFn& radius, int starts,
                      RngSpec rng, const D3Options& opts = {});

}  // namespace drstqp
