#pragma once

#include <utility>

#include "drstqp/randmat.hpp"
#include "drstqp/symlin.hpp"
#include "drstqp/transport.hpp"

namespace drstqp {

/// Distributionally robust quadratic model over the simplex: an empirical
/// ensemble of data matrices, the ambiguity-ball parameters, and the cached
/// sample mean. Closed-form deterministic equivalents exist for the Frobenius
/// (Euclidean on svec coordinates) and maximum norms.
struct DroModel {
  EmpiricalEnsemble ensemble;
  AmbiguitySpec spec;
  SymMat qbar;

  static DroModel make(EmpiricalEnsemble ens, AmbiguitySpec spec);
};

/// One radius for three uncertainty models. The chance-constrained radii
/// assume the stated perturbation around the sample mean: theta =
/// sqrt(2) beta Phi^{-1}(alpha) for a GOE perturbation (alpha in (0.5, 1)),
/// theta = 2 beta P^{-1}(k/2, alpha) for a Wishart one.
struct UnifiedRadius {
  enum class Source { Robust, ChanceGoe, ChanceWishart, Direct };

  Source source = Source::Direct;
  double value = 0.0;
};

UnifiedRadius radius_robust(double theta);
UnifiedRadius radius_direct(double theta);
UnifiedRadius radius_chance_goe(double beta, double alpha);
UnifiedRadius radius_chance_wishart(double beta, int k, double alpha);

/// Deterministic equivalent under the Frobenius ground norm: the data matrix
/// of the equivalent nominal problem is qbar + theta I, for every transport
/// order p >= 1.
SymMat reformulate_frobenius(const SymMat& qbar, double theta);
SymMat reformulate_frobenius(const DroModel& model);

/// Deterministic equivalent under the maximum norm on svec coordinates:
/// optimal value = constant + min_x x^T matrix x with
/// constant = theta/sqrt(2) and matrix = qbar + theta (sqrt2-1)/sqrt2 I.
/// `shift` is the x-independent worst-case translation
/// (theta/sqrt2)(E + (sqrt2-1) I): adding it to every sample realizes the
/// value, so here the minimax gap is zero.
struct MaxnormReform {
  double constant = 0.0;
  SymMat matrix;
  SymMat shift;
};

MaxnormReform reformulate_maxnorm(const SymMat& qbar, double theta);
MaxnormReform reformulate_maxnorm(const DroModel& model);

/// Single downstream entry point: (constant, matrix) with constant 0 for the
/// Frobenius norm. Throws DomainError for ground norms without a closed form.
std::pair<double, SymMat> deterministic_equivalent(const DroModel& model);

/// The worked instance showing a positive minimax gap for the smooth norm:
/// data ball of radius theta around -I. Returns (maximin, minimax) =
/// (theta/sqrt(n) - 1, theta - 1); the first is strictly smaller for n >= 2.
std::pair<double, double> minimax_gap_demo(int n, double theta);

/// Worst-case distribution of the quadratic payoff at decision x: every
/// sample shifted by (theta / x^T x) x x^T. The shifted mean payoff equals
/// x^T qbar x + theta x^T x.
EmpiricalEnsemble worst_case_stqp_dist(const EmpiricalEnsemble& ens,
                                       const SimplexVec& x, double theta);

/// Robust value of the general quadratic x^T Q x + c^T x + omega when all
/// data are uncertain: x^T qbar x + cbar^T x + omegabar
/// + theta sqrt((x^T x)^2 + x^T x + 1).
double general_drqp_value(const SymMat& qbar, std::span<const double> cbar,
                          double omegabar, double theta, std::span<const double> x);

}  // namespace drstqp
