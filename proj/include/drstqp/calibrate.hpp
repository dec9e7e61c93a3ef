#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <utility>

#include "drstqp/exec.hpp"
#include "drstqp/randmat.hpp"
#include "drstqp/rng.hpp"

namespace drstqp {

/// Radius selected so that the calibrated ambiguity ball covers the truth
/// with probability at least 1 - beta (beta here is the confidence
/// complement, not the noise scale of the experiment modules).
///
/// ExpDecay and Transport back pointwise guarantees: for each fixed unit
/// direction y, the deviation y^T (Qbar - E[Q]) y stays below the radius with
/// the stated probability. The SubGauss/SubExp kinds back uniform guarantees:
/// the full Frobenius deviation ||Qbar - E[Q]||_F, an upper bound for the sup
/// over directions, stays below the radius. The unspecified absolute
/// constants of the ExpDecay and covering-number bounds default to one, so
/// for those kinds only the scaling in (N, beta, m) is meaningful; the
/// transport and martingale bounds are fully explicit.
struct RadiusBound {
  enum class Kind { ExpDecay, Transport, SubGaussUniform, SubExpUniform, SubExpMartingale };

  Kind kind = Kind::Transport;
  // ExpDecay
  double c1 = 1.0, c2 = 1.0, a = 1.5;
  int m = 1;
  // Transport
  double c = 2.0;
  // uniform bounds
  double abs_const = 1.0;  // absolute constant C
  double orlicz_k = 1.0;   // K (psi1 or psi2 norm bound)
  double orlicz_r = 1.0;   // R, martingale variant

  static RadiusBound exp_decay(double c1, double c2, double a, int m);
  static RadiusBound transport(double c);
  static RadiusBound subgauss_uniform(double C, double K, int m);
  static RadiusBound subexp_uniform(double C, double K, int m);
  static RadiusBound subexp_martingale(double R);

  [[nodiscard]] bool pointwise() const {
    return kind == Kind::ExpDecay || kind == Kind::Transport;
  }
  [[nodiscard]] double evaluate(int N, double beta) const;
  [[nodiscard]] std::string name() const;
};

/// theta_N(beta) = (log(c1/beta) / (c2 N))^(1/max(m,2)) when
/// N >= log(c1/beta)/c2, exponent 1/a otherwise. Requires a > 1 and
/// log(c1/beta) >= 0.
double radius_exp_decay(double c1, double c2, double a, int m, int N, double beta);

/// theta_{c,N}(beta) = sqrt(2 c log(1/beta) / N). GOE data admit c = 2;
/// Wishart data admit no transportation constant, so calibrate guards reject
/// that combination.
double radius_transport(double c, int N, double beta);

/// C K (sqrt((m + log(2/beta))/N) + (m + log(2/beta))/N).
double radius_subexp_uniform(double C, double K, int m, int N, double beta);

/// 2 sqrt(2) R sqrt(2 log(2/beta)/N) + R log(2/beta)/N; dimension-free.
double radius_subexp_martingale(double R, int N, double beta);

/// C K (sqrt(m/N) + sqrt(log(2/beta)/N)).
double radius_subgauss_uniform(double C, double K, int m, int N, double beta);

enum class OrliczPsi { Psi1, Psi2 };

/// Monte-Carlo estimate of the Orlicz norm inf{t : E[psi(|xi|/t)] <= 1} with
/// psi_i(z) = exp(z^i) - 1, by bisection over t to 1% relative tolerance.
/// Throws Diverged when no finite bracket exists below t = 1e6 or when the
/// estimate keeps growing as the sample triples (the signature of an infinite
/// norm, e.g. the psi2 norm of a chi-squared variable: every finite sample
/// yields a finite estimate, but it grows without bound in the sample size).
double orlicz_norm(const std::function<double(Rng&)>& sampler, OrliczPsi psi,
                   int mc, RngSpec rng);

/// Empirical coverage of the calibrated ball. Per trial: draw N samples from
/// the model, form D = Qbar - E[Q] (the analytic mean), and record
///   hit           the bound's own guaranteed event: y^T D y <= theta at a
///                 random unit probe y for the pointwise kinds, the Frobenius
///                 event ||svec(D)||_2 <= theta for the uniform kinds;
///   frob_hit      always the Frobenius event, which dominates every
///                 direction and is therefore a conservative surrogate.
/// Reports a Wilson 95% interval for the hit frequency. The optional CSV
/// stream receives "trial,hit,norm,theta" rows.
struct CoverageReport {
  std::string model;
  std::string bound;
  int n = 0;
  int N = 0;
  int trials = 0;
  double beta = 0.0;
  double theta = 0.0;
  int hits = 0;
  int frob_hits = 0;
  double coverage = 0.0;
  double frob_coverage = 0.0;
  double target = 0.0;  // 1 - beta
  double wilson_lo = 0.0;
  double wilson_hi = 0.0;
};

CoverageReport coverage_mc(const EnsembleModel& model, int N, int trials, double beta,
                           const RadiusBound& bound, RngSpec rng, Exec exec = Exec::Par,
                           std::ostream* csv = nullptr);

/// Wilson 95% score interval for k successes out of n.
std::pair<double, double> wilson_interval(int k, int n);

}  // namespace drstqp
