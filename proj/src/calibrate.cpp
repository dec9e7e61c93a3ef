#include "drstqp/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "drstqp/errors.hpp"
#include "drstqp/symlin.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace drstqp {

RadiusBound RadiusBound::exp_decay(double c1, double c2, double a, int m) {
  if (!(c1 > 0.0 && c2 > 0.0)) throw DomainError("exp_decay: constants must be positive");
  if (!(a > 1.0)) throw DomainError("exp_decay: a must exceed 1");
  if (m < 1) throw DomainError("exp_decay: m must be >= 1");
  RadiusBound b;
  b.kind = Kind::ExpDecay;
  b.c1 = c1;
  b.c2 = c2;
  b.a = a;
  b.m = m;
  return b;
}

RadiusBound RadiusBound::transport(double c) {
  if (!(c > 0.0)) throw DomainError("transport: c must be positive");
  RadiusBound b;
  b.kind = Kind::Transport;
  b.c = c;
  return b;
}

RadiusBound RadiusBound::subgauss_uniform(double C, double K, int m) {
  if (!(C > 0.0) || K < 0.0 || m < 1) throw DomainError("subgauss_uniform: bad constants");
  RadiusBound b;
  b.kind = Kind::SubGaussUniform;
  b.abs_const = C;
  b.orlicz_k = K;
  b.m = m;
  return b;
}

RadiusBound RadiusBound::subexp_uniform(double C, double K, int m) {
  if (!(C > 0.0) || K < 0.0 || m < 1) throw DomainError("subexp_uniform: bad constants");
  RadiusBound b;
  b.kind = Kind::SubExpUniform;
  b.abs_const = C;
  b.orlicz_k = K;
  b.m = m;
  return b;
}

RadiusBound RadiusBound::subexp_martingale(double R) {
  if (!(R > 0.0)) throw DomainError("subexp_martingale: R must be positive");
  RadiusBound b;
  b.kind = Kind::SubExpMartingale;
  b.orlicz_r = R;
  return b;
}

double RadiusBound::evaluate(int N, double beta) const {
  switch (kind) {
    case Kind::ExpDecay:
      return radius_exp_decay(c1, c2, a, m, N, beta);
    case Kind::Transport:
      return radius_transport(c, N, beta);
    case Kind::SubGaussUniform:
      return radius_subgauss_uniform(abs_const, orlicz_k, m, N, beta);
    case Kind::SubExpUniform:
      return radius_subexp_uniform(abs_const, orlicz_k, m, N, beta);
    case Kind::SubExpMartingale:
      return radius_subexp_martingale(orlicz_r, N, beta);
  }
  return 0.0;
}

std::string RadiusBound::name() const {
  switch (kind) {
    case Kind::ExpDecay:
      return "expdecay";
    case Kind::Transport:
      return "transport";
    case Kind::SubGaussUniform:
      return "subgauss";
    case Kind::SubExpUniform:
      return "subexp";
    case Kind::SubExpMartingale:
      return "subexp-martingale";
  }
  return "?";
}

namespace {
void check_nb(int N, double beta, const char* who) {
  if (N < 1) throw DomainError(std::string(who) + ": N must be >= 1");
  if (!(beta > 0.0 && beta < 1.0)) {
    throw DomainError(std::string(who) + ": beta must lie in (0,1)");
  }
}
}  // namespace

double radius_exp_decay(double c1, double c2, double a, int m, int N, double beta) {
  check_nb(N, beta, "radius_exp_decay");
  if (!(c1 > 0.0 && c2 > 0.0)) throw DomainError("radius_exp_decay: constants must be positive");
  if (!(a > 1.0)) throw DomainError("radius_exp_decay: a must exceed 1");
  if (m < 1) throw DomainError("radius_exp_decay: m must be >= 1");
  double lg = std::log(c1 / beta);
  if (lg < 0.0) throw DomainError("radius_exp_decay: log(c1/beta) is negative");
  double ratio = lg / (c2 * double(N));
  double expo = double(N) >= lg / c2 ? 1.0 / double(std::max(m, 2)) : 1.0 / a;
  return std::pow(ratio, expo);
}

double radius_transport(double c, int N, double beta) {
  check_nb(N, beta, "radius_transport");
  if (!(c > 0.0)) throw DomainError("radius_transport: c must be positive");
  return std::sqrt(2.0 * c * std::log(1.0 / beta) / double(N));
}

double radius_subexp_uniform(double C, double K, int m, int N, double beta) {
  check_nb(N, beta, "radius_subexp_uniform");
  if (!(C > 0.0) || K < 0.0 || m < 1) throw DomainError("radius_subexp_uniform: bad constants");
  double t = (double(m) + std::log(2.0 / beta)) / double(N);
  return C * K * (std::sqrt(t) + t);
}

double radius_subexp_martingale(double R, int N, double beta) {
  check_nb(N, beta, "radius_subexp_martingale");
  if (!(R > 0.0)) throw DomainError("radius_subexp_martingale: R must be positive");
  double lg = std::log(2.0 / beta);
  return 2.0 * std::sqrt(2.0) * R * std::sqrt(2.0 * lg / double(N)) + R * lg / double(N);
}

double radius_subgauss_uniform(double C, double K, int m, int N, double beta) {
  check_nb(N, beta, "radius_subgauss_uniform");
  if (!(C > 0.0) || K < 0.0 || m < 1) throw DomainError("radius_subgauss_uniform: bad constants");
  return C * K * (std::sqrt(double(m) / double(N)) + std::sqrt(std::log(2.0 / beta) / double(N)));
}

namespace {

// empirical inf{t : mean psi(|x|/t) <= 1} over the first `count` samples;
// +inf when even t = tmax fails
double empirical_orlicz(const std::vector<double>& xs, std::size_t count, int power,
                        double tmax) {
  auto mean_psi = [&](double t) {
    double acc = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
      double z = std::abs(xs[i]) / t;
      double e = power == 1 ? z : z * z;
      // exp overflow means the mean is certainly above 1
      if (e > 700.0) return std::numeric_limits<double>::infinity();
      acc += std::exp(e) - 1.0;
    }
    return acc / double(count);
  };
  if (mean_psi(tmax) > 1.0) return std::numeric_limits<double>::infinity();
  double lo = 1e-9, hi = tmax;
  if (mean_psi(lo) <= 1.0) return lo;
  while (hi / lo > 1.0 + 1e-3) {
    double mid = std::sqrt(lo * hi);
    if (mean_psi(mid) <= 1.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

namespace {

// weighted least squares of x against one regressor; returns the weighted SSE
double wls_sse(const std::vector<double>& g, const std::vector<double>& x,
               const std::vector<double>& w) {
  double sw = 0, sg = 0, sx = 0, sgg = 0, sgx = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    sw += w[i];
    sg += w[i] * g[i];
    sx += w[i] * x[i];
    sgg += w[i] * g[i] * g[i];
    sgx += w[i] * g[i] * x[i];
  }
  double det = sw * sgg - sg * sg;
  double b = (sw * sgx - sg * sx) / det;
  double a = (sx * sgg - sg * sgx) / det;
  double sse = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    double r = x[i] - a - b * g[i];
    sse += w[i] * r * r;
  }
  return sse;
}

// Tail-class test on the top order statistics: quantiles of a sub-Gaussian
// tail grow like sqrt(log depth), an exponential-class tail like log depth.
// Fits both shapes by inverse-variance-weighted least squares over depths
// [8, M/10] and reports true when the exponential shape fits decisively
// better while the tail actually extends (flat tails of bounded samplers are
// left alone). An exponential-class tail makes E[exp(xi^2/t^2)] infinite for
// every t, i.e. an infinite psi2 norm.
bool exponential_class_tail(std::vector<double> xs) {
  const std::size_t m = xs.size();
  for (double& v : xs) v = std::abs(v);
  std::sort(xs.begin(), xs.end());
  const std::size_t k = m / 10;
  std::vector<double> u, su, x, w;
  double mean = 0.0, sq = 0.0;
  for (double v : xs) mean += v;
  mean /= double(m);
  for (double v : xs) sq += (v - mean) * (v - mean);
  double stdev = std::sqrt(sq / double(m));
  for (std::size_t j = 8; j <= k; ++j) {
    double uu = std::log(double(m) / (double(j) - 0.5));
    u.push_back(uu);
    su.push_back(std::sqrt(uu));
    x.push_back(xs[m - j]);
    w.push_back(double(j));
  }
  if (x.front() - x.back() < 0.5 * stdev) return false;  // flat tail
  return wls_sse(u, x, w) < 2.0 * wls_sse(su, x, w);
}

}  // namespace

double orlicz_norm(const std::function<double(Rng&)>& sampler, OrliczPsi psi, int mc,
                   RngSpec spec) {
  if (mc < 10000) throw DomainError("orlicz_norm: need at least 1e4 Monte-Carlo samples");
  constexpr double kTmax = 1e6;
  Rng rng(spec);
  std::vector<double> xs(std::size_t(mc), 0.0);
  for (double& x : xs) x = sampler(rng);
  const int power = psi == OrliczPsi::Psi1 ? 1 : 2;

  double t_full = empirical_orlicz(xs, xs.size(), power, kTmax);
  if (!std::isfinite(t_full)) {
    throw Diverged("orlicz_norm: no finite bracket below t = 1e6");
  }
  if (psi == OrliczPsi::Psi2) {
    // A finite sample always yields a finite estimate even when the true norm
    // is infinite, so membership needs a tail-class check; it runs on a
    // larger dedicated sample because extreme order statistics are noisy.
    std::vector<double> tail(std::size_t(mc) * 10, 0.0);
    Rng trng(spec.sub(0x7A11));
    for (double& x : tail) x = sampler(trng);
    if (exponential_class_tail(std::move(tail))) {
      throw Diverged("orlicz_norm: exponential-class tail, psi2 norm is infinite");
    }
  }
  return t_full;
}

std::pair<double, double> wilson_interval(int k, int n) {
  if (n <= 0) throw DomainError("wilson_interval: n must be positive");
  constexpr double z = 1.959963984540054;  // 97.5% normal quantile
  double phat = double(k) / double(n);
  double z2 = z * z;
  double denom = 1.0 + z2 / double(n);
  double center = (phat + z2 / (2.0 * double(n))) / denom;
  double half = z * std::sqrt(phat * (1.0 - phat) / double(n) + z2 / (4.0 * double(n) * double(n))) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

CoverageReport coverage_mc(const EnsembleModel& model, int N, int trials, double beta,
                           const RadiusBound& bound, RngSpec spec, Exec exec,
                           std::ostream* csv) {
  check_nb(N, beta, "coverage_mc");
  if (trials < 1) throw DomainError("coverage_mc: trials must be >= 1");
  if (model.base == EnsembleModel::Base::Wishart && bound.kind == RadiusBound::Kind::Transport) {
    // Wishart data are not sub-Gaussian, so no transportation constant exists
    throw DomainError("coverage_mc: transport bound is invalid for Wishart data");
  }
  const double theta = bound.evaluate(N, beta);
  const SymMat true_mean = model.mean();
  const std::vector<double> mu = svec(true_mean);
  const bool pointwise = bound.pointwise();
  const int n = model.n;

  std::vector<char> hit(std::size_t(trials), 0), fhit(std::size_t(trials), 0);
  std::vector<double> fnorm(std::size_t(trials), 0.0);

  auto run_trial = [&](int t) {
    Rng rng(spec.sub(std::uint64_t(t)));
    SymMat acc(n);
    for (int i = 0; i < N; ++i) acc += sample_model(model, rng);
    acc *= 1.0 / double(N);
    acc -= true_mean;
    std::vector<double> dev = svec(acc);
    double fn = norm2(dev);
    fnorm[std::size_t(t)] = fn;
    fhit[std::size_t(t)] = fn <= theta;
    if (pointwise) {
      // random unit probe, independent of the sample by stream separation
      Rng yrng(spec.sub(std::uint64_t(t)).sub(0x59ULL));
      std::vector<double> y(std::size_t(n), 0.0);
      double ns = 0.0;
      for (double& v : y) {
        v = yrng.normal();
        ns += v * v;
      }
      ns = std::sqrt(ns);
      for (double& v : y) v /= ns;
      hit[std::size_t(t)] = acc.quad(y) <= theta;
    } else {
      hit[std::size_t(t)] = fhit[std::size_t(t)];
    }
  };

  bool par = exec == Exec::Par;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (par)
#endif
  for (int t = 0; t < trials; ++t) run_trial(t);
  (void)par;

  CoverageReport r;
  r.model = model.base == EnsembleModel::Base::Goe ? "goe" : "wishart";
  r.bound = bound.name();
  r.n = n;
  r.N = N;
  r.trials = trials;
  r.beta = beta;
  r.theta = theta;
  r.target = 1.0 - beta;
  for (int t = 0; t < trials; ++t) {
    r.hits += hit[std::size_t(t)];
    r.frob_hits += fhit[std::size_t(t)];
  }
  r.coverage = double(r.hits) / double(trials);
  r.frob_coverage = double(r.frob_hits) / double(trials);
  auto [lo, hi] = wilson_interval(r.hits, trials);
  r.wilson_lo = lo;
  r.wilson_hi = hi;

  if (csv != nullptr) {
    *csv << "trial,hit,norm,theta\n";
    csv->precision(17);
    for (int t = 0; t < trials; ++t) {
      *csv << t << ',' << int(hit[std::size_t(t)]) << ',' << fnorm[std::size_t(t)] << ','
           << theta << '\n';
    }
  }
  return r;
}

}  // namespace drstqp
