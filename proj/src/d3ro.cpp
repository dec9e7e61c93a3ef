#include "drstqp/d3ro.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "drstqp/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace drstqp {

RadiusFn RadiusFn::constant(double theta) {
  if (!(theta > 0.0)) throw DomainError("RadiusFn::constant: theta must be positive");
  RadiusFn f;
  f.kind = Kind::Const;
  f.gamma = theta;
  return f;
}

RadiusFn RadiusFn::inv_norm_sq(double gamma) {
  if (!(gamma > 0.0)) throw DomainError("RadiusFn::inv_norm_sq: gamma must be positive");
  RadiusFn f;
  f.kind = Kind::InvNormSq;
  f.gamma = gamma;
  return f;
}

RadiusFn RadiusFn::inv_quad(SymMat r) {
  RadiusFn f;
  f.kind = Kind::InvQuad;
  f.gamma = 1.0;
  f.r = std::move(r);
  return f;
}

RadiusFn RadiusFn::gamma_over_q(double gamma) {
  if (!(gamma > 0.0)) throw DomainError("RadiusFn::gamma_over_q: gamma must be positive");
  RadiusFn f;
  f.kind = Kind::GammaOverQ;
  f.gamma = gamma;
  return f;
}

double RadiusFn::theta(std::span<const double> x, const SymMat& qbar) const {
  switch (kind) {
    case Kind::Const:
      return gamma;
    case Kind::InvNormSq:
      return gamma / dot(x, x);
    case Kind::InvQuad: {
      double u = r->quad(x);
      if (!(u > 0.0)) throw DomainError("RadiusFn: x^T R x must be positive");
      return 1.0 / u;
    }
    case Kind::GammaOverQ: {
      double u = qbar.quad(x);
      if (!(u > 0.0)) throw DomainError("RadiusFn: x^T qbar x must be positive");
      return gamma / u;
    }
  }
  return 0.0;
}

double d3_objective(const SymMat& qbar, double gamma, std::span<const double> x) {
  double u = qbar.quad(x);
  if (!(u > 0.0)) throw DomainError("d3_objective: x^T qbar x must be positive");
  double v = dot(x, x);
  return u + gamma * v / u;
}

std::vector<double> d3_gradient(const SymMat& qbar, double gamma,
                                std::span<const double> x) {
  double u = qbar.quad(x);
  if (!(u > 0.0)) throw DomainError("d3_gradient: x^T qbar x must be positive");
  double v = dot(x, x);
  std::vector<double> qx = qbar.apply(x);
  std::vector<double> g(x.size());
  double u2 = u * u;
  for (std::size_t i = 0; i < x.size(); ++i) {
    g[i] = 2.0 * qx[i] + 2.0 * gamma * (u * x[i] - v * qx[i]) / u2;
  }
  return g;
}

SymMat d3_hessian(const SymMat& qbar, double gamma, std::span<const double> x) {
  double u = qbar.quad(x);
  if (!(u > 0.0)) throw DomainError("d3_hessian: x^T qbar x must be positive");
  double v = dot(x, x);
  std::vector<double> qx = qbar.apply(x);
  const int n = qbar.dim();
  SymMat h(n);
  double u3 = u * u * u;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double a = 0.0;
      if (i == j) a += u * u;
      a -= 2.0 * u * (qx[std::size_t(i)] * x[std::size_t(j)] + x[std::size_t(i)] * qx[std::size_t(j)]);
      a -= v * u * qbar(i, j);
      a += 4.0 * v * qx[std::size_t(i)] * qx[std::size_t(j)];
      h.at(i, j) = 2.0 * qbar(i, j) + (2.0 * gamma / u3) * a;
    }
  }
  return h;
}

double beta_conv(const SymMat& q_nom, const SymMat& r) {
  EigDecomp dr = eig_sym(r, 1e-13 * (1.0 + r.fro_norm()));
  double scale = std::max(1.0, std::abs(dr.lambda_max()));
  if (dr.lambda_min() <= 1e-10 * scale) {
    throw NotPd("beta_conv: R must be positive definite");
  }
  const int n = r.dim();
  // R^{-1/2} q_nom R^{-1/2} assembled from the spectral factors of R
  std::vector<double> rih(std::size_t(n) * n, 0.0);  // row-major R^{-1/2}
  for (int c = 0; c < n; ++c) {
    double s = 1.0 / std::sqrt(dr.eigenvalues[std::size_t(c)]);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        rih[std::size_t(i) * n + j] += s * dr.vec(i, c) * dr.vec(j, c);
      }
    }
  }
  SymMat m(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double acc = 0.0;
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
          acc += rih[std::size_t(i) * n + a] * q_nom(a, b) * rih[std::size_t(b) * n + j];
        }
      }
      m.at(i, j) = acc;
    }
  }
  return -eig_sym(m, 1e-13 * (1.0 + m.fro_norm())).lambda_min();
}

double convexity_constant(const SymMat& q_pd) {
  EigDecomp d = eig_sym(q_pd, 1e-13 * (1.0 + q_pd.fro_norm()));
  double lmin = d.lambda_min(), lmax = d.lambda_max();
  if (!(lmin > 0.0)) throw NotPd("convexity_constant: matrix must be positive definite");
  double n = double(q_pd.dim());
  return n * (2.0 / lmin + 10.0 * lmax / (lmin * lmin) + 8.0 * lmax * lmax / (lmin * lmin * lmin));
}

SpectralRegime spectral_regime(const SymMat& q_nom, const SymMat& r, double beta) {
  if (q_nom.dim() != r.dim()) throw DomainError("spectral_regime: dimension mismatch");
  if (!(beta > 0.0)) throw DomainError("spectral_regime: beta must be positive");
  SpectralRegime s;
  s.beta = beta;

  EigDecomp dn = eig_sym(q_nom, 1e-13 * (1.0 + q_nom.fro_norm()));
  EigDecomp dr = eig_sym(r, 1e-13 * (1.0 + r.fro_norm()));
  if (dn.lambda_min() < 0.0 && dr.lambda_max() > 0.0) {
    s.beta_max = -dn.lambda_min() / dr.lambda_max();
  } else {
    s.beta_max = std::numeric_limits<double>::infinity();
  }
  try {
    s.beta_conv = beta_conv(q_nom, r);
  } catch (const NotPd&) {
    // R singular: the PSD threshold in beta is not defined through R^{-1/2}
  }

  SymMat qb = q_nom;
  SymMat br = r;
  br *= beta;
  qb += br;
  EigDecomp db = eig_sym(qb, 1e-13 * (1.0 + qb.fro_norm()));
  s.lam_min = db.lambda_min();
  s.lam_max = db.lambda_max();
  if (s.lam_min > 0.0) {
    double c = convexity_constant(qb);
    s.c_const = c;
    s.gamma_conv = 2.0 * s.lam_min / c;
  }
  return s;
}

namespace {

using Clock = std::chrono::steady_clock;

// objective/gradient for the two fractional radii; S is qbar (GammaOverQ) or
// the user matrix R (InvQuad, gamma = 1)
struct FractionalObjective {
  const SymMat& qbar;
  const SymMat& s;
  double gamma;

  [[nodiscard]] double value(std::span<const double> x) const {
    double us = s.quad(x);
    return qbar.quad(x) + gamma * dot(x, x) / us;
  }

  [[nodiscard]] std::vector<double> gradient(std::span<const double> x) const {
    double us = s.quad(x);
    double v = dot(x, x);
    std::vector<double> qx = qbar.apply(x);
    std::vector<double> sx = s.apply(x);
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      g[i] = 2.0 * qx[i] + gamma * (2.0 * us * x[i] - 2.0 * v * sx[i]) / (us * us);
    }
    return g;
  }
};

struct LocalBest {
  double value = std::numeric_limits<double>::infinity();
  std::vector<double> x;

  bool better_than(const LocalBest& rhs) const {
    if (value != rhs.value) return value < rhs.value;
    return x < rhs.x;
  }
};

// projected gradient descent with Armijo backtracking on the proximal step
LocalBest descend(const FractionalObjective& f, std::vector<double> x,
                  const D3Options& opts) {
  double fx = f.value(x);
  for (int it = 0; it < opts.max_iter; ++it) {
    std::vector<double> g = f.gradient(x);
    std::vector<double> trial(x.size());
    double step = 1.0;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      for (std::size_t i = 0; i < x.size(); ++i) trial[i] = x[i] - step * g[i];
      SimplexVec p = project_simplex(trial);
      double d2 = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        double d = p.coords()[i] - x[i];
        d2 += d * d;
      }
      double ft = f.value(p.coords());
      if (ft <= fx - opts.armijo_slope / step * d2) {
        x = p.coords();
        fx = ft;
        accepted = d2 > 0.0;
        break;
      }
      step *= opts.armijo_shrink;
    }
    if (!accepted) break;
    // projected-gradient stationarity
    std::vector<double> probe(x.size());
    std::vector<double> gg = f.gradient(x);
    for (std::size_t i = 0; i < x.size(); ++i) probe[i] = x[i] - gg[i];
    SimplexVec p = project_simplex(probe);
    double r2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      double d = x[i] - p.coords()[i];
      r2 += d * d;
    }
    if (std::sqrt(r2) <= opts.grad_tol) break;
  }
  return {fx, std::move(x)};
}

// x^T R x minimum over the simplex must be positive for the fractional radii
void require_strictly_copositive(const SymMat& m, const char* who) {
  if (m.dim() <= 20) {
    StqpSolution s = solve_support_enum(m, 1e-8, Exec::Serial);
    if (!(s.value > 0.0)) {
      throw NotCopositive(std::string(who) + ": matrix is not strictly copositive");
    }
    return;
  }
  StqpSolution s = solve_replicator_multistart(m, 50, RngSpec{12345, 777}, 20000, 1e-14,
                                               1e-8, Exec::Serial);
  if (!(s.value > 0.0)) {
    throw NotCopositive(std::string(who) + ": matrix is not strictly copositive");
  }
}

// all lattice points k/resolution on the simplex, evaluated exhaustively
LocalBest grid_scan(const FractionalObjective& f, int n, int resolution, Exec exec) {
  // enumerate compositions of `resolution` into n parts via odometer order,
  // chunked over the first coordinate for the parallel path
  LocalBest best;
  auto scan_first = [&](int first) {
    LocalBest local;
    std::vector<int> k(std::size_t(n), 0);
    k[0] = first;
    std::vector<double> x(std::size_t(n), 0.0);
    // recursive walk over remaining coordinates
    auto rec = [&](auto&& self, int pos, int rem) -> void {
      if (pos == n - 1) {
        k[std::size_t(pos)] = rem;
        for (int i = 0; i < n; ++i) x[std::size_t(i)] = double(k[std::size_t(i)]) / double(resolution);
        double v = f.value(x);
        if (v < local.value || (v == local.value && x < local.x)) {
          local.value = v;
          local.x = x;
        }
        return;
      }
      for (int c = 0; c <= rem; ++c) {
        k[std::size_t(pos)] = c;
        self(self, pos + 1, rem - c);
      }
    };
    rec(rec, 1, resolution - first);
    return local;
  };

  if (exec == Exec::Par) {
#ifdef _OPENMP
    std::vector<LocalBest> per(std::size_t(resolution) + 1);
#pragma omp parallel for schedule(dynamic)
    for (int first = 0; first <= resolution; ++first) {
      per[std::size_t(first)] = scan_first(first);
    }
    for (const auto& lb : per) {
      if (!lb.x.empty() && lb.better_than(best)) best = lb;
    }
    return best;
#endif
  }
  for (int first = 0; first <= resolution; ++first) {
    LocalBest lb = scan_first(first);
    if (!lb.x.empty() && lb.better_than(best)) best = lb;
  }
  return best;
}

}  // namespace

StqpSolution solve_d3(const SymMat& qbar, const RadiusFn& radius, int starts,
                      RngSpec rng, const D3Options& opts) {
  const int n = qbar.dim();
  auto t0 = Clock::now();

  if (radius.kind == RadiusFn::Kind::Const) {
    SymMat q = qbar;
    q.add_scaled_identity(radius.gamma);
    StqpSolution s = solve_auto(q, rng, opts.support_tol, opts.exec);
    s.runtime_s = std::chrono::duration<double>(Clock::now() - t0).count();
    return s;
  }
  if (radius.kind == RadiusFn::Kind::InvNormSq) {
    // x^T qbar x + (gamma/x^T x) x^T x reduces to the nominal problem + gamma
    StqpSolution s = solve_auto(qbar, rng, opts.support_tol, opts.exec);
    s.value += radius.gamma;
    s.runtime_s = std::chrono::duration<double>(Clock::now() - t0).count();
    return s;
  }

  const SymMat& denom = radius.kind == RadiusFn::Kind::InvQuad ? *radius.r : qbar;
  if (radius.kind == RadiusFn::Kind::InvQuad) {
    if (!radius.r || radius.r->dim() != n) throw DomainError("solve_d3: bad InvQuad matrix");
    require_strictly_copositive(*radius.r, "solve_d3");
  } else {
    require_strictly_copositive(qbar, "solve_d3");
  }
  FractionalObjective f{qbar, denom, radius.gamma};

  if (n == 1) {
    StqpSolution sol;
    sol.x = SimplexVec::vertex(1, 0);
    sol.value = f.value(sol.x.coords());
    sol.support = {0};
    sol.engine = Engine::ProjGrad;
    sol.global = true;
    sol.runtime_s = std::chrono::duration<double>(Clock::now() - t0).count();
    return sol;
  }

  std::vector<std::vector<double>> x0;
  x0.reserve(std::size_t(starts) + std::size_t(n) + 1);
  for (int s = 0; s < starts; ++s) {
    Rng g(rng.sub(std::uint64_t(s)));
    std::vector<double> e(std::size_t(n), 0.0);
    double sum = 0.0;
    for (double& v : e) {
      v = g.exponential(1.0);
      sum += v;
    }
    for (double& v : e) v /= sum;
    x0.push_back(std::move(e));
  }
  x0.push_back(std::vector<double>(std::size_t(n), 1.0 / n));
  for (int i = 0; i < n; ++i) {
    std::vector<double> e(std::size_t(n), 0.0);
    // vertex starts nudged inside: an exact vertex is a fixed point of the
    // projected step when the face is locally optimal, which is what we probe
    e[std::size_t(i)] = 1.0;
    x0.push_back(std::move(e));
  }

  const int total = int(x0.size());
  std::vector<LocalBest> results{std::size_t(total)};
  bool par = opts.exec == Exec::Par;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (par)
#endif
  for (int i = 0; i < total; ++i) {
    results[std::size_t(i)] = descend(f, x0[std::size_t(i)], opts);
  }
  (void)par;

  LocalBest best;
  for (const auto& r : results) {
    if (!r.x.empty() && r.better_than(best)) best = r;
  }

  if (n <= opts.grid_dim_cap) {
    LocalBest g = grid_scan(f, n, opts.grid_resolution, opts.exec);
    if (!g.x.empty()) {
      // polish the best grid point with the same descent
      LocalBest polished = descend(f, g.x, opts);
      if (polished.better_than(best)) best = polished;
      if (g.better_than(best)) best = g;
    }
  }

  StqpSolution sol;
  sol.x = SimplexVec::unchecked(best.x);
  sol.value = best.value;
  sol.support = support_of(sol.x, opts.support_tol);
  sol.engine = Engine::ProjGrad;
  sol.global = false;
  sol.converged = true;
  {
    std::vector<double> g = f.gradient(best.x);
    std::vector<double> probe(best.x.size());
    for (std::size_t i = 0; i < best.x.size(); ++i) probe[i] = best.x[i] - g[i];
    SimplexVec p = project_simplex(probe);
    double r2 = 0.0;
    for (std::size_t i = 0; i < best.x.size(); ++i) {
      double d = best.x[i] - p.coords()[i];
      r2 += d * d;
    }
    sol.kkt_residual = std::sqrt(r2);
  }
  sol.runtime_s = std::chrono::duration<double>(Clock::now() - t0).count();
  return sol;
}

}  // namespace drstqp
