#include "drstqp/stqp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>

#include "drstqp/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace drstqp {

std::string engine_name(Engine e) {
  switch (e) {
    case Engine::SupportEnum:
      return "support_enum";
    case Engine::Replicator:
      return "replicator";
    case Engine::ProjGrad:
      return "proj_grad";
  }
  return "?";
}

std::vector<int> support_of(const SimplexVec& x, double support_tol) {
  std::vector<int> s;
  for (int i = 0; i < x.dim(); ++i) {
    if (x[i] > support_tol) s.push_back(i);
  }
  return s;
}

double kkt_residual(const SymMat& q, const SimplexVec& x) {
  std::vector<double> g = q.apply(x.coords());
  std::vector<double> step(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) step[i] = x.coords()[i] - 2.0 * g[i];
  SimplexVec proj = project_simplex(step);
  double r2 = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    double d = x.coords()[i] - proj.coords()[i];
    r2 += d * d;
  }
  return std::sqrt(r2);
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Gaussian elimination with partial pivoting on a dense square system; false
// when a pivot collapses.
bool gauss_solve(std::vector<double>& a, std::vector<double>& b, int n) {
  for (int col = 0; col < n; ++col) {
    int piv = col;
    double best = std::abs(a[std::size_t(col) * n + col]);
    for (int r = col + 1; r < n; ++r) {
      double v = std::abs(a[std::size_t(r) * n + col]);
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best < 1e-12) return false;
    if (piv != col) {
      for (int c = col; c < n; ++c) std::swap(a[std::size_t(piv) * n + c], a[std::size_t(col) * n + c]);
      std::swap(b[std::size_t(piv)], b[std::size_t(col)]);
    }
    double inv = 1.0 / a[std::size_t(col) * n + col];
    for (int r = col + 1; r < n; ++r) {
      double f = a[std::size_t(r) * n + col] * inv;
      if (f == 0.0) continue;
      for (int c = col; c < n; ++c) a[std::size_t(r) * n + c] -= f * a[std::size_t(col) * n + c];
      b[std::size_t(r)] -= f * b[std::size_t(col)];
    }
  }
  for (int r = n - 1; r >= 0; --r) {
    double acc = b[std::size_t(r)];
    for (int c = r + 1; c < n; ++c) acc -= a[std::size_t(r) * n + c] * b[std::size_t(c)];
    b[std::size_t(r)] = acc / a[std::size_t(r) * n + r];
  }
  return true;
}

// Ridge-regularized least squares (A^T A + eps I) x = A^T b; the fallback for
// singular face systems.
bool ridge_solve(const std::vector<double>& a, const std::vector<double>& b,
                 std::vector<double>& x, int n) {
  std::vector<double> ata(std::size_t(n) * n, 0.0), atb(std::size_t(n), 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int r = 0; r < n; ++r) acc += a[std::size_t(r) * n + i] * a[std::size_t(r) * n + j];
      ata[std::size_t(i) * n + j] = acc;
    }
    double acc = 0.0;
    for (int r = 0; r < n; ++r) acc += a[std::size_t(r) * n + i] * b[std::size_t(r)];
    atb[std::size_t(i)] = acc;
  }
  double scale = 0.0;
  for (double v : ata) scale = std::max(scale, std::abs(v));
  for (int i = 0; i < n; ++i) ata[std::size_t(i) * n + i] += 1e-10 * (scale + 1.0);
  x = atb;
  return gauss_solve(ata, x, n);
}

struct Candidate {
  double value = 0.0;
  std::vector<double> x;

  bool better_than(const Candidate& rhs, double support_tol) const {
    if (value != rhs.value) return value < rhs.value;
    auto count = [&](const std::vector<double>& v) {
      int c = 0;
      for (double e : v) c += e > support_tol;
      return c;
    };
    int sa = count(x), sb = count(rhs.x);
    if (sa != sb) return sa < sb;
    return x < rhs.x;  // lexicographic
  }
};

// Face KKT candidate for support mask; false when none feasible.
bool face_candidate(const SymMat& q, std::uint32_t mask, double /*support_tol*/,
                    Candidate& out) {
  const int n = q.dim();
  std::vector<int> idx;
  for (int i = 0; i < n; ++i) {
    if (mask & (1u << i)) idx.push_back(i);
  }
  const int s = int(idx.size());
  if (s == 1) {
    out.x.assign(std::size_t(n), 0.0);
    out.x[std::size_t(idx[0])] = 1.0;
    out.value = q(idx[0], idx[0]);
    return true;
  }
  // stationarity on the face: 2 Q_S x = lambda 1, 1^T x = 1
  const int m = s + 1;
  std::vector<double> a(std::size_t(m) * m, 0.0), b(std::size_t(m), 0.0);
  for (int r = 0; r < s; ++r) {
    for (int c = 0; c < s; ++c) a[std::size_t(r) * m + c] = 2.0 * q(idx[std::size_t(r)], idx[std::size_t(c)]);
    a[std::size_t(r) * m + s] = -1.0;
    a[std::size_t(s) * m + r] = 1.0;
  }
  b[std::size_t(s)] = 1.0;

  std::vector<double> sol = b;
  std::vector<double> awork = a;
  bool ok = gauss_solve(awork, sol, m);
  if (!ok) {
    if (!ridge_solve(a, b, sol, m)) return false;
    // verify the least-squares point actually solves the singular system
    double resid = 0.0, scale = 1.0 + q.max_abs();
    for (int r = 0; r < m; ++r) {
      double acc = -b[std::size_t(r)];
      for (int c = 0; c < m; ++c) acc += a[std::size_t(r) * m + c] * sol[std::size_t(c)];
      resid = std::max(resid, std::abs(acc));
    }
    if (resid > 1e-7 * scale) return false;
  }
  double sum = 0.0;
  for (int r = 0; r < s; ++r) {
    if (sol[std::size_t(r)] < -1e-12) return false;
    sum += std::max(sol[std::size_t(r)], 0.0);
  }
  if (!(sum > 0.0)) return false;
  out.x.assign(std::size_t(n), 0.0);
  for (int r = 0; r < s; ++r) out.x[std::size_t(idx[std::size_t(r)])] = std::max(sol[std::size_t(r)], 0.0) / sum;
  out.value = q.quad(out.x);
  return true;
}

StqpSolution finish(const SymMat& q, Candidate best, Engine engine, bool global,
                    double support_tol, Clock::time_point t0, bool converged = true,
                    double shift = 0.0) {
  StqpSolution sol;
  sol.x = SimplexVec::unchecked(std::move(best.x));
  sol.value = best.value;
  sol.support = support_of(sol.x, support_tol);
  sol.engine = engine;
  sol.kkt_residual = kkt_residual(q, sol.x);
  sol.global = global;
  sol.converged = converged;
  sol.shift = shift;
  sol.runtime_s = seconds_since(t0);
  return sol;
}

}  // namespace

StqpSolution solve_support_enum(const SymMat& q, double support_tol, Exec exec) {
  const int n = q.dim();
  if (n > 20) throw DomainError("solve_support_enum: dimension exceeds 20");
  auto t0 = Clock::now();
  const std::uint32_t nmask = (1u << n) - 1u;

  Candidate best;
  best.value = std::numeric_limits<double>::infinity();

  if (exec == Exec::Par) {
#ifdef _OPENMP
#pragma omp parallel
    {
      Candidate local;
      local.value = std::numeric_limits<double>::infinity();
      Candidate cand;
#pragma omp for schedule(dynamic, 256) nowait
      for (std::int64_t mask = 1; mask <= std::int64_t(nmask); ++mask) {
        if (face_candidate(q, std::uint32_t(mask), support_tol, cand)) {
          if (local.x.empty() || cand.better_than(local, support_tol)) local = cand;
        }
      }
#pragma omp critical
      {
        if (!local.x.empty() && (best.x.empty() || local.better_than(best, support_tol))) {
          best = local;
        }
      }
    }
#else
    exec = Exec::Serial;
#endif
  }
  if (exec == Exec::Serial || best.x.empty()) {
    Candidate cand;
    for (std::uint32_t mask = 1; mask <= nmask; ++mask) {
      if (face_candidate(q, mask, support_tol, cand)) {
        if (best.x.empty() || cand.better_than(best, support_tol)) best = cand;
      }
    }
  }
  return finish(q, std::move(best), Engine::SupportEnum, true, support_tol, t0);
}

StqpSolution solve_replicator(const SymMat& q, const SimplexVec& x0, int max_iter,
                              double tol, double support_tol) {
  const int n = q.dim();
  if (x0.dim() != n) throw DomainError("solve_replicator: dimension mismatch");
  auto t0 = Clock::now();

  // maximize x^T (cE - Q) x; the shift keeps the payoff entrywise positive and
  // leaves the argmin unchanged because x^T E x = 1 on the simplex
  const double c = 1.0 + std::max(0.0, q.max_entry());
  SymMat payoff = SymMat::all_ones(n);
  payoff *= c;
  payoff -= q;

  std::vector<double> x = x0.coords();
  bool converged = false;
  for (int it = 0; it < max_iter; ++it) {
    std::vector<double> px = payoff.apply(x);
    double fitness = dot(x, px);
    double step = 0.0;
    for (int i = 0; i < n; ++i) {
      double xi = x[std::size_t(i)] * px[std::size_t(i)] / fitness;
      step += std::abs(xi - x[std::size_t(i)]);
      x[std::size_t(i)] = xi;
    }
    if (step <= tol) {
      converged = true;
      break;
    }
  }
  double sum = 0.0;
  for (double v : x) sum += v;
  for (double& v : x) v /= sum;

  Candidate cand;
  cand.value = q.quad(x);
  cand.x = std::move(x);
  return finish(q, std::move(cand), Engine::Replicator, false, support_tol, t0,
                converged, c);
}

StqpSolution solve_replicator_multistart(const SymMat& q, int starts, RngSpec rng,
                                         int max_iter, double tol, double support_tol,
                                         Exec exec) {
  const int n = q.dim();
  auto t0 = Clock::now();

  // deterministic start list: Dirichlet(1) draws, barycenter, all vertices
  std::vector<SimplexVec> x0;
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
    x0.push_back(SimplexVec::unchecked(std::move(e)));
  }
  x0.push_back(SimplexVec::uniform(n));
  for (int i = 0; i < n; ++i) x0.push_back(SimplexVec::vertex(n, i));

  const int total = int(x0.size());
  std::vector<StqpSolution> sols{std::size_t(total)};
  bool par = exec == Exec::Par;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (par)
#endif
  for (int i = 0; i < total; ++i) {
    sols[std::size_t(i)] = solve_replicator(q, x0[std::size_t(i)], max_iter, tol, support_tol);
  }
  (void)par;

  int best = 0;
  for (int i = 1; i < total; ++i) {
    Candidate a{sols[std::size_t(i)].value, sols[std::size_t(i)].x.coords()};
    Candidate b{sols[std::size_t(best)].value, sols[std::size_t(best)].x.coords()};
    if (a.better_than(b, support_tol)) best = i;
  }
  StqpSolution out = sols[std::size_t(best)];
  out.runtime_s = seconds_since(t0);
  return out;
}

StqpSolution solve_auto(const SymMat& q, RngSpec rng, double support_tol, Exec exec) {
  if (q.dim() <= 20) return solve_support_enum(q, support_tol, exec);
  return solve_replicator_multistart(q, 50, rng, 20000, 1e-14, support_tol, exec);
}

CliqueResult extract_clique(const SimplexVec& x, const SymMat& a, double support_tol) {
  if (x.dim() != a.dim()) throw DomainError("extract_clique: dimension mismatch");
  double val = a.quad(x.coords());
  if (val >= 1.0 - 1e-12) {
    throw DomainError("extract_clique: degenerate value, x^T A x too close to 1");
  }
  CliqueResult r;
  r.members = support_of(x, support_tol);
  r.weight = 1.0 / (2.0 * (1.0 - val));
  for (int i : r.members) {
    double aii = a(i, i);
    r.weight_sum += 1.0 / (2.0 * (1.0 - aii));
  }
  return r;
}

}  // namespace drstqp
