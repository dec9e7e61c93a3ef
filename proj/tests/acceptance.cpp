// Acceptance suite: end-to-end checks of the library's headline guarantees,
// one pass/fail line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <vector>

#include "drstqp/calibrate.hpp"
#include "drstqp/cliquelab.hpp"
#include "drstqp/d3ro.hpp"
#include "drstqp/dro.hpp"
#include "drstqp/errors.hpp"
#include "drstqp/randmat.hpp"
#include "drstqp/specfun.hpp"
#include "drstqp/stqp.hpp"
#include "drstqp/symlin.hpp"
#include "drstqp/transport.hpp"

using namespace drstqp;

namespace {

int g_failures = 0;

void report(int id, const char* what, bool pass, const std::string& detail = "") {
  std::printf("[%s] criterion %2d: %s%s%s\n", pass ? "PASS" : "FAIL", id, what,
              detail.empty() ? "" : " -- ", detail.c_str());
  if (!pass) ++g_failures;
}

std::vector<double> random_simplex_point(int n, Rng& rng) {
  std::vector<double> x(std::size_t(n), 0.0);
  double sum = 0.0;
  for (double& v : x) {
    v = rng.exponential(1.0);
    sum += v;
  }
  for (double& v : x) v /= sum;
  return x;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// exhaustive maximum weighted clique, the independent oracle for criterion 4
std::pair<double, int> brute_force_clique(const WeightedGraph& g) {
  double best_w = 0.0;
  int best_size = 0;
  for (std::uint32_t mask = 1; mask < (1u << g.n); ++mask) {
    std::vector<int> v;
    for (int i = 0; i < g.n; ++i) {
      if (mask & (1u << i)) v.push_back(i);
    }
    bool clique = true;
    for (std::size_t a = 0; a < v.size() && clique; ++a) {
      for (std::size_t b = a + 1; b < v.size(); ++b) {
        if (!g.has_edge(v[a], v[b])) {
          clique = false;
          break;
        }
      }
    }
    if (!clique) continue;
    double w = 0.0;
    for (int i : v) w += g.weights[std::size_t(i)];
    if (w > best_w) {
      best_w = w;
      best_size = int(v.size());
    }
  }
  return {best_w, best_size};
}

void criterion_1() {
  auto t0 = std::chrono::steady_clock::now();
  Rng rng(RngSpec{2024, 1});
  double worst_sup = 0.0, worst_attain = 0.0;
  for (int e = 0; e < 50; ++e) {
    int n = 2 + int(rng.below(7));
    int N = 1 + int(rng.below(20));
    EmpiricalEnsemble ens =
        draw_ensemble(EnsembleModel::goe(n), N, RngSpec{2024, 100 + std::uint64_t(e)});
    SymMat qbar = sample_mean(ens);
    double theta = 0.1 + rng.uniform();
    SymMat det = reformulate_frobenius(qbar, theta);
    std::vector<double> mean_vec = svec(qbar);
    for (int k = 0; k < 100; ++k) {
      auto x = random_simplex_point(n, rng);
      SymMat xx(n);
      for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) xx.at(i, j) = x[std::size_t(i)] * x[std::size_t(j)];
      }
      double sup = inner_sup_linear(svec(xx), mean_vec, theta, NormKind::euclid());
      worst_sup = std::max(worst_sup, std::abs(sup - det.quad(x)));

      EmpiricalEnsemble wc = worst_case_stqp_dist(ens, SimplexVec::unchecked(x), theta);
      double attained = sample_mean(wc).quad(x);
      worst_attain = std::max(worst_attain, std::abs(attained - sup));
    }
  }
  double el = seconds_since(t0);
  char buf[160];
  std::snprintf(buf, sizeof buf, "max |sup - quad| %.2e, max |attained - sup| %.2e, %.1fs",
                worst_sup, worst_attain, el);
  report(1, "constant-radius reformulation equals the inner supremum",
         worst_sup <= 1e-10 && worst_attain <= 1e-10 && el < 10.0, buf);
}

void criterion_2() {
  auto [maximin, minimax] = minimax_gap_demo(4, 0.5);
  SymMat half = SymMat::identity(4);
  half *= -0.5;  // -I + 0.5 I
  double solved = solve_support_enum(half).value;
  bool pass = maximin == -0.75 && minimax == -0.5 && std::abs(solved - minimax) <= 1e-12;
  char buf[120];
  std::snprintf(buf, sizeof buf, "(%.4f, %.4f), solver %.15f", maximin, minimax, solved);
  report(2, "positive minimax gap demo at its closed-form values", pass, buf);
}

void criterion_3() {
  Rng rng(RngSpec{2024, 3});
  double worst = 0.0;
  bool shift_const = true;
  for (int e = 0; e < 20; ++e) {
    int n = 2 + int(rng.below(5));
    int N = 1 + int(rng.below(12));
    EmpiricalEnsemble ens =
        draw_ensemble(EnsembleModel::goe(n), N, RngSpec{2024, 300 + std::uint64_t(e)});
    SymMat qbar = sample_mean(ens);
    double theta = 0.1 + rng.uniform();
    MaxnormReform r = reformulate_maxnorm(qbar, theta);
    StqpSolution sol = solve_support_enum(r.matrix);
    double total = r.constant + sol.value;

    // brute-force expectation under the worst-case translation at x*
    EmpiricalEnsemble shifted = ens;
    for (SymMat& s : shifted.samples) s += r.shift;
    double direct = 0.0;
    for (const SymMat& s : shifted.samples) direct += s.quad(sol.x.coords());
    direct /= double(shifted.size());
    worst = std::max(worst, std::abs(direct - total));

    // the translation matrix does not depend on the queried decision
    MaxnormReform again = reformulate_maxnorm(qbar, theta);
    if (!(again.shift == r.shift)) shift_const = false;
    for (int k = 0; k < 5; ++k) {
      auto x = random_simplex_point(n, rng);
      double at_x = qbar.quad(x) + r.shift.quad(x);
      double reform = r.constant + r.matrix.quad(x);
      if (std::abs(at_x - reform) > 1e-9) shift_const = false;
    }
  }
  char buf[120];
  std::snprintf(buf, sizeof buf, "max |direct - reformulated| %.2e", worst);
  report(3, "maximum-norm reformulation matches its worst-case expectation",
         worst <= 1e-9 && shift_const, buf);
}

void criterion_4() {
  Rng rng(RngSpec{2024, 4});
  bool pass = true;
  double worst_unit = 0.0, worst_weighted = 0.0;
  for (int t = 0; t < 30; ++t) {
    int n = 5 + int(rng.below(8));
    WeightedGraph g = gen_graph(n, 0.4, RngSpec{2024, 400 + std::uint64_t(t)});

    WeightedGraph unit = g;
    std::fill(unit.weights.begin(), unit.weights.end(), 1.0);
    auto [a_u, q_u] = build_qnom(unit);
    CliqueResult c_u = extract_clique(solve_support_enum(q_u).x, a_u);
    auto [bf_w, bf_size] = brute_force_clique(unit);
    worst_unit = std::max(worst_unit, std::abs(c_u.weight - bf_w));
    if (std::llround(c_u.weight) != std::llround(bf_w) || int(c_u.members.size()) != bf_size) {
      pass = false;
    }

    auto [a_w, q_w] = build_qnom(g);
    CliqueResult c_w = extract_clique(solve_support_enum(q_w).x, a_w);
    double member_sum = 0.0;
    for (int i : c_w.members) member_sum += g.weights[std::size_t(i)];
    worst_weighted = std::max(worst_weighted, std::abs(c_w.weight - member_sum));
    if (std::abs(c_w.weight - member_sum) > 1e-6) pass = false;
  }
  char buf[140];
  std::snprintf(buf, sizeof buf, "unit-weight max err %.2e, weighted max err %.2e", worst_unit,
                worst_weighted);
  report(4, "clique recovery matches exhaustive enumeration", pass && worst_unit <= 1e-6, buf);
}

void criterion_5() {
  // oracle for the GOE radius: invert the CDF by bisection through norm_cdf
  double lo = 0.0, hi = 10.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (norm_cdf(mid) < 0.95 ? lo : hi) = mid;
  }
  double phi_inv = 0.5 * (lo + hi);
  double goe = radius_chance_goe(1.0, 0.95).value;
  double goe_oracle = std::numbers::sqrt2 * phi_inv;

  // oracle for the Wishart radius at k = 2: P^{-1}(1, a) = -log(1-a)
  double wis = radius_chance_wishart(0.5, 2, 0.95).value;
  double wis_oracle = 2.0 * 0.5 * -std::log(0.05);

  bool pass = std::abs(goe - 2.32617) <= 1e-4 && std::abs(goe - goe_oracle) <= 1e-8 &&
              std::abs(wis - 2.99573) <= 1e-4 && std::abs(wis - wis_oracle) <= 1e-9;
  char buf[120];
  std::snprintf(buf, sizeof buf, "GOE theta %.6f, Wishart theta %.6f", goe, wis);
  report(5, "chance-constrained radii hit their closed forms", pass, buf);
}

void criterion_6() {
  Rng rng(RngSpec{2024, 6});
  const double h = 1e-6;
  double worst_grad = 0.0, worst_hess = 0.0;
  for (int t = 0; t < 50; ++t) {
    int n = 3 + int(rng.below(6));
    WeightedGraph g = gen_graph(n, 0.4, RngSpec{2024, 600 + std::uint64_t(t)});
    auto [adj, qnom] = build_qnom(g);
    SymMat noise = sample_wishart(n, n, RngSpec{2024, 700 + std::uint64_t(t)});
    noise *= 0.01 / double(n);
    SymMat qbar = qnom;
    qbar += noise;  // strictly copositive by construction
    double gamma = 0.05 + rng.uniform();
    auto x = random_simplex_point(n, rng);

    auto grad = d3_gradient(qbar, gamma, x);
    for (int i = 0; i < n; ++i) {
      std::vector<double> xp = x, xm = x;
      xp[std::size_t(i)] += h;
      xm[std::size_t(i)] -= h;
      double fd = (d3_objective(qbar, gamma, xp) - d3_objective(qbar, gamma, xm)) / (2.0 * h);
      worst_grad = std::max(worst_grad, std::abs(fd - grad[std::size_t(i)]) /
                                            (1.0 + std::abs(grad[std::size_t(i)])));
    }
    SymMat hess = d3_hessian(qbar, gamma, x);
    for (int j = 0; j < n; ++j) {
      std::vector<double> xp = x, xm = x;
      xp[std::size_t(j)] += h;
      xm[std::size_t(j)] -= h;
      auto gp = d3_gradient(qbar, gamma, xp);
      auto gm = d3_gradient(qbar, gamma, xm);
      for (int i = 0; i < n; ++i) {
        double fd = (gp[std::size_t(i)] - gm[std::size_t(i)]) / (2.0 * h);
        worst_hess =
            std::max(worst_hess, std::abs(fd - hess(i, j)) / (1.0 + std::abs(hess(i, j))));
      }
    }
  }
  char buf[120];
  std::snprintf(buf, sizeof buf, "max rel err: gradient %.2e, hessian %.2e", worst_grad,
                worst_hess);
  report(6, "analytic gradient and hessian match finite differences",
         worst_grad <= 1e-5 && worst_hess <= 1e-4, buf);
}

void criterion_7() {
  SymMat zero(2);
  SymMat id = SymMat::identity(2);
  SpectralRegime s = spectral_regime(zero, id, 1.0);  // qbar_beta = I, n = 2
  bool exact = s.gamma_conv.has_value() && *s.gamma_conv == 0.05 && *s.c_const == 40.0;

  bool psd = true;
  Rng rng(RngSpec{2024, 7});
  double worst = 0.0;
  for (int t = 0; t < 500; ++t) {
    auto x = random_simplex_point(2, rng);
    SymMat h = d3_hessian(id, 0.04, x);
    double lmin = eig_sym(h).lambda_min();
    worst = std::min(worst, lmin);
    if (lmin < -1e-8) psd = false;
  }
  char buf[120];
  std::snprintf(buf, sizeof buf, "gamma_conv %.6f, min eigenvalue %.2e",
                s.gamma_conv.value_or(-1.0), worst);
  report(7, "convexity threshold is exact and certifies the hessian", exact && psd, buf);
}

void criterion_8() {
  auto t0 = std::chrono::steady_clock::now();
  RadiusBound bound = RadiusBound::transport(2.0);
  CoverageReport r = coverage_mc(EnsembleModel::goe(3), 200, 500, 0.05, bound, RngSpec{2024, 8});
  double el = seconds_since(t0);
  bool pass = r.coverage >= 0.95 && r.wilson_lo > 0.95 && el < 60.0;
  char buf[180];
  std::snprintf(buf, sizeof buf,
                "coverage %.4f, wilson lo %.4f (frobenius surrogate %.3f), theta %.4f, %.1fs",
                r.coverage, r.wilson_lo, r.frob_coverage, r.theta, el);
  report(8, "transport-calibrated ball covers the truth at 95%", pass, buf);
}

void criterion_9() {
  auto normal_sampler = [](Rng& r) { return r.normal(); };
  auto chisq5 = [](Rng& r) {
    double acc = 0.0;
    for (int i = 0; i < 5; ++i) {
      double z = r.normal();
      acc += z * z;
    }
    return acc;
  };
  double psi2 = orlicz_norm(normal_sampler, OrliczPsi::Psi2, 20000, RngSpec{2024, 90});
  bool normal_ok = std::abs(psi2 - 1.633) <= 0.05 * 1.633;

  bool chisq_diverges = false;
  try {
    orlicz_norm(chisq5, OrliczPsi::Psi2, 20000, RngSpec{2024, 91});
  } catch (const Diverged&) {
    chisq_diverges = true;
  }
  bool psi1_finite = false;
  double psi1 = 0.0;
  try {
    psi1 = orlicz_norm(chisq5, OrliczPsi::Psi1, 20000, RngSpec{2024, 92});
    psi1_finite = std::isfinite(psi1);
  } catch (const Diverged&) {
  }
  char buf[140];
  std::snprintf(buf, sizeof buf, "psi2(N(0,1)) %.4f, chi2(5): psi2 %s, psi1 %.3f", psi2,
                chisq_diverges ? "diverged" : "finite?!", psi1);
  report(9, "orlicz norms classify gaussian vs chi-squared marginals",
         normal_ok && chisq_diverges && psi1_finite, buf);
}

void criterion_10() {
  WeightedGraph g = gen_graph(12, 0.3, RngSpec{2024, 10});

  ExperimentGrid di;
  di.model = ExperimentGrid::Model::DecisionIndependent;
  di.theta_or_gamma = {0.001, 0.01, 0.1, 0.3, 1.0, 3.0, 10.0};
  di.beta = {0.001};
  di.N = 20;
  di.trials = 3;
  di.seed = RngSpec{2024, 1000};
  auto di_records = run_decision_independent(g, di);

  bool theta_monotone = true;
  for (int trial = 0; trial < di.trials; ++trial) {
    double prev = -1e300;
    for (const RunRecord& r : di_records) {
      if (r.trial != trial) continue;
      if (r.objective < prev - 1e-12) theta_monotone = false;
      prev = r.objective;
    }
  }
  double density_lo = 2.0, density_hi = -1.0;
  for (const RunRecord& r : di_records) {
    if (r.theta_or_gamma == di.theta_or_gamma.front() && r.trial == 0) density_lo = r.density;
    if (r.theta_or_gamma == di.theta_or_gamma.back() && r.trial == 0) density_hi = r.density;
  }

  ExperimentGrid dd;
  dd.model = ExperimentGrid::Model::DecisionDependent;
  dd.theta_or_gamma = {0.001, 0.01, 0.05, 0.2, 0.5, 1.0};
  dd.beta = {0.01};
  dd.N = 50;
  dd.trials = 3;
  dd.seed = RngSpec{2024, 1001};
  auto dd_records = run_decision_dependent(g, dd);
  bool gamma_monotone = true;
  for (int trial = 0; trial < dd.trials; ++trial) {
    double prev = -1e300;
    for (const RunRecord& r : dd_records) {
      if (r.trial != trial) continue;
      if (r.objective < prev - 1e-12) gamma_monotone = false;
      prev = r.objective;
    }
  }
  bool pass = theta_monotone && gamma_monotone && density_hi < density_lo;
  char buf[160];
  std::snprintf(buf, sizeof buf, "monotone in theta %s / gamma %s, density %.3f -> %.3f",
                theta_monotone ? "yes" : "no", gamma_monotone ? "yes" : "no", density_lo,
                density_hi);
  report(10, "experiment trends: objectives monotone, density collapses", pass, buf);
}

void criterion_11() {
  Rng rng(RngSpec{2024, 11});
  int matched = 0;
  bool never_beats = true;
  for (int t = 0; t < 100; ++t) {
    int n = 3 + int(rng.below(8));
    SymMat q(n);
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) q.at(i, j) = rng.normal();
    }
    StqpSolution exact = solve_support_enum(q);
    StqpSolution local =
        solve_replicator_multistart(q, 20, RngSpec{2024, 1100 + std::uint64_t(t)});
    if (local.value < exact.value - 1e-9) never_beats = false;
    if (local.value <= exact.value + 1e-6) ++matched;
  }
  char buf[120];
  std::snprintf(buf, sizeof buf, "matched %d/100, never beats global: %s", matched,
                never_beats ? "yes" : "no");
  report(11, "replicator multistart cross-validates against enumeration",
         matched >= 90 && never_beats, buf);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  if (g_failures == 0) {
    std::printf("all 11 criteria passed\n");
    return 0;
  }
  std::printf("%d criteria FAILED\n", g_failures);
  return 1;
}
