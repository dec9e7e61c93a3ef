#include <cmath>

#include "doctest.h"

#include "drstqp/cliquelab.hpp"
#include "drstqp/d3ro.hpp"
#include "drstqp/dro.hpp"
#include "drstqp/errors.hpp"
#include "test_util.hpp"

using namespace drstqp;
using testutil::random_simplex_point;
using testutil::random_symmat;

namespace {

// a random strictly copositive, typically indefinite instance: clique-style
// nominal matrix plus a small PSD perturbation
SymMat random_copositive(int n, std::uint64_t seed) {
  WeightedGraph g = gen_graph(n, 0.4, RngSpec{seed, 0});
  auto [a, qnom] = build_qnom(g);
  SymMat w = sample_wishart(n, n, RngSpec{seed, 1});
  w *= 0.01 / double(n);
  qnom += w;
  return qnom;
}

}  // namespace

TEST_SUITE_BEGIN("d3ro");

TEST_CASE("objective frozen identities") {
  // qbar = I: u = v, so f = v + gamma
  Rng rng(RngSpec{71, 0});
  SymMat id = SymMat::identity(4);
  for (int t = 0; t < 20; ++t) {
    auto x = random_simplex_point(4, rng);
    double v = dot(x, x);
    CHECK(d3_objective(id, 0.0, x) == doctest::Approx(v).epsilon(1e-14));
    CHECK(d3_objective(id, 0.7, x) == doctest::Approx(v + 0.7).epsilon(1e-13));
  }
  SymMat neg = SymMat::identity(2);
  neg *= -1.0;
  std::vector<double> u{0.5, 0.5};
  CHECK_THROWS_AS(d3_objective(neg, 0.1, u), DomainError);
}

TEST_CASE("gradient matches central differences") {
  Rng rng(RngSpec{71, 1});
  const double h = 1e-6;
  for (int t = 0; t < 50; ++t) {
    int n = 3 + int(rng.below(5));
    SymMat qbar = random_copositive(n, 700 + std::uint64_t(t));
    double gamma = 0.05 + rng.uniform();
    auto x = random_simplex_point(n, rng);
    auto g = d3_gradient(qbar, gamma, x);
    for (int i = 0; i < n; ++i) {
      std::vector<double> xp = x, xm = x;
      xp[std::size_t(i)] += h;
      xm[std::size_t(i)] -= h;
      double fd = (d3_objective(qbar, gamma, xp) - d3_objective(qbar, gamma, xm)) / (2.0 * h);
      CHECK(std::abs(fd - g[std::size_t(i)]) <= 1e-5 * (1.0 + std::abs(g[std::size_t(i)])));
    }
  }

  // qbar = I: the fractional term has zero gradient, leaving 2x
  SymMat id = SymMat::identity(3);
  auto x0 = random_simplex_point(3, rng);
  auto g0 = d3_gradient(id, 0.9, x0);
  for (int i = 0; i < 3; ++i) {
    CHECK(g0[std::size_t(i)] == doctest::Approx(2.0 * x0[std::size_t(i)]).epsilon(1e-12));
  }
  auto g1 = d3_gradient(id, 0.0, x0);
  for (int i = 0; i < 3; ++i) {
    CHECK(g1[std::size_t(i)] == doctest::Approx(2.0 * x0[std::size_t(i)]).epsilon(1e-14));
  }
}

TEST_CASE("hessian matches differentiated gradient") {
  Rng rng(RngSpec{71, 2});
  const double h = 1e-6;
  for (int t = 0; t < 30; ++t) {
    int n = 3 + int(rng.below(4));
    SymMat qbar = random_copositive(n, 800 + std::uint64_t(t));
    double gamma = 0.05 + rng.uniform();
    auto x = random_simplex_point(n, rng);
    SymMat hess = d3_hessian(qbar, gamma, x);
    for (int j = 0; j < n; ++j) {
      std::vector<double> xp = x, xm = x;
      xp[std::size_t(j)] += h;
      xm[std::size_t(j)] -= h;
      auto gp = d3_gradient(qbar, gamma, xp);
      auto gm = d3_gradient(qbar, gamma, xm);
      for (int i = 0; i < n; ++i) {
        double fd = (gp[std::size_t(i)] - gm[std::size_t(i)]) / (2.0 * h);
        CHECK(std::abs(fd - hess(i, j)) <= 1e-4 * (1.0 + std::abs(hess(i, j))));
      }
    }
  }

  // gamma = 0 leaves 2 qbar; qbar = I gives the constant Hessian 2I
  SymMat qbar = random_copositive(4, 900);
  auto x = random_simplex_point(4, rng);
  SymMat h0 = d3_hessian(qbar, 0.0, x);
  SymMat two_q = qbar;
  two_q *= 2.0;
  CHECK((h0 - two_q).fro_norm() <= 1e-14);
  SymMat hid = d3_hessian(SymMat::identity(4), 0.8, x);
  SymMat two_i = SymMat::identity(4);
  two_i *= 2.0;
  CHECK((hid - two_i).fro_norm() <= 1e-11);
}

TEST_CASE("spectral regime thresholds") {
  // lam_min(q_nom) = -1, lam_max(R) = 2 -> beta_max = 0.5
  SymMat qnom = SymMat::diag(std::vector<double>{-1.0, 1.0});
  SymMat r = SymMat::diag(std::vector<double>{2.0, 1.0});
  SpectralRegime s = spectral_regime(qnom, r, 0.1);
  CHECK(s.beta_max == doctest::Approx(0.5).epsilon(1e-12));
  REQUIRE(s.beta_conv.has_value());
  // R^{-1/2} qnom R^{-1/2} = diag(-1/2, 1) -> beta_conv = 1/2
  CHECK(*s.beta_conv == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(s.indefinite());

  // qbar_beta = I at n = 2: C = 40 and gamma_conv = 0.05, exactly
  SymMat zero(2);
  SymMat id = SymMat::identity(2);
  SpectralRegime si = spectral_regime(zero, id, 1.0);
  REQUIRE(si.gamma_conv.has_value());
  CHECK(*si.c_const == 40.0);
  CHECK(*si.gamma_conv == 0.05);

  // PSD nominal matrix: the indefiniteness bound is vacuous
  SpectralRegime sp = spectral_regime(SymMat::identity(2), id, 0.3);
  CHECK(std::isinf(sp.beta_max));

  SymMat singular(2);
  singular.at(0, 0) = 1.0;
  CHECK_THROWS_AS(beta_conv(qnom, singular), NotPd);
}

TEST_CASE("hessian is PSD below gamma_conv") {
  SymMat qpd = random_copositive(4, 1000);
  SymMat sq(4);
  for (int i = 0; i < 4; ++i) {
    for (int j = i; j < 4; ++j) {
      double acc = 0.0;
      for (int k = 0; k < 4; ++k) acc += qpd(i, k) * qpd(k, j);
      sq.at(i, j) = acc;
    }
  }
  sq.add_scaled_identity(0.3);  // positive definite instance
  double gamma_c = 2.0 * eig_sym(sq).lambda_min() / convexity_constant(sq);
  Rng rng(RngSpec{71, 3});
  for (int t = 0; t < 500; ++t) {
    auto x = random_simplex_point(4, rng);
    SymMat h = d3_hessian(sq, 0.8 * gamma_c, x);
    CHECK(eig_sym(h).lambda_min() >= -1e-8);
  }
}

TEST_CASE("solve_d3 exact paths") {
  Rng rng(RngSpec{71, 4});
  SymMat qbar = random_symmat(5, rng);

  // constant radius delegates to the nominal engine on qbar + theta I
  StqpSolution c = solve_d3(qbar, RadiusFn::constant(0.6), 16, RngSpec{71, 5});
  StqpSolution ref = solve_support_enum(reformulate_frobenius(qbar, 0.6));
  CHECK(c.value == doctest::Approx(ref.value).epsilon(1e-12));
  CHECK(c.global);

  // gamma / x^T x radius collapses to the nominal problem plus gamma
  SymMat diag = SymMat::diag(std::vector<double>{1.0, 2.0});
  StqpSolution inv = solve_d3(diag, RadiusFn::inv_norm_sq(0.3), 16, RngSpec{71, 6});
  CHECK(inv.value == doctest::Approx(0.3 + 2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("solve_d3 fractional radius on the identity instance") {
  // qbar = I: f = x^T x + gamma, minimized at the barycenter
  for (int n : {3, 5}) {
    StqpSolution s = solve_d3(SymMat::identity(n), RadiusFn::gamma_over_q(0.4), 24,
                              RngSpec{71, 7});
    CHECK(s.value == doctest::Approx(1.0 / n + 0.4).epsilon(1e-9));
    for (int i = 0; i < n; ++i) CHECK(s.x[i] == doctest::Approx(1.0 / n).epsilon(1e-6));
  }
}

TEST_CASE("solve_d3 value monotone in gamma and grid-consistent") {
  SymMat qbar = random_copositive(5, 1100);
  double prev = -1e300;
  for (double gamma : {0.01, 0.05, 0.2, 0.6, 1.5}) {
    StqpSolution s = solve_d3(qbar, RadiusFn::gamma_over_q(gamma), 32, RngSpec{71, 8});
    CHECK(s.value >= prev - 1e-9);
    prev = s.value;
  }

  // never worse than a direct lattice scan
  StqpSolution s = solve_d3(qbar, RadiusFn::gamma_over_q(0.2), 32, RngSpec{71, 9});
  double best_grid = 1e300;
  const int res = 12;
  std::vector<int> k(5, 0);
  auto rec = [&](auto&& self, int pos, int rem) -> void {
    if (pos == 4) {
      k[4] = rem;
      std::vector<double> x(5);
      for (int i = 0; i < 5; ++i) x[std::size_t(i)] = double(k[std::size_t(i)]) / res;
      best_grid = std::min(best_grid, d3_objective(qbar, 0.2, x));
      return;
    }
    for (int c = 0; c <= rem; ++c) {
      k[std::size_t(pos)] = c;
      self(self, pos + 1, rem - c);
    }
  };
  rec(rec, 0, res);
  CHECK(s.value <= best_grid + 1e-9);
}

TEST_CASE("solve_d3 rejects non-copositive data") {
  SymMat neg = SymMat::identity(3);
  neg *= -1.0;
  CHECK_THROWS_AS(solve_d3(neg, RadiusFn::gamma_over_q(0.1), 8, RngSpec{71, 10}),
                  NotCopositive);
  CHECK_THROWS_AS(solve_d3(SymMat::identity(3), RadiusFn::inv_quad(neg), 8, RngSpec{71, 11}),
                  NotCopositive);
}


TEST_CASE("inv_quad radius with R = qbar matches gamma_over_q at gamma one") {
  SymMat qbar = random_copositive(4, 1200);
  StqpSolution a = solve_d3(qbar, RadiusFn::inv_quad(qbar), 24, RngSpec{71, 12});
  StqpSolution b = solve_d3(qbar, RadiusFn::gamma_over_q(1.0), 24, RngSpec{71, 12});
  CHECK(a.value == doctest::Approx(b.value).epsilon(1e-12));

  // with an indefinite but strictly copositive R the radius is still valid
  WeightedGraph g = gen_graph(4, 0.5, RngSpec{71, 13});
  auto [adj, qnom] = build_qnom(g);
  StqpSolution c = solve_d3(SymMat::identity(4), RadiusFn::inv_quad(qnom), 24, RngSpec{71, 14});
  CHECK(std::isfinite(c.value));
  CHECK(c.value >= solve_support_enum(SymMat::identity(4)).value);
}

TEST_SUITE_END();
