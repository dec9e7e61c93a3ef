#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"

#include "drstqp/errors.hpp"
#include "drstqp/transport.hpp"
#include "test_util.hpp"

using namespace drstqp;
using testutil::random_simplex_point;
using testutil::random_unit_vector;

namespace {

// oracle: exact W_p on tiny supports by enumerating all permutations
double wp_permutation_oracle(const DiscreteDist& a, const DiscreteDist& b, double p,
                             NormKind norm) {
  const int n = a.size();
  std::vector<int> perm(std::size_t(n), 0);
  std::iota(perm.begin(), perm.end(), 0);
  double best = 1e300;
  do {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      std::vector<double> d(a.atoms[std::size_t(i)]);
      for (std::size_t k = 0; k < d.size(); ++k) d[k] -= b.atoms[std::size_t(perm[std::size_t(i)])][k];
      acc += std::pow(vector_norm(d, norm), p);
    }
    best = std::min(best, acc);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::pow(best / n, 1.0 / p);
}

DiscreteDist random_dist(int n, int d, Rng& rng) {
  DiscreteDist dist;
  for (int i = 0; i < n; ++i) {
    std::vector<double> a(std::size_t(d), 0.0);
    for (double& v : a) v = rng.normal();
    dist.atoms.push_back(std::move(a));
  }
  return dist;
}

}  // namespace

TEST_SUITE_BEGIN("transport");

TEST_CASE("dual norms of the common pairs") {
  std::vector<double> c1{3.0, 4.0};
  CHECK(dual_norm(c1, NormKind::euclid()) == doctest::Approx(5.0).epsilon(1e-15));
  std::vector<double> c2{3.0, -4.0};
  CHECK(dual_norm(c2, NormKind::l1()) == 4.0);  // dual of l1 is linf
  std::vector<double> c3{1.0, 1.0, 1.0};
  CHECK(dual_norm(c3, NormKind::linf()) == 3.0);  // dual of linf is l1
  // Holder pair p=3, q=3/2
  std::vector<double> c4{1.0, 2.0};
  double q = 1.5;
  double expect = std::pow(1.0 + std::pow(2.0, q), 1.0 / q);
  CHECK(dual_norm(c4, NormKind::lp(3.0)) == doctest::Approx(expect).epsilon(1e-14));
  CHECK_THROWS_AS(NormKind::lp(1.0), DomainError);
}

TEST_CASE("inner_sup_linear matches ball-search oracles") {
  // grid oracle over the Euclidean unit ball
  std::vector<double> c{3.0, 4.0}, zero{0.0, 0.0};
  double val = inner_sup_linear(c, zero, 1.0, NormKind::euclid());
  double best = -1e300;
  const int steps = 2000;
  for (int i = 0; i <= steps; ++i) {
    double ang = 2.0 * 3.14159265358979 * double(i) / steps;
    best = std::max(best, c[0] * std::cos(ang) + c[1] * std::sin(ang));
  }
  CHECK(val == doctest::Approx(best).epsilon(1e-3));
  CHECK(val == doctest::Approx(5.0).epsilon(1e-14));

  // vertex oracle over the linf ball
  std::vector<double> c2{1.0, 0.0}, mean{2.0, 7.0};
  double v2 = inner_sup_linear(c2, mean, 3.0, NormKind::linf());
  double vert_best = -1e300;
  for (int sx : {-1, 1}) {
    for (int sy : {-1, 1}) {
      vert_best = std::max(vert_best, c2[0] * (mean[0] + 3.0 * sx) + c2[1] * (mean[1] + 3.0 * sy));
    }
  }
  CHECK(v2 == doctest::Approx(vert_best).epsilon(1e-14));
  CHECK(v2 == doctest::Approx(5.0).epsilon(1e-14));

  // theta -> 0 limit recovers the mean payoff; theta = 0 itself is rejected
  CHECK(inner_sup_linear(c2, mean, 1e-14, NormKind::euclid()) ==
        doctest::Approx(2.0).epsilon(1e-10));
  CHECK_THROWS_AS(inner_sup_linear(c2, mean, 0.0, NormKind::euclid()), DomainError);
}

TEST_CASE("w2_gaussian closed forms") {
  SymMat s1 = SymMat::identity(2);
  std::vector<double> mu1{1.0, 2.0}, mu2{4.0, 6.0};
  CHECK(w2_gaussian(mu1, s1, mu2, s1) == doctest::Approx(5.0).epsilon(1e-12));

  // commuting diagonal case: W2^2 = 8 + 2 - 8 = 2
  SymMat s4 = SymMat::identity(2);
  s4 *= 4.0;
  std::vector<double> z{0.0, 0.0};
  CHECK(w2_gaussian(z, s4, z, s1) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

  SymMat indef(2);
  indef.at(0, 0) = 1.0;
  indef.at(1, 1) = -1.0;
  CHECK_THROWS_AS(w2_gaussian(z, indef, z, s1), NotPsd);
}

TEST_CASE("w2_gaussian against the empirical-sampling oracle") {
  SymMat s1 = SymMat::identity(2);
  SymMat s4 = SymMat::identity(2);
  s4 *= 4.0;
  std::vector<double> z{0.0, 0.0};
  double exact = w2_gaussian(z, s4, z, s1);

  Rng rng(RngSpec{41, 0});
  const int n = 2000;
  DiscreteDist a, b;
  for (int i = 0; i < n; ++i) {
    a.atoms.push_back({2.0 * rng.normal(), 2.0 * rng.normal()});
    b.atoms.push_back({rng.normal(), rng.normal()});
  }
  double empirical = discrete_wp(a, b, 2.0);
  CHECK(std::abs(empirical - exact) <= 0.1 * exact);
}

TEST_CASE("discrete_wp exact values and oracle") {
  DiscreteDist p{{{0.0}}}, q{{{3.0}}};
  for (double pw : {1.0, 1.7, 2.0, 3.0}) {
    CHECK(discrete_wp(p, q, pw) == doctest::Approx(3.0).epsilon(1e-14));
  }
  DiscreteDist p2{{{0.0}, {1.0}}}, q2{{{1.0}, {2.0}}};
  CHECK(discrete_wp(p2, p2, 1.0) == 0.0);
  CHECK(discrete_wp(p2, q2, 1.0) == doctest::Approx(1.0).epsilon(1e-14));

  Rng rng(RngSpec{41, 1});
  for (int t = 0; t < 40; ++t) {
    int n = 2 + int(rng.below(4));  // up to 5 atoms: oracle enumerates permutations
    int d = 1 + int(rng.below(3));
    DiscreteDist a = random_dist(n, d, rng), b = random_dist(n, d, rng);
    for (double pw : {1.0, 2.0}) {
      CHECK(discrete_wp(a, b, pw) ==
            doctest::Approx(wp_permutation_oracle(a, b, pw, NormKind::euclid())).epsilon(1e-10));
    }
  }
  DiscreteDist bigger{{{0.0}, {1.0}, {2.0}}};
  CHECK_THROWS_AS(discrete_wp(p2, bigger, 1.0), DomainError);
}

TEST_CASE("wp monotone in p on the euclidean ground metric") {
  Rng rng(RngSpec{41, 2});
  for (int t = 0; t < 100; ++t) {
    int n = 3 + int(rng.below(4));
    int d = 2 + int(rng.below(3));
    DiscreteDist a = random_dist(n, d, rng), b = random_dist(n, d, rng);
    double w2 = discrete_wp(a, b, 2.0);
    for (double pw : {1.0, 1.25, 1.5, 2.0}) {
      CHECK(discrete_wp(a, b, pw) <= w2 + 1e-9);
    }
  }
}

TEST_CASE("w2 from a dirac decomposes into bias and variance") {
  DiscreteDist single{{{2.0, 1.0}}};
  std::vector<double> z = single.atoms[0];
  CHECK(w2_dirac_to_empirical(z, single) == 0.0);

  DiscreteDist two{{{1.0, 0.0}, {-1.0, 0.0}}};
  std::vector<double> zero{0.0, 0.0};
  double w = w2_dirac_to_empirical(zero, two);
  CHECK(w * w == doctest::Approx(1.0).epsilon(1e-14));

  Rng rng(RngSpec{41, 3});
  for (int t = 0; t < 50; ++t) {
    int n = 2 + int(rng.below(8));
    DiscreteDist d = random_dist(n, 3, rng);
    std::vector<double> probe{rng.normal(), rng.normal(), rng.normal()};
    double wsq = w2_dirac_to_empirical(probe, d);
    wsq *= wsq;
    std::vector<double> mean = d.mean();
    double bias2 = 0.0;
    for (int i = 0; i < 3; ++i) {
      bias2 += (probe[std::size_t(i)] - mean[std::size_t(i)]) * (probe[std::size_t(i)] - mean[std::size_t(i)]);
    }
    double var = 0.0;
    for (const auto& atom : d.atoms) {
      for (int i = 0; i < 3; ++i) {
        var += (atom[std::size_t(i)] - mean[std::size_t(i)]) * (atom[std::size_t(i)] - mean[std::size_t(i)]);
      }
    }
    var /= double(n);
    CHECK(wsq == doctest::Approx(bias2 + var).epsilon(1e-12));
  }
}

TEST_CASE("worst_case_shift realizes the linear supremum at distance theta") {
  DiscreteDist single{{{0.0, 0.0}}};
  std::vector<double> c{1.0, 0.0};
  DiscreteDist shifted = worst_case_shift(single, c, 1.0);
  CHECK(shifted.atoms[0][0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(shifted.atoms[0][1] == 0.0);

  Rng rng(RngSpec{41, 4});
  for (int t = 0; t < 30; ++t) {
    int n = 2 + int(rng.below(4));
    DiscreteDist d = random_dist(n, 3, rng);
    std::vector<double> dir{rng.normal(), rng.normal(), rng.normal()};
    double theta = 0.2 + rng.uniform();
    DiscreteDist wc = worst_case_shift(d, dir, theta);
    // the constant-shift coupling moves every atom by exactly theta
    for (double pw : {1.0, 2.0, 3.0}) {
      CHECK(discrete_wp(d, wc, pw) == doctest::Approx(theta).epsilon(1e-10));
    }
    // attained payoff equals the dual-norm supremum
    double attained = dot(dir, wc.mean());
    CHECK(attained ==
          doctest::Approx(inner_sup_linear(dir, d.mean(), theta, NormKind::euclid()))
              .epsilon(1e-12));
  }
  std::vector<double> zero{0.0, 0.0};
  CHECK_THROWS_AS(worst_case_shift(single, zero, 1.0), DomainError);
}

// Only the maximum norm admits a maximal element for the vectorized
// quadratic payoff family: its first-moment ball has the whole nonnegative
// orthant as normal cone at the top corner. Smooth lp balls (1 < p < inf)
// cannot, since their boundary normal cones are one-dimensional, and the l1
// ball cannot either (tested below), so those models keep a positive minimax
// gap and no reformulation of this kind.
TEST_CASE("linf maximal element dominates sampled ball points") {
  std::vector<double> zero3{0.0, 0.0, 0.0};
  auto z = linf_maximal_element(zero3, 1.0);
  CHECK(z == std::vector<double>{1.0, 1.0, 1.0});

  Rng rng(RngSpec{41, 5});
  std::vector<double> mean{0.5, -1.0, 2.0};
  double theta = 0.7;
  auto zz = linf_maximal_element(mean, theta);
  for (int t = 0; t < 10000; ++t) {
    std::vector<double> y(3), h(3);
    for (int i = 0; i < 3; ++i) {
      y[std::size_t(i)] = mean[std::size_t(i)] + theta * (2.0 * rng.uniform() - 1.0);
      h[std::size_t(i)] = rng.uniform();  // nonnegative direction
    }
    CHECK(dot(h, zz) >= dot(h, y) - 1e-12);
  }

  // m = 1 reduces to mean + theta, the same point as the l1 case
  std::vector<double> m1{0.3};
  CHECK(linf_maximal_element(m1, 0.5) == std::vector<double>{0.8});
}

TEST_CASE("l1 normal cone membership rule") {
  // m = 1: z = w + theta admits v = 1
  std::vector<double> w1{0.0}, z1{1.0}, v1{1.0};
  CHECK(l1_normal_cone_member(w1, z1, v1, 1.0));

  // m = 2, z - w = (theta, 0): eta2 in [-1,1] admits (1,1), sign forbids (-1,0)
  std::vector<double> w2{0.0, 0.0}, z2{1.0, 0.0};
  std::vector<double> yes{1.0, 1.0}, no{-1.0, 0.0};
  CHECK(l1_normal_cone_member(w2, z2, yes, 1.0));
  CHECK_FALSE(l1_normal_cone_member(w2, z2, no, 1.0));

  std::vector<double> interior{0.5, 0.0};
  CHECK_THROWS_AS(l1_normal_cone_member(w2, interior, yes, 1.0), DomainError);
}

TEST_CASE("no l1 maximal element for the vectorized quadratic family") {
  Rng rng(RngSpec{41, 6});
  for (int n : {2, 3}) {  // m = 3 and m = 6
    int m = n * (n + 1) / 2;
    for (int t = 0; t < 50; ++t) {
      double theta = 0.3 + rng.uniform();
      std::vector<double> w(std::size_t(m), 0.0);
      for (double& e : w) e = rng.normal();
      std::vector<double> dir(std::size_t(m), 0.0);
      double l1 = 0.0;
      for (double& e : dir) {
        e = rng.normal();
        if (rng.uniform() < 0.3) e = 0.0;
        l1 += std::abs(e);
      }
      if (l1 == 0.0) {
        dir[0] = 1.0;
        l1 = 1.0;
      }
      std::vector<double> z = w;
      for (int i = 0; i < m; ++i) z[std::size_t(i)] += theta * dir[std::size_t(i)] / l1;

      bool rejected = false;
      for (int probe = 0; probe < 200 && !rejected; ++probe) {
        auto x = random_simplex_point(n, rng);
        SymMat xx(n);
        for (int i = 0; i < n; ++i) {
          for (int j = i; j < n; ++j) xx.at(i, j) = x[std::size_t(i)] * x[std::size_t(j)];
        }
        if (!l1_normal_cone_member(w, z, svec(xx), theta)) rejected = true;
      }
      CHECK(rejected);
    }
  }
}

TEST_SUITE_END();
