// Serial reference vs OpenMP kernels: results must be bit-identical because
// every reduction uses an exact total order or integer accumulation.
#include "doctest.h"

#include "drstqp/calibrate.hpp"
#include "drstqp/cliquelab.hpp"
#include "drstqp/d3ro.hpp"
#include "drstqp/stqp.hpp"
#include "test_util.hpp"

using namespace drstqp;
using testutil::random_symmat;

TEST_SUITE_BEGIN("parallel");

TEST_CASE("support enumeration") {
  Rng rng(RngSpec{101, 0});
  for (int t = 0; t < 6; ++t) {
    int n = 6 + int(rng.below(9));
    SymMat q = random_symmat(n, rng);
    StqpSolution a = solve_support_enum(q, 1e-8, Exec::Serial);
    StqpSolution b = solve_support_enum(q, 1e-8, Exec::Par);
    CHECK(a.value == b.value);
    CHECK(a.x.coords() == b.x.coords());
    CHECK(a.support == b.support);
  }
}

TEST_CASE("replicator multistart") {
  Rng rng(RngSpec{101, 1});
  SymMat q = random_symmat(12, rng);
  StqpSolution a = solve_replicator_multistart(q, 24, RngSpec{101, 2}, 20000, 1e-14, 1e-8,
                                               Exec::Serial);
  StqpSolution b = solve_replicator_multistart(q, 24, RngSpec{101, 2}, 20000, 1e-14, 1e-8,
                                               Exec::Par);
  CHECK(a.value == b.value);
  CHECK(a.x.coords() == b.x.coords());
}

TEST_CASE("multistart descent with the grid pass") {
  WeightedGraph g = gen_graph(6, 0.4, RngSpec{101, 3});
  auto [adj, qnom] = build_qnom(g);
  D3Options serial;
  serial.exec = Exec::Serial;
  D3Options par;
  StqpSolution a = solve_d3(qnom, RadiusFn::gamma_over_q(0.15), 40, RngSpec{101, 4}, serial);
  StqpSolution b = solve_d3(qnom, RadiusFn::gamma_over_q(0.15), 40, RngSpec{101, 4}, par);
  CHECK(a.value == b.value);
  CHECK(a.x.coords() == b.x.coords());
}

TEST_CASE("coverage trials") {
  RadiusBound bound = RadiusBound::transport(2.0);
  CoverageReport a =
      coverage_mc(EnsembleModel::goe(3), 50, 400, 0.05, bound, RngSpec{101, 5}, Exec::Serial);
  CoverageReport b =
      coverage_mc(EnsembleModel::goe(3), 50, 400, 0.05, bound, RngSpec{101, 5}, Exec::Par);
  CHECK(a.hits == b.hits);
  CHECK(a.frob_hits == b.frob_hits);
}

TEST_CASE("experiment grids") {
  WeightedGraph g = gen_graph(8, 0.35, RngSpec{101, 6});
  ExperimentGrid grid;
  grid.model = ExperimentGrid::Model::DecisionIndependent;
  grid.theta_or_gamma = {0.01, 0.3, 2.0};
  grid.beta = {0.0, 0.1};
  grid.N = 6;
  grid.trials = 3;
  grid.seed = RngSpec{101, 7};
  auto a = run_decision_independent(g, grid, Exec::Serial);
  auto b = run_decision_independent(g, grid, Exec::Par);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].objective == b[i].objective);
    CHECK(a[i].support == b[i].support);
    CHECK(a[i].clique_weight == b[i].clique_weight);
  }

  ExperimentGrid dd;
  dd.model = ExperimentGrid::Model::DecisionDependent;
  dd.theta_or_gamma = {0.02, 0.2};
  dd.beta = {0.01};
  dd.N = 8;
  dd.trials = 2;
  dd.seed = RngSpec{101, 8};
  auto c = run_decision_dependent(g, dd, Exec::Serial);
  auto d = run_decision_dependent(g, dd, Exec::Par);
  REQUIRE(c.size() == d.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    CHECK(c[i].objective == d[i].objective);
    CHECK(c[i].support == d[i].support);
  }
}

TEST_SUITE_END();
