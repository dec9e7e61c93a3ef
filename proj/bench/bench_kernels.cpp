// Timing comparison of the serial reference kernels against their OpenMP
// counterparts. Results are identical by construction; this only reports
// wall-clock speedups.
#include <chrono>
#include <cstdio>

#include "drstqp/calibrate.hpp"
#include "drstqp/cliquelab.hpp"
#include "drstqp/d3ro.hpp"
#include "drstqp/exec.hpp"
#include "drstqp/randmat.hpp"
#include "drstqp/stqp.hpp"

using namespace drstqp;

namespace {

template <typename F>
double time_s(F&& f) {
  auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(const char* name, double serial, double par) {
  std::printf("%-28s serial %8.3f s   parallel %8.3f s   speedup %5.2fx\n", name, serial,
              par, serial / par);
}

}  // namespace

int main() {
  std::printf("worker threads: %d\n\n", worker_threads());

  {
    Rng rng(RngSpec{7, 1});
    SymMat q(18);
    for (int i = 0; i < 18; ++i) {
      for (int j = i; j < 18; ++j) q.at(i, j) = rng.normal();
    }
    double v1 = 0.0, v2 = 0.0;
    double ts = time_s([&] { v1 = solve_support_enum(q, 1e-8, Exec::Serial).value; });
    double tp = time_s([&] { v2 = solve_support_enum(q, 1e-8, Exec::Par).value; });
    report("support enumeration n=18", ts, tp);
    if (v1 != v2) std::printf("  !! value mismatch %.17g vs %.17g\n", v1, v2);
  }

  {
    WeightedGraph g = gen_graph(24, 0.3, RngSpec{7, 2});
    auto [a, qnom] = build_qnom(g);
    SymMat r = sample_wishart(24, 24, RngSpec{7, 3});
    r *= 0.02 / 24.0;
    SymMat qbar = qnom;
    qbar += r;
    D3Options serial_opts;
    serial_opts.exec = Exec::Serial;
    D3Options par_opts;
    double v1 = 0.0, v2 = 0.0;
    double ts = time_s(
        [&] { v1 = solve_d3(qbar, RadiusFn::gamma_over_q(0.05), 256, RngSpec{7, 4}, serial_opts).value; });
    double tp = time_s(
        [&] { v2 = solve_d3(qbar, RadiusFn::gamma_over_q(0.05), 256, RngSpec{7, 4}, par_opts).value; });
    report("multistart descent n=24", ts, tp);
    if (v1 != v2) std::printf("  !! value mismatch %.17g vs %.17g\n", v1, v2);
  }

  {
    RadiusBound b = RadiusBound::transport(2.0);
    EnsembleModel model = EnsembleModel::goe(4);
    CoverageReport r1, r2;
    double ts = time_s(
        [&] { r1 = coverage_mc(model, 200, 4000, 0.05, b, RngSpec{7, 5}, Exec::Serial); });
    double tp = time_s(
        [&] { r2 = coverage_mc(model, 200, 4000, 0.05, b, RngSpec{7, 5}, Exec::Par); });
    report("coverage trials 4000", ts, tp);
    if (r1.hits != r2.hits) std::printf("  !! hit mismatch %d vs %d\n", r1.hits, r2.hits);
  }

  {
    WeightedGraph g = gen_graph(12, 0.3, RngSpec{7, 6});
    ExperimentGrid grid;
    grid.model = ExperimentGrid::Model::DecisionIndependent;
    grid.theta_or_gamma = {0.01, 0.1, 0.5, 1.0, 2.0, 5.0};
    grid.beta = {0.001, 0.1};
    grid.N = 20;
    grid.trials = 6;
    grid.seed = RngSpec{7, 7};
    std::vector<RunRecord> r1, r2;
    double ts = time_s([&] { r1 = run_decision_independent(g, grid, Exec::Serial); });
    double tp = time_s([&] { r2 = run_decision_independent(g, grid, Exec::Par); });
    report("experiment grid 72 cells", ts, tp);
    bool same = r1.size() == r2.size();
    for (std::size_t i = 0; same && i < r1.size(); ++i) {
      same = r1[i].objective == r2[i].objective && r1[i].support == r2[i].support;
    }
    if (!same) std::printf("  !! record mismatch\n");
  }

  return 0;
}
