#include "drstqp/cliquelab.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <numbers>
#include <sstream>

#include "drstqp/errors.hpp"
#include "drstqp/stqp.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace drstqp {

bool WeightedGraph::has_edge(int i, int j) const {
  if (i == j) return false;
  if (i > j) std::swap(i, j);
  return std::binary_search(edges.begin(), edges.end(), std::make_pair(i, j));
}

WeightedGraph gen_graph(int n, double edge_prob, RngSpec spec, double weight_rate) {
  if (n < 1) throw DomainError("gen_graph: n must be >= 1");
  if (!(edge_prob > 0.0 && edge_prob < 1.0)) {
    throw DomainError("gen_graph: edge_prob must lie in (0,1)");
  }
  WeightedGraph g;
  g.n = n;
  Rng rng(spec);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (rng.uniform() < edge_prob) g.edges.emplace_back(i, j);
    }
  }
  g.weights = sample_exp_weights(n, weight_rate, rng);
  return g;
}

std::pair<SymMat, SymMat> build_qnom(const WeightedGraph& g) {
  for (double w : g.weights) {
    if (!(w > 0.0)) throw DomainError("build_qnom: weights must be positive");
  }
  const int n = g.n;
  SymMat a(n);
  for (int i = 0; i < n; ++i) a.at(i, i) = 1.0 - 1.0 / (2.0 * g.weights[std::size_t(i)]);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (g.has_edge(i, j)) {
        a.at(i, j) = 1.0;
      } else {
        a.at(i, j) = 1.0 - 1.0 / (2.0 * g.weights[std::size_t(i)]) -
                     1.0 / (2.0 * g.weights[std::size_t(j)]);
      }
    }
  }
  SymMat qnom = SymMat::all_ones(n);
  qnom -= a;
  return {std::move(a), std::move(qnom)};
}

bool same_record(const RunRecord& a, const RunRecord& b) {
  return a.theta_or_gamma == b.theta_or_gamma && a.beta == b.beta && a.trial == b.trial &&
         a.objective == b.objective && a.clique_weight == b.clique_weight &&
         a.density == b.density && a.support_size == b.support_size &&
         a.runtime_s == b.runtime_s && a.regime == b.regime;
}

double solution_density(const WeightedGraph& g, const std::vector<int>& support) {
  const int k = int(support.size());
  if (k <= 1) return 1.0;
  int inner = 0;
  for (int a = 0; a < k; ++a) {
    for (int b = a + 1; b < k; ++b) {
      inner += g.has_edge(support[std::size_t(a)], support[std::size_t(b)]);
    }
  }
  return double(inner) / (double(k) * double(k - 1) / 2.0);
}

namespace {

using Clock = std::chrono::steady_clock;

struct Cell {
  int gi = 0;  // theta/gamma index
  int bi = 0;
  int trial = 0;
};

std::vector<Cell> make_cells(const ExperimentGrid& grid) {
  std::vector<Cell> cells;
  for (int gi = 0; gi < int(grid.theta_or_gamma.size()); ++gi) {
    for (int bi = 0; bi < int(grid.beta.size()); ++bi) {
      for (int t = 0; t < grid.trials; ++t) cells.push_back({gi, bi, t});
    }
  }
  return cells;
}

void sort_records(std::vector<RunRecord>& records) {
  std::sort(records.begin(), records.end(), [](const RunRecord& a, const RunRecord& b) {
    if (a.theta_or_gamma != b.theta_or_gamma) return a.theta_or_gamma < b.theta_or_gamma;
    if (a.beta != b.beta) return a.beta < b.beta;
    return a.trial < b.trial;
  });
}

}  // namespace

std::vector<RunRecord> run_decision_independent(const WeightedGraph& g,
                                                const ExperimentGrid& grid, Exec exec) {
  if (grid.model != ExperimentGrid::Model::DecisionIndependent) {
    throw DomainError("run_decision_independent: wrong grid model");
  }
  if (grid.theta_or_gamma.empty() || grid.beta.empty() || grid.N < 1) {
    throw DomainError("run_decision_independent: empty grid");
  }
  auto [a, qnom] = build_qnom(g);
  const int n = g.n;
  std::vector<Cell> cells = make_cells(grid);
  std::vector<RunRecord> records(cells.size());

  bool par = exec == Exec::Par;
  std::exception_ptr failure;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (par)
#endif
  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    try {
    const Cell& cell = cells[ci];
    const double theta = grid.theta_or_gamma[std::size_t(cell.gi)];
    const double beta = grid.beta[std::size_t(cell.bi)];
    // noise is shared across the theta sweep of one (beta, trial) slice
    RngSpec noise = grid.seed.sub(std::uint64_t(cell.bi) * 1000003u + std::uint64_t(cell.trial));
    Rng rng(noise);
    SymMat qbar = qnom;
    if (beta > 0.0) {
      SymMat acc(n);
      for (int i = 0; i < grid.N; ++i) acc += sample_goe(n, rng);
      acc *= beta / double(grid.N);
      qbar += acc;
    }
    SymMat q = qbar;
    if (theta > 0.0) q.add_scaled_identity(theta);

    auto t0 = Clock::now();
    StqpSolution sol =
        n <= 15 ? solve_support_enum(q, 1e-8, Exec::Serial)
                : solve_replicator_multistart(q, 50, noise.sub(0xA11), 20000, 1e-14, 1e-8,
                                              Exec::Serial);
    double solve_s = std::chrono::duration<double>(Clock::now() - t0).count();

    RunRecord r;
    r.theta_or_gamma = theta;
    r.beta = beta;
    r.trial = cell.trial;
    r.objective = sol.value;
    r.support = sol.support;
    r.support_size = int(sol.support.size());
    r.density = solution_density(g, sol.support);
    r.clique_weight = extract_clique(sol.x, a).weight;
    r.runtime_s = solve_s;
    EigDecomp d = eig_sym(q, 1e-12 * (1.0 + q.fro_norm()));
    r.regime = d.lambda_min() < 0.0 ? "indefinite" : "convex";
    records[ci] = std::move(r);
    } catch (...) {
      // solver errors propagate; remember the first one past the loop
#ifdef _OPENMP
#pragma omp critical
#endif
      if (!failure) failure = std::current_exception();
    }
  }
  (void)par;
  if (failure) std::rethrow_exception(failure);
  sort_records(records);
  return records;
}

std::vector<RunRecord> run_decision_dependent(const WeightedGraph& g,
                                              const ExperimentGrid& grid, Exec exec) {
  if (grid.model != ExperimentGrid::Model::DecisionDependent) {
    throw DomainError("run_decision_dependent: wrong grid model");
  }
  if (grid.theta_or_gamma.empty() || grid.beta.empty() || grid.N < 1) {
    throw DomainError("run_decision_dependent: empty grid");
  }
  auto [a, qnom] = build_qnom(g);
  const int n = g.n;
  const int ng = int(grid.theta_or_gamma.size());

  // one slice per (beta, trial); gamma cells inside a slice share the noise
  std::vector<Cell> slices;
  for (int bi = 0; bi < int(grid.beta.size()); ++bi) {
    for (int t = 0; t < grid.trials; ++t) slices.push_back({0, bi, t});
  }
  std::vector<std::vector<RunRecord>> per_slice(slices.size());

  bool par = exec == Exec::Par;
  std::exception_ptr failure;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (par)
#endif
  for (std::size_t si = 0; si < slices.size(); ++si) {
    try {
    const Cell& slice = slices[si];
    const double beta = grid.beta[std::size_t(slice.bi)];
    RngSpec noise = grid.seed.sub(std::uint64_t(slice.bi) * 1000003u + std::uint64_t(slice.trial));
    Rng rng(noise);
    SymMat r_mean(n);
    for (int i = 0; i < grid.N; ++i) r_mean += sample_wishart(n, n, rng);
    r_mean *= 1.0 / double(grid.N);
    SymMat qbar = qnom;
    SymMat br = r_mean;
    br *= beta;
    qbar += br;

    SpectralRegime regime = spectral_regime(qnom, r_mean, beta);
    std::string regime_label = regime.indefinite() ? "indefinite" : "convex";

    std::vector<RunRecord> recs{std::size_t(ng)};
    std::vector<StqpSolution> sols{std::size_t(ng)};
    for (int gi = 0; gi < ng; ++gi) {
      const double gamma = grid.theta_or_gamma[std::size_t(gi)];
      auto t0 = Clock::now();
      StqpSolution sol =
          gamma > 0.0
              ? solve_d3(qbar, RadiusFn::gamma_over_q(gamma), 48, noise.sub(0xD3 + std::uint64_t(gi)),
                         D3Options{.exec = Exec::Serial})
              : (n <= 15 ? solve_support_enum(qbar, 1e-8, Exec::Serial)
                         : solve_replicator_multistart(qbar, 50, noise.sub(0xD3), 20000, 1e-14,
                                                       1e-8, Exec::Serial));
      double solve_s = std::chrono::duration<double>(Clock::now() - t0).count();
      sols[std::size_t(gi)] = std::move(sol);
      recs[std::size_t(gi)].runtime_s = solve_s;
    }

    // pool the candidate optima across the gamma sweep: each cell keeps the
    // pool's best value at its own gamma, so values inherit the pointwise
    // monotonicity of the objective in gamma
    for (int gi = 0; gi < ng; ++gi) {
      const double gamma = grid.theta_or_gamma[std::size_t(gi)];
      int best = gi;
      double best_val = gamma > 0.0 ? d3_objective(qbar, gamma, sols[std::size_t(gi)].x.coords())
                                    : sols[std::size_t(gi)].value;
      for (int other = 0; other < ng; ++other) {
        if (other == gi) continue;
        double v = gamma > 0.0 ? d3_objective(qbar, gamma, sols[std::size_t(other)].x.coords())
                               : qbar.quad(sols[std::size_t(other)].x.coords());
        if (v < best_val) {
          best_val = v;
          best = other;
        }
      }
      const StqpSolution& sol = sols[std::size_t(best)];
      RunRecord& r = recs[std::size_t(gi)];
      r.theta_or_gamma = gamma;
      r.beta = beta;
      r.trial = slice.trial;
      r.objective = best_val;
      r.support = sol.support;
      r.support_size = int(sol.support.size());
      r.density = solution_density(g, sol.support);
      r.clique_weight = extract_clique(sol.x, a).weight;
      r.regime = regime_label;
    }
    per_slice[si] = std::move(recs);
    } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
      if (!failure) failure = std::current_exception();
    }
  }
  (void)par;
  if (failure) std::rethrow_exception(failure);

  std::vector<RunRecord> records;
  for (auto& recs : per_slice) {
    for (auto& r : recs) records.push_back(std::move(r));
  }
  sort_records(records);
  return records;
}

std::vector<FrequencyMap> solution_frequency(const WeightedGraph& g,
                                             const std::vector<RunRecord>& records) {
  std::map<std::pair<double, double>, FrequencyMap> cells;
  for (const RunRecord& r : records) {
    FrequencyMap& f = cells[{r.theta_or_gamma, r.beta}];
    f.theta_or_gamma = r.theta_or_gamma;
    f.beta = r.beta;
    if (f.node_freq.empty()) f.node_freq.assign(std::size_t(g.n), 0.0);
    f.trials += 1;
    for (std::size_t a = 0; a < r.support.size(); ++a) {
      f.node_freq[std::size_t(r.support[a])] += 1.0;
      for (std::size_t b = a + 1; b < r.support.size(); ++b) {
        int i = r.support[a], j = r.support[b];
        if (g.has_edge(i, j)) f.edge_freq[{std::min(i, j), std::max(i, j)}] += 1.0;
      }
    }
  }
  std::vector<FrequencyMap> out;
  for (auto& [key, f] : cells) {
    for (double& v : f.node_freq) v /= double(f.trials);
    for (auto& [e, v] : f.edge_freq) v /= double(f.trials);
    out.push_back(std::move(f));
  }
  return out;
}

void write_results_csv(const std::vector<RunRecord>& records, std::ostream& out) {
  out << "theta_or_gamma,beta,trial,objective,clique_weight,density,support_size,"
         "runtime_s,regime\n";
  out.precision(17);
  for (const RunRecord& r : records) {
    out << r.theta_or_gamma << ',' << r.beta << ',' << r.trial << ',' << r.objective << ','
        << r.clique_weight << ',' << r.density << ',' << r.support_size << ','
        << r.runtime_s << ',' << r.regime << '\n';
  }
}

std::vector<RunRecord> parse_results_csv(std::istream& in) {
  std::vector<RunRecord> records;
  std::string line;
  if (!std::getline(in, line)) return records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    RunRecord r;
    auto next = [&] {
      if (!std::getline(ss, field, ',')) throw DomainError("parse_results_csv: short row");
      return field;
    };
    r.theta_or_gamma = std::stod(next());
    r.beta = std::stod(next());
    r.trial = std::stoi(next());
    r.objective = std::stod(next());
    r.clique_weight = std::stod(next());
    r.density = std::stod(next());
    r.support_size = std::stoi(next());
    r.runtime_s = std::stod(next());
    r.regime = next();
    records.push_back(std::move(r));
  }
  return records;
}

namespace {

std::string fmt_num(double v) {
  std::ostringstream ss;
  ss.precision(6);
  ss << v;
  return ss.str();
}

}  // namespace

std::string svg_line_chart(const std::string& title, const std::string& xlabel,
                           const std::string& ylabel, const std::vector<double>& x,
                           const std::vector<double>& mean, const std::vector<double>& lo,
                           const std::vector<double>& hi, bool log_x) {
  const double w = 640, h = 420, ml = 70, mr = 20, mt = 40, mb = 50;
  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
      << "\" viewBox=\"0 0 " << w << ' ' << h << "\">\n";
  svg << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";
  svg << "<text x=\"" << w / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
      << title << "</text>\n";

  if (!x.empty()) {
    auto tx = [&](double v) { return log_x ? std::log10(std::max(v, 1e-300)) : v; };
    double xmin = tx(x.front()), xmax = tx(x.front());
    double ymin = lo.empty() ? mean.front() : lo.front();
    double ymax = hi.empty() ? mean.front() : hi.front();
    for (std::size_t i = 0; i < x.size(); ++i) {
      xmin = std::min(xmin, tx(x[i]));
      xmax = std::max(xmax, tx(x[i]));
      double l = lo.empty() ? mean[i] : lo[i];
      double u = hi.empty() ? mean[i] : hi[i];
      ymin = std::min({ymin, mean[i], l});
      ymax = std::max({ymax, mean[i], u});
    }
    if (xmax == xmin) xmax = xmin + 1.0;
    if (ymax == ymin) ymax = ymin + 1.0;
    double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;
    auto px = [&](double v) { return ml + (tx(v) - xmin) / (xmax - xmin) * (w - ml - mr); };
    auto py = [&](double v) { return h - mb - (v - ymin) / (ymax - ymin) * (h - mt - mb); };

    svg << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr << "\" y2=\""
        << h - mb << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
        << h - mb << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << w / 2 << "\" y=\"" << h - 12
        << "\" text-anchor=\"middle\" font-size=\"12\">" << xlabel
        << (log_x ? " (log scale)" : "") << "</text>\n";
    svg << "<text x=\"16\" y=\"" << h / 2
        << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 " << h / 2
        << ")\">" << ylabel << "</text>\n";
    svg << "<text x=\"" << ml - 6 << "\" y=\"" << py(ymin + pad) + 4
        << "\" text-anchor=\"end\" font-size=\"10\">" << fmt_num(ymin + pad) << "</text>\n";
    svg << "<text x=\"" << ml - 6 << "\" y=\"" << py(ymax - pad) + 4
        << "\" text-anchor=\"end\" font-size=\"10\">" << fmt_num(ymax - pad) << "</text>\n";
    svg << "<text x=\"" << px(x.front()) << "\" y=\"" << h - mb + 16
        << "\" text-anchor=\"middle\" font-size=\"10\">" << fmt_num(x.front()) << "</text>\n";
    svg << "<text x=\"" << px(x.back()) << "\" y=\"" << h - mb + 16
        << "\" text-anchor=\"middle\" font-size=\"10\">" << fmt_num(x.back()) << "</text>\n";

    if (!lo.empty() && !hi.empty()) {
      svg << "<polygon fill=\"#9ecae1\" fill-opacity=\"0.5\" stroke=\"none\" points=\"";
      for (std::size_t i = 0; i < x.size(); ++i) svg << px(x[i]) << ',' << py(lo[i]) << ' ';
      for (std::size_t i = x.size(); i-- > 0;) svg << px(x[i]) << ',' << py(hi[i]) << ' ';
      svg << "\"/>\n";
    }
    svg << "<polyline fill=\"none\" stroke=\"#08519c\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < x.size(); ++i) svg << px(x[i]) << ',' << py(mean[i]) << ' ';
    svg << "\"/>\n";
    for (std::size_t i = 0; i < x.size(); ++i) {
      svg << "<circle cx=\"" << px(x[i]) << "\" cy=\"" << py(mean[i])
          << "\" r=\"3\" fill=\"#08519c\"/>\n";
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string svg_frequency_map(const WeightedGraph& g, const FrequencyMap& f) {
  const double w = 480, h = 480, cx = w / 2, cy = h / 2, rad = 180;
  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
      << "\" viewBox=\"0 0 " << w << ' ' << h << "\">\n";
  svg << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";
  svg << "<text x=\"" << cx << "\" y=\"22\" text-anchor=\"middle\" font-size=\"13\">"
      << "selection frequency, param=" << fmt_num(f.theta_or_gamma)
      << " beta=" << fmt_num(f.beta) << "</text>\n";
  auto nx = [&](int i) { return cx + rad * std::cos(2.0 * std::numbers::pi * i / g.n - 1.5707963); };
  auto ny = [&](int i) { return cy + rad * std::sin(2.0 * std::numbers::pi * i / g.n - 1.5707963); };
  for (const auto& [i, j] : g.edges) {
    double freq = 0.0;
    auto it = f.edge_freq.find({i, j});
    if (it != f.edge_freq.end()) freq = it->second;
    svg << "<line x1=\"" << nx(i) << "\" y1=\"" << ny(i) << "\" x2=\"" << nx(j) << "\" y2=\""
        << ny(j) << "\" stroke=\"#d62728\" stroke-opacity=\"" << std::max(freq, 0.06)
        << "\" stroke-width=\"" << 1.0 + 4.0 * freq << "\"/>\n";
  }
  for (int i = 0; i < g.n; ++i) {
    double freq = f.node_freq.empty() ? 0.0 : f.node_freq[std::size_t(i)];
    svg << "<circle cx=\"" << nx(i) << "\" cy=\"" << ny(i) << "\" r=\"" << 6.0 + 6.0 * freq
        << "\" fill=\"#1f77b4\" fill-opacity=\"" << 0.25 + 0.75 * freq << "\"/>\n";
    svg << "<text x=\"" << nx(i) << "\" y=\"" << ny(i) + 4
        << "\" text-anchor=\"middle\" font-size=\"10\" fill=\"white\">" << i << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

namespace {

struct Series {
  std::vector<double> x, mean, lo, hi;
};

Series aggregate(const std::vector<RunRecord>& records, double RunRecord::* field) {
  std::map<double, std::vector<double>> buckets;
  for (const RunRecord& r : records) buckets[r.theta_or_gamma].push_back(r.*field);
  Series s;
  for (auto& [x, vals] : buckets) {
    double mn = vals[0], mx = vals[0], acc = 0.0;
    for (double v : vals) {
      mn = std::min(mn, v);
      mx = std::max(mx, v);
      acc += v;
    }
    s.x.push_back(x);
    s.mean.push_back(acc / double(vals.size()));
    s.lo.push_back(mn);
    s.hi.push_back(mx);
  }
  return s;
}

bool looks_log_spaced(const std::vector<double>& x) {
  if (x.size() < 3) return false;
  for (double v : x) {
    if (!(v > 0.0)) return false;
  }
  return x.back() / x.front() > 50.0;
}

}  // namespace

void emit_outputs(const std::vector<RunRecord>& records, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  {
    std::ofstream csv(dir / "results.csv");
    if (!csv) throw std::runtime_error("emit_outputs: cannot write results.csv");
    write_results_csv(records, csv);
  }
  {
    std::ofstream js(dir / "summary.json");
    if (!js) throw std::runtime_error("emit_outputs: cannot write summary.json");
    js.precision(17);
    js << "{\n  \"records\": " << records.size();
    if (!records.empty()) {
      double vmin = records[0].objective, vmax = records[0].objective;
      for (const auto& r : records) {
        vmin = std::min(vmin, r.objective);
        vmax = std::max(vmax, r.objective);
      }
      js << ",\n  \"objective_min\": " << vmin << ",\n  \"objective_max\": " << vmax;
    }
    js << "\n}\n";
  }
  if (records.empty()) return;
  struct Metric {
    const char* file;
    const char* label;
    double RunRecord::* field;
  };
  const Metric metrics[] = {
      {"objective.svg", "objective value", &RunRecord::objective},
      {"clique_weight.svg", "clique weight", &RunRecord::clique_weight},
      {"density.svg", "solution density", &RunRecord::density},
      {"runtime.svg", "solve runtime [s]", &RunRecord::runtime_s},
  };
  for (const Metric& m : metrics) {
    Series s = aggregate(records, m.field);
    std::ofstream out(dir / m.file);
    out << svg_line_chart(m.label, "radius parameter", m.label, s.x, s.mean, s.lo, s.hi,
                          looks_log_spaced(s.x));
  }
}

}  // namespace drstqp
