#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "drstqp/d3ro.hpp"
#include "drstqp/exec.hpp"
#include "drstqp/randmat.hpp"
#include "drstqp/symlin.hpp"

namespace drstqp {

/// Simple undirected graph with strictly positive vertex weights (> 1 by the
/// exponential-shift construction).
struct WeightedGraph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;  // i < j, sorted
  std::vector<double> weights;

  [[nodiscard]] bool has_edge(int i, int j) const;
  [[nodiscard]] int degree_sum() const { return int(edges.size()); }
};

/// Erdos-Renyi G(n, edge_prob) with Exp(rate)-shifted weights.
WeightedGraph gen_graph(int n, double edge_prob, RngSpec rng, double weight_rate = 1.5);

/// Weighted adjacency matrix A (diagonal 1 - 1/(2 w_i), ones on edges,
/// 1 - 1/(2 w_i) - 1/(2 w_j) on non-edges) and the nominal data matrix
/// Q_nom = E - A, which is strictly copositive by construction.
std::pair<SymMat, SymMat> build_qnom(const WeightedGraph& g);

/// Parameter grid for the two experiment families. Decision-independent runs
/// sweep the constant radius theta under GOE noise; decision-dependent runs
/// sweep gamma (radius gamma / x^T qbar_beta x) under Wishart noise.
struct ExperimentGrid {
  enum class Model { DecisionIndependent, DecisionDependent };

  Model model = Model::DecisionIndependent;
  std::vector<double> theta_or_gamma;
  std::vector<double> beta;
  int N = 20;
  int trials = 1;
  RngSpec seed;
};

/// One grid-cell solve. `support` backs the frequency maps and is not part of
/// the CSV row; `runtime_s` times the solve call only.
struct RunRecord {
  double theta_or_gamma = 0.0;
  double beta = 0.0;
  int trial = 0;
  double objective = 0.0;
  double clique_weight = 0.0;
  double density = 0.0;
  int support_size = 0;
  double runtime_s = 0.0;
  std::string regime;
  std::vector<int> support;
};

/// Equality on the CSV-visible fields (everything except `support`).
bool same_record(const RunRecord& a, const RunRecord& b);

/// Density of the support-induced subgraph, |E*| / C(|V*|, 2); by convention
/// 1 when the support has at most one vertex.
double solution_density(const WeightedGraph& g, const std::vector<int>& support);

/// Per (theta, beta, trial): draw N GOE perturbations, form
/// qbar_beta = q_nom + beta * mean, and solve min x^T (qbar_beta + theta I) x
/// globally (support enumeration up to n = 15, replicator multistart above).
std::vector<RunRecord> run_decision_independent(const WeightedGraph& g,
                                                const ExperimentGrid& grid,
                                                Exec exec = Exec::Par);

/// Per (gamma, beta, trial): draw N Wishart(I, n) perturbations, form
/// qbar_beta, classify the spectral regime, and minimize the fractional
/// objective with the gamma / x^T qbar_beta x radius. Within one (beta,
/// trial) slice the candidate optima of all gamma cells are pooled and each
/// cell keeps the pool's best value, so reported values are monotone in gamma
/// exactly as the true optima are.
std::vector<RunRecord> run_decision_dependent(const WeightedGraph& g,
                                              const ExperimentGrid& grid,
                                              Exec exec = Exec::Par);

/// Selection frequencies across the trials of one grid cell.
struct FrequencyMap {
  double theta_or_gamma = 0.0;
  double beta = 0.0;
  int trials = 0;
  std::vector<double> node_freq;
  std::map<std::pair<int, int>, double> edge_freq;
};

std::vector<FrequencyMap> solution_frequency(const WeightedGraph& g,
                                             const std::vector<RunRecord>& records);

/// results.csv (header: theta_or_gamma,beta,trial,objective,clique_weight,
/// density,support_size,runtime_s,regime), summary.json, and one SVG chart
/// per metric with min/max bands over trials.
void emit_outputs(const std::vector<RunRecord>& records, const std::filesystem::path& dir);

void write_results_csv(const std::vector<RunRecord>& records, std::ostream& out);
std::vector<RunRecord> parse_results_csv(std::istream& in);

/// Line chart with a min/max band; used by emit_outputs and the demo driver.
std::string svg_line_chart(const std::string& title, const std::string& xlabel,
                           const std::string& ylabel, const std::vector<double>& x,
                           const std::vector<double>& mean, const std::vector<double>& lo,
                           const std::vector<double>& hi, bool log_x);

/// Node-circle / edge-opacity rendering of a frequency map.
std::string svg_frequency_map(const WeightedGraph& g, const FrequencyMap& f);

}  // namespace drstqp
