#include "drstqp/json_io.hpp"

#include <algorithm>
#include <fstream>

#include "drstqp/errors.hpp"

namespace drstqp {

using nlohmann::json;

json to_json(const SymMat& m) {
  return json{{"n", m.dim()}, {"upper", m.packed()}};
}

SymMat symmat_from_json(const json& j) {
  if (!j.contains("n") || !j.contains("upper")) {
    throw DomainError("symmat_from_json: need fields n and upper");
  }
  return SymMat(j.at("n").get<int>(), j.at("upper").get<std::vector<double>>());
}

json to_json(const EnsembleModel& m) {
  json j;
  j["kind"] = m.base == EnsembleModel::Base::Goe ? "goe" : "wishart";
  j["n"] = m.n;
  if (m.base == EnsembleModel::Base::Wishart) j["k"] = m.k;
  if (m.shift.has_value()) {
    j["shift"] = to_json(*m.shift);
    j["scale"] = m.scale;
  }
  return j;
}

EnsembleModel model_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  EnsembleModel m;
  if (kind == "goe") {
    m = EnsembleModel::goe(j.at("n").get<int>());
  } else if (kind == "wishart") {
    m = EnsembleModel::wishart(j.at("n").get<int>(), j.at("k").get<int>());
  } else {
    throw DomainError("model_from_json: unknown kind " + kind);
  }
  if (j.contains("shift")) {
    m = EnsembleModel::shifted(symmat_from_json(j.at("shift")),
                               j.value("scale", 1.0), m);
  }
  return m;
}

json to_json(const EmpiricalEnsemble& e) {
  json samples = json::array();
  for (const SymMat& s : e.samples) samples.push_back(to_json(s));
  return json{{"model", to_json(e.model)},
              {"seed", {{"seed", e.rng.seed}, {"stream", e.rng.stream}}},
              {"samples", std::move(samples)}};
}

EmpiricalEnsemble ensemble_from_json(const json& j) {
  EmpiricalEnsemble e;
  e.model = model_from_json(j.at("model"));
  if (j.contains("seed")) {
    e.rng.seed = j.at("seed").value("seed", std::uint64_t(0));
    e.rng.stream = j.at("seed").value("stream", std::uint64_t(0));
  }
  for (const json& s : j.at("samples")) e.samples.push_back(symmat_from_json(s));
  if (e.samples.empty()) throw DomainError("ensemble_from_json: no samples");
  for (const SymMat& s : e.samples) {
    if (s.dim() != e.model.n) throw DomainError("ensemble_from_json: dimension mismatch");
  }
  return e;
}

json to_json(const DiscreteDist& d) {
  json j = json::array();
  for (const auto& atom : d.atoms) j.push_back(atom);
  return j;
}

DiscreteDist dist_from_json(const json& j) {
  DiscreteDist d;
  for (const json& a : j) d.atoms.push_back(a.get<std::vector<double>>());
  return d;
}

json to_json(const StqpSolution& s) {
  return json{{"x", s.x.coords()},
              {"value", s.value},
              {"support", s.support},
              {"engine", engine_name(s.engine)},
              {"kkt_residual", s.kkt_residual},
              {"runtime_s", s.runtime_s},
              {"certificate", s.global ? "global" : "local"},
              {"converged", s.converged},
              {"shift", s.shift}};
}

json to_json(const WeightedGraph& g) {
  json edges = json::array();
  for (const auto& [i, j] : g.edges) edges.push_back(json::array({i, j}));
  return json{{"n", g.n}, {"edges", std::move(edges)}, {"weights", g.weights}};
}

WeightedGraph graph_from_json(const json& j) {
  WeightedGraph g;
  g.n = j.at("n").get<int>();
  for (const json& e : j.at("edges")) {
    int a = e.at(0).get<int>(), b = e.at(1).get<int>();
    if (a == b || a < 0 || b < 0 || a >= g.n || b >= g.n) {
      throw DomainError("graph_from_json: bad edge");
    }
    g.edges.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(g.edges.begin(), g.edges.end());
  g.weights = j.value("weights", std::vector<double>(std::size_t(g.n), 1.0));
  if (int(g.weights.size()) != g.n) throw DomainError("graph_from_json: bad weights");
  return g;
}

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  json j;
  in >> j;
  return j;
}

void save_json(const json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

SymMat load_symmat(const std::filesystem::path& path) {
  return symmat_from_json(load_json(path));
}

EmpiricalEnsemble load_ensemble(const std::filesystem::path& path) {
  return ensemble_from_json(load_json(path));
}

}  // namespace drstqp
