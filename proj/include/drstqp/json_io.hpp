#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "drstqp/cliquelab.hpp"
#include "drstqp/randmat.hpp"
#include "drstqp/stqp.hpp"
#include "drstqp/symlin.hpp"
#include "drstqp/transport.hpp"

namespace drstqp {

// Matrices serialize as {"n": int, "upper": [raw diagonal-first upper
// triangle]}, no sqrt(2) scaling.
nlohmann::json to_json(const SymMat& m);
SymMat symmat_from_json(const nlohmann::json& j);

nlohmann::json to_json(const EnsembleModel& m);
EnsembleModel model_from_json(const nlohmann::json& j);

// {"model": ..., "seed": ..., "samples": [SymMat...]}
nlohmann::json to_json(const EmpiricalEnsemble& e);
EmpiricalEnsemble ensemble_from_json(const nlohmann::json& j);

// list of atom vectors
nlohmann::json to_json(const DiscreteDist& d);
DiscreteDist dist_from_json(const nlohmann::json& j);

nlohmann::json to_json(const StqpSolution& s);

nlohmann::json to_json(const WeightedGraph& g);
WeightedGraph graph_from_json(const nlohmann::json& j);

SymMat load_symmat(const std::filesystem::path& path);
EmpiricalEnsemble load_ensemble(const std::filesystem::path& path);
nlohmann::json load_json(const std::filesystem::path& path);
void save_json(const nlohmann::json& j, const std::filesystem::path& path);

}  // namespace drstqp
