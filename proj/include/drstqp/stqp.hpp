#pragma once

#include <string>
#include <vector>

#include "drstqp/exec.hpp"
#include "drstqp/rng.hpp"
#include "drstqp/symlin.hpp"

namespace drstqp {

enum class Engine { SupportEnum, Replicator, ProjGrad };

std::string engine_name(Engine e);

/// Solution of min_{x in simplex} x^T Q x together with its certificate
/// metadata. `global` is set only by the exhaustive engine; the iterative
/// engines return local solutions. `shift` records the internal payoff shift
/// used by the replicator engine (zero elsewhere).
struct StqpSolution {
  SimplexVec x = SimplexVec::uniform(1);
  double value = 0.0;
  std::vector<int> support;
  Engine engine = Engine::SupportEnum;
  double kkt_residual = 0.0;
  double runtime_s = 0.0;
  bool global = false;
  bool converged = true;
  double shift = 0.0;
};

/// Support set {i : x_i > tol}.
std::vector<int> support_of(const SimplexVec& x, double support_tol = 1e-8);

/// Norm of the projected gradient ||x - proj(x - 2Qx)||_2, the first-order
/// stationarity residual used across engines.
double kkt_residual(const SymMat& q, const SimplexVec& x);

/// Exact global minimizer by enumerating every nonempty support S: solve the
/// face KKT system (2 Q_S x_S = lambda 1, 1^T x_S = 1), keep the feasible
/// candidates plus all vertices, return the best. Singular faces fall back to
/// a least-squares solve and a feasibility re-check. Ties are broken toward
/// smaller supports, then lexicographically. Cost grows as 2^n; dimensions
/// above 20 are rejected.
StqpSolution solve_support_enum(const SymMat& q, double support_tol = 1e-8,
                                Exec exec = Exec::Par);

/// Replicator dynamics on the shifted payoff c E - Q (entrywise positive, so
/// the iteration is monotone); a local engine for any dimension. Stops when
/// the l1 step drops below tol; non-convergence returns the best iterate with
/// `converged` cleared.
StqpSolution solve_replicator(const SymMat& q, const SimplexVec& x0,
                              int max_iter = 20000, double tol = 1e-14,
                              double support_tol = 1e-8);

/// Best of `starts` replicator runs from Dirichlet(1) points plus the
/// barycenter and all vertices.
StqpSolution solve_replicator_multistart(const SymMat& q, int starts, RngSpec rng,
                                         int max_iter = 20000, double tol = 1e-14,
                                         double support_tol = 1e-8, Exec exec = Exec::Par);

/// Support enumeration when feasible (n <= 20), replicator multistart above.
StqpSolution solve_auto(const SymMat& q, RngSpec rng, double support_tol = 1e-8,
                        Exec exec = Exec::Par);

/// Clique read-out of a maximizer of x^T A x over the simplex for a weighted
/// adjacency matrix A: members are the support, the total weight follows from
/// the optimal value as 1 / (2 (1 - x^T A x)), and weight_sum re-derives
/// sum of the member weights from the diagonal (a_ii = 1 - 1/(2 w_i)) as a
/// cross-check.
struct CliqueResult {
  std::vector<int> members;
  double weight = 0.0;
  double weight_sum = 0.0;
};

CliqueResult extract_clique(const SimplexVec& x, const SymMat& a,
                            double support_tol = 1e-8);

}  // namespace drstqp
