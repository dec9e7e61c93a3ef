#include "drstqp/dro.hpp"

#include <cmath>
#include <numbers>

#include "drstqp/errors.hpp"
#include "drstqp/specfun.hpp"

namespace drstqp {

DroModel DroModel::make(EmpiricalEnsemble ens, AmbiguitySpec spec) {
  DroModel m;
  m.qbar = sample_mean(ens);
  m.ensemble = std::move(ens);
  m.spec = spec;
  return m;
}

UnifiedRadius radius_robust(double theta) {
  if (!(theta > 0.0)) throw DomainError("radius_robust: theta must be positive");
  return {UnifiedRadius::Source::Robust, theta};
}

UnifiedRadius radius_direct(double theta) {
  if (!(theta > 0.0)) throw DomainError("radius_direct: theta must be positive");
  return {UnifiedRadius::Source::Direct, theta};
}

UnifiedRadius radius_chance_goe(double beta, double alpha) {
  if (!(beta > 0.0)) throw DomainError("radius_chance_goe: beta must be positive");
  if (!(alpha > 0.5 && alpha < 1.0)) {
    throw DomainError("radius_chance_goe: alpha must lie in (0.5, 1)");
  }
  return {UnifiedRadius::Source::ChanceGoe, std::numbers::sqrt2 * beta * inv_norm_cdf(alpha)};
}

UnifiedRadius radius_chance_wishart(double beta, int k, double alpha) {
  if (!(beta > 0.0)) throw DomainError("radius_chance_wishart: beta must be positive");
  if (k < 1) throw DomainError("radius_chance_wishart: k must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError("radius_chance_wishart: alpha must lie in (0, 1)");
  }
  return {UnifiedRadius::Source::ChanceWishart,
          2.0 * beta * inv_gamma_p(0.5 * double(k), alpha)};
}

SymMat reformulate_frobenius(const SymMat& qbar, double theta) {
  if (!(theta > 0.0)) throw DomainError("reformulate_frobenius: theta must be positive");
  SymMat q = qbar;
  q.add_scaled_identity(theta);
  return q;
}

SymMat reformulate_frobenius(const DroModel& model) {
  if (model.spec.norm.tag != NormKind::Tag::Euclid) {
    throw DomainError("reformulate_frobenius: model norm must be Frobenius/Euclid");
  }
  return reformulate_frobenius(model.qbar, model.spec.radius);
}

MaxnormReform reformulate_maxnorm(const SymMat& qbar, double theta) {
  if (!(theta > 0.0)) throw DomainError("reformulate_maxnorm: theta must be positive");
  const double s = std::numbers::sqrt2;
  MaxnormReform r;
  r.constant = theta / s;
  r.matrix = qbar;
  r.matrix.add_scaled_identity(theta * (s - 1.0) / s);
  r.shift = SymMat::all_ones(qbar.dim());
  r.shift.add_scaled_identity(s - 1.0);
  r.shift *= theta / s;
  return r;
}

MaxnormReform reformulate_maxnorm(const DroModel& model) {
  if (model.spec.norm.tag != NormKind::Tag::Linf) {
    throw DomainError("reformulate_maxnorm: model norm must be Linf");
  }
  return reformulate_maxnorm(model.qbar, model.spec.radius);
}

std::pair<double, SymMat> deterministic_equivalent(const DroModel& model) {
  switch (model.spec.norm.tag) {
    case NormKind::Tag::Euclid:
      return {0.0, reformulate_frobenius(model)};
    case NormKind::Tag::Linf: {
      MaxnormReform r = reformulate_maxnorm(model);
      return {r.constant, std::move(r.matrix)};
    }
    default:
      throw DomainError("deterministic_equivalent: no closed form for this norm");
  }
}

std::pair<double, double> minimax_gap_demo(int n, double theta) {
  if (n < 1) throw DomainError("minimax_gap_demo: n must be >= 1");
  if (!(theta > 0.0 && theta < 1.0)) {
    throw DomainError("minimax_gap_demo: theta must lie in (0, 1)");
  }
  double maximin = theta / std::sqrt(double(n)) - 1.0;
  double minimax = theta - 1.0;
  return {maximin, minimax};
}

EmpiricalEnsemble worst_case_stqp_dist(const EmpiricalEnsemble& ens,
                                       const SimplexVec& x, double theta) {
  if (!(theta > 0.0)) throw DomainError("worst_case_stqp_dist: theta must be positive");
  if (x.dim() != ens.dim()) throw DomainError("worst_case_stqp_dist: dimension mismatch");
  double xx = dot(x.coords(), x.coords());
  SymMat shift(ens.dim());
  for (int i = 0; i < ens.dim(); ++i) {
    for (int j = i; j < ens.dim(); ++j) {
      shift.at(i, j) = (theta / xx) * x[i] * x[j];
    }
  }
  EmpiricalEnsemble out = ens;
  for (SymMat& s : out.samples) s += shift;
  return out;
}

double general_drqp_value(const SymMat& qbar, std::span<const double> cbar,
                          double omegabar, double theta, std::span<const double> x) {
  if (int(x.size()) != qbar.dim() || cbar.size() != x.size()) {
    throw DomainError("general_drqp_value: dimension mismatch");
  }
  if (!(theta > 0.0)) throw DomainError("general_drqp_value: theta must be positive");
  double xx = dot(x, x);
  return qbar.quad(x) + dot(cbar, x) + omegabar + theta * std::sqrt(xx * xx + xx + 1.0);
}

}  // namespace drstqp
