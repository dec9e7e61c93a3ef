#include "drstqp/randmat.hpp"

#include <numbers>

#include "drstqp/errors.hpp"

namespace drstqp {

EnsembleModel EnsembleModel::goe(int n) {
  if (n < 1) throw DomainError("GOE: n must be >= 1");
  EnsembleModel m;
  m.base = Base::Goe;
  m.n = n;
  return m;
}

EnsembleModel EnsembleModel::wishart(int n, int k) {
  if (n < 1 || k < 1) throw DomainError("Wishart: n, k must be >= 1");
  EnsembleModel m;
  m.base = Base::Wishart;
  m.n = n;
  m.k = k;
  return m;
}

EnsembleModel EnsembleModel::shifted(SymMat base_matrix, double scale, EnsembleModel inner) {
  if (inner.shift.has_value()) throw DomainError("shifted: inner model must be basic");
  if (base_matrix.dim() != inner.n) throw DomainError("shifted: dimension mismatch");
  inner.shift = std::move(base_matrix);
  inner.scale = scale;
  return inner;
}

SymMat EnsembleModel::mean() const {
  SymMat m(n);
  if (base == Base::Wishart) m.add_scaled_identity(double(k));
  if (shift.has_value()) {
    m *= scale;
    m += *shift;
  }
  return m;
}

SymMat sample_goe(int n, Rng& rng) {
  SymMat g(n);
  // fixed traversal order keeps streams reproducible: diagonal, then rows
  for (int i = 0; i < n; ++i) g.at(i, i) = rng.normal() * std::numbers::sqrt2;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) g.at(i, j) = rng.normal();
  }
  return g;
}

SymMat sample_goe(int n, RngSpec spec) {
  Rng rng(spec);
  return sample_goe(n, rng);
}

SymMat sample_wishart(int n, int k, Rng& rng) {
  std::vector<double> y(std::size_t(n) * k);
  for (double& v : y) v = rng.normal();
  SymMat w(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double acc = 0.0;
      for (int c = 0; c < k; ++c) acc += y[std::size_t(i) * k + c] * y[std::size_t(j) * k + c];
      w.at(i, j) = acc;
    }
  }
  return w;
}

SymMat sample_wishart(int n, int k, RngSpec spec) {
  Rng rng(spec);
  return sample_wishart(n, k, rng);
}

std::vector<double> sample_exp_weights(int n, double rate, Rng& rng) {
  if (!(rate > 0.0)) throw DomainError("sample_exp_weights: rate must be positive");
  std::vector<double> w(std::size_t(n), 0.0);
  for (double& v : w) v = 1.0 + rng.exponential(rate);
  return w;
}

std::vector<double> sample_exp_weights(int n, double rate, RngSpec spec) {
  Rng rng(spec);
  return sample_exp_weights(n, rate, rng);
}

SymMat sample_model(const EnsembleModel& model, Rng& rng) {
  SymMat s = model.base == EnsembleModel::Base::Goe ? sample_goe(model.n, rng)
                                                    : sample_wishart(model.n, model.k, rng);
  if (model.shift.has_value()) {
    s *= model.scale;
    s += *model.shift;
  }
  return s;
}

EmpiricalEnsemble draw_ensemble(const EnsembleModel& model, int N, RngSpec spec) {
  if (N < 1) throw DomainError("draw_ensemble: N must be >= 1");
  EmpiricalEnsemble ens;
  ens.model = model;
  ens.rng = spec;
  ens.samples.reserve(std::size_t(N));
  Rng rng(spec);
  for (int i = 0; i < N; ++i) ens.samples.push_back(sample_model(model, rng));
  return ens;
}

SymMat sample_mean(const EmpiricalEnsemble& ens) {
  if (ens.samples.empty()) throw DomainError("sample_mean: empty ensemble");
  SymMat acc(ens.dim());
  for (const SymMat& s : ens.samples) acc += s;
  acc *= 1.0 / double(ens.size());
  return acc;
}

}  // namespace drstqp
