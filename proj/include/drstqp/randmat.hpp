#pragma once

#include <optional>
#include <vector>

#include "drstqp/rng.hpp"
#include "drstqp/symlin.hpp"

namespace drstqp {

/// Sampling model for a random symmetric matrix. A model is a base ensemble
/// (GOE or Wishart with identity covariance), optionally shifted and scaled:
/// Q = shift + scale * S with S drawn from the base.
struct EnsembleModel {
  enum class Base { Goe, Wishart };

  Base base = Base::Goe;
  int n = 0;
  int k = 0;  // Wishart degrees of freedom
  std::optional<SymMat> shift;
  double scale = 1.0;

  static EnsembleModel goe(int n);
  static EnsembleModel wishart(int n, int k);
  static EnsembleModel shifted(SymMat base_matrix, double scale, EnsembleModel inner);

  /// Analytic mean of the model (GOE: 0, Wishart: k I, shifted accordingly).
  [[nodiscard]] SymMat mean() const;
};

/// N i.i.d. draws from a model together with the stream that produced them.
struct EmpiricalEnsemble {
  EnsembleModel model;
  RngSpec rng;
  std::vector<SymMat> samples;

  [[nodiscard]] int dim() const { return model.n; }
  [[nodiscard]] int size() const { return int(samples.size()); }
};

/// Symmetric Gaussian matrix: diagonal N(0,2), strict upper triangle N(0,1),
/// all independent.
SymMat sample_goe(int n, Rng& rng);
SymMat sample_goe(int n, RngSpec rng);

/// W = Y Y^T with Y an n-by-k matrix of i.i.d. standard normals.
SymMat sample_wishart(int n, int k, Rng& rng);
SymMat sample_wishart(int n, int k, RngSpec rng);

/// Vertex weights w_i = 1 + z_i, z_i ~ Exp(rate); all outputs exceed one.
std::vector<double> sample_exp_weights(int n, double rate, Rng& rng);
std::vector<double> sample_exp_weights(int n, double rate, RngSpec rng);

SymMat sample_model(const EnsembleModel& model, Rng& rng);

EmpiricalEnsemble draw_ensemble(const EnsembleModel& model, int N, RngSpec rng);

/// Entrywise arithmetic mean of the samples.
SymMat sample_mean(const EmpiricalEnsemble& ens);

}  // namespace drstqp
