#pragma once

#include <span>
#include <vector>

#include "drstqp/symlin.hpp"

namespace drstqp {

/// Ground norm for Wasserstein distances and their dual-norm regularizers.
struct NormKind {
  enum class Tag { Euclid, L1, Linf, Lp };

  Tag tag = Tag::Euclid;
  double p = 2.0;  // only meaningful for Lp

  static NormKind euclid() { return {Tag::Euclid, 2.0}; }
  static NormKind l1() { return {Tag::L1, 1.0}; }
  static NormKind linf() { return {Tag::Linf, 0.0}; }
  static NormKind lp(double p);

  bool operator==(const NormKind&) const = default;
};

/// Wasserstein ambiguity ball parameters: ground norm, transport order p and
/// a constant radius. Decision-dependent radii live in the d3ro module.
struct AmbiguitySpec {
  NormKind norm = NormKind::euclid();
  double order_p = 2.0;
  double radius = 0.0;

  AmbiguitySpec() = default;
  AmbiguitySpec(NormKind n, double p, double theta);
};

/// Equal-weight discrete distribution (atoms have mass 1/N each).
struct DiscreteDist {
  std::vector<std::vector<double>> atoms;

  [[nodiscard]] int size() const { return int(atoms.size()); }
  [[nodiscard]] int dim() const { return atoms.empty() ? 0 : int(atoms[0].size()); }
  [[nodiscard]] std::vector<double> mean() const;
};

double vector_norm(std::span<const double> v, NormKind norm);

/// ||c||_* = sup { c^T y : ||y|| <= 1 }. L1 and Linf swap, Euclid is
/// self-dual, Lp pairs with its Holder conjugate.
double dual_norm(std::span<const double> c, NormKind norm);

/// Exact value of sup E_P[c^T xi] over the Wasserstein ball of radius theta
/// around a reference with the given mean: c^T mean + theta ||c||_*.
/// Independent of the transport order p.
double inner_sup_linear(std::span<const double> c, std::span<const double> mean,
                        double theta, NormKind norm);

/// 2-Wasserstein distance between Gaussians:
/// W2^2 = |mu1-mu2|^2 + tr S1 + tr S2 - 2 tr sqrt(S1^{1/2} S2 S1^{1/2}).
/// Matrix square roots by spectral decomposition with eigenvalues clamped at
/// zero (tolerance 1e-12) to absorb PSD round-off; genuinely indefinite
/// covariances raise NotPsd.
double w2_gaussian(std::span<const double> mu1, const SymMat& sigma1,
                   std::span<const double> mu2, const SymMat& sigma2);

/// p-Wasserstein distance between equal-size equal-weight discrete
/// distributions, solved exactly as an assignment problem (Kuhn-Munkres).
double discrete_wp(const DiscreteDist& a, const DiscreteDist& b, double p,
                   NormKind norm = NormKind::euclid());

/// W2 between a Dirac at z and an empirical distribution; the square equals
/// the mean squared distance (1/N) sum |z - xi_i|^2.
double w2_dirac_to_empirical(std::span<const double> z, const DiscreteDist& p);

/// Worst-case distribution of a linear payoff under the Euclidean ball:
/// every atom shifted by (theta/||c||_2) c.
DiscreteDist worst_case_shift(const DiscreteDist& p, std::span<const double> c,
                              double theta);

/// Maximal element of the Linf first-moment ball: mean + theta * ones. Every
/// nonnegative direction attains its supremum over the ball there (the normal
/// cone at that point is the whole nonnegative orthant).
std::vector<double> linf_maximal_element(std::span<const double> mean, double theta);

/// Normal-cone membership for the L1 ball at a boundary point z: true iff
/// v lies in cone(d|z_1-w_1| x ... x d|z_m-w_m|), i.e. v = lambda g with
/// lambda >= 0 and g_i = sign(z_i-w_i) where that sign is nonzero,
/// g_i in [-1,1] otherwise. Throws DomainError unless | ||z-w||_1 - theta |
/// <= 1e-9.
bool l1_normal_cone_member(std::span<const double> w, std::span<const double> z,
                           std::span<const double> v, double theta);

}  // namespace drstqp
