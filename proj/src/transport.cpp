#include "drstqp/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "drstqp/errors.hpp"

namespace drstqp {

NormKind NormKind::lp(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw DomainError("NormKind::lp: p must lie in (1, inf)");
  }
  return {Tag::Lp, p};
}

AmbiguitySpec::AmbiguitySpec(NormKind n, double p, double theta)
    : norm(n), order_p(p), radius(theta) {
  if (!(p >= 1.0)) throw DomainError("AmbiguitySpec: order p must be >= 1");
  if (!(theta > 0.0)) throw DomainError("AmbiguitySpec: radius must be positive");
}

std::vector<double> DiscreteDist::mean() const {
  if (atoms.empty()) throw DomainError("DiscreteDist: empty support");
  std::vector<double> m(atoms[0].size(), 0.0);
  for (const auto& a : atoms) {
    for (std::size_t i = 0; i < m.size(); ++i) m[i] += a[i];
  }
  for (double& v : m) v /= double(atoms.size());
  return m;
}

double vector_norm(std::span<const double> v, NormKind norm) {
  switch (norm.tag) {
    case NormKind::Tag::Euclid:
      return norm2(v);
    case NormKind::Tag::L1:
      return norm1(v);
    case NormKind::Tag::Linf: {
      double m = 0.0;
      for (double x : v) m = std::max(m, std::abs(x));
      return m;
    }
    case NormKind::Tag::Lp: {
      double s = 0.0;
      for (double x : v) s += std::pow(std::abs(x), norm.p);
      return std::pow(s, 1.0 / norm.p);
    }
  }
  return 0.0;
}

double dual_norm(std::span<const double> c, NormKind norm) {
  switch (norm.tag) {
    case NormKind::Tag::Euclid:
      return norm2(c);
    case NormKind::Tag::L1:
      return vector_norm(c, NormKind::linf());
    case NormKind::Tag::Linf:
      return norm1(c);
    case NormKind::Tag::Lp: {
      double q = norm.p / (norm.p - 1.0);
      return vector_norm(c, NormKind::lp(q));
    }
  }
  return 0.0;
}

double inner_sup_linear(std::span<const double> c, std::span<const double> mean,
                        double theta, NormKind norm) {
  if (c.size() != mean.size()) throw DomainError("inner_sup_linear: dimension mismatch");
  if (!(theta > 0.0)) throw DomainError("inner_sup_linear: theta must be positive");
  return dot(c, mean) + theta * dual_norm(c, norm);
}

namespace {

// A^{1/2} by spectral decomposition; eigenvalues clamped at zero within tol.
SymMat psd_sqrt(const SymMat& a, const char* who) {
  EigDecomp d = eig_sym(a, 1e-13 * (1.0 + a.fro_norm()));
  double scale = std::max(1.0, std::abs(d.lambda_max()));
  SymMat r(a.dim());
  const int n = a.dim();
  for (int c = 0; c < n; ++c) {
    double lam = d.eigenvalues[std::size_t(c)];
    if (lam < -1e-8 * scale) throw NotPsd(std::string(who) + ": covariance not PSD");
    double s = std::sqrt(std::max(lam, 0.0));
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        r.at(i, j) += s * d.vec(i, c) * d.vec(j, c);
      }
    }
  }
  return r;
}

double trace_psd_sqrt(const SymMat& a, const char* who) {
  EigDecomp d = eig_sym(a, 1e-13 * (1.0 + a.fro_norm()));
  double scale = std::max(1.0, std::abs(d.lambda_max()));
  double tr = 0.0;
  for (double lam : d.eigenvalues) {
    if (lam < -1e-8 * scale) throw NotPsd(std::string(who) + ": product matrix not PSD");
    tr += std::sqrt(std::max(lam, 0.0));
  }
  return tr;
}

// Kuhn-Munkres / Jonker-style shortest augmenting path on a square cost
// matrix; exact optimal assignment in O(n^3).
double assignment_min_cost(const std::vector<std::vector<double>>& cost) {
  const int n = int(cost.size());
  std::vector<double> u(std::size_t(n) + 1, 0.0), v(std::size_t(n) + 1, 0.0);
  std::vector<int> p(std::size_t(n) + 1, 0), way(std::size_t(n) + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(std::size_t(n) + 1, std::numeric_limits<double>::infinity());
    std::vector<char> used(std::size_t(n) + 1, 0);
    do {
      used[std::size_t(j0)] = 1;
      int i0 = p[std::size_t(j0)], j1 = 0;
      double delta = std::numeric_limits<double>::infinity();
      for (int j = 1; j <= n; ++j) {
        if (used[std::size_t(j)]) continue;
        double cur = cost[std::size_t(i0 - 1)][std::size_t(j - 1)] - u[std::size_t(i0)] - v[std::size_t(j)];
        if (cur < minv[std::size_t(j)]) {
          minv[std::size_t(j)] = cur;
          way[std::size_t(j)] = j0;
        }
        if (minv[std::size_t(j)] < delta) {
          delta = minv[std::size_t(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[std::size_t(j)]) {
          u[std::size_t(p[std::size_t(j)])] += delta;
          v[std::size_t(j)] -= delta;
        } else {
          minv[std::size_t(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[std::size_t(j0)] != 0);
    do {
      int j1 = way[std::size_t(j0)];
      p[std::size_t(j0)] = p[std::size_t(j1)];
      j0 = j1;
    } while (j0 != 0);
  }
  double total = 0.0;
  for (int j = 1; j <= n; ++j) {
    if (p[std::size_t(j)] != 0) {
      total += cost[std::size_t(p[std::size_t(j)] - 1)][std::size_t(j - 1)];
    }
  }
  return total;
}

}  // namespace

double w2_gaussian(std::span<const double> mu1, const SymMat& sigma1,
                   std::span<const double> mu2, const SymMat& sigma2) {
  if (mu1.size() != mu2.size() || int(mu1.size()) != sigma1.dim() ||
      sigma1.dim() != sigma2.dim()) {
    throw DomainError("w2_gaussian: dimension mismatch");
  }
  SymMat s1h = psd_sqrt(sigma1, "w2_gaussian");
  // M = S1^{1/2} S2 S1^{1/2}, assembled symmetric
  const int n = sigma1.dim();
  SymMat m(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double acc = 0.0;
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) acc += s1h(i, a) * sigma2(a, b) * s1h(b, j);
      }
      m.at(i, j) = acc;
    }
  }
  double tr1 = 0.0, tr2 = 0.0;
  for (int i = 0; i < n; ++i) {
    tr1 += sigma1(i, i);
    tr2 += sigma2(i, i);
  }
  // also validates sigma2 via the PSD check embedded in the sqrt of M
  double cross = trace_psd_sqrt(m, "w2_gaussian");
  double dmu = 0.0;
  for (std::size_t i = 0; i < mu1.size(); ++i) dmu += (mu1[i] - mu2[i]) * (mu1[i] - mu2[i]);
  double w2sq = dmu + tr1 + tr2 - 2.0 * cross;
  return std::sqrt(std::max(w2sq, 0.0));
}

double discrete_wp(const DiscreteDist& a, const DiscreteDist& b, double p, NormKind norm) {
  if (a.size() != b.size()) throw DomainError("discrete_wp: supports must have equal size");
  if (a.size() == 0) throw DomainError("discrete_wp: empty support");
  if (a.dim() != b.dim()) throw DomainError("discrete_wp: dimension mismatch");
  if (!(p >= 1.0)) throw DomainError("discrete_wp: p must be >= 1");
  const int n = a.size();
  std::vector<std::vector<double>> cost(std::size_t(n), std::vector<double>(std::size_t(n), 0.0));
  std::vector<double> diff(std::size_t(a.dim()), 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < diff.size(); ++k) {
        diff[k] = a.atoms[std::size_t(i)][k] - b.atoms[std::size_t(j)][k];
      }
      cost[std::size_t(i)][std::size_t(j)] = std::pow(vector_norm(diff, norm), p);
    }
  }
  double total = assignment_min_cost(cost);
  return std::pow(total / double(n), 1.0 / p);
}

double w2_dirac_to_empirical(std::span<const double> z, const DiscreteDist& p) {
  if (p.size() == 0) throw DomainError("w2_dirac_to_empirical: empty support");
  if (int(z.size()) != p.dim()) throw DomainError("w2_dirac_to_empirical: dimension mismatch");
  double acc = 0.0;
  for (const auto& atom : p.atoms) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) d2 += (z[i] - atom[i]) * (z[i] - atom[i]);
    acc += d2;
  }
  return std::sqrt(acc / double(p.size()));
}

DiscreteDist worst_case_shift(const DiscreteDist& p, std::span<const double> c, double theta) {
  if (!(theta > 0.0)) throw DomainError("worst_case_shift: theta must be positive");
  if (int(c.size()) != p.dim()) throw DomainError("worst_case_shift: dimension mismatch");
  double nc = norm2(c);
  if (nc == 0.0) throw DomainError("worst_case_shift: direction must be nonzero");
  DiscreteDist out = p;
  double s = theta / nc;
  for (auto& atom : out.atoms) {
    for (std::size_t i = 0; i < atom.size(); ++i) atom[i] += s * c[i];
  }
  return out;
}

std::vector<double> linf_maximal_element(std::span<const double> mean, double theta) {
  if (!(theta > 0.0)) throw DomainError("linf_maximal_element: theta must be positive");
  std::vector<double> z(mean.begin(), mean.end());
  for (double& v : z) v += theta;
  return z;
}

bool l1_normal_cone_member(std::span<const double> w, std::span<const double> z,
                           std::span<const double> v, double theta) {
  if (w.size() != z.size() || w.size() != v.size()) {
    throw DomainError("l1_normal_cone_member: dimension mismatch");
  }
  if (!(theta > 0.0)) throw DomainError("l1_normal_cone_member: theta must be positive");
  std::vector<double> s(w.size());
  double l1 = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    s[i] = z[i] - w[i];
    l1 += std::abs(s[i]);
  }
  if (std::abs(l1 - theta) > 1e-9) {
    throw DomainError("l1_normal_cone_member: z is not on the ball boundary");
  }

  constexpr double kSignTol = 1e-12;
  constexpr double kTol = 1e-9;
  // v = lambda * g with g_i = sign(s_i) on nonzero coordinates; lambda is
  // pinned by any of them and must be consistent everywhere.
  double lambda = -1.0;
  bool have_lambda = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (std::abs(s[i]) <= kSignTol) continue;
    double cand = s[i] > 0.0 ? v[i] : -v[i];
    if (!have_lambda) {
      lambda = cand;
      have_lambda = true;
    } else if (std::abs(cand - lambda) > kTol) {
      return false;
    }
  }
  if (!have_lambda) return false;  // unreachable for boundary points
  if (lambda < -kTol) return false;
  lambda = std::max(lambda, 0.0);
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (std::abs(s[i]) <= kSignTol && std::abs(v[i]) > lambda + kTol) return false;
  }
  return true;
}

}  // namespace drstqp
