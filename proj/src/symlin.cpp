#include "drstqp/symlin.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

#include "drstqp/errors.hpp"

namespace drstqp {

SymMat::SymMat(int n) : n_(n), data_(svec_len(n), 0.0) {
  if (n < 1) throw DomainError("SymMat: dimension must be >= 1");
}

SymMat::SymMat(int n, std::vector<double> packed) : n_(n), data_(std::move(packed)) {
  if (n < 1) throw DomainError("SymMat: dimension must be >= 1");
  if (data_.size() != svec_len(n)) {
    throw DomainError("SymMat: packed storage must have n(n+1)/2 entries");
  }
  for (double v : data_) {
    if (!std::isfinite(v)) throw DomainError("SymMat: entries must be finite");
  }
}

SymMat SymMat::identity(int n) {
  SymMat m(n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

SymMat SymMat::all_ones(int n) {
  SymMat m(n);
  std::fill(m.data_.begin(), m.data_.end(), 1.0);
  return m;
}

SymMat SymMat::diag(std::span<const double> d) {
  SymMat m(int(d.size()));
  for (int i = 0; i < m.n_; ++i) m.at(i, i) = d[std::size_t(i)];
  return m;
}

std::size_t SymMat::index(int i, int j) const {
  if (i == j) return std::size_t(i);
  if (i > j) std::swap(i, j);
  // strict upper triangle, row-major, after the n diagonal slots
  return std::size_t(n_) + std::size_t(i) * n_ - std::size_t(i) * (i + 1) / 2 +
         std::size_t(j - i - 1);
}

SymMat& SymMat::operator+=(const SymMat& rhs) {
  if (rhs.n_ != n_) throw DomainError("SymMat: dimension mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += rhs.data_[k];
  return *this;
}

SymMat& SymMat::operator-=(const SymMat& rhs) {
  if (rhs.n_ != n_) throw DomainError("SymMat: dimension mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= rhs.data_[k];
  return *this;
}

SymMat& SymMat::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

void SymMat::add_scaled_identity(double t) {
  for (int i = 0; i < n_; ++i) data_[std::size_t(i)] += t;
}

double SymMat::quad(std::span<const double> x) const {
  double diag_part = 0.0, off_part = 0.0;
  for (int i = 0; i < n_; ++i) diag_part += data_[std::size_t(i)] * x[i] * x[i];
  std::size_t k = std::size_t(n_);
  for (int i = 0; i < n_; ++i) {
    for (int j = i + 1; j < n_; ++j) off_part += data_[k++] * x[i] * x[j];
  }
  return diag_part + 2.0 * off_part;
}

std::vector<double> SymMat::apply(std::span<const double> x) const {
  std::vector<double> y(std::size_t(n_), 0.0);
  for (int i = 0; i < n_; ++i) {
    double acc = data_[std::size_t(i)] * x[i];
    for (int j = 0; j < n_; ++j) {
      if (j != i) acc += (*this)(i, j) * x[j];
    }
    y[std::size_t(i)] = acc;
  }
  return y;
}

double SymMat::fro_inner(const SymMat& rhs) const {
  if (rhs.n_ != n_) throw DomainError("SymMat: dimension mismatch");
  double diag_part = 0.0, off_part = 0.0;
  for (int i = 0; i < n_; ++i) diag_part += data_[std::size_t(i)] * rhs.data_[std::size_t(i)];
  for (std::size_t k = std::size_t(n_); k < data_.size(); ++k) off_part += data_[k] * rhs.data_[k];
  return diag_part + 2.0 * off_part;
}

double SymMat::fro_norm() const { return std::sqrt(fro_inner(*this)); }

double SymMat::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

double SymMat::max_entry() const {
  double m = data_.empty() ? 0.0 : data_[0];
  for (double v : data_) m = std::max(m, v);
  return m;
}

int dim_from_svec_len(std::size_t m) {
  // n(n+1)/2 = m  =>  n = (-1 + sqrt(1+8m)) / 2
  auto n = int((std::sqrt(8.0 * double(m) + 1.0) - 1.0) / 2.0 + 0.5);
  if (n < 1 || svec_len(n) != m) {
    throw DomainError("smat: vector length is not triangular");
  }
  return n;
}

// sqrt(2) as a double-double constant: SQRT2_HI + SQRT2_LO carries ~107 bits.
namespace {
constexpr double kSqrt2Hi = 1.41421356237309514547462185873882845;  // fl(sqrt 2)
constexpr double kSqrt2Lo = -9.6672933134529122786e-17;
constexpr double kInvSqrt2Hi = kSqrt2Hi / 2.0;  // exact halving
constexpr double kInvSqrt2Lo = kSqrt2Lo / 2.0;

// Correctly rounded x * (hi + lo) via an FMA-compensated product. Because
// x*sqrt(2) is irrational for x != 0 it is never an exact rounding tie, so the
// rounded product of the round trip mul_sqrt2 -> div_sqrt2 restores x exactly.
inline double mul_dd(double x, double hi, double lo) {
  double p = x * hi;
  double err = std::fma(x, hi, -p);
  return p + std::fma(x, lo, err);
}
}  // namespace

double mul_sqrt2(double x) { return mul_dd(x, kSqrt2Hi, kSqrt2Lo); }

double div_sqrt2(double x) {
  // Correctly rounded division, then a one-ulp polish toward an exact
  // preimage: whenever x lies in the image of mul_sqrt2 the returned y
  // satisfies mul_sqrt2(y) == x, so svec images invert losslessly. (The
  // scaled representation cannot be lossless in the other direction: in part
  // of every binade two adjacent doubles share one rounded product.)
  double y = mul_dd(x, kInvSqrt2Hi, kInvSqrt2Lo);
  double back = mul_sqrt2(y);
  if (back == x) return y;
  double y2 = std::nextafter(y, back < x ? std::numeric_limits<double>::infinity()
                                         : -std::numeric_limits<double>::infinity());
  return mul_sqrt2(y2) == x ? y2 : y;
}

std::vector<double> svec(const SymMat& a) {
  const auto& raw = a.packed();
  std::vector<double> v(raw.size());
  const std::size_t n = std::size_t(a.dim());
  for (std::size_t i = 0; i < n; ++i) v[i] = raw[i];
  for (std::size_t k = n; k < raw.size(); ++k) v[k] = mul_sqrt2(raw[k]);
  return v;
}

SymMat smat(std::span<const double> v) {
  const int n = dim_from_svec_len(v.size());
  std::vector<double> raw(v.size());
  for (int i = 0; i < n; ++i) raw[std::size_t(i)] = v[std::size_t(i)];
  for (std::size_t k = std::size_t(n); k < v.size(); ++k) raw[k] = div_sqrt2(v[k]);
  return SymMat(n, std::move(raw));
}

SimplexVec::SimplexVec(std::vector<double> x) : x_(std::move(x)) {
  if (x_.empty()) throw DomainError("SimplexVec: empty vector");
  double sum = 0.0;
  for (double& v : x_) {
    if (!std::isfinite(v)) throw DomainError("SimplexVec: entries must be finite");
    if (v < -1e-12) throw DomainError("SimplexVec: negative entry");
    if (v < 0.0) v = 0.0;
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw DomainError("SimplexVec: coordinates must sum to one");
  }
  if (sum != 1.0) {
    for (double& v : x_) v /= sum;
  }
}

SimplexVec SimplexVec::uniform(int n) {
  SimplexVec s;
  s.x_.assign(std::size_t(n), 1.0 / n);
  return s;
}

SimplexVec SimplexVec::vertex(int n, int i) {
  SimplexVec s;
  s.x_.assign(std::size_t(n), 0.0);
  s.x_[std::size_t(i)] = 1.0;
  return s;
}

SimplexVec SimplexVec::unchecked(std::vector<double> x) {
  SimplexVec s;
  s.x_ = std::move(x);
  return s;
}

SimplexVec project_simplex(std::span<const double> v) {
  const std::size_t n = v.size();
  if (n == 0) throw DomainError("project_simplex: empty vector");
  for (double x : v) {
    if (!std::isfinite(x)) throw DomainError("project_simplex: non-finite input");
  }
  std::vector<double> u(v.begin(), v.end());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cssv = 0.0, tau = u[0] - 1.0;
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    cssv += u[i];
    double t = (cssv - 1.0) / double(i + 1);
    if (u[i] - t > 0.0) {
      tau = t;
      k = i;
    }
  }
  (void)k;
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = std::max(v[i] - tau, 0.0);
  double sum = std::accumulate(x.begin(), x.end(), 0.0);
  for (double& xi : x) xi /= sum;
  return SimplexVec::unchecked(std::move(x));
}

EigDecomp eig_sym(const SymMat& a, double tol, int max_sweeps) {
  if (!(tol > 0.0)) throw DomainError("eig_sym: tol must be positive");
  const int n = a.dim();
  std::vector<double> m(std::size_t(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m[std::size_t(i) * n + j] = a(i, j);
  }
  std::vector<double> vcol(std::size_t(n) * n, 0.0);  // column-major
  for (int i = 0; i < n; ++i) vcol[std::size_t(i) * n + i] = 1.0;

  auto off_mass = [&] {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        double x = m[std::size_t(i) * n + j];
        s += 2.0 * x * x;
      }
    }
    return std::sqrt(s);
  };

  int sweep = 0;
  while (off_mass() > tol) {
    if (++sweep > max_sweeps) {
      throw NoConvergence("eig_sym: Jacobi sweeps exhausted");
    }
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double apq = m[std::size_t(p) * n + q];
        double app = m[std::size_t(p) * n + p];
        double aqq = m[std::size_t(q) * n + q];
        // entries already negligible against the diagonal are zeroed outright
        if (std::abs(apq) <= 1e-300 ||
            std::abs(apq) < 1e-20 * (std::abs(app) + std::abs(aqq))) {
          m[std::size_t(p) * n + q] = m[std::size_t(q) * n + p] = 0.0;
          continue;
        }
        double theta = 0.5 * (aqq - app) / apq;
        double t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        if (theta < 0.0) t = -t;
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double s = t * c;
        for (int k = 0; k < n; ++k) {
          double akp = m[std::size_t(k) * n + p];
          double akq = m[std::size_t(k) * n + q];
          m[std::size_t(k) * n + p] = c * akp - s * akq;
          m[std::size_t(k) * n + q] = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          double apk = m[std::size_t(p) * n + k];
          double aqk = m[std::size_t(q) * n + k];
          m[std::size_t(p) * n + k] = c * apk - s * aqk;
          m[std::size_t(q) * n + k] = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          double vkp = vcol[std::size_t(p) * n + k];
          double vkq = vcol[std::size_t(q) * n + k];
          vcol[std::size_t(p) * n + k] = c * vkp - s * vkq;
          vcol[std::size_t(q) * n + k] = s * vkp + c * vkq;
        }
      }
    }
  }

  EigDecomp d;
  d.n = n;
  d.eigenvalues.resize(std::size_t(n));
  std::vector<int> order(std::size_t(n), 0);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> lam(std::size_t(n), 0.0);
  for (int i = 0; i < n; ++i) lam[std::size_t(i)] = m[std::size_t(i) * n + i];
  std::sort(order.begin(), order.end(), [&](int x, int y) { return lam[std::size_t(x)] < lam[std::size_t(y)]; });
  d.vectors.resize(std::size_t(n) * n);
  for (int col = 0; col < n; ++col) {
    int src = order[std::size_t(col)];
    d.eigenvalues[std::size_t(col)] = lam[std::size_t(src)];
    for (int i = 0; i < n; ++i) {
      d.vectors[std::size_t(col) * n + i] = vcol[std::size_t(src) * n + i];
    }
  }
  return d;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double norm1(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s += std::abs(v);
  return s;
}

}  // namespace drstqp
