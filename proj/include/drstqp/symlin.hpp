#pragma once

#include <span>
#include <vector>

namespace drstqp {

/// Dense symmetric matrix. Only the upper triangle is stored (diagonal block
/// first, then the strict upper triangle in row-major order), so symmetry is
/// structural and cannot be violated.
class SymMat {
 public:
  SymMat() = default;
  explicit SymMat(int n);
  SymMat(int n, std::vector<double> packed);

  static SymMat identity(int n);
  static SymMat all_ones(int n);
  static SymMat diag(std::span<const double> d);

  [[nodiscard]] int dim() const { return n_; }

  [[nodiscard]] double operator()(int i, int j) const {
    return data_[index(i, j)];
  }
  double& at(int i, int j) { return data_[index(i, j)]; }

  /// Raw storage in diagonal-first upper-triangle order, no scaling.
  [[nodiscard]] const std::vector<double>& packed() const { return data_; }

  SymMat& operator+=(const SymMat& rhs);
  SymMat& operator-=(const SymMat& rhs);
  SymMat& operator*=(double s);
  friend SymMat operator+(SymMat a, const SymMat& b) { return a += b; }
  friend SymMat operator-(SymMat a, const SymMat& b) { return a -= b; }
  friend SymMat operator*(double s, SymMat a) { return a *= s; }

  void add_scaled_identity(double t);

  /// x^T A x
  [[nodiscard]] double quad(std::span<const double> x) const;
  /// A x
  [[nodiscard]] std::vector<double> apply(std::span<const double> x) const;

  [[nodiscard]] double fro_inner(const SymMat& rhs) const;
  [[nodiscard]] double fro_norm() const;

  [[nodiscard]] double max_abs() const;
  [[nodiscard]] double max_entry() const;

  bool operator==(const SymMat& rhs) const = default;

 private:
  [[nodiscard]] std::size_t index(int i, int j) const;

  int n_ = 0;
  std::vector<double> data_;
};

/// Length of the packed/svec representation for dimension n.
constexpr std::size_t svec_len(int n) { return std::size_t(n) * (n + 1) / 2; }

/// Recovers n from a triangular length m = n(n+1)/2; throws DomainError when
/// m is not triangular.
int dim_from_svec_len(std::size_t m);

/// Isometric vectorization: (a_11,...,a_nn, sqrt(2) a_12, ..., sqrt(2) a_{n-1,n}).
/// Off-diagonal scaling makes <A,B>_F equal the plain dot product of the
/// images. The sqrt(2) products are correctly rounded against the exact
/// irrational constant (double-double arithmetic), which makes svec/smat exact
/// inverses of each other in floating point.
std::vector<double> svec(const SymMat& a);

/// Inverse of svec. Throws DomainError on non-triangular input length.
SymMat smat(std::span<const double> v);

/// Correctly rounded x * sqrt(2) and x / sqrt(2).
double mul_sqrt2(double x);
double div_sqrt2(double x);

/// Point on the standard simplex: nonnegative entries summing to one.
/// Constructors renormalize when |sum - 1| <= 1e-9 and reject otherwise;
/// entries below -1e-12 are rejected, tiny negative round-off is clamped.
class SimplexVec {
 public:
  explicit SimplexVec(std::vector<double> x);

  static SimplexVec uniform(int n);
  static SimplexVec vertex(int n, int i);
  /// Skips validation; caller guarantees feasibility (solver internals).
  static SimplexVec unchecked(std::vector<double> x);

  [[nodiscard]] int dim() const { return int(x_.size()); }
  [[nodiscard]] const std::vector<double>& coords() const { return x_; }
  double operator[](int i) const { return x_[std::size_t(i)]; }

  bool operator==(const SimplexVec& rhs) const = default;

 private:
  SimplexVec() = default;
  std::vector<double> x_;
};

/// Euclidean projection onto the standard simplex (sort-and-threshold).
SimplexVec project_simplex(std::span<const double> v);

/// Eigenvalues ascending; eigenvectors orthonormal, column-major, paired with
/// the eigenvalues.
struct EigDecomp {
  int n = 0;
  std::vector<double> eigenvalues;
  std::vector<double> vectors;  // column-major n*n

  [[nodiscard]] double vec(int i, int col) const {
    return vectors[std::size_t(col) * n + i];
  }
  [[nodiscard]] double lambda_min() const { return eigenvalues.front(); }
  [[nodiscard]] double lambda_max() const { return eigenvalues.back(); }
};

/// Cyclic Jacobi sweeps until the off-diagonal Frobenius mass drops below
/// tol. Throws NoConvergence after max_sweeps.
EigDecomp eig_sym(const SymMat& a, double tol = 1e-12, int max_sweeps = 100);

// Small dense-vector helpers shared across modules.
double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double norm1(std::span<const double> a);

}  // namespace drstqp
