#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cod/field.hpp"

namespace cod {

/// Dense matrix over a FiniteField, row-major, exact arithmetic throughout.
class Mat {
 public:
  Mat() : rows_(0), cols_(0) {}         // empty placeholder
  Mat(FieldPtr field, int rows, int cols);  // zero matrix
  static Mat identity(const FieldPtr& field, int n);
  /// Builds a matrix from integer entries (reduced into the prime subfield).
  static Mat from_ints(const FieldPtr& field, std::vector<std::vector<long>> rows);

  const FieldPtr& field_ptr() const { return field_; }
  const FiniteField& field() const { return *field_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  FieldElement at(int i, int j) const;
  void set(int i, int j, const FieldElement& v);
  long raw(int i, int j) const { return e_[static_cast<size_t>(i) * cols_ + j]; }
  void set_raw(int i, int j, long enc) { e_[static_cast<size_t>(i) * cols_ + j] = enc; }

  Mat operator+(const Mat& o) const;
  Mat operator-(const Mat& o) const;
  Mat operator-() const;
  Mat operator*(const Mat& o) const;
  Mat scaled(const FieldElement& c) const;
  Mat transpose() const;
  FieldElement trace() const;
  bool is_zero() const;
  bool is_traceless() const { return trace().is_zero(); }
  Mat inverse() const;  // throws on singular input
  Mat pow(long e) const;

  bool operator==(const Mat& o) const;
  bool operator!=(const Mat& o) const { return !(*this == o); }

  /// Entries flattened row-major, as encoded values.
  std::vector<long> flatten() const { return e_; }
  static Mat unflatten(const FieldPtr& field, int rows, int cols, const std::vector<long>& enc);

  std::string str() const;

 private:
  void check_same_field(const Mat& o) const;
  FieldPtr field_;
  int rows_, cols_;
  std::vector<long> e_;
};

/// Kronecker product: the (rows_a*rows_b) x (cols_a*cols_b) block matrix
/// [a_ij * B].
Mat kron(const Mat& A, const Mat& B);

struct RrefResult {
  Mat mat;                  // reduced row echelon form
  std::vector<int> pivots;  // pivot column per nonzero row
  int rank;
};
RrefResult rref(const Mat& A);

int rank(const Mat& A);

/// Reduced-echelon basis of the right kernel, returned as the columns of an
/// (n x k) matrix; k may be zero.
Mat nullspace(const Mat& A);

/// Solves A * X = B exactly; absent when the system is inconsistent.
std::optional<Mat> solve(const Mat& A, const Mat& B);

/// Polynomial over a FiniteField, ascending coefficients, normalized so the
/// leading coefficient is nonzero (the zero polynomial has no coefficients).
class Polynomial {
 public:
  explicit Polynomial(FieldPtr field) : field_(std::move(field)) {}
  Polynomial(FieldPtr field, std::vector<FieldElement> coeffs);
  static Polynomial from_ints(const FieldPtr& field, const std::vector<long>& coeffs);

  const FieldPtr& field_ptr() const { return field_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  FieldElement coeff(int i) const;
  const std::vector<FieldElement>& coeffs() const { return c_; }

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  bool operator==(const Polynomial& o) const;
  bool operator!=(const Polynomial& o) const { return !(*this == o); }

  FieldElement eval(const FieldElement& x) const;
  Mat eval(const Mat& A) const;
  /// Monic divisor check helper: quotient and remainder of *this by d.
  std::pair<Polynomial, Polynomial> divmod(const Polynomial& d) const;
  /// Roots in the owner field, canonical order, repeated by multiplicity.
  std::vector<FieldElement> roots() const;

  std::string str() const;  // in the variable t

 private:
  FieldPtr field_;
  std::vector<FieldElement> c_;
};

/// Characteristic polynomial det(tI - A), division-free (Berkowitz).
Polynomial char_poly(const Mat& A);

/// Least monic annihilating polynomial, by the first linear dependence among
/// the flattened powers of A.
Polynomial min_poly(const Mat& A);

std::pair<Polynomial, Polynomial> char_min_poly(const Mat& A);

struct EigenDecomposition {
  std::vector<FieldElement> distinct_eigenvalues;  // canonical order
  std::vector<FieldElement> eigenvalues;           // per basis column
  Mat basis;                                       // n x n, columns are eigenvectors
};

/// Eigendata when the minimal polynomial splits into distinct linear factors
/// over the owner field; absent otherwise.
std::optional<EigenDecomposition> diagonalize(const Mat& A);

inline bool is_diagonalizable(const Mat& A) { return diagonalize(A).has_value(); }

struct SimultaneousEigen {
  Mat basis;  // n x n, columns are common eigenvectors
  std::vector<std::vector<FieldElement>> eigen_tuples;  // per column, one value per operator
};

/// Common eigenbasis of a pairwise-commuting family, by recursive eigenspace
/// refinement; absent when any member fails to diagonalize over the field.
std::optional<SimultaneousEigen> simultaneous_eigenbasis(std::span<const Mat> family);

}  // namespace cod
