#pragma once

#include <optional>
#include <vector>

#include "cod/matrix.hpp"

namespace cod {

/// Commutator AB - BA.
Mat bracket(const Mat& A, const Mat& B);

/// The Killing form on sl_n in its closed form K(A, B) = 2n Tr(AB).
/// Both arguments must be traceless n x n; the characteristic must not
/// divide 2n (the form is identically degenerate otherwise).
FieldElement killing(const Mat& A, const Mat& B);

/// Standard basis of sl_n: the off-diagonal units E_ij (row-major order)
/// followed by the diagonal differences E_ii - E_(i+1)(i+1).
std::vector<Mat> sl_basis(const FieldPtr& F, int n);

/// Coordinates of a traceless matrix relative to sl_basis (length n^2 - 1).
std::vector<long> sl_coords(const Mat& A);
Mat sl_from_coords(const FieldPtr& F, int n, const std::vector<long>& coords);

/// A linear span of traceless matrices inside sl_n, held in reduced echelon
/// form (each matrix flattened row-major). Carries a bracket-closure flag:
/// spans that fail closure are flagged, never silently extended.
class Subalgebra {
 public:
  static Subalgebra span_close(const std::vector<Mat>& mats);

  int ambient_n() const { return n_; }
  const FieldPtr& field_ptr() const { return field_; }
  const std::vector<Mat>& basis() const { return basis_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  bool bracket_closed() const { return bracket_closed_; }

  bool contains(const Mat& A) const;
  bool is_abelian() const;
  bool operator==(const Subalgebra& o) const;
  bool operator!=(const Subalgebra& o) const { return !(*this == o); }

  /// Image under X -> g X g^(-1), re-spanned.
  Subalgebra conjugated(const Mat& g) const;

 private:
  Subalgebra() = default;
  int n_ = 0;
  FieldPtr field_;
  std::vector<Mat> basis_;
  Mat rref_rows_;  // dim x n^2, reduced echelon rows
  std::vector<int> pivots_;
  bool bracket_closed_ = false;

  friend Subalgebra make_span(const FieldPtr&, int, const std::vector<Mat>&);
};

/// {x in sl_n : [x, h] in H for all h in H}.
Subalgebra normalizer(const Subalgebra& H);

/// Lower central series H, [H,H], [H,[H,H]], ... reaches zero.
bool is_nilpotent(const Subalgebra& H);

/// Nilpotent and self-normalizing.
bool is_cartan(const Subalgebra& H);

struct RootDecomposition {
  Subalgebra cartan;
  /// Root functionals as eigenvalue tuples relative to the stored basis of H,
  /// sorted canonically; roots[i] pairs with spaces[i].
  std::vector<std::vector<FieldElement>> roots;
  std::vector<std::vector<Mat>> spaces;

  const std::vector<Mat>* space_of(const std::vector<FieldElement>& root) const;
};

/// Simultaneous diagonalization of x -> [x, h] over sl_n for h running over
/// a basis of the abelian subalgebra H; absent when some adjoint operator is
/// not diagonalizable over the field.
std::optional<RootDecomposition> root_decomposition(const Subalgebra& H);

struct CartanReport {
  bool bracket_closed = false;
  bool nilpotent = false;
  bool self_normalizing = false;
  bool abelian = false;
  bool has_root_decomposition = false;
  bool condition_b = false;  // [L_a, L_-a] one-dimensional for nonzero roots
  bool condition_c = false;  // root strings terminate before char(F) steps
  bool is_cartan = false;
  bool is_classical = false;
};

/// Full classical-Cartan diagnostic; never throws, failures are reported.
CartanReport is_classical_cartan(const Subalgebra& H);

/// Every cross pair of basis elements Killing-orthogonal.
bool killing_orthogonal(const Subalgebra& A, const Subalgebra& B);

/// The span of the diagonal traceless matrices.
Subalgebra diagonal_cartan(const FieldPtr& F, int n);

/// Verifies that sl_n(F) has zero center and equals its derived algebra.
/// Requires char(F) not dividing n.
bool classical_algebra_check(int n, const FieldPtr& F);

/// Independent route to the Killing form: Tr(ad A . ad B) computed from the
/// adjoint representation on sl_n. Cross-check for the closed form.
FieldElement killing_via_adjoint(const Mat& A, const Mat& B);

}  // namespace cod
