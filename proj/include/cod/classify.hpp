#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "cod/decomposition.hpp"

namespace cod {

struct SurveyRow {
  long q = 0;
  bool exists = false;
  std::optional<Decomposition> witness;
  std::optional<std::string> obstruction;
  /// For sl_2 over fields without i: the verified size of a maximal family
  /// of mutually orthogonal classical Cartan subalgebras (always 2).
  std::optional<int> max_orthogonal_classical;
};

/// Existence survey for sl_2: exhausts the one-parameter normal form
/// <[[0,1],[a,0]]> over F^x, cross-checks the verdict against the
/// fourth-root-of-unity criterion, and returns a verified witness or the
/// obstruction.
SurveyRow sl2_survey(const FieldPtr& F);

/// Existence survey for sl_3: a verified J_3(1,1) witness when a primitive
/// cube root of unity exists; otherwise certifies nonexistence both through
/// the quadratic obstruction t^2 + a t + a^2 and by exhausting the
/// two-parameter normal form for an orthogonal classical pair.
SurveyRow sl3_survey(const FieldPtr& F);

/// Diagonal conjugator diag(1, cbrt((a^-1 c)^2 b^-1 d), cbrt(a^-1 c (b^-1 d)^2))
/// carrying the J_3(a,b) component spans onto the J_3(c,d) component spans;
/// present exactly when a^-1 c and b^-1 d share a cube coset.
std::optional<Mat> lemma_conjugator(const FieldPtr& F, const FieldElement& a,
                                    const FieldElement& b, const FieldElement& c,
                                    const FieldElement& d);

enum class J3ClassTag { kClass11, kClass1Z };

/// Conjugacy certificate: a verified diagonal conjugator from J_3(a,b) to the
/// representative J_3(rep_a, rep_b), composed with the psi map when the
/// representative reached directly is J_3(1, z^2).
struct J3Classification {
  J3ClassTag tag = J3ClassTag::kClass11;
  FieldElement a, b;
  FieldElement z;             // the fixed smallest non-cube
  FieldElement rep_a, rep_b;  // representative reached by the conjugator
  Mat conjugator;
  bool via_psi = false;  // true when rep is (1, z^2) and psi finishes the chain
};

J3Classification classify_j3(const FieldPtr& F, const FieldElement& a, const FieldElement& b);

/// Twisted basis J_(a,b) = D^a P_b for one twist parameter; zeta = 1 gives
/// the plain clock-and-shift basis of sl_3. The bracket structure constants
/// [J_(a,b), J_(c,d)] = zeta^(min(b,d) mod 2) (u^-bc - u^-ad) J_(a+c,b+d)
/// are verified exhaustively at construction.
struct TwistedBasis {
  FieldPtr field;
  FieldElement u, zeta;
  std::array<Mat, 9> table;  // index a*3 + b; (0,0) holds the identity

  const Mat& at(long a, long b) const { return table[static_cast<size_t>(((a % 3 + 3) % 3) * 3 + ((b % 3 + 3) % 3))]; }
};

TwistedBasis twisted_basis(const FieldPtr& F, const FieldElement& u, const FieldElement& zeta);

/// The two twisted bases of the conjugacy analysis: J' with twist z and
/// J'' with twist z^2. Requires z to be a non-cube.
struct J3TwistedBases {
  TwistedBasis jprime;   // twist z
  TwistedBasis jsecond;  // twist z^2
};

J3TwistedBases build_twisted_bases(const FieldPtr& F, const FieldElement& u, const FieldElement& z);

struct CaseAssignment {
  int m, n, k, l, s, t, x, y;
};

/// The 48 component-respecting image assignments for a would-be conjugation
/// from J_3(1,z) onto J_3(1,1), embedded verbatim as static data.
const std::array<CaseAssignment, 48>& case_table();

struct CaseVerdict {
  int index = 0;  // 1-based, matching the table
  CaseAssignment assignment{};
  bool solvable = false;
  /// Eliminated single-variable form of the two residual constraints, e.g.
  /// "z = d^3"; empty when the constraints do not force z modulo cubes.
  std::string forced_relation;
  std::optional<std::array<FieldElement, 4>> witness;  // (alpha, beta, gamma, delta)
};

/// Runs all 48 cases for a non-cube z: each case fixes the images of
/// J'_(1,0), J'_(2,0), J'_(0,1), J'_(0,2) up to scalars (alpha, beta, gamma,
/// delta), derives the forced images of J'_(1,1), J'_(2,2), J'_(1,2), and
/// searches (F^x)^4 exhaustively for scalars satisfying the two residual
/// bracket constraints. All 48 unsolvable certifies that no
/// component-respecting basis-scaling map carries J_3(1,z) to J_3(1,1).
std::vector<CaseVerdict> case_check_48(const FieldPtr& F, const FieldElement& u,
                                       const FieldElement& z);

namespace detail {
/// Same solver without the non-cube requirement on zeta; control runs replace
/// z by a cube and expect a solvable case.
std::vector<CaseVerdict> scaling_case_solutions(const FieldPtr& F, const FieldElement& u,
                                                const FieldElement& zeta);
}  // namespace detail

/// The verified linear map carrying J_3(1, z^2) onto J_3(1, z): fixed images
/// on the J'' basis, extended linearly.
class PsiMap {
 public:
  PsiMap(FieldPtr F, std::array<Mat, 8> domain, std::array<Mat, 8> images);

  Mat apply(const Mat& X) const;
  const std::array<Mat, 8>& domain_basis() const { return domain_; }
  const std::array<Mat, 8>& images() const { return images_; }

 private:
  FieldPtr field_;
  std::array<Mat, 8> domain_, images_;
  Mat solver_;  // stacked domain basis, for coordinate extraction
};

/// Builds psi from its defining table and verifies: bracket preservation on
/// all 28 unordered basis pairs, invertibility, and that each J_3(1, z^2)
/// component span maps onto a J_3(1, z) component span. Any failure throws
/// (it would signal a construction bug, not a mathematical outcome).
PsiMap psi_verify(const FieldPtr& F, const FieldElement& u, const FieldElement& z);

/// Number of conjugacy classes among all (q-1)^2 parameter pairs J_3(a,b),
/// with a case_check_48 run confirming the two classes do not merge.
int j3_class_count(const FieldPtr& F);

struct Sl3UniquenessReport {
  long q = 0;
  long pairs_total = 0;
  long pairs_cod = 0;
  bool orthogonality_forces_twist = false;  // partners of H(a,b) are exactly the u, u^2 twists
  bool cod_iff_same_coset = false;
  bool all_cods_class11 = false;
  bool certified = false;
};

/// Certifies that every decomposition with first component H_0 is a J_3(a,b),
/// that J_3(a,b) verifies as a COD exactly when a and b share a cube coset,
/// and that every COD member classifies into the J_3(1,1) class.
Sl3UniquenessReport uniqueness_certificate_sl3(const FieldPtr& F);

}  // namespace cod
