#pragma once

#include <string>
#include <vector>

#include "cod/lie.hpp"

namespace cod {

/// An ordered list of subalgebras claimed to decompose sl_n, with one label
/// per component ("H_inf", "H_0", ...).
struct Decomposition {
  int n = 0;
  FieldPtr field;
  std::vector<Subalgebra> components;
  std::vector<std::string> labels;
};

struct CodReport {
  bool spans_directly = false;
  std::vector<std::vector<bool>> orthogonal_pairs;  // diagonal entries vacuously true
  std::vector<CartanReport> component_reports;
  bool is_cod = false;
  std::string note;  // set when the ambient Killing form is unusable

  bool all_orthogonal() const;
  bool all_classical() const;
};

/// Clock and shift generators over F: D = diag(1, u, ..., u^(p-1)), the
/// cyclic permutation P, and their products J_(a,b) = D^a P^b.
struct Generators {
  long p = 0;
  FieldPtr field;
  FieldElement u;
  Mat D, P;
  std::vector<Mat> table;  // J_(a,b) at index a*p + b

  const Mat& j(long a, long b) const;
};

Generators build_generators(long p, const FieldPtr& F, const FieldElement& u);

/// The circulant of triangular-number powers of u whose conjugation shifts
/// H_0, ..., H_(p-1) cyclically and fixes H_inf: X[i][j] = u^(T(i-j mod p))
/// with T(k) = k(k+1)/2. Requires p > 2.
Mat build_shift_x(long p, const FieldPtr& F, const FieldElement& u);

/// The (p+1)-component decomposition of sl_p spanned by the J-basis:
/// H_inf = <J_(0,a)> and H_k = <J_(a,ka)> for k in Z_p.
Decomposition build_cod_prime(long p, const FieldPtr& F, const FieldElement& u);

/// The three-term decomposition of sl_2; requires -1 to be a square in F.
Decomposition build_sl2_cod(const FieldPtr& F);

/// Vector in W = GF(p^m) + GF(p^m), the index space of the prime-power
/// construction.
struct WVec {
  FieldElement alpha, beta;
  bool is_zero() const { return alpha.is_zero() && beta.is_zero(); }
};

/// Symplectic basis of W over Z_p for the trace form
/// <(a;b),(a';b')> = Tr(a b' - a' b): e_i span the first summand, f_i the
/// second, and the Gram matrix is standard.
class SymplecticBasis {
 public:
  SymplecticBasis(long p, int m);

  long p() const { return p_; }
  int m() const { return m_; }
  const FieldPtr& extension() const { return ext_; }
  const std::vector<WVec>& e() const { return e_; }
  const std::vector<WVec>& f() const { return f_; }

  /// Coordinates (a_1..a_m; b_1..b_m) of w in this basis, entries in [0, p).
  std::vector<long> coords(const WVec& w) const;

  /// The symplectic form <w, w'>, an element of Z_p returned as a residue.
  long form(const WVec& w, const WVec& wp) const;

  /// The twist exponent B(w, w') = sum of a'_i b_i over the coordinates.
  long twist_exponent(const WVec& w, const WVec& wp) const;

 private:
  long p_;
  int m_;
  FieldPtr ext_;
  std::vector<WVec> e_, f_;
};

SymplecticBasis symplectic_basis(long p, int m);

/// J_w = J_(a_1,b_1) x ... x J_(a_m,b_m) for w with the given coordinates.
Mat j_w(const Generators& gen, const SymplecticBasis& sb, const WVec& w);

/// The (p^m + 1)-component decomposition of sl_{p^m}:
/// H_inf = <J_(0;lambda)> and H_alpha = <J_(lambda; alpha lambda)>.
/// Requires m >= 2; for p = 2 additionally a square root of -1 in F.
Decomposition build_cod_prime_power(long p, int m, const FieldPtr& F, const FieldElement& u);

/// The four-component family J_3(a, b) of sl_3 with twist factors 1, u, u^2.
/// Always a direct, pairwise-orthogonal sum; classicality of the components
/// depends on (a, b) and is not asserted here.
Decomposition build_j3(const FieldPtr& F, const FieldElement& u, const FieldElement& a,
                       const FieldElement& b);

/// Checks the three defining properties: the component bases span sl_n
/// directly, all cross-component pairs are Killing-orthogonal, and every
/// component is a classical Cartan subalgebra. Failures are reported, never
/// thrown. Component checks run in parallel (capped by COD_THREADS).
CodReport verify_cod(const Decomposition& dec);

}  // namespace cod
