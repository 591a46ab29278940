#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace cod {

class FiniteField;
using FieldPtr = std::shared_ptr<const FiniteField>;

/// Element of GF(p^m), stored as the base-p encoding of its residue
/// polynomial (coefficients ascending). Elements remember their owning
/// field; arithmetic between elements of different fields is an error.
class FieldElement {
 public:
  FieldElement() = default;

  const FiniteField& field() const;
  long encoded() const { return enc_; }
  bool is_zero() const { return enc_ == 0; }
  bool is_one() const { return enc_ == 1; }
  std::vector<long> coeffs() const;

  /// Position in the canonical element ordering: integer value for prime
  /// fields, low-degree-first coefficient tuples compared lexicographically
  /// for extensions.
  long canonical_rank() const;

  FieldElement operator-() const;
  FieldElement operator+(const FieldElement& o) const;
  FieldElement operator-(const FieldElement& o) const;
  FieldElement operator*(const FieldElement& o) const;
  FieldElement operator/(const FieldElement& o) const;
  FieldElement inverse() const;
  FieldElement pow(long long e) const;

  bool operator==(const FieldElement& o) const;
  bool operator!=(const FieldElement& o) const { return !(*this == o); }
  bool operator<(const FieldElement& o) const;  // canonical ordering

  std::string str() const;

 private:
  friend class FiniteField;
  FieldElement(const FiniteField* f, long enc) : field_(f), enc_(enc) {}
  const FiniteField* require_field() const;
  const FiniteField* same_field(const FieldElement& o) const;

  const FiniteField* field_ = nullptr;
  long enc_ = 0;
};

/// GF(p^m) with exact residue arithmetic. Instances are interned: get()
/// returns the same object for the same (p, m, modulus), so pointer
/// equality decides field identity. Immutable after construction and safe
/// to share across threads.
class FiniteField {
 public:
  /// Field with the default modulus: the lexicographically smallest monic
  /// irreducible polynomial of degree m over GF(p) (coefficients compared
  /// low-degree-first). For m = 1 the modulus is the identity polynomial x.
  static FieldPtr get(long p, int m);
  /// Field with an explicit monic irreducible modulus (ascending
  /// coefficients, length m + 1).
  static FieldPtr get(long p, int m, const std::vector<long>& modulus);

  long characteristic() const { return p_; }
  int degree() const { return m_; }
  long size() const { return q_; }
  const std::vector<long>& modulus() const { return modulus_; }

  FieldElement zero() const { return FieldElement(this, 0); }
  FieldElement one() const { return FieldElement(this, 1); }
  /// Multiple of 1 in the prime subfield: v mod p embedded as a constant.
  FieldElement from_int(long v) const;
  FieldElement from_coeffs(const std::vector<long>& c) const;
  FieldElement from_encoded(long enc) const;
  FieldElement by_rank(long r) const;
  std::vector<FieldElement> elements() const;          // canonical order
  std::vector<FieldElement> nonzero_elements() const;  // canonical order

  // Raw encoded arithmetic; plumbing for the dense linear algebra layer.
  long raw_add(long a, long b) const;
  long raw_sub(long a, long b) const;
  long raw_neg(long a) const;
  long raw_mul(long a, long b) const;
  long raw_inv(long a) const;
  long raw_pow(long a, long long e) const;

  long rank_of_encoded(long enc) const;
  long encoded_of_rank(long r) const;

  ~FiniteField() = default;
  FiniteField(const FiniteField&) = delete;
  FiniteField& operator=(const FiniteField&) = delete;

 private:
  FiniteField(long p, int m, std::vector<long> modulus);

  long p_ = 0;
  int m_ = 0;
  long q_ = 0;
  std::vector<long> modulus_;           // ascending, monic, length m + 1
  std::vector<std::vector<long>> red_;  // t^(m+i) reduced mod modulus
  std::vector<long> inv_;               // inverse table
  std::vector<long> mul_;               // q*q product table for small extensions
};

/// Sum of the Galois conjugates x + x^p + ... + x^(p^(m-1)); the result
/// lies in the prime subfield and is returned as an element of GF(p).
FieldElement field_trace(const FieldElement& x);

/// Embeds an element of the prime field GF(p) into an extension of the
/// same characteristic. The only implicit-looking identification allowed;
/// everything else must stay within one field.
FieldElement embed(const FieldElement& prime_element, const FieldPtr& ext);

long multiplicative_order(const FieldElement& x);

/// Smallest element (canonical ordering) of multiplicative order q - 1.
FieldElement multiplicative_generator(const FiniteField& F);

/// Smallest element of multiplicative order exactly n, or absent when
/// n does not divide q - 1.
std::optional<FieldElement> primitive_root_of_unity(const FiniteField& F, long n);

/// Smallest y with y^n = x, found by exhaustive scan in canonical order;
/// absent when x has no nth root.
std::optional<FieldElement> nth_root(const FieldElement& x, long n);

struct CubeCoset {
  int index;              // which coset of the cubes x lies in: 0, 1 or 2
  FieldElement non_cube;  // the chosen coset representative z
};

/// Classifies x by the coset of the index-3 subgroup of cubes it lies in,
/// fixing z = the smallest non-cube; requires 3 | (q - 1) and x != 0.
/// The index map is a group homomorphism onto Z_3.
CubeCoset cube_coset_index(const FieldElement& x);

}  // namespace cod
