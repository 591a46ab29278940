#include "cod/field.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace cod {

namespace {

constexpr long kDeskScaleLimit = 1L << 20;

bool is_prime(long p) {
  if (p < 2) return false;
  for (long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

// --- polynomials over GF(p), ascending coefficient vectors ---------------

using Poly = std::vector<long>;

int pdeg(const Poly& f) {
  for (int i = static_cast<int>(f.size()) - 1; i >= 0; --i)
    if (f[i] != 0) return i;
  return -1;
}

Poly ptrim(Poly f) {
  f.resize(static_cast<size_t>(pdeg(f) + 1));
  return f;
}

long pmodinv(long a, long p) {
  // extended Euclid in GF(p)
  long t = 0, nt = 1, r = p, nr = a % p;
  while (nr != 0) {
    long qt = r / nr;
    std::swap(t -= qt * nt, nt);
    std::swap(r -= qt * nr, nr);
  }
  return ((t % p) + p) % p;
}

Poly pmod(Poly a, const Poly& b, long p) {
  int db = pdeg(b);
  long lead_inv = pmodinv(b[static_cast<size_t>(db)], p);
  int da = pdeg(a);
  while (da >= db) {
    long c = (a[static_cast<size_t>(da)] * lead_inv) % p;
    for (int i = 0; i <= db; ++i) {
      long& x = a[static_cast<size_t>(da - db + i)];
      x = ((x - c * b[static_cast<size_t>(i)]) % p + p) % p;
    }
    da = pdeg(a);
  }
  return ptrim(a);
}

bool poly_irreducible(const Poly& f, long p) {
  int m = pdeg(f);
  if (m < 1) return false;
  if (m == 1) return true;
  // trial division by all monic polynomials of degree <= m/2
  for (int d = 1; 2 * d <= m; ++d) {
    long count = 1;
    for (int i = 0; i < d; ++i) count *= p;  // choices for the low coefficients
    for (long e = 0; e < count; ++e) {
      Poly g(static_cast<size_t>(d + 1), 0);
      long t = e;
      for (int i = 0; i < d; ++i) {
        g[static_cast<size_t>(i)] = t % p;
        t /= p;
      }
      g[static_cast<size_t>(d)] = 1;
      if (pdeg(pmod(f, g, p)) < 0) return false;
    }
  }
  return true;
}

// Lexicographically smallest (coefficients compared low-degree-first) monic
// irreducible polynomial of degree m over GF(p).
Poly default_modulus(long p, int m) {
  Poly f(static_cast<size_t>(m + 1), 0);
  f[static_cast<size_t>(m)] = 1;
  std::vector<long> c(static_cast<size_t>(m), 0);
  while (true) {
    for (int i = 0; i < m; ++i) f[static_cast<size_t>(i)] = c[static_cast<size_t>(i)];
    if (f[0] != 0 && poly_irreducible(f, p)) return f;
    // advance low-degree-first lexicographic order: last coordinate fastest
    int i = m - 1;
    while (i >= 0 && c[static_cast<size_t>(i)] == p - 1) c[static_cast<size_t>(i--)] = 0;
    if (i < 0) throw std::logic_error("no irreducible polynomial found");
    ++c[static_cast<size_t>(i)];
  }
}

struct RegistryKey {
  long p;
  int m;
  std::vector<long> modulus;
  bool operator<(const RegistryKey& o) const {
    return std::tie(p, m, modulus) < std::tie(o.p, o.m, o.modulus);
  }
};

std::map<RegistryKey, FieldPtr>& registry() {
  static std::map<RegistryKey, FieldPtr> r;
  return r;
}

std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

// --- FiniteField ----------------------------------------------------------

FiniteField::FiniteField(long p, int m, std::vector<long> modulus)
    : p_(p), m_(m), modulus_(std::move(modulus)) {
  q_ = 1;
  for (int i = 0; i < m_; ++i) {
    q_ *= p_;
    if (q_ > kDeskScaleLimit) throw std::invalid_argument("field size beyond desk scale");
  }
  if (m_ > 1) {
    // rows for reducing t^(m+i), i = 0..m-2, against the modulus
    Poly t_m(modulus_.begin(), modulus_.end() - 1);  // t^m = -(low part)
    for (auto& c : t_m) c = (p_ - c) % p_;
    Poly cur = t_m;
    for (int i = 0; i < m_ - 1; ++i) {
      cur.resize(static_cast<size_t>(m_), 0);
      red_.push_back(cur);
      // multiply by t and reduce
      Poly next(static_cast<size_t>(m_), 0);
      long top = cur[static_cast<size_t>(m_ - 1)];
      for (int j = m_ - 1; j > 0; --j) next[static_cast<size_t>(j)] = cur[static_cast<size_t>(j - 1)];
      if (top != 0)
        for (int j = 0; j < m_; ++j)
          next[static_cast<size_t>(j)] = (next[static_cast<size_t>(j)] + top * t_m[static_cast<size_t>(j)]) % p_;
      cur = next;
    }
  }
  if (q_ <= 65536) {
    inv_.assign(static_cast<size_t>(q_), 0);
    for (long a = 1; a < q_; ++a) {
      if (inv_[static_cast<size_t>(a)] != 0) continue;
      long b = raw_pow(a, q_ - 2);
      inv_[static_cast<size_t>(a)] = b;
      inv_[static_cast<size_t>(b)] = a;
    }
  }
  if (m_ > 1 && q_ <= 256) {
    std::vector<long> table(static_cast<size_t>(q_ * q_), 0);
    for (long a = 0; a < q_; ++a)
      for (long b = 0; b <= a; ++b) {
        long c = raw_mul(a, b);  // generic path: the table is installed afterwards
        table[static_cast<size_t>(a * q_ + b)] = c;
        table[static_cast<size_t>(b * q_ + a)] = c;
      }
    mul_ = std::move(table);
  }
}

FieldPtr FiniteField::get(long p, int m) {
  if (!is_prime(p)) throw std::invalid_argument("characteristic must be prime");
  if (m < 1) throw std::invalid_argument("extension degree must be >= 1");
  if (m == 1) return get(p, 1, {0, 1});
  return get(p, m, default_modulus(p, m));
}

FieldPtr FiniteField::get(long p, int m, const std::vector<long>& modulus) {
  if (!is_prime(p)) throw std::invalid_argument("characteristic must be prime");
  if (m < 1) throw std::invalid_argument("extension degree must be >= 1");
  if (m == 1) {
    if (modulus != std::vector<long>{0, 1})
      throw std::invalid_argument("prime field modulus must be the identity polynomial x");
  } else {
    if (static_cast<int>(modulus.size()) != m + 1 || modulus.back() != 1)
      throw std::invalid_argument("modulus must be monic of degree m");
    for (long c : modulus)
      if (c < 0 || c >= p) throw std::invalid_argument("modulus coefficient out of range");
    if (!poly_irreducible(modulus, p)) throw std::invalid_argument("modulus is reducible over GF(p)");
  }
  RegistryKey key{p, m, modulus};
  std::lock_guard<std::mutex> lock(registry_mutex());
  auto& reg = registry();
  auto it = reg.find(key);
  if (it != reg.end()) return it->second;
  FieldPtr f(new FiniteField(p, m, modulus));
  reg.emplace(std::move(key), f);
  return f;
}

FieldElement FiniteField::from_int(long v) const {
  long r = ((v % p_) + p_) % p_;
  return FieldElement(this, r);
}

FieldElement FiniteField::from_coeffs(const std::vector<long>& c) const {
  if (static_cast<int>(c.size()) > m_) throw std::invalid_argument("too many coefficients");
  long enc = 0, w = 1;
  for (int i = 0; i < m_; ++i) {
    long ci = i < static_cast<int>(c.size()) ? c[static_cast<size_t>(i)] : 0;
    if (ci < 0 || ci >= p_) throw std::invalid_argument("coefficient out of range");
    enc += ci * w;
    w *= p_;
  }
  return FieldElement(this, enc);
}

FieldElement FiniteField::from_encoded(long enc) const {
  if (enc < 0 || enc >= q_) throw std::invalid_argument("encoded value out of range");
  return FieldElement(this, enc);
}

long FiniteField::rank_of_encoded(long enc) const {
  if (m_ == 1) return enc;
  long r = 0;
  for (int i = 0; i < m_; ++i) {
    r = r * p_ + enc % p_;  // low-degree digit becomes most significant
    enc /= p_;
  }
  return r;
}

long FiniteField::encoded_of_rank(long r) const {
  if (m_ == 1) return r;
  long enc = 0;
  for (int i = 0; i < m_; ++i) {
    enc = enc * p_ + r % p_;
    r /= p_;
  }
  return enc;
}

FieldElement FiniteField::by_rank(long r) const {
  if (r < 0 || r >= q_) throw std::invalid_argument("rank out of range");
  return FieldElement(this, encoded_of_rank(r));
}

std::vector<FieldElement> FiniteField::elements() const {
  std::vector<FieldElement> out;
  out.reserve(static_cast<size_t>(q_));
  for (long r = 0; r < q_; ++r) out.push_back(by_rank(r));
  return out;
}

std::vector<FieldElement> FiniteField::nonzero_elements() const {
  std::vector<FieldElement> out;
  out.reserve(static_cast<size_t>(q_ - 1));
  for (long r = 0; r < q_; ++r) {
    FieldElement e = by_rank(r);
    if (!e.is_zero()) out.push_back(e);
  }
  return out;
}

long FiniteField::raw_add(long a, long b) const {
  if (m_ == 1) {
    long s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  long out = 0, w = 1;
  for (int i = 0; i < m_; ++i) {
    long s = a % p_ + b % p_;
    if (s >= p_) s -= p_;
    out += s * w;
    w *= p_;
    a /= p_;
    b /= p_;
  }
  return out;
}

long FiniteField::raw_neg(long a) const {
  if (m_ == 1) return a == 0 ? 0 : p_ - a;
  long out = 0, w = 1;
  for (int i = 0; i < m_; ++i) {
    long d = a % p_;
    out += (d == 0 ? 0 : p_ - d) * w;
    w *= p_;
    a /= p_;
  }
  return out;
}

long FiniteField::raw_sub(long a, long b) const { return raw_add(a, raw_neg(b)); }

long FiniteField::raw_mul(long a, long b) const {
  if (m_ == 1) return (a * b) % p_;
  if (!mul_.empty()) return mul_[static_cast<size_t>(a * q_ + b)];
  // schoolbook product of residue polynomials, then reduce by the modulus
  long da[8], db[8];
  long conv[16] = {0};
  for (int i = 0; i < m_; ++i) {
    da[i] = a % p_;
    a /= p_;
    db[i] = b % p_;
    b /= p_;
  }
  for (int i = 0; i < m_; ++i) {
    if (da[i] == 0) continue;
    for (int j = 0; j < m_; ++j) conv[i + j] = (conv[i + j] + da[i] * db[j]) % p_;
  }
  for (int k = 2 * m_ - 2; k >= m_; --k) {
    long c = conv[k];
    if (c == 0) continue;
    const auto& row = red_[static_cast<size_t>(k - m_)];
    for (int j = 0; j < m_; ++j) conv[j] = (conv[j] + c * row[static_cast<size_t>(j)]) % p_;
  }
  long out = 0, w = 1;
  for (int i = 0; i < m_; ++i) {
    out += conv[i] * w;
    w *= p_;
  }
  return out;
}

long FiniteField::raw_inv(long a) const {
  if (a == 0) throw std::domain_error("division by zero");
  if (!inv_.empty()) return inv_[static_cast<size_t>(a)];
  return raw_pow(a, q_ - 2);
}

long FiniteField::raw_pow(long a, long long e) const {
  if (e < 0) {
    a = raw_inv(a);
    e = -e;
  }
  if (a == 0) return e == 0 ? 1 : 0;
  if (e >= q_ - 1) e %= q_ - 1;
  long r = 1, base = a;
  while (e > 0) {
    if (e & 1) r = raw_mul(r, base);
    base = raw_mul(base, base);
    e >>= 1;
  }
  return r;
}

// --- FieldElement ----------------------------------------------------------

const FiniteField* FieldElement::require_field() const {
  if (field_ == nullptr) throw std::invalid_argument("uninitialized field element");
  return field_;
}

const FiniteField* FieldElement::same_field(const FieldElement& o) const {
  const FiniteField* f = require_field();
  if (f != o.require_field())
    throw std::invalid_argument("arithmetic between elements of different fields");
  return f;
}

const FiniteField& FieldElement::field() const { return *require_field(); }

std::vector<long> FieldElement::coeffs() const {
  const FiniteField* f = require_field();
  std::vector<long> c(static_cast<size_t>(f->degree()));
  long v = enc_;
  for (auto& ci : c) {
    ci = v % f->characteristic();
    v /= f->characteristic();
  }
  return c;
}

long FieldElement::canonical_rank() const { return require_field()->rank_of_encoded(enc_); }

FieldElement FieldElement::operator-() const {
  const FiniteField* f = require_field();
  return FieldElement(f, f->raw_neg(enc_));
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
  const FiniteField* f = same_field(o);
  return FieldElement(f, f->raw_add(enc_, o.enc_));
}

FieldElement FieldElement::operator-(const FieldElement& o) const {
  const FiniteField* f = same_field(o);
  return FieldElement(f, f->raw_sub(enc_, o.enc_));
}

FieldElement FieldElement::operator*(const FieldElement& o) const {
  const FiniteField* f = same_field(o);
  return FieldElement(f, f->raw_mul(enc_, o.enc_));
}

FieldElement FieldElement::operator/(const FieldElement& o) const {
  const FiniteField* f = same_field(o);
  return FieldElement(f, f->raw_mul(enc_, f->raw_inv(o.enc_)));
}

FieldElement FieldElement::inverse() const {
  const FiniteField* f = require_field();
  return FieldElement(f, f->raw_inv(enc_));
}

FieldElement FieldElement::pow(long long e) const {
  const FiniteField* f = require_field();
  return FieldElement(f, f->raw_pow(enc_, e));
}

bool FieldElement::operator==(const FieldElement& o) const {
  return same_field(o) != nullptr && enc_ == o.enc_;
}

bool FieldElement::operator<(const FieldElement& o) const {
  same_field(o);
  return canonical_rank() < o.canonical_rank();
}

std::string FieldElement::str() const {
  const FiniteField* f = require_field();
  if (f->degree() == 1) return std::to_string(enc_);
  std::ostringstream os;
  os << '[';
  auto c = coeffs();
  for (size_t i = 0; i < c.size(); ++i) {
    if (i) os << ',';
    os << c[i];
  }
  os << ']';
  return os.str();
}

// --- number-theoretic utilities --------------------------------------------

FieldElement field_trace(const FieldElement& x) {
  const FiniteField& F = x.field();
  FieldElement acc = F.zero();
  FieldElement conj = x;
  for (int i = 0; i < F.degree(); ++i) {
    acc = acc + conj;
    conj = conj.pow(F.characteristic());
  }
  auto c = acc.coeffs();
  for (size_t i = 1; i < c.size(); ++i)
    if (c[i] != 0) throw std::logic_error("trace left the prime subfield");
  return FiniteField::get(F.characteristic(), 1)->from_int(c[0]);
}

FieldElement embed(const FieldElement& prime_element, const FieldPtr& ext) {
  const FiniteField& P = prime_element.field();
  if (P.degree() != 1) throw std::invalid_argument("embed expects a prime-field element");
  if (ext->characteristic() != P.characteristic())
    throw std::invalid_argument("embed requires matching characteristic");
  return ext->from_int(prime_element.encoded());
}

long multiplicative_order(const FieldElement& x) {
  if (x.is_zero()) throw std::domain_error("zero has no multiplicative order");
  long n = x.field().size() - 1;
  // order is the smallest divisor d of q-1 with x^d = 1
  std::vector<long> divisors;
  for (long d = 1; d * d <= n; ++d)
    if (n % d == 0) {
      divisors.push_back(d);
      divisors.push_back(n / d);
    }
  std::sort(divisors.begin(), divisors.end());
  for (long d : divisors)
    if (x.pow(d).is_one()) return d;
  throw std::logic_error("element order not found");
}

FieldElement multiplicative_generator(const FiniteField& F) {
  for (long r = 0; r < F.size(); ++r) {
    FieldElement x = F.by_rank(r);
    if (x.is_zero()) continue;
    if (multiplicative_order(x) == F.size() - 1) return x;
  }
  throw std::logic_error("no multiplicative generator found");
}

std::optional<FieldElement> primitive_root_of_unity(const FiniteField& F, long n) {
  if (n <= 0) throw std::invalid_argument("root-of-unity order must be positive");
  if ((F.size() - 1) % n != 0) return std::nullopt;
  for (long r = 0; r < F.size(); ++r) {
    FieldElement x = F.by_rank(r);
    if (x.is_zero()) continue;
    if (multiplicative_order(x) == n) return x;
  }
  return std::nullopt;
}

std::optional<FieldElement> nth_root(const FieldElement& x, long n) {
  if (n <= 0) throw std::invalid_argument("root degree must be positive");
  const FiniteField& F = x.field();
  for (long r = 0; r < F.size(); ++r) {
    FieldElement y = F.by_rank(r);
    if (y.pow(n) == x) return y;
  }
  return std::nullopt;
}

CubeCoset cube_coset_index(const FieldElement& x) {
  const FiniteField& F = x.field();
  if ((F.size() - 1) % 3 != 0)
    throw std::domain_error("cube cosets need 3 | (q - 1)");
  if (x.is_zero()) throw std::domain_error("cube coset of zero is undefined");
  std::vector<char> is_cube(static_cast<size_t>(F.size()), 0);
  for (long r = 0; r < F.size(); ++r) {
    FieldElement y = F.by_rank(r);
    if (!y.is_zero()) is_cube[static_cast<size_t>(y.pow(3).encoded())] = 1;
  }
  FieldElement z = F.zero();
  for (long r = 0; r < F.size(); ++r) {
    FieldElement y = F.by_rank(r);
    if (!y.is_zero() && !is_cube[static_cast<size_t>(y.encoded())]) {
      z = y;
      break;
    }
  }
  for (int i = 0; i < 3; ++i) {
    FieldElement shifted = x / z.pow(i);
    if (is_cube[static_cast<size_t>(shifted.encoded())]) return CubeCoset{i, z};
  }
  throw std::logic_error("cube cosets do not partition the group");
}

}  // namespace cod
