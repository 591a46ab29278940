#include "cod/decomposition.hpp"

#include <sstream>
#include <stdexcept>

#include "cod/parallel.hpp"

namespace cod {

namespace {

bool is_prime_long(long p) {
  if (p < 2) return false;
  for (long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

void check_char_conditions(long p, const FiniteField& F) {
  long c = F.characteristic();
  if (c == 2 || c == 3 || c == p)
    throw std::domain_error("coefficient characteristic must avoid 2, 3 and p");
}

void check_order_p(const FieldElement& u, long p) {
  if (u.is_zero() || multiplicative_order(u) != p)
    throw std::domain_error("u must have multiplicative order exactly p");
}

void check_shape(const Decomposition& dec) {
  if (static_cast<int>(dec.components.size()) != dec.n + 1)
    throw std::logic_error("constructed decomposition has a wrong component count");
  for (const Subalgebra& c : dec.components)
    if (c.dim() != dec.n - 1)
      throw std::logic_error("constructed decomposition has a wrong component dimension");
}

}  // namespace

bool CodReport::all_orthogonal() const {
  for (size_t i = 0; i < orthogonal_pairs.size(); ++i)
    for (size_t j = i + 1; j < orthogonal_pairs.size(); ++j)
      if (!orthogonal_pairs[i][j]) return false;
  return true;
}

bool CodReport::all_classical() const {
  for (const CartanReport& r : component_reports)
    if (!r.is_classical) return false;
  return true;
}

// --- clock and shift generators -------------------------------------------------

const Mat& Generators::j(long a, long b) const {
  long am = ((a % p) + p) % p, bm = ((b % p) + p) % p;
  return table[static_cast<size_t>(am * p + bm)];
}

Generators build_generators(long p, const FieldPtr& F, const FieldElement& u) {
  if (!is_prime_long(p)) throw std::invalid_argument("p must be prime");
  check_char_conditions(p, *F);
  if (&u.field() != F.get()) throw std::invalid_argument("u must live in the coefficient field");
  check_order_p(u, p);
  int n = static_cast<int>(p);
  Mat D(F, n, n);
  FieldElement pw = F->one();
  for (int i = 0; i < n; ++i) {
    D.set(i, i, pw);
    pw = pw * u;
  }
  Mat P(F, n, n);
  P.set_raw(0, n - 1, 1);
  for (int i = 1; i < n; ++i) P.set_raw(i, i - 1, 1);

  Generators gen{p, F, u, D, P, {}};
  gen.table.reserve(static_cast<size_t>(p * p));
  for (long a = 0; a < p; ++a)
    for (long b = 0; b < p; ++b) gen.table.push_back(D.pow(a) * P.pow(b));
  return gen;
}

Mat build_shift_x(long p, const FieldPtr& F, const FieldElement& u) {
  if (p <= 2) throw std::domain_error("the shift conjugator needs p > 2");
  check_order_p(u, p);
  int n = static_cast<int>(p);
  Mat X(F, n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      long k = ((i - j) % p + p) % p;
      X.set(i, j, u.pow(k * (k + 1) / 2));
    }
  return X;
}

Decomposition build_cod_prime(long p, const FieldPtr& F, const FieldElement& u) {
  if (p == 2) throw std::domain_error("use the sl_2 construction for p = 2");
  Generators gen = build_generators(p, F, u);
  Decomposition dec{static_cast<int>(p), F, {}, {}};
  std::vector<Mat> hinf;
  for (long a = 1; a < p; ++a) hinf.push_back(gen.j(0, a));
  dec.components.push_back(Subalgebra::span_close(hinf));
  dec.labels.push_back("H_inf");
  for (long k = 0; k < p; ++k) {
    std::vector<Mat> hk;
    for (long a = 1; a < p; ++a) hk.push_back(gen.j(a, k * a));
    dec.components.push_back(Subalgebra::span_close(hk));
    dec.labels.push_back("H_" + std::to_string(k));
  }
  check_shape(dec);
  return dec;
}

Decomposition build_sl2_cod(const FieldPtr& F) {
  if (F->characteristic() <= 3) throw std::domain_error("characteristic must exceed 3");
  if (!nth_root(-F->one(), 2).has_value())
    throw std::domain_error("-1 is not a square: sl_2 has no classical orthogonal decomposition");
  Decomposition dec{2, F, {}, {}};
  dec.components.push_back(Subalgebra::span_close({Mat::from_ints(F, {{1, 0}, {0, -1}})}));
  dec.components.push_back(Subalgebra::span_close({Mat::from_ints(F, {{0, 1}, {-1, 0}})}));
  dec.components.push_back(Subalgebra::span_close({Mat::from_ints(F, {{0, 1}, {1, 0}})}));
  dec.labels = {"H_0", "H_1", "H_2"};
  check_shape(dec);
  return dec;
}

// --- symplectic basis of W -------------------------------------------------------

SymplecticBasis::SymplecticBasis(long p, int m) : p_(p), m_(m) {
  if (!is_prime_long(p)) throw std::invalid_argument("p must be prime");
  if (m < 1) throw std::invalid_argument("extension degree must be >= 1");
  ext_ = FiniteField::get(p, m);
  // e_i = (t^(i-1); 0): the power basis of the first summand.
  std::vector<FieldElement> power;
  for (int i = 0; i < m; ++i) {
    std::vector<long> c(static_cast<size_t>(m), 0);
    c[static_cast<size_t>(i)] = 1;
    power.push_back(ext_->from_coeffs(c));
    e_.push_back(WVec{power.back(), ext_->zero()});
  }
  // f_j = (0; beta_j) with the trace-dual basis: Tr(t^i beta_j) = delta_ij.
  auto F_p = FiniteField::get(p, 1);
  Mat gram(F_p, m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      gram.set(i, j, field_trace(power[static_cast<size_t>(i)] * power[static_cast<size_t>(j)]));
  Mat duals = gram.inverse();  // column j = coefficients of beta_j in the power basis
  for (int j = 0; j < m; ++j) {
    FieldElement beta = ext_->zero();
    for (int k = 0; k < m; ++k)
      beta = beta + ext_->from_int(duals.raw(k, j)) * power[static_cast<size_t>(k)];
    f_.push_back(WVec{ext_->zero(), beta});
  }
  // the construction forces the standard symplectic Gram matrix; verify it
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      if (form(e_[static_cast<size_t>(i)], f_[static_cast<size_t>(j)]) != (i == j ? 1 : 0) ||
          form(e_[static_cast<size_t>(i)], e_[static_cast<size_t>(j)]) != 0 ||
          form(f_[static_cast<size_t>(i)], f_[static_cast<size_t>(j)]) != 0)
        throw std::logic_error("symplectic basis failed its Gram-matrix check");
    }
}

std::vector<long> SymplecticBasis::coords(const WVec& w) const {
  if (&w.alpha.field() != ext_.get() || &w.beta.field() != ext_.get())
    throw std::invalid_argument("vector not over the expected extension field");
  std::vector<long> out;
  out.reserve(static_cast<size_t>(2 * m_));
  // first-summand coordinates: coefficients of alpha in the power basis
  for (long c : w.alpha.coeffs()) out.push_back(c);
  // second-summand coordinates against the dual basis: b_i = Tr(t^i beta)
  for (int i = 0; i < m_; ++i)
    out.push_back(field_trace(e_[static_cast<size_t>(i)].alpha * w.beta).encoded());
  return out;
}

long SymplecticBasis::form(const WVec& w, const WVec& wp) const {
  return field_trace(w.alpha * wp.beta - wp.alpha * w.beta).encoded();
}

long SymplecticBasis::twist_exponent(const WVec& w, const WVec& wp) const {
  std::vector<long> cw = coords(w), cwp = coords(wp);
  long s = 0;
  for (int i = 0; i < m_; ++i)
    s = (s + cwp[static_cast<size_t>(i)] * cw[static_cast<size_t>(m_ + i)]) % p_;
  return s;
}

SymplecticBasis symplectic_basis(long p, int m) { return SymplecticBasis(p, m); }

Mat j_w(const Generators& gen, const SymplecticBasis& sb, const WVec& w) {
  std::vector<long> c = sb.coords(w);
  Mat acc = gen.j(c[0], c[static_cast<size_t>(sb.m())]);
  for (int i = 1; i < sb.m(); ++i)
    acc = kron(acc, gen.j(c[static_cast<size_t>(i)], c[static_cast<size_t>(sb.m() + i)]));
  return acc;
}

Decomposition build_cod_prime_power(long p, int m, const FieldPtr& F, const FieldElement& u) {
  if (m < 2) throw std::invalid_argument("the prime-power construction needs m >= 2");
  check_char_conditions(p, *F);
  check_order_p(u, p);
  if (p == 2 && !nth_root(-F->one(), 2).has_value())
    throw std::domain_error("p = 2 needs a square root of -1 in the coefficient field");
  Generators gen = build_generators(p, F, u);
  SymplecticBasis sb(p, m);
  const FieldPtr& E = sb.extension();

  long n = 1;
  for (int i = 0; i < m; ++i) n *= p;
  Decomposition dec{static_cast<int>(n), F, {}, {}};

  std::vector<Mat> hinf;
  for (const FieldElement& lam : E->nonzero_elements())
    hinf.push_back(j_w(gen, sb, WVec{E->zero(), lam}));
  dec.components.push_back(Subalgebra::span_close(hinf));
  dec.labels.push_back("H_inf");

  for (const FieldElement& alpha : E->elements()) {
    std::vector<Mat> h;
    for (const FieldElement& lam : E->nonzero_elements())
      h.push_back(j_w(gen, sb, WVec{lam, alpha * lam}));
    dec.components.push_back(Subalgebra::span_close(h));
    dec.labels.push_back("H_" + alpha.str());
  }
  check_shape(dec);
  return dec;
}

// --- the J_3 family ---------------------------------------------------------------

namespace {

Mat j3_gen_a(const FieldPtr& F, const FieldElement& c, const FieldElement& d) {
  Mat A(F, 3, 3);
  A.set(0, 1, F->one());
  A.set(1, 2, c);
  A.set(2, 0, c * d);
  return A;
}

Mat j3_gen_b(const FieldPtr& F, const FieldElement& c, const FieldElement& d) {
  Mat B(F, 3, 3);
  B.set(0, 2, F->one());
  B.set(1, 0, c * d);
  B.set(2, 1, d);
  return B;
}

}  // namespace

Decomposition build_j3(const FieldPtr& F, const FieldElement& u, const FieldElement& a,
                       const FieldElement& b) {
  if (F->characteristic() <= 3) throw std::domain_error("characteristic must exceed 3");
  if ((F->size() - 1) % 3 != 0) throw std::domain_error("J_3 needs 3 | (q - 1)");
  if ((u * u + u + F->one()) != F->zero() || u.is_one())
    throw std::domain_error("u must be a primitive cube root of unity");
  if (a.is_zero() || b.is_zero()) throw std::invalid_argument("J_3 parameters must be nonzero");

  Decomposition dec{3, F, {}, {}};
  dec.components.push_back(diagonal_cartan(F, 3));
  FieldElement ca = a, cb = b;
  for (int k = 0; k < 3; ++k) {
    dec.components.push_back(
        Subalgebra::span_close({j3_gen_a(F, ca, cb), j3_gen_b(F, ca, cb)}));
    ca = ca * u;
    cb = cb * u;
  }
  dec.labels = {"H_0", "H_1", "H_2", "H_3"};
  check_shape(dec);
  return dec;
}

// --- verifier ------------------------------------------------------------------------

CodReport verify_cod(const Decomposition& dec) {
  CodReport rep;
  size_t k = dec.components.size();
  const FiniteField& F = *dec.field;
  int n = dec.n;
  int N = n * n - 1;

  // (1) direct sum by one global rank computation
  int total_dim = 0;
  std::vector<Mat> all;
  for (const Subalgebra& c : dec.components) {
    total_dim += c.dim();
    for (const Mat& b : c.basis()) all.push_back(b);
  }
  Mat stacked(dec.field, static_cast<int>(all.size()), n * n);
  for (size_t r = 0; r < all.size(); ++r) {
    std::vector<long> flat = all[r].flatten();
    for (size_t j = 0; j < flat.size(); ++j)
      stacked.set_raw(static_cast<int>(r), static_cast<int>(j), flat[j]);
  }
  rep.spans_directly = (total_dim == N) && (rank(stacked) == N);

  // (2) pairwise orthogonality of all cross-component basis pairs
  bool killing_usable = (2L * n) % F.characteristic() != 0;
  if (!killing_usable)
    rep.note = "Killing form 2n Tr(AB) is identically degenerate: characteristic divides 2n";
  rep.orthogonal_pairs.assign(k, std::vector<bool>(k, killing_usable));
  if (killing_usable) {
    std::vector<std::pair<size_t, size_t>> pairs;
    for (size_t i = 0; i < k; ++i)
      for (size_t j = i + 1; j < k; ++j) pairs.emplace_back(i, j);
    std::vector<char> orth(pairs.size(), 1);
    detail::parallel_for(pairs.size(), [&](size_t idx) {
      auto [i, j] = pairs[idx];
      for (const Mat& x : dec.components[i].basis()) {
        for (const Mat& y : dec.components[j].basis())
          if (!killing(x, y).is_zero()) {
            orth[idx] = 0;
            return;
          }
      }
    });
    for (size_t idx = 0; idx < pairs.size(); ++idx) {
      auto [i, j] = pairs[idx];
      rep.orthogonal_pairs[i][j] = rep.orthogonal_pairs[j][i] = orth[idx] != 0;
    }
  }

  // (3) classical-Cartan reports, one per component
  rep.component_reports.assign(k, CartanReport{});
  detail::parallel_for(k, [&](size_t i) {
    rep.component_reports[i] = is_classical_cartan(dec.components[i]);
  });

  rep.is_cod = rep.spans_directly && killing_usable && rep.all_orthogonal() && rep.all_classical();
  return rep;
}

}  // namespace cod
