// Acceptance suite: one machine-checked criterion per section, one verdict
// line each, exit status 0 only if every criterion passes within its time
// budget. All checks are exact.

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "cod/classify.hpp"
#include "cod/decomposition.hpp"

using namespace cod;

namespace {

int failures = 0;

bool expect(bool ok, const char* what) {
  if (!ok) std::printf("    FAILED: %s\n", what);
  return ok;
}

using Clock = std::chrono::steady_clock;

void report(int index, const char* title, bool ok, double seconds, double budget) {
  bool in_time = seconds < budget;
  if (!in_time) std::printf("    FAILED: runtime %.2fs exceeds the %.0fs budget\n", seconds, budget);
  bool pass = ok && in_time;
  if (!pass) ++failures;
  std::printf("criterion %d (%s): %s  [%.2fs]\n", index, title, pass ? "PASS" : "FAIL", seconds);
}

Mat random_traceless(const FieldPtr& F, int n, std::mt19937_64& rng) {
  Mat M(F, n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M.set_raw(i, j, static_cast<long>(rng() % F->size()));
  long sum = 0;
  for (int i = 0; i + 1 < n; ++i) sum = F->raw_add(sum, M.raw(i, i));
  M.set_raw(n - 1, n - 1, F->raw_neg(sum));
  return M;
}

Mat random_invertible(const FieldPtr& F, int n, std::mt19937_64& rng) {
  while (true) {
    Mat M(F, n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) M.set_raw(i, j, static_cast<long>(rng() % F->size()));
    if (rank(M) == n) return M;
  }
}

bool check_cod(const Decomposition& dec, size_t components, int dim) {
  bool ok = expect(dec.components.size() == components, "component count");
  for (const Subalgebra& c : dec.components) ok &= expect(c.dim() == dim, "component dimension");
  CodReport rep = verify_cod(dec);
  ok &= expect(rep.spans_directly, "direct sum");
  ok &= expect(rep.all_orthogonal(), "pairwise Killing-orthogonality");
  ok &= expect(rep.all_classical(), "all components classical");
  ok &= expect(rep.is_cod, "overall verdict");
  return ok;
}

// --- criterion 1: the prime case -------------------------------------------------

bool criterion1() {
  auto F7 = FiniteField::get(7, 1);
  auto F11 = FiniteField::get(11, 1);
  bool ok = check_cod(build_cod_prime(3, F7, F7->from_int(2)), 4, 2);
  ok &= check_cod(build_cod_prime(5, F11, F11->from_int(4)), 6, 4);
  return ok;
}

// --- criterion 2: the prime-power case --------------------------------------------

bool criterion2() {
  auto F5 = FiniteField::get(5, 1);
  auto F7 = FiniteField::get(7, 1);
  bool ok = check_cod(build_cod_prime_power(2, 2, F5, -F5->one()), 5, 3);
  ok &= check_cod(build_cod_prime_power(3, 2, F7, F7->from_int(2)), 10, 8);
  return ok;
}

// --- criterion 3: structure constants ----------------------------------------------

bool structure_constants_prime(long p, const FieldPtr& F, const FieldElement& u) {
  Generators gen = build_generators(p, F, u);
  bool ok = true;
  for (long a = 0; a < p && ok; ++a)
    for (long b = 0; b < p && ok; ++b) {
      ok &= expect(gen.j(a, b).trace().is_zero() == (a != 0 || b != 0), "trace vanishing");
      ok &= expect(gen.P.pow(b) * gen.D.pow(a) == (gen.D.pow(a) * gen.P.pow(b)).scaled(u.pow(-a * b)),
                   "commutation rule");
      for (long c = 0; c < p && ok; ++c)
        for (long d = 0; d < p && ok; ++d) {
          ok &= expect(gen.j(a, b) * gen.j(c, d) == gen.j(a + c, b + d).scaled(u.pow(-b * c)),
                       "product rule");
          ok &= expect(bracket(gen.j(a, b), gen.j(c, d)) ==
                           gen.j(a + c, b + d).scaled(u.pow(-b * c) - u.pow(-a * d)),
                       "bracket rule");
        }
    }
  return ok;
}

bool criterion3() {
  auto F7 = FiniteField::get(7, 1);
  auto F11 = FiniteField::get(11, 1);
  auto F13 = FiniteField::get(13, 1);
  bool ok = structure_constants_prime(3, F7, F7->from_int(2));
  ok &= structure_constants_prime(5, F11, F11->from_int(4));

  // Kronecker-indexed identities over W for (p, m) = (3, 2), all pairs
  FieldElement u = F7->from_int(2);
  Generators gen = build_generators(3, F7, u);
  SymplecticBasis sb(3, 2);
  const FieldPtr& E = sb.extension();
  std::vector<WVec> all;
  for (const FieldElement& a : E->elements())
    for (const FieldElement& b : E->elements()) all.push_back(WVec{a, b});
  std::vector<Mat> jmats;
  jmats.reserve(all.size());
  for (const WVec& w : all) jmats.push_back(j_w(gen, sb, w));
  auto index_of = [&](const WVec& w) {
    // the element list is in canonical-rank order
    return static_cast<size_t>(w.alpha.canonical_rank() * E->size() + w.beta.canonical_rank());
  };
  for (size_t i = 0; i < all.size() && ok; ++i)
    for (size_t j = 0; j < all.size() && ok; ++j) {
      const WVec &w = all[i], &wp = all[j];
      WVec sum{w.alpha + wp.alpha, w.beta + wp.beta};
      const Mat& Jsum = jmats[index_of(sum)];
      long B = sb.twist_exponent(w, wp), Bt = sb.twist_exponent(wp, w);
      ok &= expect(jmats[i] * jmats[j] == Jsum.scaled(u.pow(-B)), "Kronecker product rule");
      ok &= expect(bracket(jmats[i], jmats[j]) == Jsum.scaled(u.pow(-B) - u.pow(-Bt)),
                   "Kronecker bracket rule");
      ok &= expect(u.pow(-B) - u.pow(-Bt) == u.pow(-Bt) * (u.pow(sb.form(w, wp)) - F7->one()),
                   "symplectic-form route");
    }

  // twisted structure constants over GF(7) and GF(13), all 81 pairs each
  for (auto [F, uu, zz] : {std::tuple<FieldPtr, long, long>{F7, 2, 2}, {F13, 3, 2}}) {
    FieldElement ue = F->from_int(uu), ze = F->from_int(zz);
    TwistedBasis jp = twisted_basis(F, ue, ze);        // verified exhaustively inside
    TwistedBasis jpp = twisted_basis(F, ue, ze * ze);  // z^2 variant likewise
    ok &= expect(jp.zeta == ze && jpp.zeta == ze * ze, "twisted bases built");
  }
  return ok;
}

// --- criterion 4: the sl_2 survey ----------------------------------------------------

bool criterion4() {
  bool ok = true;
  for (long q = 5; q <= 97; ++q) {
    bool prime = true;
    for (long d = 2; d * d <= q; ++d)
      if (q % d == 0) prime = false;
    if (!prime) continue;
    SurveyRow row = sl2_survey(FiniteField::get(q, 1));  // brute force vs formula inside
    ok &= expect(row.exists == (q % 4 == 1), "existence matches q = 1 mod 4");
    if (row.exists) {
      ok &= expect(row.witness.has_value() && verify_cod(*row.witness).is_cod, "verified witness");
    } else {
      ok &= expect(row.max_orthogonal_classical.has_value() && *row.max_orthogonal_classical == 2,
                   "exactly two orthogonal classical Cartans");
    }
  }
  return ok;
}

// --- criterion 5: the sl_3 survey ----------------------------------------------------

bool criterion5() {
  bool ok = true;
  for (long q : {5L, 7L, 11L, 13L, 17L, 19L, 23L}) {
    SurveyRow row = sl3_survey(FiniteField::get(q, 1));  // nonexistence certified two ways inside
    ok &= expect(row.exists == ((q - 1) % 3 == 0), "existence matches 3 | (q - 1)");
    if (row.exists)
      ok &= expect(row.witness.has_value() && verify_cod(*row.witness).is_cod, "verified witness");
  }
  return ok;
}

// --- criterion 6: two conjugacy classes ------------------------------------------------

bool criterion6() {
  bool ok = true;
  for (long q : {7L, 13L}) {
    FieldPtr F = FiniteField::get(q, 1);
    FieldElement u = *primitive_root_of_unity(*F, 3);
    FieldElement z = cube_coset_index(F->one()).non_cube;
    ok &= expect(j3_class_count(F) == 2, "exactly two classes");

    std::vector<CaseVerdict> verdicts = case_check_48(F, u, z);
    int unsolvable = 0;
    for (const CaseVerdict& v : verdicts) unsolvable += v.solvable ? 0 : 1;
    ok &= expect(unsolvable == 48, "48/48 cases unsolvable");

    // control: a cube in place of z admits a solution
    FieldElement cube = z.pow(3);
    std::vector<CaseVerdict> control = detail::scaling_case_solutions(F, u, cube);
    bool some = false;
    for (const CaseVerdict& v : control) some |= v.solvable;
    ok &= expect(some, "control run with a cube finds a solvable case");

    PsiMap psi = psi_verify(F, u, z);  // all 28 bracket checks; throws on failure
    TwistedBasis Jp = twisted_basis(F, u, z);
    TwistedBasis Jpp = twisted_basis(F, u, z * z);
    FieldElement one = F->one();
    ok &= expect(psi.apply(bracket(Jpp.at(1, 0), Jpp.at(0, 1))) == Jp.at(1, 2).scaled(z * (one - u)),
                 "printed identity (1)");
    ok &= expect(psi.apply(bracket(Jpp.at(0, 1), Jpp.at(2, 2))) ==
                     Jp.at(2, 0).scaled(-(z * z) * (u - one)),
                 "printed identity (13)");
    ok &= expect(psi.apply(bracket(Jpp.at(2, 2), Jpp.at(2, 1))) ==
                     Jp.at(1, 0).scaled(-(z * z) * (u * u - u)),
                 "printed identity (23)");
  }
  // GF(7) uses z = 2
  ok &= expect(cube_coset_index(FiniteField::get(7, 1)->one()).non_cube ==
                   FiniteField::get(7, 1)->from_int(2),
               "z = 2 over GF(7)");
  return ok;
}

// --- criterion 7: unique COD of sl_3 -----------------------------------------------------

bool criterion7() {
  Sl3UniquenessReport r7 = uniqueness_certificate_sl3(FiniteField::get(7, 1));
  bool ok = expect(r7.certified, "GF(7) certificate");
  ok &= expect(r7.pairs_total == 36 && r7.pairs_cod == 12, "12 of 36 pairs are CODs over GF(7)");
  Sl3UniquenessReport r13 = uniqueness_certificate_sl3(FiniteField::get(13, 1));
  ok &= expect(r13.certified, "GF(13) certificate");
  ok &= expect(r13.pairs_total == 144 && r13.pairs_cod == 48, "48 of 144 pairs are CODs over GF(13)");
  return ok;
}

// --- criterion 8: the non-classical orthogonal decomposition ------------------------------

bool criterion8() {
  auto F = FiniteField::get(7, 1);
  Decomposition dec;
  dec.n = 2;
  dec.field = F;
  dec.components.push_back(Subalgebra::span_close({Mat::from_ints(F, {{1, 0}, {0, -1}})}));
  dec.components.push_back(Subalgebra::span_close({Mat::from_ints(F, {{0, 1}, {-1, 0}})}));
  dec.components.push_back(Subalgebra::span_close({Mat::from_ints(F, {{0, 1}, {1, 0}})}));
  dec.labels = {"H_0", "H_1", "H_2"};
  CodReport rep = verify_cod(dec);
  bool ok = expect(rep.spans_directly, "direct sum");
  ok &= expect(rep.all_orthogonal(), "pairwise orthogonality");
  ok &= expect(rep.component_reports[0].is_classical, "first component classical");
  ok &= expect(!rep.component_reports[1].is_classical, "second component not classical");
  ok &= expect(!rep.component_reports[1].has_root_decomposition,
               "second component lacks a root-space decomposition");
  ok &= expect(rep.component_reports[2].is_classical, "third component classical");
  ok &= expect(!rep.is_cod, "not a COD");
  return ok;
}

// --- criterion 9: randomized exact property suites -----------------------------------------

bool criterion9() {
  bool ok = true;
  std::mt19937_64 rng(20240915);
  for (long q : {7L, 13L}) {
    FieldPtr F = FiniteField::get(q, 1);
    for (int it = 0; it < 1000 && ok; ++it) {
      Mat A = random_traceless(F, 3, rng), B = random_traceless(F, 3, rng),
          C = random_traceless(F, 3, rng);
      Mat jac = bracket(bracket(A, B), C) + bracket(bracket(B, C), A) + bracket(bracket(C, A), B);
      ok &= expect(jac.is_zero(), "Jacobi identity");
      ok &= expect(killing(bracket(A, B), C) == killing(A, bracket(B, C)), "Killing associativity");
      ok &= expect(killing(A, B) == killing(B, A), "Killing symmetry");
      ok &= expect(killing(A, B) == killing_via_adjoint(A, B), "2n Tr(AB) = Tr(ad A ad B)");
    }
    // conjugation invariance of the verifier flags, 1000 conjugations
    FieldElement u = *primitive_root_of_unity(*F, 3);
    Decomposition dec = build_cod_prime(3, F, u);
    for (int it = 0; it < 1000 && ok; ++it) {
      Mat g = random_invertible(F, 3, rng);
      Decomposition conj = dec;
      for (Subalgebra& c : conj.components) c = c.conjugated(g);
      CodReport rep = verify_cod(conj);
      ok &= expect(rep.is_cod && rep.spans_directly && rep.all_orthogonal() && rep.all_classical(),
                   "verifier flags under conjugation");
    }
  }
  return ok;
}

template <typename Fn>
void run(int index, const char* title, double budget, Fn&& fn) {
  auto start = Clock::now();
  bool ok = false;
  try {
    ok = fn();
  } catch (const std::exception& e) {
    std::printf("    FAILED: exception: %s\n", e.what());
    ok = false;
  }
  double seconds = std::chrono::duration<double>(Clock::now() - start).count();
  report(index, title, ok, seconds, budget);
}

}  // namespace

int main() {
  std::printf("acceptance suite: exact checks, per-criterion time budgets\n");
  run(1, "prime-case decompositions verify", 1.0, criterion1);
  run(2, "prime-power decompositions verify", 60.0, criterion2);
  run(3, "structure constants hold exactly", 60.0, criterion3);
  run(4, "sl_2 survey over primes 5..97", 30.0, criterion4);
  run(5, "sl_3 survey with certified nonexistence", 60.0, criterion5);
  run(6, "two J_3 classes, 48 refutations, psi verified", 60.0, criterion6);
  run(7, "unique COD of sl_3 up to conjugacy", 600.0, criterion7);
  run(8, "orthogonal but non-classical example detected", 10.0, criterion8);
  run(9, "randomized exact property suites", 120.0, criterion9);
  if (failures == 0) {
    std::printf("all acceptance criteria passed\n");
    return 0;
  }
  std::printf("%d criterion(s) failed\n", failures);
  return 1;
}
