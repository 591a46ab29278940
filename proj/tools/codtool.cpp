// codtool: batch front end for constructing, verifying and classifying
// orthogonal decompositions of sl_n over finite fields.
//
// Exit codes: 0 = verified (or all cases refuted, as expected),
//             1 = negative mathematical verdict,
//             2 = usage or precondition error.

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "cod/classify.hpp"
#include "cod/decomposition.hpp"
#include "cod/json_io.hpp"

using namespace cod;
using nlohmann::json;

namespace {

struct PrimePower {
  long p;
  int m;
};

std::optional<PrimePower> prime_power_decompose(long x) {
  if (x < 2) return std::nullopt;
  long p = x;
  for (long d = 2; d * d <= x; ++d)
    if (x % d == 0) {
      p = d;
      break;
    }
  int m = 0;
  long r = x;
  while (r % p == 0) {
    r /= p;
    ++m;
  }
  if (r != 1) return std::nullopt;
  return PrimePower{p, m};
}

FieldPtr resolve_field(long q, long p, int m, const std::string& modulus_csv) {
  if (q > 0) {
    auto pp = prime_power_decompose(q);
    if (!pp.has_value()) throw CLI::ValidationError("--q", "q must be a prime power");
    p = pp->p;
    m = pp->m;
  } else if (p <= 0 || m <= 0) {
    throw CLI::ValidationError("--q", "give --q, or --p together with --m");
  }
  if (modulus_csv.empty()) return FiniteField::get(p, m);
  std::vector<long> modulus;
  std::stringstream ss(modulus_csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) modulus.push_back(std::stol(tok));
  return FiniteField::get(p, m, modulus);
}

FieldElement parse_element(const FieldPtr& F, const std::string& text) {
  std::vector<long> coeffs;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) coeffs.push_back(std::stol(tok));
  if (coeffs.size() == 1) return F->from_int(coeffs[0]);
  for (long& c : coeffs) c = ((c % F->characteristic()) + F->characteristic()) % F->characteristic();
  return F->from_coeffs(coeffs);
}

// JSON is the contract and goes to --out (or stdout); the human-readable
// report goes to stderr so both are always emitted together.
void emit(const json& data, const std::string& out_path, const std::string& human, bool json_only) {
  if (!json_only && !human.empty()) std::cerr << human;
  if (out_path.empty()) {
    std::cout << data.dump(2) << "\n";
  } else {
    std::ofstream f(out_path);
    if (!f) throw std::runtime_error("cannot open output file: " + out_path);
    f << data.dump(2) << "\n";
  }
}

std::string describe_report(const Decomposition& dec, const CodReport& rep) {
  std::ostringstream os;
  os << "sl_" << dec.n << " over GF(" << dec.field->size() << "), " << dec.components.size()
     << " components\n";
  os << "  direct sum: " << (rep.spans_directly ? "yes" : "NO") << "\n";
  os << "  pairwise orthogonal: " << (rep.all_orthogonal() ? "yes" : "NO") << "\n";
  for (size_t i = 0; i < dec.components.size(); ++i) {
    const CartanReport& c = rep.component_reports[i];
    os << "  " << dec.labels[i] << " (dim " << dec.components[i].dim() << "): "
       << (c.is_classical ? "classical Cartan" : "NOT classical");
    if (!c.is_classical) {
      os << " [";
      if (!c.bracket_closed) os << " not-bracket-closed";
      if (!c.nilpotent) os << " not-nilpotent";
      if (!c.self_normalizing) os << " not-self-normalizing";
      if (!c.abelian) os << " not-abelian";
      if (c.abelian && !c.has_root_decomposition) os << " no-root-space-decomposition";
      if (c.has_root_decomposition && !c.condition_b) os << " condition-b-fails";
      if (c.has_root_decomposition && !c.condition_c) os << " condition-c-fails";
      os << " ]";
    }
    os << "\n";
  }
  if (!rep.note.empty()) os << "  note: " << rep.note << "\n";
  os << "  verdict: " << (rep.is_cod ? "classical orthogonal decomposition" : "not a COD") << "\n";
  return os.str();
}

int run_construct(long n, long q, long p, int m, const std::string& modulus,
                  const std::string& out, bool json_only) {
  FieldPtr F = resolve_field(q, p, m, modulus);
  auto pp = prime_power_decompose(n);
  if (!pp.has_value()) throw CLI::ValidationError("--n", "n must be a prime power");
  long cp = F->characteristic();
  if (cp == 2 || cp == 3)
    throw CLI::ValidationError("--q", "the coefficient characteristic must exceed 3");
  if (cp == pp->p)
    throw CLI::ValidationError("--q", "the coefficient characteristic must differ from p");

  Decomposition dec;
  if (pp->m == 1 && pp->p == 2) {
    if (!nth_root(-F->one(), 2).has_value()) {
      std::cerr << "construct: no decomposition of sl_2(GF(" << F->size()
                << ")): -1 is not a square (q = " << F->size() << " is not 1 mod 4)\n";
      return 2;
    }
    dec = build_sl2_cod(F);
  } else {
    auto u = primitive_root_of_unity(*F, pp->p);
    if (pp->p == 2) u = -F->one();
    if (!u.has_value()) {
      std::cerr << "construct: sl_" << n << "(GF(" << F->size() << ")) needs a primitive "
                << pp->p << "th root of unity, but " << pp->p << " does not divide q - 1 = "
                << (F->size() - 1) << "\n";
      return 2;
    }
    if (pp->m == 1) {
      dec = build_cod_prime(pp->p, F, *u);
    } else {
      if (pp->p == 2 && !nth_root(-F->one(), 2).has_value()) {
        std::cerr << "construct: the p = 2 construction needs a square root of -1 in GF("
                  << F->size() << ") (q must be 1 mod 4)\n";
        return 2;
      }
      dec = build_cod_prime_power(pp->p, pp->m, F, *u);
    }
  }
  CodReport rep = verify_cod(dec);
  json out_json{{"decomposition", decomposition_to_json(dec)}, {"report", cod_report_to_json(rep)}};
  emit(out_json, out, describe_report(dec, rep), json_only);
  return rep.is_cod ? 0 : 1;
}

int run_verify(const std::string& path, const std::string& out, bool json_only) {
  std::ifstream f(path);
  if (!f) {
    std::cerr << "verify: cannot open " << path << "\n";
    return 2;
  }
  json j;
  Decomposition dec;
  try {
    f >> j;
    dec = decomposition_from_json(j);
  } catch (const std::exception& e) {
    std::cerr << "verify: " << path << ": " << e.what() << "\n";
    return 2;
  }
  CodReport rep = verify_cod(dec);
  emit(cod_report_to_json(rep), out, describe_report(dec, rep), json_only);
  return rep.is_cod ? 0 : 1;
}

std::pair<long, long> parse_range(const std::string& text) {
  auto dots = text.find("..");
  if (dots == std::string::npos) {
    long v = std::stol(text);
    return {v, v};
  }
  long lo = std::stol(text.substr(0, dots));
  long hi = std::stol(text.substr(dots + 2));
  if (lo > hi) throw CLI::ValidationError("--q", "empty or inverted range");
  return {lo, hi};
}

int run_survey(long n, const std::string& range, const std::string& out, bool json_only) {
  auto [lo, hi] = parse_range(range);
  std::vector<SurveyRow> rows;
  for (long q = lo; q <= hi; ++q) {
    auto pp = prime_power_decompose(q);
    if (!pp.has_value() || pp->p <= 3) continue;  // survey covers prime powers of char > 3
    FieldPtr F = FiniteField::get(pp->p, pp->m);
    rows.push_back(n == 2 ? sl2_survey(F) : sl3_survey(F));
  }
  std::ostringstream table;
  table << "sl_" << n << " survey, q in " << lo << ".." << hi << "\n";
  for (const SurveyRow& r : rows) {
    table << "  q = " << r.q << ": " << (r.exists ? "COD exists" : "no COD");
    if (r.obstruction.has_value()) table << " (" << *r.obstruction << ")";
    if (r.max_orthogonal_classical.has_value())
      table << "; maximal orthogonal classical family has size " << *r.max_orthogonal_classical;
    table << "\n";
  }
  emit(survey_rows_to_json(rows), out, table.str(), json_only);
  return 0;
}

int run_classify(long q, const std::string& a_text, const std::string& b_text,
                 const std::string& out, bool json_only) {
  auto pp = prime_power_decompose(q);
  if (!pp.has_value() || pp->p <= 3) throw CLI::ValidationError("--q", "q must be a prime power of characteristic > 3");
  FieldPtr F = FiniteField::get(pp->p, pp->m);
  if ((F->size() - 1) % 3 != 0) {
    std::cerr << "classify-j3: 3 does not divide q - 1 = " << (F->size() - 1) << "\n";
    return 2;
  }
  FieldElement a = parse_element(F, a_text), b = parse_element(F, b_text);
  if (a.is_zero() || b.is_zero()) {
    std::cerr << "classify-j3: parameters must be nonzero\n";
    return 2;
  }
  J3Classification cls = classify_j3(F, a, b);
  json j{{"q", q},
         {"a", element_to_json(a)},
         {"b", element_to_json(b)},
         {"class", cls.tag == J3ClassTag::kClass11 ? "CLASS_11" : "CLASS_1Z"},
         {"z", element_to_json(cls.z)},
         {"representative", {element_to_json(cls.rep_a), element_to_json(cls.rep_b)}},
         {"conjugator", matrix_to_json(cls.conjugator)},
         {"via_psi", cls.via_psi}};
  std::ostringstream human;
  human << "J_3(" << a.str() << ", " << b.str() << ") over GF(" << q << "): "
        << (cls.tag == J3ClassTag::kClass11 ? "CLASS_11" : "CLASS_1Z") << "\n"
        << "  conjugate to J_3(" << cls.rep_a.str() << ", " << cls.rep_b.str() << ")"
        << (cls.via_psi ? ", then psi to J_3(1, z)" : "") << "\n";
  emit(j, out, human.str(), json_only);
  return 0;
}

int run_case_check(long q, const std::string& out, bool json_only) {
  auto pp = prime_power_decompose(q);
  if (!pp.has_value() || pp->p <= 3) throw CLI::ValidationError("--q", "q must be a prime power of characteristic > 3");
  FieldPtr F = FiniteField::get(pp->p, pp->m);
  if ((F->size() - 1) % 3 != 0) {
    std::cerr << "case-check: 3 does not divide q - 1 = " << (F->size() - 1) << "\n";
    return 2;
  }
  FieldElement u = *primitive_root_of_unity(*F, 3);
  FieldElement z = cube_coset_index(F->one()).non_cube;
  std::vector<CaseVerdict> verdicts = case_check_48(F, u, z);
  int solvable = 0;
  std::ostringstream human;
  human << "case check over GF(" << q << "), u = " << u.str() << ", z = " << z.str() << "\n";
  for (const CaseVerdict& v : verdicts) {
    if (v.solvable) ++solvable;
    human << "  case " << v.index << ": " << (v.solvable ? "SOLVABLE" : "unsolvable");
    if (!v.forced_relation.empty()) human << "  [" << v.forced_relation << "]";
    human << "\n";
  }
  human << "  " << (48 - solvable) << "/48 unsolvable\n";
  emit(case_verdicts_to_json(verdicts), out, human.str(), json_only);
  return solvable == 0 ? 0 : 1;
}

int run_psi_check(long q, const std::string& out, bool json_only) {
  auto pp = prime_power_decompose(q);
  if (!pp.has_value() || pp->p <= 3) throw CLI::ValidationError("--q", "q must be a prime power of characteristic > 3");
  FieldPtr F = FiniteField::get(pp->p, pp->m);
  if ((F->size() - 1) % 3 != 0) {
    std::cerr << "psi-check: 3 does not divide q - 1 = " << (F->size() - 1) << "\n";
    return 2;
  }
  FieldElement u = *primitive_root_of_unity(*F, 3);
  FieldElement z = cube_coset_index(F->one()).non_cube;
  try {
    psi_verify(F, u, z);
  } catch (const std::logic_error& e) {
    std::cerr << "psi-check: FAILED: " << e.what() << "\n";
    return 1;
  }
  json j{{"q", q}, {"u", element_to_json(u)}, {"z", element_to_json(z)}, {"verified", true},
         {"bracket_pairs_checked", 28}};
  emit(j, out, "psi verified on all 28 basis pairs; component mapping confirmed\n", json_only);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"orthogonal decompositions of sl_n over finite fields"};
  app.require_subcommand(1);

  long n = 0, q = 0, p = 0;
  int m = 0;
  std::string modulus, out, file, a_text, b_text, range;
  bool json_only = false;
  app.add_flag("--json", json_only, "print only the JSON output");

  auto* construct = app.add_subcommand("construct", "build a decomposition of sl_n over GF(q)");
  construct->add_option("--n", n, "matrix size, a prime power")->required();
  construct->add_option("--q", q, "coefficient field size, a prime power");
  construct->add_option("--p", p, "coefficient characteristic (with --m)");
  construct->add_option("--m", m, "coefficient extension degree (with --p)");
  construct->add_option("--modulus", modulus, "field modulus, ascending coefficients, comma-separated");
  construct->add_option("--out", out, "write the JSON output to this file");

  auto* verify = app.add_subcommand("verify", "verify a cod-v1 decomposition file");
  verify->add_option("file", file, "decomposition JSON file")->required();
  verify->add_option("--out", out, "write the JSON report to this file");

  auto* survey = app.add_subcommand("survey", "existence survey for sl_2 or sl_3");
  survey->add_option("--n", n, "2 or 3")->required()->check(CLI::IsMember({2, 3}));
  survey->add_option("--q,--q-range", range, "field size or inclusive range lo..hi")->required();
  survey->add_option("--out", out, "write the JSON rows to this file");

  auto* classify = app.add_subcommand("classify-j3", "conjugacy class of J_3(a, b)");
  classify->add_option("--q", q, "field size")->required();
  classify->add_option("--a", a_text, "first parameter (integer or comma coefficients)")->required();
  classify->add_option("--b", b_text, "second parameter")->required();
  classify->add_option("--out", out, "write the JSON certificate to this file");

  auto* cases = app.add_subcommand("case-check", "run the 48-case non-conjugacy solver");
  cases->add_option("--q", q, "field size")->required();
  cases->add_option("--out", out, "write the JSON verdicts to this file");

  auto* psi = app.add_subcommand("psi-check", "verify the psi map on all basis pairs");
  psi->add_option("--q", q, "field size")->required();
  psi->add_option("--out", out, "write the JSON summary to this file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (construct->parsed()) return run_construct(n, q, p, m, modulus, out, json_only);
    if (verify->parsed()) return run_verify(file, out, json_only);
    if (survey->parsed()) return run_survey(n, range, out, json_only);
    if (classify->parsed()) return run_classify(q, a_text, b_text, out, json_only);
    if (cases->parsed()) return run_case_check(q, out, json_only);
    if (psi->parsed()) return run_psi_check(q, out, json_only);
  } catch (const CLI::ValidationError& e) {
    std::cerr << app.get_name() << ": " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << app.get_name() << ": " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << app.get_name() << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << app.get_name() << ": internal error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
