#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cod/json_io.hpp"

#include <random>

using namespace cod;
using nlohmann::json;

TEST_CASE("field and element serialization") {
  auto F9 = FiniteField::get(3, 2);
  json j = field_to_json(*F9);
  CHECK(j["p"] == 3);
  CHECK(j["m"] == 2);
  CHECK(j["modulus"] == json::array({1, 0, 1}));
  CHECK(field_from_json(j).get() == F9.get());  // interning round trip

  FieldElement t = F9->from_coeffs({0, 1});
  CHECK(element_to_json(t) == json::array({0, 1}));
  CHECK(element_from_json(element_to_json(t), F9) == t);

  json bad = j;
  bad["modulus"] = json::array({2, 0, 1});  // reducible
  CHECK_THROWS_AS(field_from_json(bad), std::invalid_argument);
}

TEST_CASE("matrix round trip") {
  auto F = FiniteField::get(7, 1);
  std::mt19937_64 rng(61);
  for (int it = 0; it < 20; ++it) {
    Mat M(F, 3, 4);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 4; ++j) M.set_raw(i, j, static_cast<long>(rng() % 7));
    CHECK(matrix_from_json(matrix_to_json(M), F) == M);
  }
  json bad = matrix_to_json(Mat::identity(F, 2));
  bad["entries"] = json::array({json::array({1})});
  CHECK_THROWS_AS(matrix_from_json(bad, F), std::invalid_argument);
}

TEST_CASE("decomposition round trip preserves verification") {
  auto F = FiniteField::get(7, 1);
  Decomposition dec = build_cod_prime(3, F, F->from_int(2));
  json j = decomposition_to_json(dec);
  CHECK(j["format"] == "cod-v1");
  Decomposition back = decomposition_from_json(j);
  CHECK(back.n == dec.n);
  REQUIRE(back.components.size() == dec.components.size());
  for (size_t i = 0; i < back.components.size(); ++i) {
    CHECK(back.components[i] == dec.components[i]);
    CHECK(back.labels[i] == dec.labels[i]);
  }
  CHECK(verify_cod(back).is_cod);

  json missing = j;
  missing.erase("format");
  CHECK_THROWS_AS(decomposition_from_json(missing), std::invalid_argument);

  // non-traceless tampering is a parse error
  json tampered = j;
  tampered["components"][0]["basis"][0]["entries"][0] = json::array({1});
  CHECK_THROWS_AS(decomposition_from_json(tampered), std::invalid_argument);
}

TEST_CASE("report serialization") {
  auto F = FiniteField::get(7, 1);
  CodReport rep = verify_cod(build_cod_prime(3, F, F->from_int(2)));
  json j = cod_report_to_json(rep);
  CHECK(j["format"] == "cod-v1");
  CHECK(j["is_cod"] == true);
  CHECK(j["spans_directly"] == true);
  CHECK(j["components"].size() == 4);
  CHECK(j["components"][0]["is_classical"] == true);
  CHECK(j["orthogonal_pairs"].size() == 4);
}

TEST_CASE("survey and case-verdict serialization") {
  auto F = FiniteField::get(7, 1);
  std::vector<SurveyRow> rows = {sl2_survey(F)};
  json j = survey_rows_to_json(rows);
  CHECK(j.size() == 1);
  CHECK(j[0]["q"] == 7);
  CHECK(j[0]["exists"] == false);
  CHECK(j[0]["obstruction"].is_string());

  std::vector<CaseVerdict> verdicts = case_check_48(F, F->from_int(2), F->from_int(2));
  json cj = case_verdicts_to_json(verdicts);
  REQUIRE(cj.size() == 48);
  CHECK(cj[0]["case"] == 1);
  CHECK(cj[0]["solvable"] == false);
  CHECK(cj[0]["forced"] == "z = d^3");
  CHECK(cj[0]["witness"].is_null());
}
