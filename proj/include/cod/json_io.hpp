#pragma once

#include "json.hpp"

#include "cod/classify.hpp"
#include "cod/decomposition.hpp"

namespace cod {

// Stable serialization, versioned with "format": "cod-v1".
// field:   {"p": int, "m": int, "modulus": [int ascending]}
// element: [int; m] ascending coefficients
// matrix:  {"rows": r, "cols": c, "entries": [element ...]} row-major

nlohmann::json field_to_json(const FiniteField& F);
FieldPtr field_from_json(const nlohmann::json& j);

nlohmann::json element_to_json(const FieldElement& x);
FieldElement element_from_json(const nlohmann::json& j, const FieldPtr& F);

nlohmann::json matrix_to_json(const Mat& M);
Mat matrix_from_json(const nlohmann::json& j, const FieldPtr& F);

nlohmann::json decomposition_to_json(const Decomposition& dec);
Decomposition decomposition_from_json(const nlohmann::json& j);

nlohmann::json cartan_report_to_json(const CartanReport& r);
nlohmann::json cod_report_to_json(const CodReport& r);

nlohmann::json survey_rows_to_json(const std::vector<SurveyRow>& rows);
nlohmann::json case_verdicts_to_json(const std::vector<CaseVerdict>& verdicts);

}  // namespace cod
