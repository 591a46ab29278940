#include "cod/json_io.hpp"

#include <stdexcept>

namespace cod {

using nlohmann::json;

json field_to_json(const FiniteField& F) {
  return json{{"p", F.characteristic()}, {"m", F.degree()}, {"modulus", F.modulus()}};
}

FieldPtr field_from_json(const json& j) {
  long p = j.at("p").get<long>();
  int m = j.at("m").get<int>();
  std::vector<long> modulus = j.at("modulus").get<std::vector<long>>();
  return FiniteField::get(p, m, modulus);
}

json element_to_json(const FieldElement& x) { return json(x.coeffs()); }

FieldElement element_from_json(const json& j, const FieldPtr& F) {
  return F->from_coeffs(j.get<std::vector<long>>());
}

json matrix_to_json(const Mat& M) {
  json entries = json::array();
  for (int i = 0; i < M.rows(); ++i)
    for (int j = 0; j < M.cols(); ++j) entries.push_back(element_to_json(M.at(i, j)));
  return json{{"rows", M.rows()}, {"cols", M.cols()}, {"entries", entries}};
}

Mat matrix_from_json(const json& j, const FieldPtr& F) {
  int rows = j.at("rows").get<int>();
  int cols = j.at("cols").get<int>();
  const json& entries = j.at("entries");
  if (static_cast<int>(entries.size()) != rows * cols)
    throw std::invalid_argument("matrix entry count does not match its shape");
  Mat M(F, rows, cols);
  int idx = 0;
  for (int i = 0; i < rows; ++i)
    for (int jj = 0; jj < cols; ++jj)
      M.set(i, jj, element_from_json(entries[static_cast<size_t>(idx++)], F));
  return M;
}

json decomposition_to_json(const Decomposition& dec) {
  json comps = json::array();
  for (size_t i = 0; i < dec.components.size(); ++i) {
    json basis = json::array();
    for (const Mat& b : dec.components[i].basis()) basis.push_back(matrix_to_json(b));
    comps.push_back(json{{"label", dec.labels[i]}, {"basis", basis}});
  }
  return json{{"format", "cod-v1"},
              {"n", dec.n},
              {"field", field_to_json(*dec.field)},
              {"components", comps}};
}

Decomposition decomposition_from_json(const json& j) {
  if (j.value("format", "") != "cod-v1")
    throw std::invalid_argument("unsupported format (expected cod-v1)");
  Decomposition dec;
  dec.n = j.at("n").get<int>();
  dec.field = field_from_json(j.at("field"));
  for (const json& comp : j.at("components")) {
    std::vector<Mat> basis;
    for (const json& bm : comp.at("basis")) {
      Mat M = matrix_from_json(bm, dec.field);
      if (M.rows() != dec.n || M.cols() != dec.n)
        throw std::invalid_argument("component matrix shape does not match n");
      basis.push_back(std::move(M));
    }
    dec.components.push_back(Subalgebra::span_close(basis));
    dec.labels.push_back(comp.value("label", "H_" + std::to_string(dec.components.size() - 1)));
  }
  return dec;
}

json cartan_report_to_json(const CartanReport& r) {
  return json{{"bracket_closed", r.bracket_closed},
              {"nilpotent", r.nilpotent},
              {"self_normalizing", r.self_normalizing},
              {"abelian", r.abelian},
              {"has_root_decomposition", r.has_root_decomposition},
              {"condition_b", r.condition_b},
              {"condition_c", r.condition_c},
              {"is_cartan", r.is_cartan},
              {"is_classical", r.is_classical}};
}

json cod_report_to_json(const CodReport& r) {
  json orth = json::array();
  for (const auto& row : r.orthogonal_pairs) orth.push_back(row);
  json comps = json::array();
  for (const CartanReport& c : r.component_reports) comps.push_back(cartan_report_to_json(c));
  json out{{"format", "cod-v1"},
           {"spans_directly", r.spans_directly},
           {"orthogonal_pairs", orth},
           {"components", comps},
           {"is_cod", r.is_cod}};
  if (!r.note.empty()) out["note"] = r.note;
  return out;
}

json survey_rows_to_json(const std::vector<SurveyRow>& rows) {
  json out = json::array();
  for (const SurveyRow& r : rows) {
    json row{{"q", r.q}, {"exists", r.exists}};
    row["obstruction"] = r.obstruction.has_value() ? json(*r.obstruction) : json(nullptr);
    out.push_back(row);
  }
  return out;
}

json case_verdicts_to_json(const std::vector<CaseVerdict>& verdicts) {
  json out = json::array();
  for (const CaseVerdict& v : verdicts) {
    json row{{"case", v.index}, {"solvable", v.solvable}};
    row["forced"] = v.forced_relation.empty() ? json(nullptr) : json(v.forced_relation);
    if (v.witness.has_value()) {
      json w = json::array();
      for (const FieldElement& x : *v.witness) w.push_back(element_to_json(x));
      row["witness"] = w;
    } else {
      row["witness"] = nullptr;
    }
    out.push_back(row);
  }
  return out;
}

}  // namespace cod
