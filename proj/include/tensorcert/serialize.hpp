#ifndef TENSORCERT_SERIALIZE_HPP
#define TENSORCERT_SERIALIZE_HPP

#include <json.hpp>

#include "tensorcert/certify.hpp"

namespace tensorcert {

using nlohmann::json;

json field_to_json(const FieldSpec& f);
FieldSpec field_from_json(const json& j);

json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j, const FieldSpec& field);

json subspace_to_json(const Subspace& s);
Subspace subspace_from_json(const json& j, const FieldSpec& field);

json operator_to_json(const MatrixSpaceOperator& op);
MatrixSpaceOperator operator_from_json(const json& j, const FieldSpec& field);

/// DecompositionFile: {"field", "shape", "terms", "metadata"?}; unknown
/// metadata keys are preserved bit-exactly across load/save.
json decomposition_to_json(const Decomposition& d, const json& metadata = json::object());
Decomposition decomposition_from_json(const json& j, json* metadata = nullptr);

void save_decomposition(const Decomposition& d, const std::string& path,
                        const json& metadata = json::object());
Decomposition load_decomposition(const std::string& path, json* metadata = nullptr);

json certificate_to_json(const CertificateReport& rep);
json bound_report_to_json(const BoundReport& rep);
json stats_to_json(const DecompositionStats& st);

}  // namespace tensorcert

#endif
