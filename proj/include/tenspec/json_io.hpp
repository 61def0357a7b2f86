#pragma once

#include <string>

#include "json.hpp"
#include "tenspec/odeco.hpp"
#include "tenspec/spectral.hpp"
#include "tenspec/subdiff.hpp"
#include "tenspec/tensor.hpp"
#include "tenspec/vonneumann.hpp"

// JSON formats:
//   tensor  {"shape": [n1, ..., nD], "data": [...]}, row-major, offset of the
//           0-based index (i_1..i_D) is Σ_k i_k ∏_{m>k} n_m
//   matrix  the tensor format with D = 2
//   odeco   {"shape": [...], "alphas": [...], "factors": [matrix, ...]}
//   hosvd   {"core": tensor, "factors": [matrix, ...]}
// Doubles are written as the shortest decimal that reads back bit-exactly.
namespace tenspec::io {

using json = nlohmann::json;

json to_json(const DenseTensor& x);
json to_json(const Matrix& m);
json to_json(const OdecoRep& rep);
json to_json(const Hosvd& h);
json to_json(const ModeSpectra& s);
json to_json(const VnReport& r);
json to_json(const BlockPartition& p);
json to_json(const EqualityStructure& s);
json to_json(const StructureCheck& c);
json to_json(const MembershipCertificate& c);
json to_json(const ConjugateEstimate& e);

// Field-named ParseError on malformed input.
DenseTensor tensor_from_json(const json& j);
Matrix matrix_from_json(const json& j);
// Runs make_odeco validation, so OdecoError surfaces for bad factors.
OdecoRep odeco_from_json(const json& j);
// Accepts either the tensor or the odeco format (densified).
DenseTensor tensor_like_from_json(const json& j);

json read_json(const std::string& path);
void write_json(const std::string& path, const json& j);

DenseTensor read_tensor(const std::string& path);
OdecoRep read_odeco(const std::string& path);
void write_tensor(const std::string& path, const DenseTensor& x);
void write_odeco(const std::string& path, const OdecoRep& rep);

}  // namespace tenspec::io
