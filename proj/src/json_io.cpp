#include "tenspec/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "tenspec/error.hpp"

namespace tenspec::io {

namespace {

const json& field(const json& j, const char* name) {
    if (!j.is_object()) throw ParseError(name, "expected a JSON object");
    auto it = j.find(name);
    if (it == j.end()) throw ParseError(name, "missing");
    return *it;
}

std::vector<double> number_array(const json& j, const char* name) {
    if (!j.is_array()) throw ParseError(name, "expected an array of numbers");
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& v : j) {
        if (!v.is_number()) throw ParseError(name, "expected an array of numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

Shape shape_from(const json& j) {
    if (!j.is_array() || j.size() < 2) throw ParseError("shape", "expected an array of at least two sizes");
    std::vector<std::size_t> dims;
    for (const auto& v : j) {
        if (!v.is_number_integer() || v.get<long long>() <= 0) {
            throw ParseError("shape", "mode sizes must be positive integers");
        }
        dims.push_back(v.get<std::size_t>());
    }
    return Shape(std::move(dims));
}

json spectra_json(const std::vector<std::vector<double>>& modes) {
    json arr = json::array();
    for (const auto& m : modes) arr.push_back(m);
    return arr;
}

}  // namespace

json to_json(const DenseTensor& x) {
    return {{"shape", x.shape().dims()}, {"data", std::vector<double>(x.data().begin(), x.data().end())}};
}

json to_json(const Matrix& m) { return to_json(DenseTensor::from_matrix(m)); }

json to_json(const OdecoRep& rep) {
    json factors = json::array();
    for (const auto& f : rep.factors()) factors.push_back(to_json(f));
    return {{"shape", rep.shape().dims()}, {"alphas", rep.alphas()}, {"factors", factors}};
}

json to_json(const Hosvd& h) {
    json factors = json::array();
    for (const auto& f : h.factors) factors.push_back(to_json(f));
    return {{"core", to_json(h.core)}, {"factors", factors}};
}

json to_json(const ModeSpectra& s) { return spectra_json(s.per_mode); }

json to_json(const VnReport& r) {
    return {{"inner", r.inner},
            {"per_mode_bound", r.per_mode_bound},
            {"per_mode_gap", r.per_mode_gap},
            {"scale", r.scale},
            {"equality", r.equality}};
}

json to_json(const BlockPartition& p) { return {{"block_count", p.block_count}, {"block_of", p.block_of}}; }

json to_json(const EqualityStructure& s) {
    return {{"holds", s.holds},
            {"outside_residual", s.outside_residual},
            {"constants", s.constants},
            {"swapped", s.swapped},
            {"block_residual", s.block_residual}};
}

json to_json(const StructureCheck& c) {
    return {{"holds", c.holds},
            {"structure_holds", c.structure_holds},
            {"vn_equality", c.vn_equality},
            {"partition", to_json(c.partition)},
            {"structure", to_json(c.structure)},
            {"report", to_json(c.report)}};
}

json to_json(const MembershipCertificate& c) {
    return {{"accepted", c.accepted},
            {"status", to_string(c.status)},
            {"vn_gaps", c.vn_gaps},
            {"vn_equality", c.vn_equality},
            {"pairing_residual", c.pairing_residual},
            {"pairing_ok", c.pairing_ok},
            {"dual_norm_value", c.dual_norm_value},
            {"dual_bound_ok", c.dual_bound_ok},
            {"norm_value", c.norm_value},
            {"scale", c.scale},
            {"notes", c.notes}};
}

json to_json(const ConjugateEstimate& e) {
    return {{"value", e.value},
            {"best_ratio", e.best_ratio},
            {"evaluations", e.evaluations},
            {"certificate", to_json(e.certificate)}};
}

DenseTensor tensor_from_json(const json& j) {
    Shape shape = shape_from(field(j, "shape"));
    auto data = number_array(field(j, "data"), "data");
    if (data.size() != shape.size()) {
        throw ParseError("data", "length " + std::to_string(data.size()) + " does not match shape element count " +
                                     std::to_string(shape.size()));
    }
    return DenseTensor(std::move(shape), std::move(data));
}

Matrix matrix_from_json(const json& j) {
    const DenseTensor t = tensor_from_json(j);
    if (t.order() != 2) throw ParseError("shape", "a matrix needs exactly two sizes");
    return t.to_matrix();
}

OdecoRep odeco_from_json(const json& j) {
    Shape shape = shape_from(field(j, "shape"));
    auto alphas = number_array(field(j, "alphas"), "alphas");
    const json& fs = field(j, "factors");
    if (!fs.is_array()) throw ParseError("factors", "expected an array of matrices");
    std::vector<Matrix> factors;
    for (const auto& f : fs) factors.push_back(matrix_from_json(f));
    return make_odeco(std::move(alphas), std::move(factors), shape);
}

DenseTensor tensor_like_from_json(const json& j) {
    if (j.is_object() && j.contains("alphas")) return to_dense(odeco_from_json(j));
    return tensor_from_json(j);
}

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path, e.what());
    }
}

void write_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    out << j.dump() << '\n';
}

DenseTensor read_tensor(const std::string& path) { return tensor_like_from_json(read_json(path)); }

OdecoRep read_odeco(const std::string& path) { return odeco_from_json(read_json(path)); }

void write_tensor(const std::string& path, const DenseTensor& x) { write_json(path, to_json(x)); }

void write_odeco(const std::string& path, const OdecoRep& rep) { write_json(path, to_json(rep)); }

}  // namespace tenspec::io
