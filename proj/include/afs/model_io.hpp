#ifndef AFS_MODEL_IO_HPP
#define AFS_MODEL_IO_HPP

#include <fstream>
#include <string>

#include <json.hpp>

#include "afs/core.hpp"

namespace afs {

/// JSON model manifests. Doubles round-trip bit-exactly through the
/// serializer, so export followed by load reproduces the model exactly.
namespace model_io {

using nlohmann::json;

inline json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) throw std::runtime_error("model_io: bad complex value");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline json matrix_to_json(const CMatrix& a) {
    json data = json::array();
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) data.push_back(complex_to_json(a(i, j)));
    return json{{"rows", a.rows()}, {"cols", a.cols()}, {"data", std::move(data)}};
}

inline CMatrix matrix_from_json(const json& j) {
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    const json& data = j.at("data");
    if (rows < 0 || cols < 0 || static_cast<Eigen::Index>(data.size()) != rows * cols)
        throw std::runtime_error("model_io: matrix size mismatch");
    CMatrix a(rows, cols);
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j2 = 0; j2 < cols; ++j2) a(i, j2) = complex_from_json(data[k++]);
    return a;
}

inline json vector_to_json(const CVector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v[i]));
    return out;
}

inline CVector vector_from_json(const json& j) {
    CVector v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = complex_from_json(j[i]);
    return v;
}

inline json to_json(const SurrogateModel& model) {
    json out{{"format", "afs-model"}, {"version", 1}};
    if (const auto* pr = std::get_if<PoleResidueModel>(&model)) {
        out["type"] = "pole_residue";
        out["poles"] = vector_to_json(pr->poles);
        json res = json::array();
        for (const CMatrix& r : pr->residues) res.push_back(matrix_to_json(r));
        out["residues"] = std::move(res);
        out["d"] = matrix_to_json(pr->d);
        out["e"] = matrix_to_json(pr->e);
    } else if (const auto* ss = std::get_if<StateSpaceModel>(&model)) {
        out["type"] = "state_space";
        out["A"] = matrix_to_json(ss->A());
        out["B"] = matrix_to_json(ss->B());
        out["C"] = matrix_to_json(ss->C());
        out["D"] = matrix_to_json(ss->D());
    } else {
        const auto& bc = std::get<BarycentricModel>(model);
        out["type"] = "barycentric";
        out["nodes"] = vector_to_json(bc.nodes);
        json vals = json::array();
        for (const CMatrix& v : bc.values) vals.push_back(matrix_to_json(v));
        out["values"] = std::move(vals);
        out["coeffs"] = vector_to_json(bc.coeffs);
    }
    return out;
}

inline SurrogateModel from_json(const json& j) {
    if (j.value("format", "") != "afs-model")
        throw std::runtime_error("model_io: not a model manifest");
    const std::string type = j.at("type").get<std::string>();
    if (type == "pole_residue") {
        PoleResidueModel m;
        m.poles = vector_from_json(j.at("poles"));
        for (const json& r : j.at("residues")) m.residues.push_back(matrix_from_json(r));
        m.d = matrix_from_json(j.at("d"));
        m.e = matrix_from_json(j.at("e"));
        if (static_cast<int>(m.residues.size()) != m.order())
            throw std::runtime_error("model_io: pole/residue count mismatch");
        return m;
    }
    if (type == "state_space") {
        return StateSpaceModel(matrix_from_json(j.at("A")), matrix_from_json(j.at("B")),
                               matrix_from_json(j.at("C")), matrix_from_json(j.at("D")));
    }
    if (type == "barycentric") {
        BarycentricModel m;
        m.nodes = vector_from_json(j.at("nodes"));
        for (const json& v : j.at("values")) m.values.push_back(matrix_from_json(v));
        m.coeffs = vector_from_json(j.at("coeffs"));
        if (static_cast<int>(m.values.size()) != m.node_count() ||
            m.coeffs.size() != m.nodes.size())
            throw std::runtime_error("model_io: barycentric size mismatch");
        return m;
    }
    throw std::runtime_error("model_io: unknown model type '" + type + "'");
}

}  // namespace model_io

/// Writes a model manifest; `provenance` (method, seeds, pick order, ...) is
/// stored verbatim under a "provenance" key.
inline void export_model(const std::string& path, const SurrogateModel& model,
                         const nlohmann::json& provenance = nlohmann::json::object()) {
    nlohmann::json j = model_io::to_json(model);
    j["provenance"] = provenance;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("export_model: cannot open '" + path + "'");
    out << j.dump(2) << '\n';
}

inline SurrogateModel load_model(const std::string& path,
                                 nlohmann::json* provenance_out = nullptr) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_model: cannot open '" + path + "'");
    nlohmann::json j = nlohmann::json::parse(in);
    if (provenance_out) *provenance_out = j.value("provenance", nlohmann::json::object());
    return model_io::from_json(j);
}

}  // namespace afs

#endif  // AFS_MODEL_IO_HPP
