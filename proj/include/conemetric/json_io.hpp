#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "conemetric/cone.hpp"
#include "conemetric/norm.hpp"
#include "conemetric/space.hpp"
#include "conemetric/types.hpp"

namespace cmk {

using Json = nlohmann::ordered_json;

inline Json matrix_to_json(const Mat& m) {
    Json rows = Json::array();
    for (int i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Mat matrix_from_json(const Json& j) {
    require(j.is_array() && !j.empty(), "matrix: nonempty array of rows expected");
    const int rows = static_cast<int>(j.size());
    const int cols = static_cast<int>(j.at(0).size());
    Mat m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        require(static_cast<int>(j.at(static_cast<size_t>(i)).size()) == cols,
                "matrix: ragged rows");
        for (int c = 0; c < cols; ++c)
            m(i, c) = j.at(static_cast<size_t>(i)).at(static_cast<size_t>(c)).get<double>();
    }
    return m;
}

inline Json vector_to_json(const Vec& v) {
    Json a = Json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

inline Vec vector_from_json(const Json& j) {
    Vec v(static_cast<int>(j.size()));
    for (int i = 0; i < v.size(); ++i) v[i] = j.at(static_cast<size_t>(i)).get<double>();
    return v;
}

/// {"type": "orthant"|"lorentz"|"generators"|"halfspaces", "dim": n,
///  "matrix": [[...]]} -- matrix rows are halfspace normals; matrix
/// columns are generators (the matrix itself is stored as a list of rows).
inline Json cone_to_json(const Cone& cone) {
    Json j;
    switch (cone.kind()) {
        case ConeKind::Orthant: j["type"] = "orthant"; break;
        case ConeKind::Lorentz: j["type"] = "lorentz"; break;
        case ConeKind::Generators: j["type"] = "generators"; break;
        case ConeKind::Halfspaces: j["type"] = "halfspaces"; break;
    }
    j["dim"] = cone.dim();
    if (cone.kind() == ConeKind::Generators || cone.kind() == ConeKind::Halfspaces)
        j["matrix"] = matrix_to_json(cone.matrix());
    return j;
}

inline Cone cone_from_json(const Json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "orthant") return Cone::orthant(j.at("dim").get<int>());
    if (type == "lorentz") return Cone::lorentz(j.at("dim").get<int>());
    if (type == "generators") return Cone::generators(matrix_from_json(j.at("matrix")));
    if (type == "halfspaces") return Cone::halfspaces(matrix_from_json(j.at("matrix")));
    throw InputError("unknown cone type: " + type);
}

inline Json norm_to_json(const Norm& norm) {
    Json j;
    switch (norm.kind()) {
        case NormKind::Euclidean: j["type"] = "euclidean"; break;
        case NormKind::L1: j["type"] = "l1"; break;
        case NormKind::LInf: j["type"] = "linf"; break;
        case NormKind::Weighted:
            j["type"] = "weighted";
            j["weights"] = vector_to_json(norm.weights());
            break;
    }
    return j;
}

inline Norm norm_from_json(const Json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "euclidean") return Norm::euclidean();
    if (type == "l1") return Norm::l1();
    if (type == "linf") return Norm::linf();
    if (type == "weighted") return Norm::weighted(vector_from_json(j.at("weights")));
    throw InputError("unknown norm type: " + type);
}

inline Json space_to_json(const FiniteConeMetricSpace& space) {
    Json j;
    j["labels"] = space.labels;
    j["cone"] = cone_to_json(space.cone);
    j["norm"] = norm_to_json(space.norm);
    Json table = Json::array();
    for (const auto& row : space.D) {
        Json r = Json::array();
        for (const Vec& v : row) r.push_back(vector_to_json(v));
        table.push_back(std::move(r));
    }
    j["D"] = std::move(table);
    return j;
}

inline FiniteConeMetricSpace space_from_json(const Json& j) {
    std::vector<std::string> labels = j.at("labels").get<std::vector<std::string>>();
    Cone cone = cone_from_json(j.at("cone"));
    Norm norm = norm_from_json(j.at("norm"));
    const Json& table = j.at("D");
    require(table.size() == labels.size(), "space: D table size does not match labels");
    std::vector<std::vector<Vec>> D;
    for (const auto& row : table) {
        require(row.size() == labels.size(), "space: D table is not square");
        std::vector<Vec> r;
        for (const auto& cell : row) {
            Vec v = vector_from_json(cell);
            require(v.size() == cone.dim(), "space: D entry dimension mismatch");
            r.push_back(std::move(v));
        }
        D.push_back(std::move(r));
    }
    return FiniteConeMetricSpace{std::move(labels), std::move(cone), std::move(norm),
                                 std::move(D)};
}

inline Json map_to_json(const SelfMap& map) {
    Json j;
    if (map.kind == SelfMap::Kind::Tabulated) {
        j["type"] = "tabulated";
        j["images"] = map.images;
    } else {
        j["type"] = "affine";
        j["M"] = matrix_to_json(map.M);
        j["b"] = vector_to_json(map.b);
    }
    return j;
}

inline SelfMap map_from_json(const Json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "tabulated") return SelfMap::tabulated(j.at("images").get<std::vector<int>>());
    if (type == "affine")
        return SelfMap::affine(matrix_from_json(j.at("M")), vector_from_json(j.at("b")));
    throw InputError("unknown map type: " + type);
}

inline Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open file: " + path);
    return Json::parse(in);  // parse_error carries the byte offset
}

inline void save_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write file: " + path);
    out << j.dump(2) << "\n";
}

}  // namespace cmk
