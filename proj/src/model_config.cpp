#include "scx/model_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace scx {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            throw ValidationError("unknown key \"" + it.key() + "\" in " + where);
}

double require_number(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key)) throw ValidationError("missing key \"" + key + "\" in " + where);
    if (!obj[key].is_number()) throw ValidationError(where + "." + key + " must be a number");
    return obj[key].get<double>();
}

CMatrix parse_constant_matrix(const json& rows, int dim) {
    if (!rows.is_array() || static_cast<int>(rows.size()) != dim)
        throw ValidationError("matrix must be an array of " + std::to_string(dim) + " rows");
    CMatrix m(dim);
    for (int r = 0; r < dim; ++r) {
        const json& row = rows[r];
        if (!row.is_array() || static_cast<int>(row.size()) != dim)
            throw ValidationError("matrix row " + std::to_string(r) + " must have " +
                                  std::to_string(dim) + " entries");
        for (int c = 0; c < dim; ++c) {
            const json& e = row[c];
            if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
                throw ValidationError("matrix entry (" + std::to_string(r) + "," +
                                      std::to_string(c) + ") must be [re, im]");
            m.at(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
        }
    }
    return m;
}

}  // namespace

HamiltonianModel parse_model_json(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("model config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) throw ParseError("model config must be a JSON object");

    ModelDescription d;

    if (!root.contains("family") || !root["family"].is_string())
        throw ValidationError("model.family must be a string");
    const std::string family = root["family"].get<std::string>();

    if (!root.contains("dim") || !root["dim"].is_number_integer())
        throw ValidationError("model.dim must be an integer");
    d.dim = root["dim"].get<int>();
    if (d.dim < 1 || d.dim > CMatrix::kMaxDim)
        throw ValidationError("model.dim must lie in [1, 8]");

    d.g = require_number(root, "g", "model");

    if (!root.contains("window") || !root["window"].is_array() || root["window"].size() != 2 ||
        !root["window"][0].is_number() || !root["window"][1].is_number())
        throw ValidationError("model.window must be [t_min, t_max]");
    d.window_min = root["window"][0].get<double>();
    d.window_max = root["window"][1].get<double>();

    if (family == "scalar_profile") {
        d.family = ModelFamily::ScalarProfile;
        reject_unknown_keys(root, {"dim", "family", "g", "window", "profile"}, "model");
        if (!root.contains("profile") || !root["profile"].is_object())
            throw ValidationError("scalar_profile requires a profile object");
        const json& p = root["profile"];
        if (!p.contains("kind") || !p["kind"].is_string())
            throw ValidationError("profile.kind must be a string");
        const std::string kind = p["kind"].get<std::string>();
        if (kind == "const") {
            reject_unknown_keys(p, {"kind", "c"}, "model.profile");
            d.profile_kind = ProfileKind::Const;
            d.profile_param = require_number(p, "c", "model.profile");
        } else if (kind == "poly") {
            reject_unknown_keys(p, {"kind", "alpha"}, "model.profile");
            d.profile_kind = ProfileKind::Poly;
            d.profile_param = require_number(p, "alpha", "model.profile");
        } else if (kind == "gauss") {
            reject_unknown_keys(p, {"kind", "beta"}, "model.profile");
            d.profile_kind = ProfileKind::Gauss;
            d.profile_param = require_number(p, "beta", "model.profile");
        } else {
            throw ValidationError("profile.kind must be const | poly | gauss, got \"" + kind +
                                  "\"");
        }
    } else if (family == "two_level") {
        d.family = ModelFamily::TwoLevel;
        reject_unknown_keys(root, {"dim", "family", "g", "window", "a", "b"}, "model");
        d.two_level_a = require_number(root, "a", "model");
        d.two_level_b = require_number(root, "b", "model");
    } else if (family == "constant") {
        d.family = ModelFamily::Constant;
        reject_unknown_keys(root, {"dim", "family", "g", "window", "matrix"}, "model");
        if (!root.contains("matrix"))
            throw ValidationError("constant family requires model.matrix");
        d.constant_matrix = parse_constant_matrix(root["matrix"], d.dim);
    } else {
        throw ValidationError("model.family must be scalar_profile | two_level | constant, got \"" +
                              family + "\"");
    }

    return build_model(d);
}

HamiltonianModel load_model_config(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open model config " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_model_json(ss.str());
}

}  // namespace scx
