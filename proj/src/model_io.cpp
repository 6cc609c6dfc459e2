#include <fstream>

#include <json.hpp>

#include "fieldxfer/surrogate.hpp"

namespace fieldxfer {

namespace {

using nlohmann::json;

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j, Eigen::Index rows, Eigen::Index cols,
                                 const std::string& what) {
    if (!j.is_array() || (Eigen::Index)j.size() != rows)
        throw ParseError("model file: bad shape for " + what);
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const json& row = j[r];
        if (!row.is_array() || (Eigen::Index)row.size() != cols)
            throw ParseError("model file: bad shape for " + what);
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = row[c].get<double>();
    }
    return m;
}

json vector_to_json(const Eigen::VectorXd& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

Eigen::VectorXd vector_from_json(const json& j, const std::string& what) {
    if (!j.is_array()) throw ParseError("model file: bad array for " + what);
    Eigen::VectorXd v(j.size());
    for (size_t i = 0; i < j.size(); ++i) v[i] = j[i].get<double>();
    return v;
}

void write_json(const json& j, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    os << j.dump(1) << "\n";
    if (!os) throw std::runtime_error("write failed for " + path);
}

json read_json(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw InvalidArgument("cannot open model file " + path);
    json j;
    try {
        is >> j;
    } catch (const json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("kind") || !j.contains("version"))
        throw ParseError(path + ": not a model file (missing kind/version)");
    if (j["version"].get<int>() != 1)
        throw ParseError(path + ": unsupported model version");
    return j;
}

std::unique_ptr<MlpModel> mlp_from_json(const json& j) {
    auto m = std::make_unique<MlpModel>();
    m->arch = j.at("arch").get<std::vector<int>>();
    m->seed = j.at("seed").get<std::uint64_t>();
    const auto& jw = j.at("weights");
    const auto& jb = j.at("biases");
    for (size_t l = 0; l + 1 < m->arch.size(); ++l) {
        m->weights.push_back(matrix_from_json(jw.at(l), m->arch[l + 1], m->arch[l],
                                              "weights[" + std::to_string(l) + "]"));
        m->biases.push_back(vector_from_json(jb.at(l), "biases"));
    }
    if (j.contains("adam")) {
        AdamState s;
        const auto& ja = j["adam"];
        s.t = ja.at("t").get<long>();
        for (size_t l = 0; l + 1 < m->arch.size(); ++l) {
            s.mW.push_back(matrix_from_json(ja.at("mW").at(l), m->arch[l + 1],
                                            m->arch[l], "adam.mW"));
            s.vW.push_back(matrix_from_json(ja.at("vW").at(l), m->arch[l + 1],
                                            m->arch[l], "adam.vW"));
            s.mb.push_back(vector_from_json(ja.at("mb").at(l), "adam.mb"));
            s.vb.push_back(vector_from_json(ja.at("vb").at(l), "adam.vb"));
        }
        m->adam = std::move(s);
    }
    return m;
}

std::unique_ptr<ElmModel> elm_from_json(const json& j) {
    auto m = std::make_unique<ElmModel>();
    auto arch = j.at("arch").get<std::vector<int>>();
    if (arch.size() != 4) throw ParseError("model file: ELM arch must have 4 entries");
    m->arch = {arch[0], arch[1], arch[2], arch[3]};
    m->init_range = j.at("init_range").get<double>();
    m->seed = j.at("seed").get<std::uint64_t>();
    m->w1 = matrix_from_json(j.at("w1"), m->arch[1], m->arch[0], "w1");
    m->b1 = vector_from_json(j.at("b1"), "b1");
    m->w2 = matrix_from_json(j.at("w2"), m->arch[2], m->arch[1], "w2");
    m->b2 = vector_from_json(j.at("b2"), "b2");
    if (j.contains("beta")) {
        m->beta = vector_from_json(j["beta"], "beta");
        m->fit_residual = j.value("fit_residual", 0.0);
    }
    return m;
}

std::unique_ptr<RbfElmModel> rbf_from_json(const json& j) {
    auto m = std::make_unique<RbfElmModel>();
    const int dim = j.at("dim").get<int>();
    if (dim != 1 && dim != 2) throw ParseError("model file: bad RBF dim");
    for (const auto& c : j.at("centers")) {
        if (dim == 1) m->centers.push_back(Point::make1(c.at(0).get<double>()));
        else m->centers.push_back(Point::make2(c.at(0).get<double>(), c.at(1).get<double>()));
    }
    m->epsilon = j.at("epsilon").get<double>();
    m->convention = parse_rbf_convention(j.at("convention").get<std::string>());
    m->seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("beta")) {
        m->beta = vector_from_json(j["beta"], "beta");
        m->fit_residual = j.value("fit_residual", 0.0);
    }
    return m;
}

} // namespace

void MlpModel::save(const std::string& path) const {
    json j;
    j["kind"] = "mlp";
    j["version"] = 1;
    j["seed"] = seed;
    j["arch"] = arch;
    json jw = json::array(), jb = json::array();
    for (size_t l = 0; l < weights.size(); ++l) {
        jw.push_back(matrix_to_json(weights[l]));
        jb.push_back(vector_to_json(biases[l]));
    }
    j["weights"] = std::move(jw);
    j["biases"] = std::move(jb);
    if (adam) {
        json ja;
        ja["t"] = adam->t;
        json mW = json::array(), vW = json::array(), mb = json::array(), vb = json::array();
        for (size_t l = 0; l < weights.size(); ++l) {
            mW.push_back(matrix_to_json(adam->mW[l]));
            vW.push_back(matrix_to_json(adam->vW[l]));
            mb.push_back(vector_to_json(adam->mb[l]));
            vb.push_back(vector_to_json(adam->vb[l]));
        }
        ja["mW"] = std::move(mW);
        ja["vW"] = std::move(vW);
        ja["mb"] = std::move(mb);
        ja["vb"] = std::move(vb);
        j["adam"] = std::move(ja);
    }
    write_json(j, path);
}

void ElmModel::save(const std::string& path) const {
    json j;
    j["kind"] = "elm";
    j["version"] = 1;
    j["seed"] = seed;
    j["arch"] = std::vector<int>(arch.begin(), arch.end());
    j["init_range"] = init_range;
    j["w1"] = matrix_to_json(w1);
    j["b1"] = vector_to_json(b1);
    j["w2"] = matrix_to_json(w2);
    j["b2"] = vector_to_json(b2);
    if (is_fitted()) {
        j["beta"] = vector_to_json(beta);
        j["fit_residual"] = fit_residual;
    }
    write_json(j, path);
}

void RbfElmModel::save(const std::string& path) const {
    json j;
    j["kind"] = "rbf_elm";
    j["version"] = 1;
    j["seed"] = seed;
    j["dim"] = input_dim();
    j["epsilon"] = epsilon;
    j["convention"] = convention == RbfConvention::width ? "width" : "inverse_width";
    json jc = json::array();
    for (const Point& c : centers) {
        json pc = json::array();
        pc.push_back(c.x());
        if (c.dim() == 2) pc.push_back(c.y());
        jc.push_back(std::move(pc));
    }
    j["centers"] = std::move(jc);
    if (is_fitted()) {
        j["beta"] = vector_to_json(beta);
        j["fit_residual"] = fit_residual;
    }
    write_json(j, path);
}

std::unique_ptr<SurrogateModel> load_model(const std::string& path) {
    json j = read_json(path);
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "mlp") return mlp_from_json(j);
    if (kind == "elm") return elm_from_json(j);
    if (kind == "rbf_elm") return rbf_from_json(j);
    throw ParseError(path + ": unknown model kind '" + kind + "'");
}

} // namespace fieldxfer
