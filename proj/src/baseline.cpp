#include "fieldxfer/baseline.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace fieldxfer {

NodalField::NodalField(const Mesh& m, Eigen::VectorXd v) { bind(m, std::move(v)); }

void NodalField::bind(const Mesh& m, Eigen::VectorXd v) {
    if (v.size() != m.num_nodes())
        throw InvalidArgument("nodal value count does not match node count");
    if (!v.allFinite())
        throw InvalidArgument("nodal values must be finite");
    mesh = &m;
    values = std::move(v);
}

void NodalField::save(const std::string& path, const std::string& mesh_path) const {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    os << "FIELDv1\n";
    os << "mesh " << mesh_path << "\n";
    os << "values " << values.size() << "\n";
    char buf[40];
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.16e", values[i]);
        os << buf << "\n";
    }
    if (!os) throw std::runtime_error("write failed for " + path);
}

std::pair<Eigen::VectorXd, std::string> NodalField::load(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw InvalidArgument("cannot open field file " + path);
    std::string magic;
    if (!(is >> magic) || magic != "FIELDv1")
        throw ParseError(path + ": expected FIELDv1 header");
    std::string kw, mesh_path;
    if (!(is >> kw >> mesh_path) || kw != "mesh")
        throw ParseError(path + ": expected 'mesh <path>'");
    long n = 0;
    if (!(is >> kw >> n) || kw != "values" || n < 0)
        throw ParseError(path + ": expected 'values <N>'");
    Eigen::VectorXd v(n);
    for (long i = 0; i < n; ++i)
        if (!(is >> v[i]))
            throw ParseError(path + ": bad value", i);
    return {std::move(v), std::move(mesh_path)};
}

double pl_interpolate(const NodalField& field, const Point& x) {
    if (!field.mesh) throw NotFitted("nodal field has no mesh bound");
    const Mesh& m = *field.mesh;
    ElementLocation loc = m.locate(x);
    const auto& el = m.elements()[loc.element_index];
    double out = 0.0;
    for (int k = 0; k < loc.num_weights; ++k)
        out += loc.barycentric[k] * field.values[el[k]];
    return out;
}

Eigen::VectorXd pl_interpolate_batch(const NodalField& field,
                                     const std::vector<Point>& targets) {
    Eigen::VectorXd out(targets.size());
    for (size_t i = 0; i < targets.size(); ++i) {
        try {
            out[i] = pl_interpolate(field, targets[i]);
        } catch (const PointOutsideDomain& e) {
            throw PointOutsideDomain("target " + std::to_string(i) + ": " + e.what());
        }
    }
    return out;
}

} // namespace fieldxfer
