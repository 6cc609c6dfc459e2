#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "fieldxfer/geometry.hpp"

namespace fieldxfer {

// Piecewise-linear (P1) nodal field on a mesh. The mesh must outlive the
// field.
struct NodalField {
    const Mesh* mesh = nullptr;
    Eigen::VectorXd values;

    NodalField() = default;
    NodalField(const Mesh& m, Eigen::VectorXd v);

    void save(const std::string& path, const std::string& mesh_path) const;
    // Returns the field and the mesh path recorded in the file; the caller
    // loads the mesh and calls bind().
    static std::pair<Eigen::VectorXd, std::string> load(const std::string& path);
    void bind(const Mesh& m, Eigen::VectorXd v);
};

// Barycentric-weighted combination of the containing element's nodal values.
// Out-of-domain points throw PointOutsideDomain.
double pl_interpolate(const NodalField& field, const Point& x);

// Element-wise pl_interpolate; an out-of-domain point produces an error
// naming the offending index.
Eigen::VectorXd pl_interpolate_batch(const NodalField& field,
                                     const std::vector<Point>& targets);

} // namespace fieldxfer
