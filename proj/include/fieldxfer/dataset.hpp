#pragma once

#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "fieldxfer/baseline.hpp"
#include "fieldxfer/geometry.hpp"

namespace fieldxfer {

// Paired sample points and scalar values; the training/evaluation unit.
struct ScatteredDataset {
    std::vector<Point> points;
    Eigen::VectorXd values;

    ScatteredDataset() = default;
    ScatteredDataset(std::vector<Point> pts, Eigen::VectorXd vals);

    int size() const { return (int)points.size(); }
    int dim() const { return points.empty() ? 0 : points.front().dim(); }

    void save(const std::string& path) const;
    static ScatteredDataset load(const std::string& path);
};

enum class FieldId { osc2d, moving_gauss, sine1d, twopeak1d, paraboloid2d, multipeak2d };

// Analytic benchmark field, evaluable anywhere in its stated domain.
// 2D fields live on [-1,1]^2, 1D fields on [0,1].
class BenchmarkField {
public:
    explicit BenchmarkField(FieldId id, double t = 0.125) : id_(id), t_(t) {}
    static BenchmarkField parse(const std::string& name, double t = 0.125);

    FieldId id() const { return id_; }
    double time() const { return t_; }
    int dim() const;
    std::string name() const;
    Bounds domain2d() const { return Bounds{-1.0, 1.0, -1.0, 1.0}; }
    Interval domain1d() const { return Interval{0.0, 1.0}; }

    double operator()(const Point& x) const { return eval(x); }
    double eval(const Point& x) const;

private:
    FieldId id_;
    double t_;
};

double eval_field(const BenchmarkField& field, const Point& x);

// One sample per mesh node, order matching node order.
ScatteredDataset sample_at_nodes(const Mesh& mesh, const BenchmarkField& field);

// Symmetric Gauss rules on the reference triangle, barycentric coordinates
// and weights (weights sum to 1). Supported sizes: 1, 3, 16.
std::vector<std::array<double, 4>> triangle_quadrature(int points_per_element);

using EnrichmentSource = std::variant<const NodalField*, BenchmarkField>;

// Appends quadrature-rule points (mapped from the reference triangle) for
// every element with area above the threshold; values come from the given
// source. New points within 1e-12 of an existing one are dropped.
ScatteredDataset enrich_with_quadrature(const Mesh& mesh,
                                        const ScatteredDataset& base,
                                        const EnrichmentSource& source,
                                        double area_threshold,
                                        int points_per_element);

} // namespace fieldxfer
