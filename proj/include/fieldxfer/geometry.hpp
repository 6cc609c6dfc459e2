#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "fieldxfer/errors.hpp"

namespace fieldxfer {

// A point in 1D or 2D. For dim()==1 only x() is meaningful.
struct Point {
    double coord[2] = {0.0, 0.0};
    int ndim = 2;

    static Point make1(double x) { return Point{{x, 0.0}, 1}; }
    static Point make2(double x, double y) { return Point{{x, y}, 2}; }

    int dim() const { return ndim; }
    double x() const { return coord[0]; }
    double y() const { return coord[1]; }
    double operator[](int i) const { return coord[i]; }
    double& operator[](int i) { return coord[i]; }
};

double squared_distance(const Point& a, const Point& b);

struct Bounds {
    double xmin = 0.0, xmax = 1.0;
    double ymin = 0.0, ymax = 1.0;
    double width() const { return xmax - xmin; }
    double height() const { return ymax - ymin; }
    double area() const { return width() * height(); }
    bool degenerate() const { return !(xmax > xmin) || !(ymax > ymin); }
};

struct Interval {
    double a = 0.0, b = 1.0;
    double length() const { return b - a; }
};

// Containing element plus barycentric weights (2 for segments, 3 for
// triangles). Weights sum to 1; each >= -1e-12.
struct ElementLocation {
    int element_index = -1;
    std::array<double, 3> barycentric = {0.0, 0.0, 0.0};
    int num_weights = 0;
};

// Immutable simplicial mesh: segments (dim 1) or triangles (dim 2).
// Triangles are re-oriented to positive signed area at construction.
// A uniform spatial bin index is built up front so locate() is a pure read.
class Mesh {
public:
    // Element tuples use entries [0..dim]; entry 2 is ignored for dim 1.
    Mesh(int dim, std::vector<Point> nodes,
         std::vector<std::array<int, 3>> elements,
         std::vector<int> boundary_nodes);

    int dim() const { return dim_; }
    const std::vector<Point>& nodes() const { return nodes_; }
    const std::vector<std::array<int, 3>>& elements() const { return elements_; }
    const std::vector<int>& boundary_nodes() const { return boundary_; }
    int num_nodes() const { return static_cast<int>(nodes_.size()); }
    int num_elements() const { return static_cast<int>(elements_.size()); }
    int verts_per_element() const { return dim_ + 1; }

    // Area (2D) or length (1D) of one element.
    double element_measure(int e) const;
    std::vector<double> element_measures() const;

    // Lowest-indexed element containing x (barycentric weights >= -1e-12).
    // Throws PointOutsideDomain when no element qualifies.
    ElementLocation locate(const Point& x) const;

    // Barycentric weights of x with respect to element e (may be negative).
    std::array<double, 3> barycentric(int e, const Point& x) const;

    void save(const std::string& path) const;
    void write(std::ostream& os) const;
    static Mesh load(const std::string& path);
    static Mesh read(std::istream& is, const std::string& origin = "<stream>");

private:
    void build_bins();
    int dim_;
    std::vector<Point> nodes_;
    std::vector<std::array<int, 3>> elements_;
    std::vector<int> boundary_;

    // bin grid over the bounding box; each bin holds ascending element ids
    double bbox_[4] = {0, 0, 0, 0}; // xmin,xmax,ymin,ymax
    int bins_x_ = 1, bins_y_ = 1;
    std::vector<std::vector<int>> bins_;
};

Mesh generate_uniform_triangular(int nx, int ny, const Bounds& bounds);
Mesh generate_uniform_1d(int n, const Interval& interval);

// 1D: element midpoints plus the interval endpoints, segments between
// consecutive sorted nodes. 2D: element barycenters plus the source boundary
// nodes, Delaunay triangulated.
Mesh derive_midpoint_mesh(const Mesh& source);

// Incremental Bowyer-Watson with a far super-triangle. The result covers the
// convex hull and satisfies the empty-circumcircle property to tolerance.
Mesh delaunay_triangulate(const std::vector<Point>& points);

using DensityField = std::function<double(const Point&)>;

// Rejection-sampled interior nodes proportional to density, a boundary ring,
// then Delaunay. Node count lands within +-10% of target_nodes.
Mesh generate_graded_mesh(const DensityField& density, int target_nodes,
                          const Bounds& bounds, std::uint64_t seed);

} // namespace fieldxfer
