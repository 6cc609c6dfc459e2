#include "fieldxfer/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <unordered_map>

namespace fieldxfer {

namespace {

constexpr double kDedupTol = 1e-12;       // absolute, unit-scale domains
constexpr double kBaryTol = 1e-12;        // containment slack on weights

void format_real(char* buf, size_t n, double v) {
    std::snprintf(buf, n, "%.16e", v);
}

// Hash-grid duplicate check; cells of 1e-9 so 1e-12-close points share a
// cell or a neighbor.
struct DedupGrid {
    std::unordered_map<std::uint64_t, std::vector<int>> cells;
    const std::vector<Point>& pts;
    explicit DedupGrid(const std::vector<Point>& p) : pts(p) {}

    static std::uint64_t key(long long ix, long long iy) {
        return static_cast<std::uint64_t>(ix) * 0x9E3779B97F4A7C15ull ^
               static_cast<std::uint64_t>(iy);
    }
    static long long cell(double v) {
        return static_cast<long long>(std::floor(v * 1e9));
    }
    // returns index of an existing point within tol, or -1
    int find_near(const Point& p, double tol) const {
        long long cx = cell(p.x()), cy = cell(p.y());
        for (long long ix = cx - 1; ix <= cx + 1; ++ix) {
            for (long long iy = cy - 1; iy <= cy + 1; ++iy) {
                auto it = cells.find(key(ix, iy));
                if (it == cells.end()) continue;
                for (int j : it->second) {
                    if (squared_distance(p, pts[j]) <= tol * tol) return j;
                }
            }
        }
        return -1;
    }
    void insert(int i) {
        cells[key(cell(pts[i].x()), cell(pts[i].y()))].push_back(i);
    }
};

} // namespace

double squared_distance(const Point& a, const Point& b) {
    double dx = a.x() - b.x();
    double dy = (a.dim() == 1 && b.dim() == 1) ? 0.0 : a.y() - b.y();
    return dx * dx + dy * dy;
}

Mesh::Mesh(int dim, std::vector<Point> nodes,
           std::vector<std::array<int, 3>> elements,
           std::vector<int> boundary_nodes)
    : dim_(dim), nodes_(std::move(nodes)), elements_(std::move(elements)),
      boundary_(std::move(boundary_nodes)) {
    if (dim_ != 1 && dim_ != 2)
        throw InvalidArgument("mesh dimension must be 1 or 2");
    if (nodes_.empty())
        throw InvalidArgument("mesh has no nodes");
    const int n = num_nodes();
    for (const Point& p : nodes_) {
        if (!std::isfinite(p.x()) || (dim_ == 2 && !std::isfinite(p.y())))
            throw InvalidArgument("non-finite node coordinate");
    }
    DedupGrid grid(nodes_);
    for (int i = 0; i < n; ++i) {
        if (grid.find_near(nodes_[i], kDedupTol) >= 0)
            throw InvalidArgument("duplicate mesh nodes within tolerance at node " +
                                  std::to_string(i));
        grid.insert(i);
    }
    const int vpe = verts_per_element();
    for (size_t e = 0; e < elements_.size(); ++e) {
        auto& el = elements_[e];
        for (int k = 0; k < vpe; ++k) {
            if (el[k] < 0 || el[k] >= n)
                throw InvalidArgument("element " + std::to_string(e) +
                                      " references node out of range");
        }
        if (dim_ == 1) {
            if (nodes_[el[0]].x() > nodes_[el[1]].x()) std::swap(el[0], el[1]);
            if (!(nodes_[el[1]].x() - nodes_[el[0]].x() > 0.0))
                throw InvalidArgument("segment " + std::to_string(e) +
                                      " has non-positive length");
            el[2] = -1;
        } else {
            const Point &a = nodes_[el[0]], &b = nodes_[el[1]], &c = nodes_[el[2]];
            double det = (b.x() - a.x()) * (c.y() - a.y()) -
                         (c.x() - a.x()) * (b.y() - a.y());
            if (det < 0.0) {
                std::swap(el[1], el[2]);
                det = -det;
            }
            if (!(det > 0.0))
                throw InvalidArgument("triangle " + std::to_string(e) +
                                      " is degenerate");
        }
    }
    for (int b : boundary_) {
        if (b < 0 || b >= n)
            throw InvalidArgument("boundary node index out of range");
    }
    build_bins();
}

void Mesh::build_bins() {
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const Point& p : nodes_) {
        xmin = std::min(xmin, p.x());
        xmax = std::max(xmax, p.x());
        if (dim_ == 2) {
            ymin = std::min(ymin, p.y());
            ymax = std::max(ymax, p.y());
        }
    }
    if (dim_ == 1) { ymin = 0.0; ymax = 1.0; }
    bbox_[0] = xmin; bbox_[1] = xmax; bbox_[2] = ymin; bbox_[3] = ymax;

    const int m = std::max(1, num_elements());
    if (dim_ == 1) {
        bins_x_ = std::min(4096, std::max(1, m));
        bins_y_ = 1;
    } else {
        bins_x_ = bins_y_ = std::min(1024, std::max(1, (int)std::ceil(std::sqrt((double)m))));
    }
    bins_.assign((size_t)bins_x_ * bins_y_, {});
    const double wx = std::max(bbox_[1] - bbox_[0], 1e-300);
    const double wy = std::max(bbox_[3] - bbox_[2], 1e-300);
    auto bin_ix = [&](double x) {
        return std::clamp((int)((x - bbox_[0]) / wx * bins_x_), 0, bins_x_ - 1);
    };
    auto bin_iy = [&](double y) {
        return std::clamp((int)((y - bbox_[2]) / wy * bins_y_), 0, bins_y_ - 1);
    };
    for (int e = 0; e < num_elements(); ++e) {
        double exmin = nodes_[elements_[e][0]].x(), exmax = exmin;
        double eymin = 0.0, eymax = 0.0;
        if (dim_ == 2) { eymin = nodes_[elements_[e][0]].y(); eymax = eymin; }
        for (int k = 1; k < verts_per_element(); ++k) {
            const Point& p = nodes_[elements_[e][k]];
            exmin = std::min(exmin, p.x());
            exmax = std::max(exmax, p.x());
            if (dim_ == 2) {
                eymin = std::min(eymin, p.y());
                eymax = std::max(eymax, p.y());
            }
        }
        int ix0 = bin_ix(exmin), ix1 = bin_ix(exmax);
        int iy0 = (dim_ == 2) ? bin_iy(eymin) : 0;
        int iy1 = (dim_ == 2) ? bin_iy(eymax) : 0;
        for (int iy = iy0; iy <= iy1; ++iy)
            for (int ix = ix0; ix <= ix1; ++ix)
                bins_[(size_t)iy * bins_x_ + ix].push_back(e);
    }
    // element ids pushed in ascending order already; nothing to sort
}

std::array<double, 3> Mesh::barycentric(int e, const Point& x) const {
    const auto& el = elements_[e];
    if (dim_ == 1) {
        double x0 = nodes_[el[0]].x(), x1 = nodes_[el[1]].x();
        double w1 = (x.x() - x0) / (x1 - x0);
        return {1.0 - w1, w1, 0.0};
    }
    const Point &a = nodes_[el[0]], &b = nodes_[el[1]], &c = nodes_[el[2]];
    double det = (b.x() - a.x()) * (c.y() - a.y()) -
                 (c.x() - a.x()) * (b.y() - a.y());
    double w1 = ((x.x() - a.x()) * (c.y() - a.y()) -
                 (c.x() - a.x()) * (x.y() - a.y())) / det;
    double w2 = ((b.x() - a.x()) * (x.y() - a.y()) -
                 (x.x() - a.x()) * (b.y() - a.y())) / det;
    return {1.0 - w1 - w2, w1, w2};
}

ElementLocation Mesh::locate(const Point& x) const {
    const int nw = verts_per_element();
    auto contains = [&](int e, ElementLocation& loc) {
        auto w = barycentric(e, x);
        for (int k = 0; k < nw; ++k)
            if (w[k] < -kBaryTol) return false;
        loc.element_index = e;
        loc.barycentric = w;
        loc.num_weights = nw;
        return true;
    };
    const double wx = std::max(bbox_[1] - bbox_[0], 1e-300);
    const double wy = std::max(bbox_[3] - bbox_[2], 1e-300);
    int ix = std::clamp((int)((x.x() - bbox_[0]) / wx * bins_x_), 0, bins_x_ - 1);
    int iy = (dim_ == 2)
                 ? std::clamp((int)((x.y() - bbox_[2]) / wy * bins_y_), 0, bins_y_ - 1)
                 : 0;
    ElementLocation loc;
    for (int e : bins_[(size_t)iy * bins_x_ + ix])
        if (contains(e, loc)) return loc;
    // tolerance band around bin edges: fall back to a full scan
    for (int e = 0; e < num_elements(); ++e)
        if (contains(e, loc)) return loc;
    std::ostringstream os;
    os << "point (" << x.x();
    if (dim_ == 2) os << ", " << x.y();
    os << ") lies outside the mesh domain";
    throw PointOutsideDomain(os.str());
}

double Mesh::element_measure(int e) const {
    const auto& el = elements_[e];
    if (dim_ == 1)
        return nodes_[el[1]].x() - nodes_[el[0]].x();
    const Point &a = nodes_[el[0]], &b = nodes_[el[1]], &c = nodes_[el[2]];
    return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) -
                  (c.x() - a.x()) * (b.y() - a.y()));
}

std::vector<double> Mesh::element_measures() const {
    std::vector<double> out(num_elements());
    for (int e = 0; e < num_elements(); ++e) out[e] = element_measure(e);
    return out;
}

void Mesh::write(std::ostream& os) const {
    char buf[40];
    os << "MESHv1 " << dim_ << "\n";
    os << "nodes " << num_nodes() << "\n";
    for (const Point& p : nodes_) {
        format_real(buf, sizeof buf, p.x());
        os << buf;
        if (dim_ == 2) {
            format_real(buf, sizeof buf, p.y());
            os << ' ' << buf;
        }
        os << "\n";
    }
    os << "elements " << num_elements() << "\n";
    for (const auto& el : elements_) {
        os << el[0] << ' ' << el[1];
        if (dim_ == 2) os << ' ' << el[2];
        os << "\n";
    }
    os << "boundary " << boundary_.size() << "\n";
    for (int b : boundary_) os << b << "\n";
}

void Mesh::save(const std::string& path) const {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    write(os);
    if (!os) throw std::runtime_error("write failed for " + path);
}

Mesh Mesh::read(std::istream& is, const std::string& origin) {
    std::string magic;
    int dim = 0;
    if (!(is >> magic >> dim) || magic != "MESHv1")
        throw ParseError(origin + ": expected MESHv1 header");
    if (dim != 1 && dim != 2)
        throw ParseError(origin + ": bad dimension " + std::to_string(dim));
    std::string kw;
    long n = 0;
    if (!(is >> kw >> n) || kw != "nodes" || n < 0)
        throw ParseError(origin + ": expected 'nodes <N>'");
    std::vector<Point> nodes((size_t)n);
    for (long i = 0; i < n; ++i) {
        double x, y = 0.0;
        if (!(is >> x) || (dim == 2 && !(is >> y)))
            throw ParseError(origin + ": bad node coordinates", i);
        nodes[i] = (dim == 1) ? Point::make1(x) : Point::make2(x, y);
    }
    long m = 0;
    if (!(is >> kw >> m) || kw != "elements" || m < 0)
        throw ParseError(origin + ": expected 'elements <M>'");
    std::vector<std::array<int, 3>> elems((size_t)m, {0, 0, -1});
    for (long e = 0; e < m; ++e) {
        if (!(is >> elems[e][0] >> elems[e][1]) ||
            (dim == 2 && !(is >> elems[e][2])))
            throw ParseError(origin + ": bad element indices", e);
    }
    long k = 0;
    if (!(is >> kw >> k) || kw != "boundary" || k < 0)
        throw ParseError(origin + ": expected 'boundary <K>'");
    std::vector<int> boundary((size_t)k);
    for (long i = 0; i < k; ++i)
        if (!(is >> boundary[i]))
            throw ParseError(origin + ": bad boundary index", i);
    return Mesh(dim, std::move(nodes), std::move(elems), std::move(boundary));
}

Mesh Mesh::load(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw InvalidArgument("cannot open mesh file " + path);
    return read(is, path);
}

Mesh generate_uniform_triangular(int nx, int ny, const Bounds& bounds) {
    if (nx < 1 || ny < 1)
        throw InvalidArgument("cell counts must be >= 1");
    if (bounds.degenerate())
        throw InvalidArgument("degenerate bounds");
    const int px = nx + 1, py = ny + 1;
    std::vector<Point> nodes;
    nodes.reserve((size_t)px * py);
    for (int iy = 0; iy < py; ++iy) {
        double y = bounds.ymin + bounds.height() * iy / ny;
        for (int ix = 0; ix < px; ++ix) {
            double x = bounds.xmin + bounds.width() * ix / nx;
            nodes.push_back(Point::make2(x, y));
        }
    }
    auto id = [&](int ix, int iy) { return iy * px + ix; };
    std::vector<std::array<int, 3>> elems;
    elems.reserve((size_t)2 * nx * ny);
    // every quad split along the same lower-left to upper-right diagonal
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
            int a = id(ix, iy), b = id(ix + 1, iy);
            int c = id(ix + 1, iy + 1), d = id(ix, iy + 1);
            elems.push_back({a, b, c});
            elems.push_back({a, c, d});
        }
    }
    std::vector<int> boundary;
    for (int iy = 0; iy < py; ++iy)
        for (int ix = 0; ix < px; ++ix)
            if (ix == 0 || iy == 0 || ix == nx || iy == ny)
                boundary.push_back(id(ix, iy));
    return Mesh(2, std::move(nodes), std::move(elems), std::move(boundary));
}

Mesh generate_uniform_1d(int n, const Interval& interval) {
    if (n < 1) throw InvalidArgument("cell count must be >= 1");
    if (!(interval.b > interval.a))
        throw InvalidArgument("degenerate interval");
    std::vector<Point> nodes(n + 1);
    for (int i = 0; i <= n; ++i)
        nodes[i] = Point::make1(interval.a + interval.length() * i / n);
    std::vector<std::array<int, 3>> elems(n, {0, 0, -1});
    for (int i = 0; i < n; ++i) elems[i] = {i, i + 1, -1};
    return Mesh(1, std::move(nodes), std::move(elems), {0, n});
}

Mesh derive_midpoint_mesh(const Mesh& source) {
    if (source.num_elements() == 0)
        throw InvalidArgument("source mesh has no elements");
    if (source.dim() == 1) {
        std::vector<double> xs;
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (const Point& p : source.nodes()) {
            lo = std::min(lo, p.x());
            hi = std::max(hi, p.x());
        }
        for (const auto& el : source.elements())
            xs.push_back(0.5 * (source.nodes()[el[0]].x() + source.nodes()[el[1]].x()));
        xs.push_back(lo);
        xs.push_back(hi);
        std::sort(xs.begin(), xs.end());
        xs.erase(std::unique(xs.begin(), xs.end(),
                             [](double a, double b) { return std::abs(a - b) <= kDedupTol; }),
                 xs.end());
        std::vector<Point> nodes(xs.size());
        for (size_t i = 0; i < xs.size(); ++i) nodes[i] = Point::make1(xs[i]);
        std::vector<std::array<int, 3>> elems(xs.size() - 1, {0, 0, -1});
        for (size_t i = 0; i + 1 < xs.size(); ++i)
            elems[i] = {(int)i, (int)i + 1, -1};
        return Mesh(1, std::move(nodes), std::move(elems),
                    {0, (int)xs.size() - 1});
    }
    // 2D: one barycenter per element plus the source boundary nodes
    std::vector<Point> pts;
    pts.reserve(source.num_elements() + source.boundary_nodes().size());
    for (const auto& el : source.elements()) {
        const auto& nd = source.nodes();
        pts.push_back(Point::make2(
            (nd[el[0]].x() + nd[el[1]].x() + nd[el[2]].x()) / 3.0,
            (nd[el[0]].y() + nd[el[1]].y() + nd[el[2]].y()) / 3.0));
    }
    for (int b : source.boundary_nodes()) pts.push_back(source.nodes()[b]);
    return delaunay_triangulate(pts);
}

Mesh generate_graded_mesh(const DensityField& density, int target_nodes,
                          const Bounds& bounds, std::uint64_t seed) {
    if (target_nodes <= 0)
        throw InvalidArgument("target_nodes must be positive");
    if (bounds.degenerate())
        throw InvalidArgument("degenerate bounds");

    // estimate the density ceiling on a coarse probe grid
    double dmax = 0.0;
    for (int iy = 0; iy <= 64; ++iy) {
        for (int ix = 0; ix <= 64; ++ix) {
            Point p = Point::make2(bounds.xmin + bounds.width() * ix / 64.0,
                                   bounds.ymin + bounds.height() * iy / 64.0);
            double d = density(p);
            if (!(d > 0.0) || !std::isfinite(d))
                throw InvalidArgument("density must be strictly positive and bounded");
            dmax = std::max(dmax, d);
        }
    }
    dmax *= 1.5; // headroom over the probe-grid maximum

    const int per_side = std::max(2, (int)std::lround(std::sqrt((double)target_nodes) / 2.0));
    std::vector<Point> pts;
    for (int i = 0; i < per_side; ++i) {
        double t = (double)i / per_side;
        pts.push_back(Point::make2(bounds.xmin + t * bounds.width(), bounds.ymin));
        pts.push_back(Point::make2(bounds.xmax, bounds.ymin + t * bounds.height()));
        pts.push_back(Point::make2(bounds.xmax - t * bounds.width(), bounds.ymax));
        pts.push_back(Point::make2(bounds.xmin, bounds.ymax - t * bounds.height()));
    }
    const int interior = std::max(0, target_nodes - (int)pts.size());

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(bounds.xmin, bounds.xmax);
    std::uniform_real_distribution<double> uy(bounds.ymin, bounds.ymax);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    DedupGrid grid(pts);
    for (size_t i = 0; i < pts.size(); ++i) grid.insert((int)i);
    long long attempts = 0;
    const long long max_attempts = 10000LL * (interior + 1);
    int accepted = 0;
    while (accepted < interior && attempts++ < max_attempts) {
        Point p = Point::make2(ux(rng), uy(rng));
        double d = density(p);
        if (!(d > 0.0) || !std::isfinite(d))
            throw InvalidArgument("density must be strictly positive and bounded");
        if (u01(rng) * dmax > d) continue;
        if (grid.find_near(p, 10 * kDedupTol) >= 0) continue;
        pts.push_back(p);
        grid.insert((int)pts.size() - 1);
        ++accepted;
    }
    return delaunay_triangulate(pts);
}

} // namespace fieldxfer
