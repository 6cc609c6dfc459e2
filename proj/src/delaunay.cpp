#include "fieldxfer/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <vector>

namespace fieldxfer {

namespace {

struct Tri {
    int v[3];
    double cx, cy, r2; // circumcircle
    bool alive = true;
};

// Circumcircle of (a,b,c); degenerate triples get an effectively infinite
// radius so any later insertion destroys them.
void circumcircle(const Point& a, const Point& b, const Point& c, Tri& t) {
    double ax = a.x(), ay = a.y();
    double bx = b.x() - ax, by = b.y() - ay;
    double cx = c.x() - ax, cy = c.y() - ay;
    double d = 2.0 * (bx * cy - by * cx);
    if (d == 0.0) {
        t.cx = t.cy = 0.0;
        t.r2 = std::numeric_limits<double>::infinity();
        return;
    }
    double b2 = bx * bx + by * by;
    double c2 = cx * cx + cy * cy;
    double ux = (cy * b2 - by * c2) / d;
    double uy = (bx * c2 - cx * b2) / d;
    t.cx = ax + ux;
    t.cy = ay + uy;
    t.r2 = ux * ux + uy * uy;
}

} // namespace

Mesh delaunay_triangulate(const std::vector<Point>& points) {
    const int n = (int)points.size();
    if (n < 3)
        throw DegenerateGeometry("Delaunay triangulation needs at least 3 points");
    for (const Point& p : points)
        if (p.dim() != 2)
            throw InvalidArgument("Delaunay triangulation requires 2D points");

    double xmin = points[0].x(), xmax = xmin, ymin = points[0].y(), ymax = ymin;
    for (const Point& p : points) {
        xmin = std::min(xmin, p.x());
        xmax = std::max(xmax, p.x());
        ymin = std::min(ymin, p.y());
        ymax = std::max(ymax, p.y());
    }
    const double extent = std::max({xmax - xmin, ymax - ymin, 1e-300});

    // collinearity check: max deviation from the widest-spread segment
    {
        int i0 = 0, i1 = 0;
        double best = -1.0;
        for (int i = 1; i < n; ++i) {
            double d2 = squared_distance(points[0], points[i]);
            if (d2 > best) { best = d2; i1 = i; }
        }
        double dx = points[i1].x() - points[i0].x();
        double dy = points[i1].y() - points[i0].y();
        double len = std::sqrt(dx * dx + dy * dy);
        double maxdev = 0.0;
        for (const Point& p : points) {
            double cr = dx * (p.y() - points[i0].y()) - dy * (p.x() - points[i0].x());
            maxdev = std::max(maxdev, std::abs(cr) / std::max(len, 1e-300));
        }
        if (maxdev <= 1e-12 * extent)
            throw DegenerateGeometry("Delaunay input points are collinear");
    }

    // working point list with a far super-triangle appended
    std::vector<Point> pts = points;
    const double cxm = 0.5 * (xmin + xmax), cym = 0.5 * (ymin + ymax);
    const double R = 64.0 * extent;
    pts.push_back(Point::make2(cxm - 2.0 * R, cym - R));
    pts.push_back(Point::make2(cxm + 2.0 * R, cym - R));
    pts.push_back(Point::make2(cxm, cym + 2.0 * R));

    std::vector<Tri> tris;
    tris.reserve((size_t)4 * n);
    {
        Tri t{{n, n + 1, n + 2}, 0, 0, 0, true};
        circumcircle(pts[n], pts[n + 1], pts[n + 2], t);
        tris.push_back(t);
    }

    // deterministic shuffled insertion order; lattice-like inputs behave
    // much better when not inserted row by row
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(0x00C0FFEEull);
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<int> bad;
    std::map<std::pair<int, int>, int> edge_count;
    size_t dead = 0;

    for (int idx : order) {
        const Point& p = pts[idx];
        bad.clear();
        for (int t = 0; t < (int)tris.size(); ++t) {
            if (!tris[t].alive) continue;
            double dx = p.x() - tris[t].cx, dy = p.y() - tris[t].cy;
            double d2 = dx * dx + dy * dy;
            // strictly inside with a relative margin; cocircular points do
            // not open the cavity (tie broken by insertion order)
            if (d2 < tris[t].r2 * (1.0 - 1e-12)) bad.push_back(t);
        }
        if (bad.empty()) {
            // borderline-cocircular fallback: open the containing triangle
            for (int t = 0; t < (int)tris.size() && bad.empty(); ++t) {
                if (!tris[t].alive) continue;
                const Point &a = pts[tris[t].v[0]], &b = pts[tris[t].v[1]],
                            &c = pts[tris[t].v[2]];
                double det = (b.x() - a.x()) * (c.y() - a.y()) -
                             (c.x() - a.x()) * (b.y() - a.y());
                if (det == 0.0) continue;
                double w1 = ((p.x() - a.x()) * (c.y() - a.y()) -
                             (c.x() - a.x()) * (p.y() - a.y())) / det;
                double w2 = ((b.x() - a.x()) * (p.y() - a.y()) -
                             (p.x() - a.x()) * (b.y() - a.y())) / det;
                if (w1 >= -1e-9 && w2 >= -1e-9 && 1.0 - w1 - w2 >= -1e-9)
                    bad.push_back(t);
            }
            if (bad.empty())
                throw DegenerateGeometry("Delaunay insertion failed (duplicate point?)");
        }

        edge_count.clear();
        for (int t : bad) {
            for (int k = 0; k < 3; ++k) {
                int u = tris[t].v[k], v = tris[t].v[(k + 1) % 3];
                if (u > v) std::swap(u, v);
                ++edge_count[{u, v}];
            }
            tris[t].alive = false;
            ++dead;
        }
        for (const auto& [edge, count] : edge_count) {
            if (count != 1) continue;
            Tri t{{idx, edge.first, edge.second}, 0, 0, 0, true};
            circumcircle(pts[t.v[0]], pts[t.v[1]], pts[t.v[2]], t);
            tris.push_back(t);
        }
        if (dead * 2 > tris.size()) {
            tris.erase(std::remove_if(tris.begin(), tris.end(),
                                      [](const Tri& t) { return !t.alive; }),
                       tris.end());
            dead = 0;
        }
    }

    std::vector<std::array<int, 3>> elems;
    for (const Tri& t : tris) {
        if (!t.alive) continue;
        if (t.v[0] >= n || t.v[1] >= n || t.v[2] >= n) continue;
        const Point &a = pts[t.v[0]], &b = pts[t.v[1]], &c = pts[t.v[2]];
        double det = (b.x() - a.x()) * (c.y() - a.y()) -
                     (c.x() - a.x()) * (b.y() - a.y());
        if (det == 0.0) continue; // measure-zero sliver from a cocircular tie
        elems.push_back({t.v[0], t.v[1], t.v[2]});
    }
    if (elems.empty())
        throw DegenerateGeometry("Delaunay triangulation produced no triangles");

    // hull nodes: endpoints of edges used by exactly one triangle
    std::map<std::pair<int, int>, int> hull_edges;
    for (const auto& el : elems) {
        for (int k = 0; k < 3; ++k) {
            int u = el[k], v = el[(k + 1) % 3];
            if (u > v) std::swap(u, v);
            ++hull_edges[{u, v}];
        }
    }
    std::vector<char> on_hull(n, 0);
    for (const auto& [edge, count] : hull_edges) {
        if (count == 1) {
            on_hull[edge.first] = 1;
            on_hull[edge.second] = 1;
        }
    }
    std::vector<int> boundary;
    for (int i = 0; i < n; ++i)
        if (on_hull[i]) boundary.push_back(i);

    return Mesh(2, points, std::move(elems), std::move(boundary));
}

} // namespace fieldxfer
