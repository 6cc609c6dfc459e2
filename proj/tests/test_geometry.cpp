#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "fieldxfer/geometry.hpp"

using namespace fieldxfer;

namespace {

// independent circumcircle via a 2x2 linear solve (not the builder's formula)
struct Circle {
    double cx, cy, r;
};

Circle circumcircle_oracle(const Point& a, const Point& b, const Point& c) {
    // perpendicular bisector equations
    double ax = a.x(), ay = a.y(), bx = b.x(), by = b.y(), cx = c.x(), cy = c.y();
    double m11 = 2 * (bx - ax), m12 = 2 * (by - ay);
    double m21 = 2 * (cx - ax), m22 = 2 * (cy - ay);
    double r1 = bx * bx - ax * ax + by * by - ay * ay;
    double r2 = cx * cx - ax * ax + cy * cy - ay * ay;
    double det = m11 * m22 - m12 * m21;
    double ux = (r1 * m22 - m12 * r2) / det;
    double uy = (m11 * r2 - r1 * m21) / det;
    return {ux, uy, std::hypot(ux - ax, uy - ay)};
}

// every non-vertex node lies outside every circumcircle, within 1e-10 relative
void check_empty_circumcircle(const Mesh& m) {
    for (int e = 0; e < m.num_elements(); ++e) {
        const auto& el = m.elements()[e];
        Circle c = circumcircle_oracle(m.nodes()[el[0]], m.nodes()[el[1]],
                                       m.nodes()[el[2]]);
        for (int i = 0; i < m.num_nodes(); ++i) {
            if (i == el[0] || i == el[1] || i == el[2]) continue;
            double d = std::hypot(m.nodes()[i].x() - c.cx, m.nodes()[i].y() - c.cy);
            CHECK(d >= c.r * (1.0 - 1e-10));
        }
    }
}

} // namespace

TEST_CASE("uniform triangular mesh: counts and structure") {
    Mesh one = generate_uniform_triangular(1, 1, Bounds{0, 1, 0, 1});
    CHECK(one.num_nodes() == 4);
    CHECK(one.num_elements() == 2);

    Mesh ex1 = generate_uniform_triangular(49, 49, Bounds{-1, 1, -1, 1});
    CHECK(ex1.num_nodes() == 2500);

    Mesh fine = generate_uniform_triangular(99, 99, Bounds{-1, 1, -1, 1});
    CHECK(fine.num_nodes() == 10000);
    CHECK(fine.num_elements() == 19602);

    CHECK_THROWS_AS(generate_uniform_triangular(0, 3, Bounds{0, 1, 0, 1}),
                    InvalidArgument);
    CHECK_THROWS_AS(generate_uniform_triangular(3, 3, Bounds{1, 1, 0, 1}),
                    InvalidArgument);
}

TEST_CASE("uniform triangular mesh: total area matches bounds") {
    for (auto [nx, ny] : {std::pair{1, 1}, {7, 3}, {20, 20}}) {
        Bounds b{-1.5, 2.0, 0.25, 1.0};
        Mesh m = generate_uniform_triangular(nx, ny, b);
        double total = 0.0;
        for (double a : m.element_measures()) {
            CHECK(a > 0.0);
            total += a;
        }
        CHECK(total == doctest::Approx(b.area()).epsilon(1e-12));
    }
}

TEST_CASE("uniform 1d mesh") {
    Mesh m = generate_uniform_1d(2, Interval{0, 1});
    REQUIRE(m.num_nodes() == 3);
    CHECK(m.nodes()[0].x() == 0.0);
    CHECK(m.nodes()[1].x() == 0.5);
    CHECK(m.nodes()[2].x() == 1.0);

    CHECK(generate_uniform_1d(99, Interval{0, 1}).num_nodes() == 100);

    Mesh m4 = generate_uniform_1d(4, Interval{-1, 1});
    for (int e = 0; e < 4; ++e)
        CHECK(m4.element_measure(e) == doctest::Approx(0.5).epsilon(1e-15));

    CHECK_THROWS_AS(generate_uniform_1d(0, Interval{0, 1}), InvalidArgument);
}

TEST_CASE("midpoint-derived mesh, 1d") {
    Mesh src = generate_uniform_1d(2, Interval{0, 1}); // {0, 0.5, 1}
    Mesh mid = derive_midpoint_mesh(src);
    REQUIRE(mid.num_nodes() == 4);
    CHECK(mid.nodes()[0].x() == 0.0);
    CHECK(mid.nodes()[1].x() == 0.25);
    CHECK(mid.nodes()[2].x() == 0.75);
    CHECK(mid.nodes()[3].x() == 1.0);

    Mesh single = generate_uniform_1d(1, Interval{0, 1});
    Mesh mid1 = derive_midpoint_mesh(single);
    REQUIRE(mid1.num_nodes() == 3);
    CHECK(mid1.nodes()[1].x() == 0.5);

    // node set equals {endpoints} union {element midpoints}, exactly
    Mesh src2 = generate_uniform_1d(7, Interval{0, 1});
    Mesh mid2 = derive_midpoint_mesh(src2);
    REQUIRE(mid2.num_nodes() == 9);
    for (int e = 0; e < src2.num_elements(); ++e) {
        double mp = 0.5 * (src2.nodes()[e].x() + src2.nodes()[e + 1].x());
        bool found = false;
        for (const Point& p : mid2.nodes()) found |= (p.x() == mp);
        CHECK(found);
    }
}

TEST_CASE("midpoint-derived mesh, 2d") {
    Mesh src = generate_uniform_triangular(8, 8, Bounds{-1, 1, -1, 1});
    Mesh mid = derive_midpoint_mesh(src);
    // one barycenter per element plus the boundary ring
    CHECK(mid.num_nodes() ==
          src.num_elements() + (int)src.boundary_nodes().size());
    check_empty_circumcircle(mid);
}

TEST_CASE("delaunay: smallest cases") {
    std::vector<Point> tri = {Point::make2(0, 0), Point::make2(1, 0),
                              Point::make2(0.2, 0.9)};
    Mesh m = delaunay_triangulate(tri);
    CHECK(m.num_elements() == 1);
    CHECK(m.num_nodes() == 3);

    CHECK_THROWS_AS(delaunay_triangulate({Point::make2(0, 0), Point::make2(1, 1)}),
                    DegenerateGeometry);
    CHECK_THROWS_AS(delaunay_triangulate({Point::make2(0, 0), Point::make2(1, 1),
                                          Point::make2(2, 2), Point::make2(3, 3)}),
                    DegenerateGeometry);
}

TEST_CASE("delaunay: unit square splits along a diagonal") {
    std::vector<Point> sq = {Point::make2(0, 0), Point::make2(1, 0),
                             Point::make2(1, 1), Point::make2(0, 1)};
    Mesh m = delaunay_triangulate(sq);
    CHECK(m.num_elements() == 2);
    double total = 0.0;
    for (double a : m.element_measures()) total += a;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    // brute-force oracle over both possible diagonals: the square is
    // cocircular, so either split satisfies the empty-circumcircle property
    check_empty_circumcircle(m);
}

TEST_CASE("delaunay: random points satisfy the empty-circumcircle property") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<Point> pts;
    for (int i = 0; i < 50; ++i) pts.push_back(Point::make2(u(rng), u(rng)));
    Mesh m = delaunay_triangulate(pts);
    CHECK(m.num_nodes() == 50);
    check_empty_circumcircle(m);

    // every input point appears in at least one triangle
    std::vector<char> used(50, 0);
    for (const auto& el : m.elements())
        for (int k = 0; k < 3; ++k) used[el[k]] = 1;
    CHECK(std::count(used.begin(), used.end(), 1) == 50);
}

TEST_CASE("delaunay: lattice input (cocircular ties)") {
    std::vector<Point> pts;
    for (int iy = 0; iy <= 10; ++iy)
        for (int ix = 0; ix <= 10; ++ix)
            pts.push_back(Point::make2(ix * 0.1, iy * 0.1));
    Mesh m = delaunay_triangulate(pts);
    CHECK(m.num_nodes() == 121);
    double total = 0.0;
    for (double a : m.element_measures()) total += a;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    check_empty_circumcircle(m);
}

TEST_CASE("graded mesh: constant density is quasi-uniform") {
    Mesh m = generate_graded_mesh([](const Point&) { return 1.0; }, 100,
                                  Bounds{0, 1, 0, 1}, 42);
    CHECK(m.num_nodes() >= 90);
    CHECK(m.num_nodes() <= 110);

    Mesh m2 = generate_graded_mesh([](const Point&) { return 1.0; }, 100,
                                   Bounds{0, 1, 0, 1}, 42);
    CHECK(m2.num_nodes() == m.num_nodes());
    for (int i = 0; i < m.num_nodes(); ++i) {
        CHECK(m2.nodes()[i].x() == m.nodes()[i].x());
        CHECK(m2.nodes()[i].y() == m.nodes()[i].y());
    }
}

TEST_CASE("graded mesh: density concentrates nodes") {
    auto density = [](const Point& p) {
        double dx = p.x() - 0.5, dy = p.y();
        return 0.05 + std::exp(-30.0 * (dx * dx + dy * dy));
    };
    Mesh m = generate_graded_mesh(density, 600, Bounds{-1, 1, -1, 1}, 3);
    int near = 0, far = 0;
    for (const Point& p : m.nodes()) {
        double d_near = std::hypot(p.x() - 0.5, p.y());
        double d_far = std::hypot(p.x() + 0.5, p.y());
        if (d_near < 0.3) ++near;
        if (d_far < 0.3) ++far;
    }
    CHECK(near > far);

    CHECK_THROWS_AS(generate_graded_mesh([](const Point&) { return 1.0; }, 0,
                                         Bounds{0, 1, 0, 1}, 1),
                    InvalidArgument);
    CHECK_THROWS_AS(generate_graded_mesh([](const Point&) { return -1.0; }, 50,
                                         Bounds{0, 1, 0, 1}, 1),
                    InvalidArgument);
}

TEST_CASE("locate: barycentric basics") {
    std::vector<Point> tri = {Point::make2(0, 0), Point::make2(1, 0),
                              Point::make2(0, 1)};
    Mesh m(2, tri, {{0, 1, 2}}, {0, 1, 2});

    ElementLocation c = m.locate(Point::make2(1.0 / 3, 1.0 / 3));
    CHECK(c.element_index == 0);
    for (int k = 0; k < 3; ++k)
        CHECK(c.barycentric[k] == doctest::Approx(1.0 / 3).epsilon(1e-12));

    ElementLocation v = m.locate(Point::make2(1, 0));
    double wmax = *std::max_element(v.barycentric.begin(), v.barycentric.end());
    CHECK(wmax == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(m.locate(Point::make2(0.9, 0.9)), PointOutsideDomain);
}

TEST_CASE("locate: matches exhaustive scan on a 10x10 mesh") {
    Mesh m = generate_uniform_triangular(10, 10, Bounds{0, 1, 0, 1});
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0, 1);
    for (int trial = 0; trial < 200; ++trial) {
        Point x = Point::make2(u(rng), u(rng));
        ElementLocation loc = m.locate(x);

        int oracle = -1;
        for (int e = 0; e < m.num_elements() && oracle < 0; ++e) {
            auto w = m.barycentric(e, x);
            if (w[0] >= -1e-12 && w[1] >= -1e-12 && w[2] >= -1e-12) oracle = e;
        }
        CHECK(loc.element_index == oracle);

        // barycentric reconstruction reproduces x
        const auto& el = m.elements()[loc.element_index];
        double rx = 0, ry = 0, ws = 0;
        for (int k = 0; k < 3; ++k) {
            rx += loc.barycentric[k] * m.nodes()[el[k]].x();
            ry += loc.barycentric[k] * m.nodes()[el[k]].y();
            ws += loc.barycentric[k];
        }
        CHECK(std::abs(rx - x.x()) <= 1e-12);
        CHECK(std::abs(ry - x.y()) <= 1e-12);
        CHECK(std::abs(ws - 1.0) <= 1e-12);
    }
}

TEST_CASE("locate: 1d") {
    Mesh m = generate_uniform_1d(10, Interval{0, 1});
    ElementLocation loc = m.locate(Point::make1(0.25));
    CHECK(loc.element_index == 2);
    CHECK(loc.barycentric[0] == doctest::Approx(0.5));
    CHECK_THROWS_AS(m.locate(Point::make1(1.5)), PointOutsideDomain);
}

TEST_CASE("element measures") {
    std::vector<Point> tri = {Point::make2(0, 0), Point::make2(1, 0),
                              Point::make2(0, 1)};
    Mesh m(2, tri, {{0, 1, 2}}, {});
    CHECK(m.element_measure(0) == doctest::Approx(0.5).epsilon(1e-15));

    Mesh fine = generate_uniform_triangular(99, 99, Bounds{-1, 1, -1, 1});
    const double expected = 4.0 / 19602.0;
    auto areas = fine.element_measures();
    for (int e = 0; e < 100; ++e)
        CHECK(areas[e] == doctest::Approx(expected).epsilon(1e-12));

    Mesh seg(1, {Point::make1(0.0), Point::make1(0.25)}, {{0, 1, -1}}, {0, 1});
    CHECK(seg.element_measure(0) == 0.25);
}

TEST_CASE("mesh validation") {
    CHECK_THROWS_AS(Mesh(2,
                         {Point::make2(0, 0), Point::make2(0, 0),
                          Point::make2(1, 1)},
                         {{0, 1, 2}}, {}),
                    InvalidArgument);
    CHECK_THROWS_AS(Mesh(2,
                         {Point::make2(0, 0), Point::make2(1, 0),
                          Point::make2(0, 1)},
                         {{0, 1, 5}}, {}),
                    InvalidArgument);
    // collinear triangle
    CHECK_THROWS_AS(Mesh(2,
                         {Point::make2(0, 0), Point::make2(1, 1),
                          Point::make2(2, 2)},
                         {{0, 1, 2}}, {}),
                    InvalidArgument);
}

TEST_CASE("mesh file round trip") {
    Mesh m = generate_uniform_triangular(3, 2, Bounds{-1, 1, 0, 2});
    std::ostringstream os;
    m.write(os);
    std::istringstream is(os.str());
    Mesh back = Mesh::read(is);
    REQUIRE(back.num_nodes() == m.num_nodes());
    REQUIRE(back.num_elements() == m.num_elements());
    for (int i = 0; i < m.num_nodes(); ++i) {
        CHECK(back.nodes()[i].x() == m.nodes()[i].x());
        CHECK(back.nodes()[i].y() == m.nodes()[i].y());
    }
    CHECK(back.boundary_nodes() == m.boundary_nodes());

    std::istringstream bad("NOTAMESH 2\n");
    CHECK_THROWS_AS(Mesh::read(bad), ParseError);
}
