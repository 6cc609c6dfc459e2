#include "fieldxfer/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace fieldxfer {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDomainTol = 1e-9;

void check_domain(const BenchmarkField& f, const Point& x) {
    if (x.dim() != f.dim())
        throw InvalidArgument("point dimension does not match field " + f.name());
    if (f.dim() == 1) {
        if (x.x() < -kDomainTol || x.x() > 1.0 + kDomainTol)
            throw InvalidArgument("point outside [0,1] domain of " + f.name());
    } else {
        if (x.x() < -1.0 - kDomainTol || x.x() > 1.0 + kDomainTol ||
            x.y() < -1.0 - kDomainTol || x.y() > 1.0 + kDomainTol)
            throw InvalidArgument("point outside [-1,1]^2 domain of " + f.name());
    }
}

} // namespace

ScatteredDataset::ScatteredDataset(std::vector<Point> pts, Eigen::VectorXd vals)
    : points(std::move(pts)), values(std::move(vals)) {
    if ((Eigen::Index)points.size() != values.size())
        throw InvalidArgument("dataset points/values length mismatch");
    if (!values.allFinite())
        throw InvalidArgument("dataset values must be finite");
}

void ScatteredDataset::save(const std::string& path) const {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    const int d = points.empty() ? 2 : points.front().dim();
    os << (d == 1 ? "x,value\n" : "x,y,value\n");
    char buf[40];
    for (int i = 0; i < size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.16e", points[i].x());
        os << buf;
        if (d == 2) {
            std::snprintf(buf, sizeof buf, "%.16e", points[i].y());
            os << ',' << buf;
        }
        std::snprintf(buf, sizeof buf, "%.16e", values[i]);
        os << ',' << buf << "\n";
    }
    if (!os) throw std::runtime_error("write failed for " + path);
}

ScatteredDataset ScatteredDataset::load(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw InvalidArgument("cannot open dataset file " + path);
    std::string header;
    if (!std::getline(is, header))
        throw ParseError(path + ": missing header");
    int d;
    if (header == "x,value") d = 1;
    else if (header == "x,y,value") d = 2;
    else throw ParseError(path + ": unrecognized header '" + header + "'");

    std::vector<Point> pts;
    std::vector<double> vals;
    std::string line;
    long lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ls(line);
        double cols[3];
        int got = 0;
        std::string tok;
        while (got < 3 && std::getline(ls, tok, ',')) {
            try {
                size_t used = 0;
                cols[got] = std::stod(tok, &used);
                if (used == 0) throw std::invalid_argument(tok);
            } catch (const std::exception&) {
                throw ParseError(path + ": bad number '" + tok + "'", lineno);
            }
            ++got;
        }
        if (got != d + 1 || std::getline(ls, tok, ','))
            throw ParseError(path + ": expected " + std::to_string(d + 1) +
                             " columns", lineno);
        pts.push_back(d == 1 ? Point::make1(cols[0]) : Point::make2(cols[0], cols[1]));
        vals.push_back(cols[d]);
    }
    Eigen::VectorXd v = Eigen::Map<Eigen::VectorXd>(vals.data(), (Eigen::Index)vals.size());
    return ScatteredDataset(std::move(pts), std::move(v));
}

BenchmarkField BenchmarkField::parse(const std::string& name, double t) {
    if (name == "osc2d") return BenchmarkField(FieldId::osc2d);
    if (name == "moving_gauss") return BenchmarkField(FieldId::moving_gauss, t);
    if (name == "sine1d") return BenchmarkField(FieldId::sine1d);
    if (name == "twopeak1d") return BenchmarkField(FieldId::twopeak1d);
    if (name == "paraboloid2d") return BenchmarkField(FieldId::paraboloid2d);
    if (name == "multipeak2d") return BenchmarkField(FieldId::multipeak2d);
    throw InvalidArgument("unknown benchmark field '" + name + "'");
}

int BenchmarkField::dim() const {
    switch (id_) {
        case FieldId::sine1d:
        case FieldId::twopeak1d: return 1;
        default: return 2;
    }
}

std::string BenchmarkField::name() const {
    switch (id_) {
        case FieldId::osc2d: return "osc2d";
        case FieldId::moving_gauss: return "moving_gauss";
        case FieldId::sine1d: return "sine1d";
        case FieldId::twopeak1d: return "twopeak1d";
        case FieldId::paraboloid2d: return "paraboloid2d";
        case FieldId::multipeak2d: return "multipeak2d";
    }
    return "?";
}

double BenchmarkField::eval(const Point& p) const {
    check_domain(*this, p);
    const double x = p.x(), y = p.y();
    switch (id_) {
        case FieldId::osc2d:
            return std::sin(5.0 * kPi * x) * std::sin(5.0 * kPi * y);
        case FieldId::moving_gauss: {
            double cx = 0.5 * std::cos(2.0 * kPi * t_);
            double cy = 0.5 * std::sin(2.0 * kPi * t_);
            double dx = x - cx, dy = y - cy;
            return std::exp(-50.0 * (dx * dx + dy * dy));
        }
        case FieldId::sine1d:
            return std::sin(kPi * x);
        case FieldId::twopeak1d:
            return std::exp(-400.0 * (x - 0.35) * (x - 0.35)) -
                   0.5 * std::exp(-200.0 * (x - 0.75) * (x - 0.75));
        case FieldId::paraboloid2d:
            return -x * x - y * y;
        case FieldId::multipeak2d:
            return std::sin(kPi * x) * std::sin(kPi * y) *
                   (std::sin(6.0 * kPi * x) * std::cos(4.0 * kPi * y) +
                    0.6 * std::sin(8.0 * kPi * (x - 0.3)) * std::cos(6.0 * kPi * (y + 0.2)) -
                    0.4 * std::cos(10.0 * kPi * x) * std::sin(8.0 * kPi * y));
    }
    throw InvalidArgument("unknown field identifier");
}

double eval_field(const BenchmarkField& field, const Point& x) {
    return field.eval(x);
}

ScatteredDataset sample_at_nodes(const Mesh& mesh, const BenchmarkField& field) {
    if (mesh.dim() != field.dim())
        throw InvalidArgument("mesh dimension does not match field " + field.name());
    Eigen::VectorXd vals(mesh.num_nodes());
    for (int i = 0; i < mesh.num_nodes(); ++i)
        vals[i] = field.eval(mesh.nodes()[i]);
    return ScatteredDataset(mesh.nodes(), std::move(vals));
}

std::vector<std::array<double, 4>> triangle_quadrature(int points_per_element) {
    std::vector<std::array<double, 4>> rule;
    auto perm3 = [&](double w, double a, double b) {
        // (a,b,b) and its two cyclic permutations
        rule.push_back({a, b, b, w});
        rule.push_back({b, a, b, w});
        rule.push_back({b, b, a, w});
    };
    switch (points_per_element) {
        case 1:
            rule.push_back({1.0 / 3, 1.0 / 3, 1.0 / 3, 1.0});
            break;
        case 3:
            perm3(1.0 / 3, 2.0 / 3, 1.0 / 6);
            break;
        case 16: {
            // symmetric degree-8 rule
            rule.push_back({1.0 / 3, 1.0 / 3, 1.0 / 3, 0.14431560767778717});
            perm3(0.095091634267284625, 0.081414823414553688, 0.45929258829272316);
            perm3(0.10321737053471825, 0.65886138449647959, 0.17056930775176021);
            perm3(0.032458497623198080, 0.89890554336593805, 0.050547228317030975);
            const double a = 0.0083947774099576053, b = 0.26311282963463811;
            const double c = 1.0 - a - b, w = 0.027230314174434994;
            rule.push_back({a, b, c, w});
            rule.push_back({a, c, b, w});
            rule.push_back({b, a, c, w});
            rule.push_back({b, c, a, w});
            rule.push_back({c, a, b, w});
            rule.push_back({c, b, a, w});
            break;
        }
        default:
            throw InvalidArgument("unsupported quadrature rule size " +
                                  std::to_string(points_per_element));
    }
    return rule;
}

ScatteredDataset enrich_with_quadrature(const Mesh& mesh,
                                        const ScatteredDataset& base,
                                        const EnrichmentSource& source,
                                        double area_threshold,
                                        int points_per_element) {
    if (!(area_threshold > 0.0))
        throw InvalidArgument("area threshold must be positive");
    if (mesh.dim() != 2)
        throw InvalidArgument("quadrature enrichment requires a 2D mesh");
    const auto rule = triangle_quadrature(points_per_element);

    auto value_at = [&](const Point& p) {
        if (std::holds_alternative<const NodalField*>(source))
            return pl_interpolate(*std::get<const NodalField*>(source), p);
        return std::get<BenchmarkField>(source).eval(p);
    };

    std::vector<Point> pts = base.points;
    std::vector<double> vals(base.values.data(), base.values.data() + base.values.size());
    for (int e = 0; e < mesh.num_elements(); ++e) {
        if (!(mesh.element_measure(e) > area_threshold)) continue;
        const auto& el = mesh.elements()[e];
        const Point& a = mesh.nodes()[el[0]];
        const Point& b = mesh.nodes()[el[1]];
        const Point& c = mesh.nodes()[el[2]];
        for (const auto& q : rule) {
            Point p = Point::make2(q[0] * a.x() + q[1] * b.x() + q[2] * c.x(),
                                   q[0] * a.y() + q[1] * b.y() + q[2] * c.y());
            bool dup = false;
            for (const Point& existing : pts) {
                if (squared_distance(p, existing) <= 1e-24) { dup = true; break; }
            }
            if (dup) continue;
            pts.push_back(p);
            vals.push_back(value_at(p));
        }
    }
    Eigen::VectorXd v = Eigen::Map<Eigen::VectorXd>(vals.data(), (Eigen::Index)vals.size());
    return ScatteredDataset(std::move(pts), std::move(v));
}

} // namespace fieldxfer
