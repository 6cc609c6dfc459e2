#include "fieldxfer/transfer.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace fieldxfer {

double mae(const Eigen::VectorXd& pred, const Eigen::VectorXd& truth) {
    if (pred.size() == 0 || pred.size() != truth.size())
        throw InvalidArgument("mae: vectors must be non-empty and equal length");
    return (pred - truth).cwiseAbs().sum() / (double)pred.size();
}

double rl2(const Eigen::VectorXd& pred, const Eigen::VectorXd& truth) {
    if (pred.size() == 0 || pred.size() != truth.size())
        throw InvalidArgument("rl2: vectors must be non-empty and equal length");
    const double denom = truth.norm();
    if (!(denom > 0.0))
        throw UndefinedMetric("rl2 is undefined for a zero-norm reference");
    return (pred - truth).norm() / denom;
}

const char* to_string(Direction d) { return d == Direction::AtoB ? "AtoB" : "BtoA"; }

namespace {

class PiecewiseLinearInterpolator : public Interpolator {
public:
    std::string name() const override { return "pl"; }
    void fit(const Mesh& source_mesh, const ScatteredDataset& data) override {
        if (data.size() != source_mesh.num_nodes())
            throw InvalidArgument("piecewise-linear fit needs one value per source node");
        field_.bind(source_mesh, data.values);
    }
    Eigen::VectorXd evaluate(const std::vector<Point>& targets) const override {
        return pl_interpolate_batch(field_, targets);
    }

private:
    NodalField field_;
};

class MlpInterpolator : public Interpolator {
public:
    MlpInterpolator(const MethodConfig& cfg, std::uint64_t seed)
        : cfg_(cfg), seed_(seed) {}
    std::string name() const override { return "mlp"; }
    void fit(const Mesh&, const ScatteredDataset& data) override {
        model_ = mlp_init(cfg_.mlp_arch, seed_);
        TrainConfig tc = cfg_.train;
        tc.seed = seed_;
        mlp_train(*model_, data, tc);
    }
    Eigen::VectorXd evaluate(const std::vector<Point>& targets) const override {
        return model_->predict(targets);
    }

private:
    MethodConfig cfg_;
    std::uint64_t seed_;
    std::optional<MlpModel> model_;
};

class ElmInterpolator : public Interpolator {
public:
    ElmInterpolator(const MethodConfig& cfg, std::uint64_t seed)
        : cfg_(cfg), seed_(seed) {}
    std::string name() const override { return "elm"; }
    void fit(const Mesh&, const ScatteredDataset& data) override {
        model_ = elm_init(cfg_.elm_arch, cfg_.init_range, seed_);
        elm_fit(*model_, data, cfg_.least_squares);
    }
    Eigen::VectorXd evaluate(const std::vector<Point>& targets) const override {
        return model_->predict(targets);
    }

private:
    MethodConfig cfg_;
    std::uint64_t seed_;
    std::optional<ElmModel> model_;
};

class RbfElmInterpolator : public Interpolator {
public:
    RbfElmInterpolator(const MethodConfig& cfg, std::uint64_t seed)
        : cfg_(cfg), seed_(seed) {}
    std::string name() const override { return "rbf_elm"; }
    void fit(const Mesh&, const ScatteredDataset& data) override {
        model_ = rbf_elm_fit(data, cfg_.num_centers, cfg_.epsilon, cfg_.convention,
                             cfg_.strategy, seed_, cfg_.least_squares);
    }
    Eigen::VectorXd evaluate(const std::vector<Point>& targets) const override {
        return model_->predict(targets);
    }

private:
    MethodConfig cfg_;
    std::uint64_t seed_;
    std::optional<RbfElmModel> model_;
};

} // namespace

MethodConfig::Kind MethodConfig::parse_kind(const std::string& s) {
    if (s == "pl" || s == "piecewise_linear") return Kind::piecewise_linear;
    if (s == "mlp") return Kind::mlp;
    if (s == "elm") return Kind::elm;
    if (s == "rbf-elm" || s == "rbf_elm") return Kind::rbf_elm;
    throw InvalidArgument("unknown method '" + s + "'");
}

std::string MethodConfig::label() const {
    switch (kind) {
        case Kind::piecewise_linear: return "pl";
        case Kind::mlp: return "mlp";
        case Kind::elm: return "elm";
        case Kind::rbf_elm: return "rbf_elm";
    }
    return "?";
}

std::string MethodConfig::summary() const {
    std::ostringstream os;
    os << "method=" << label() << " seed=" << base_seed;
    switch (kind) {
        case Kind::piecewise_linear:
            break;
        case Kind::mlp: {
            os << " arch=";
            for (size_t i = 0; i < mlp_arch.size(); ++i)
                os << (i ? "," : "") << mlp_arch[i];
            os << " lr=" << train.learning_rate
               << " max_iters=" << train.max_iterations;
            break;
        }
        case Kind::elm:
            os << " arch=" << elm_arch[0] << "," << elm_arch[1] << ","
               << elm_arch[2] << "," << elm_arch[3] << " range=" << init_range;
            break;
        case Kind::rbf_elm:
            os << " nc=" << num_centers << " eps=" << epsilon << " convention="
               << (convention == RbfConvention::width ? "width" : "inverse_width")
               << " strategy="
               << (strategy == CenterStrategy::random       ? "random"
                   : strategy == CenterStrategy::uniform_grid ? "uniform_grid"
                                                              : "kmeans");
            break;
    }
    return os.str();
}

std::unique_ptr<Interpolator> make_interpolator(const MethodConfig& config,
                                                int iteration) {
    const std::uint64_t seed = config.base_seed + (std::uint64_t)iteration;
    switch (config.kind) {
        case MethodConfig::Kind::piecewise_linear:
            return std::make_unique<PiecewiseLinearInterpolator>();
        case MethodConfig::Kind::mlp:
            return std::make_unique<MlpInterpolator>(config, seed);
        case MethodConfig::Kind::elm:
            return std::make_unique<ElmInterpolator>(config, seed);
        case MethodConfig::Kind::rbf_elm:
            return std::make_unique<RbfElmInterpolator>(config, seed);
    }
    throw InvalidArgument("unknown method kind");
}

TransferReport ping_pong(const Mesh& mesh_a, const Mesh& mesh_b,
                         const BenchmarkField& field, const MethodConfig& method,
                         int iterations) {
    if (iterations < 1)
        throw InvalidArgument("iterations must be >= 1");
    const ScatteredDataset exact_a = sample_at_nodes(mesh_a, field);
    const ScatteredDataset exact_b = sample_at_nodes(mesh_b, field);

    TransferReport report;
    report.method = method.label();
    report.config_summary = method.summary();

    Eigen::VectorXd values_a = exact_a.values; // D_A^(0)
    for (int k = 1; k <= iterations; ++k) {
        auto run_leg = [&](const Mesh& src, const std::vector<Point>& src_pts,
                           const Eigen::VectorXd& src_vals,
                           const std::vector<Point>& dst_pts,
                           const Eigen::VectorXd& dst_truth,
                           Direction dir) {
            try {
                auto interp = make_interpolator(method, k);
                interp->fit(src, ScatteredDataset(src_pts, src_vals));
                Eigen::VectorXd pred = interp->evaluate(dst_pts);
                report.records.push_back(
                    {k, dir, mae(pred, dst_truth), rl2(pred, dst_truth)});
                return pred;
            } catch (const std::exception& e) {
                throw std::runtime_error("iteration " + std::to_string(k) + " " +
                                         to_string(dir) + ": " + e.what());
            }
        };
        Eigen::VectorXd values_b = run_leg(mesh_a, exact_a.points, values_a,
                                           exact_b.points, exact_b.values,
                                           Direction::AtoB);
        values_a = run_leg(mesh_b, exact_b.points, values_b, exact_a.points,
                           exact_a.values, Direction::BtoA);
    }
    return report;
}

std::vector<TransferReport> compare_methods(const Mesh& mesh_a, const Mesh& mesh_b,
                                            const BenchmarkField& field,
                                            const std::vector<MethodConfig>& methods,
                                            int iterations) {
    std::vector<TransferReport> reports;
    for (const MethodConfig& m : methods) {
        try {
            reports.push_back(ping_pong(mesh_a, mesh_b, field, m, iterations));
        } catch (const std::exception& e) {
            TransferReport failed;
            failed.method = m.label();
            failed.config_summary = m.summary();
            failed.error = e.what();
            reports.push_back(std::move(failed));
        }
    }
    return reports;
}

void write_report_csv(const std::vector<TransferReport>& reports, std::ostream& os) {
    os << "method,iteration,direction,mae,rl2\n";
    char buf[40];
    for (const TransferReport& r : reports) {
        for (const TransferRecord& rec : r.records) {
            os << r.method << ',' << rec.iteration << ',' << to_string(rec.direction);
            std::snprintf(buf, sizeof buf, "%.16e", rec.mae);
            os << ',' << buf;
            std::snprintf(buf, sizeof buf, "%.16e", rec.rl2);
            os << ',' << buf << "\n";
        }
    }
}

} // namespace fieldxfer
