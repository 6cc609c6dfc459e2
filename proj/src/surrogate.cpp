#include "fieldxfer/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace fieldxfer {

// ---------------------------------------------------------------------------
// least squares
// ---------------------------------------------------------------------------

LeastSquaresResult fit_output_weights(const Eigen::MatrixXd& H,
                                      const Eigen::VectorXd& U,
                                      const LeastSquaresOptions& opts) {
    const Eigen::Index n = H.rows(), d = H.cols();
    if (n < 1 || d < 1)
        throw InvalidArgument("feature matrix must be at least 1x1");
    if (U.size() != n)
        throw InvalidArgument("target vector length does not match feature rows");
    if (!H.allFinite() || !U.allFinite())
        throw InvalidArgument("least-squares inputs must be finite");
    if (!(opts.svd_cutoff > 0.0 && opts.svd_cutoff < 1.0))
        throw InvalidArgument("svd_cutoff must lie in (0,1)");

    const double auto_lambda = 1e-10 * H.squaredNorm() / (double)d;
    double lambda = opts.ridge_lambda < 0.0 ? auto_lambda : opts.ridge_lambda;

    LeastSquaresResult res;
    if (opts.method == LeastSquaresOptions::Method::svd_pinv) {
        // For tall systems, reduce H = QR first and take the SVD of the d x d
        // factor R; the singular values (and the truncated pseudoinverse
        // solution) are identical, but the SVD cost drops from O(n d^2) on H
        // to O(d^3) on R.
        Eigen::MatrixXd reduced;
        Eigen::VectorXd rhs_r;
        const Eigen::MatrixXd* target = &H;
        const Eigen::VectorXd* rhs = &U;
        if (n > d + d / 4) {
            Eigen::HouseholderQR<Eigen::MatrixXd> qr(H);
            reduced = qr.matrixQR().topRows(d).triangularView<Eigen::Upper>();
            Eigen::VectorXd qtu = U;
            qtu.applyOnTheLeft(qr.householderQ().adjoint());
            rhs_r = qtu.head(d);
            target = &reduced;
            rhs = &rhs_r;
        }
        Eigen::BDCSVD<Eigen::MatrixXd> svd(*target,
                                           Eigen::ComputeThinU | Eigen::ComputeThinV);
        const auto& sv = svd.singularValues();
        const double cutoff = opts.svd_cutoff * sv(0);
        Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
        for (Eigen::Index i = 0; i < sv.size(); ++i)
            if (sv(i) > cutoff) inv(i) = 1.0 / sv(i);
        res.beta = svd.matrixV() * (inv.asDiagonal() * (svd.matrixU().transpose() * *rhs));
        res.lambda_used = 0.0;
    } else {
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(d, d);
        A.selfadjointView<Eigen::Lower>().rankUpdate(H.transpose());
        Eigen::VectorXd rhs = H.transpose() * U;
        auto try_solve = [&](double lam, Eigen::VectorXd& beta) {
            Eigen::MatrixXd Areg = A;
            Areg.diagonal().array() += lam;
            Eigen::LLT<Eigen::MatrixXd, Eigen::Lower> llt(Areg);
            if (llt.info() != Eigen::Success) return false;
            beta = llt.solve(rhs);
            return beta.allFinite();
        };
        if (try_solve(lambda, res.beta)) {
            res.lambda_used = lambda;
        } else {
            // one retry with a stiffer ridge before giving up
            double bumped = lambda > 0.0 ? lambda * 100.0 : auto_lambda;
            if (!try_solve(bumped, res.beta))
                throw SingularSystem("normal-equations factorization failed");
            res.lambda_used = bumped;
        }
    }
    res.residual = (H * res.beta - U).norm();
    return res;
}

// ---------------------------------------------------------------------------
// predict contract
// ---------------------------------------------------------------------------

Eigen::VectorXd SurrogateModel::predict(const std::vector<Point>& targets) const {
    if (!is_fitted())
        throw NotFitted(kind() + " model is not fitted");
    Eigen::VectorXd out(targets.size());
    for (size_t i = 0; i < targets.size(); ++i) {
        if (targets[i].dim() != input_dim())
            throw InvalidArgument("target " + std::to_string(i) +
                                  " dimension does not match model input");
        out[i] = predict_one(targets[i]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// ELM
// ---------------------------------------------------------------------------

ElmModel elm_init(const std::array<int, 4>& arch, double init_range,
                  std::uint64_t seed) {
    if (arch[0] < 1 || arch[0] > 2 || arch[1] < 1 || arch[2] < 1 || arch[3] != 1)
        throw InvalidArgument("ELM architecture must be [d0, d1, d2, 1] with d0 in {1,2}");
    if (!(init_range > 0.0))
        throw InvalidArgument("ELM init range must be positive");
    ElmModel m;
    m.arch = arch;
    m.init_range = init_range;
    m.seed = seed;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-init_range, init_range);
    auto fill = [&](double* p, Eigen::Index count) {
        for (Eigen::Index i = 0; i < count; ++i) p[i] = dist(rng);
    };
    m.w1.resize(arch[1], arch[0]);
    m.b1.resize(arch[1]);
    m.w2.resize(arch[2], arch[1]);
    m.b2.resize(arch[2]);
    fill(m.w1.data(), m.w1.size());
    fill(m.b1.data(), m.b1.size());
    fill(m.w2.data(), m.w2.size());
    fill(m.b2.data(), m.b2.size());
    return m;
}

Eigen::VectorXd ElmModel::features(const Point& x) const {
    if (x.dim() != arch[0])
        throw InvalidArgument("point dimension does not match ELM input");
    Eigen::VectorXd xv(arch[0]);
    xv[0] = x.x();
    if (arch[0] == 2) xv[1] = x.y();
    Eigen::VectorXd h1 = ((w1 * xv + b1).array().sin()).matrix();
    return ((w2 * h1 + b2).array().sin()).matrix();
}

Eigen::MatrixXd ElmModel::feature_matrix(const std::vector<Point>& pts) const {
    Eigen::MatrixXd H(pts.size(), arch[2]);
    for (size_t i = 0; i < pts.size(); ++i)
        H.row(i) = features(pts[i]).transpose();
    return H;
}

double elm_fit(ElmModel& model, const ScatteredDataset& data,
               const LeastSquaresOptions& opts) {
    if (data.size() == 0)
        throw InvalidArgument("cannot fit ELM on an empty dataset");
    Eigen::MatrixXd H = model.feature_matrix(data.points);
    LeastSquaresResult res = fit_output_weights(H, data.values, opts);
    model.beta = std::move(res.beta);
    model.fit_residual = res.residual;
    return model.fit_residual;
}

double ElmModel::predict_one(const Point& x) const {
    if (!is_fitted()) throw NotFitted("ELM model is not fitted");
    return beta.dot(features(x));
}

// ---------------------------------------------------------------------------
// RBF-ELM
// ---------------------------------------------------------------------------

RbfConvention parse_rbf_convention(const std::string& s) {
    if (s == "width") return RbfConvention::width;
    if (s == "inverse_width") return RbfConvention::inverse_width;
    throw InvalidArgument("unknown RBF convention '" + s + "'");
}

CenterStrategy parse_center_strategy(const std::string& s) {
    if (s == "random") return CenterStrategy::random;
    if (s == "uniform_grid") return CenterStrategy::uniform_grid;
    if (s == "kmeans") return CenterStrategy::kmeans;
    throw InvalidArgument("unknown center strategy '" + s + "'");
}

namespace {

std::vector<Point> kmeans_centers(const ScatteredDataset& data, int k,
                                  std::uint64_t seed) {
    const int n = data.size();
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<Point> centers(k);
    for (int i = 0; i < k; ++i) centers[i] = data.points[order[i]];
    std::vector<int> assign(n, 0);

    for (int iter = 0; iter < 50; ++iter) {
        for (int i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            int bi = 0;
            for (int c = 0; c < k; ++c) {
                double d2 = squared_distance(data.points[i], centers[c]);
                if (d2 < best) { best = d2; bi = c; }
            }
            assign[i] = bi;
        }
        std::vector<double> sx(k, 0.0), sy(k, 0.0);
        std::vector<int> count(k, 0);
        for (int i = 0; i < n; ++i) {
            sx[assign[i]] += data.points[i].x();
            sy[assign[i]] += data.points[i].y();
            ++count[assign[i]];
        }
        for (int c = 0; c < k; ++c) {
            if (count[c] > 0) {
                centers[c].coord[0] = sx[c] / count[c];
                centers[c].coord[1] = sy[c] / count[c];
                centers[c].ndim = data.dim();
            } else {
                // empty cluster: reseed from the farthest point
                double worst = -1.0;
                int wi = 0;
                for (int i = 0; i < n; ++i) {
                    double d2 = squared_distance(data.points[i], centers[assign[i]]);
                    if (d2 > worst) { worst = d2; wi = i; }
                }
                centers[c] = data.points[wi];
                assign[wi] = c;
            }
        }
    }
    return centers;
}

} // namespace

std::vector<Point> select_centers(const ScatteredDataset& data, int num_centers,
                                  CenterStrategy strategy, std::uint64_t seed) {
    if (num_centers < 1)
        throw InvalidArgument("number of centers must be >= 1");
    if (data.size() == 0)
        throw InvalidArgument("cannot select centers from an empty dataset");
    const int n = data.size();
    switch (strategy) {
        case CenterStrategy::random: {
            if (num_centers > n)
                throw InvalidArgument("more centers requested than data points");
            std::vector<int> order(n);
            std::iota(order.begin(), order.end(), 0);
            std::mt19937_64 rng(seed);
            std::shuffle(order.begin(), order.end(), rng);
            std::vector<Point> out(num_centers);
            for (int i = 0; i < num_centers; ++i) out[i] = data.points[order[i]];
            return out;
        }
        case CenterStrategy::uniform_grid: {
            double xmin = data.points[0].x(), xmax = xmin;
            double ymin = data.points[0].y(), ymax = ymin;
            for (const Point& p : data.points) {
                xmin = std::min(xmin, p.x());
                xmax = std::max(xmax, p.x());
                ymin = std::min(ymin, p.y());
                ymax = std::max(ymax, p.y());
            }
            std::vector<Point> out;
            if (data.dim() == 1) {
                for (int i = 0; i < num_centers; ++i) {
                    double t = num_centers == 1 ? 0.5 : (double)i / (num_centers - 1);
                    out.push_back(Point::make1(xmin + t * (xmax - xmin)));
                }
            } else {
                int g = (int)std::ceil(std::sqrt((double)num_centers));
                for (int iy = 0; iy < g && (int)out.size() < num_centers; ++iy) {
                    for (int ix = 0; ix < g && (int)out.size() < num_centers; ++ix) {
                        double tx = g == 1 ? 0.5 : (double)ix / (g - 1);
                        double ty = g == 1 ? 0.5 : (double)iy / (g - 1);
                        out.push_back(Point::make2(xmin + tx * (xmax - xmin),
                                                   ymin + ty * (ymax - ymin)));
                    }
                }
            }
            return out;
        }
        case CenterStrategy::kmeans: {
            if (num_centers > n)
                throw InvalidArgument("more centers requested than data points");
            return kmeans_centers(data, num_centers, seed);
        }
    }
    throw InvalidArgument("unknown center strategy");
}

Eigen::VectorXd rbf_features(const std::vector<Point>& centers, double epsilon,
                             RbfConvention convention, const Point& x) {
    if (!(epsilon > 0.0))
        throw InvalidArgument("RBF shape parameter must be positive");
    Eigen::VectorXd phi(centers.size());
    const double scale = convention == RbfConvention::width
                             ? 1.0 / (epsilon * epsilon)
                             : epsilon * epsilon;
    for (size_t j = 0; j < centers.size(); ++j)
        phi[j] = std::exp(-scale * squared_distance(x, centers[j]));
    return phi;
}

Eigen::MatrixXd RbfElmModel::feature_matrix(const std::vector<Point>& pts) const {
    Eigen::MatrixXd H(pts.size(), centers.size());
    for (size_t i = 0; i < pts.size(); ++i)
        H.row(i) = rbf_features(centers, epsilon, convention, pts[i]).transpose();
    return H;
}

double RbfElmModel::predict_one(const Point& x) const {
    if (!is_fitted()) throw NotFitted("RBF-ELM model is not fitted");
    return beta.dot(rbf_features(centers, epsilon, convention, x));
}

RbfElmModel rbf_elm_fit(const ScatteredDataset& data, int num_centers,
                        double epsilon, RbfConvention convention,
                        CenterStrategy strategy, std::uint64_t seed,
                        const LeastSquaresOptions& opts) {
    if (!(epsilon > 0.0))
        throw InvalidArgument("RBF shape parameter must be positive");
    RbfElmModel m;
    m.centers = select_centers(data, num_centers, strategy, seed);
    m.epsilon = epsilon;
    m.convention = convention;
    m.seed = seed;
    Eigen::MatrixXd H = m.feature_matrix(data.points);
    LeastSquaresResult res = fit_output_weights(H, data.values, opts);
    m.beta = std::move(res.beta);
    m.fit_residual = res.residual;
    return m;
}

} // namespace fieldxfer
