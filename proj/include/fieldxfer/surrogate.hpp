#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fieldxfer/dataset.hpp"
#include "fieldxfer/geometry.hpp"

namespace fieldxfer {

// ---------------------------------------------------------------------------
// Regularized least-squares output solve shared by ELM and RBF-ELM.
// ---------------------------------------------------------------------------

struct LeastSquaresOptions {
    enum class Method { normal_equations, svd_pinv };
    // negative => auto: 1e-10 * trace(H^T H) / d
    double ridge_lambda = -1.0;
    Method method = Method::normal_equations;
    double svd_cutoff = 1e-12; // relative singular-value threshold
};

struct LeastSquaresResult {
    Eigen::VectorXd beta;
    double residual = 0.0; // ||H beta - U||
    double lambda_used = 0.0;
};

LeastSquaresResult fit_output_weights(const Eigen::MatrixXd& H,
                                      const Eigen::VectorXd& U,
                                      const LeastSquaresOptions& opts = {});

// ---------------------------------------------------------------------------
// Uniform predict contract over the three model families.
// ---------------------------------------------------------------------------

class SurrogateModel {
public:
    virtual ~SurrogateModel() = default;
    virtual std::string kind() const = 0;
    virtual int input_dim() const = 0;
    virtual bool is_fitted() const = 0;
    virtual double predict_one(const Point& x) const = 0;
    Eigen::VectorXd predict(const std::vector<Point>& targets) const;
    virtual void save(const std::string& path) const = 0;
};

std::unique_ptr<SurrogateModel> load_model(const std::string& path);

// ---------------------------------------------------------------------------
// MLP: tanh hidden layers, linear output, trained by full-batch Adam.
// ---------------------------------------------------------------------------

struct AdamState {
    std::vector<Eigen::MatrixXd> mW, vW;
    std::vector<Eigen::VectorXd> mb, vb;
    long t = 0;
};

struct TrainConfig {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    long max_iterations = 5000;
    double loss_tolerance = 0.0;
    std::uint64_t seed = 0;
};

class MlpModel : public SurrogateModel {
public:
    std::vector<int> arch;                 // e.g. {2,128,128,128,1}
    std::vector<Eigen::MatrixXd> weights;  // weights[l]: arch[l+1] x arch[l]
    std::vector<Eigen::VectorXd> biases;
    std::uint64_t seed = 0;
    std::optional<AdamState> adam;         // carried across resumed training

    std::string kind() const override { return "mlp"; }
    int input_dim() const override { return arch.front(); }
    bool is_fitted() const override { return !weights.empty(); }
    double predict_one(const Point& x) const override;
    void save(const std::string& path) const override;

    long parameter_count() const;
};

// Xavier-uniform weights, zero biases, deterministic per seed.
MlpModel mlp_init(const std::vector<int>& arch, std::uint64_t seed);

double mlp_forward(const MlpModel& model, const Point& x);

// MSE loss and its gradient by reverse-mode differentiation over the full
// batch. Gradient outputs may be null when only the loss is needed.
double mlp_loss_gradient(const MlpModel& model, const ScatteredDataset& data,
                         std::vector<Eigen::MatrixXd>* grad_w,
                         std::vector<Eigen::VectorXd>* grad_b);

struct TrainResult {
    std::vector<double> loss_history; // loss before each update
};

TrainResult mlp_train(MlpModel& model, const ScatteredDataset& data,
                      const TrainConfig& config);

// ---------------------------------------------------------------------------
// ELM: two fixed random sin-activated hidden layers, linear output fit in
// closed form.
// ---------------------------------------------------------------------------

class ElmModel : public SurrogateModel {
public:
    std::array<int, 4> arch = {0, 0, 0, 1}; // d0, d1, d2, 1
    Eigen::MatrixXd w1, w2;
    Eigen::VectorXd b1, b2;
    double init_range = 0.0;
    std::uint64_t seed = 0;
    Eigen::VectorXd beta;
    double fit_residual = 0.0;

    std::string kind() const override { return "elm"; }
    int input_dim() const override { return arch[0]; }
    bool is_fitted() const override { return beta.size() == arch[2]; }
    double predict_one(const Point& x) const override;
    void save(const std::string& path) const override;

    // Phi(x) = sin(W2 sin(W1 x + b1) + b2), length d2
    Eigen::VectorXd features(const Point& x) const;
    Eigen::MatrixXd feature_matrix(const std::vector<Point>& pts) const;
};

ElmModel elm_init(const std::array<int, 4>& arch, double init_range,
                  std::uint64_t seed);

// Assembles H row-wise over the data points and solves for beta. Returns the
// training residual.
double elm_fit(ElmModel& model, const ScatteredDataset& data,
               const LeastSquaresOptions& opts = {});

// ---------------------------------------------------------------------------
// RBF-ELM: Gaussian features at selected centers, linear output fit in
// closed form.
// ---------------------------------------------------------------------------

enum class RbfConvention { width, inverse_width };
enum class CenterStrategy { random, uniform_grid, kmeans };

RbfConvention parse_rbf_convention(const std::string& s);
CenterStrategy parse_center_strategy(const std::string& s);

std::vector<Point> select_centers(const ScatteredDataset& data, int num_centers,
                                  CenterStrategy strategy, std::uint64_t seed);

// width:          exp(-||x-c||^2 / eps^2)
// inverse_width:  exp(-eps^2 ||x-c||^2)   (default everywhere)
Eigen::VectorXd rbf_features(const std::vector<Point>& centers, double epsilon,
                             RbfConvention convention, const Point& x);

class RbfElmModel : public SurrogateModel {
public:
    std::vector<Point> centers;
    double epsilon = 1.0;
    RbfConvention convention = RbfConvention::inverse_width;
    std::uint64_t seed = 0;
    Eigen::VectorXd beta;
    double fit_residual = 0.0;

    std::string kind() const override { return "rbf_elm"; }
    int input_dim() const override {
        return centers.empty() ? 0 : centers.front().dim();
    }
    bool is_fitted() const override {
        return !centers.empty() && beta.size() == (Eigen::Index)centers.size();
    }
    double predict_one(const Point& x) const override;
    void save(const std::string& path) const override;

    Eigen::MatrixXd feature_matrix(const std::vector<Point>& pts) const;
};

RbfElmModel rbf_elm_fit(const ScatteredDataset& data, int num_centers,
                        double epsilon, RbfConvention convention,
                        CenterStrategy strategy, std::uint64_t seed,
                        const LeastSquaresOptions& opts = {});

} // namespace fieldxfer
