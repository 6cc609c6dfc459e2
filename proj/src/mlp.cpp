#include "fieldxfer/surrogate.hpp"

#include <cmath>
#include <random>

namespace fieldxfer {

MlpModel mlp_init(const std::vector<int>& arch, std::uint64_t seed) {
    if (arch.size() < 2)
        throw InvalidArgument("MLP architecture needs at least input and output sizes");
    if (arch.front() < 1 || arch.front() > 2)
        throw InvalidArgument("MLP input dimension must be 1 or 2");
    if (arch.back() != 1)
        throw InvalidArgument("MLP output size must be 1");
    for (int w : arch)
        if (w < 1) throw InvalidArgument("MLP layer widths must be >= 1");

    MlpModel m;
    m.arch = arch;
    m.seed = seed;
    std::mt19937_64 rng(seed);
    for (size_t l = 0; l + 1 < arch.size(); ++l) {
        const int fan_in = arch[l], fan_out = arch[l + 1];
        const double bound = std::sqrt(6.0 / (fan_in + fan_out));
        std::uniform_real_distribution<double> dist(-bound, bound);
        Eigen::MatrixXd w(fan_out, fan_in);
        for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = dist(rng);
        m.weights.push_back(std::move(w));
        m.biases.push_back(Eigen::VectorXd::Zero(fan_out));
    }
    return m;
}

long MlpModel::parameter_count() const {
    long n = 0;
    for (size_t l = 0; l < weights.size(); ++l)
        n += weights[l].size() + biases[l].size();
    return n;
}

double mlp_forward(const MlpModel& model, const Point& x) {
    if (x.dim() != model.arch.front())
        throw InvalidArgument("point dimension does not match MLP input");
    Eigen::VectorXd a(model.arch.front());
    a[0] = x.x();
    if (model.arch.front() == 2) a[1] = x.y();
    const size_t L = model.weights.size();
    for (size_t l = 0; l + 1 < L; ++l)
        a = ((model.weights[l] * a + model.biases[l]).array().tanh()).matrix();
    return (model.weights[L - 1] * a + model.biases[L - 1])(0);
}

double MlpModel::predict_one(const Point& x) const { return mlp_forward(*this, x); }

double mlp_loss_gradient(const MlpModel& model, const ScatteredDataset& data,
                         std::vector<Eigen::MatrixXd>* grad_w,
                         std::vector<Eigen::VectorXd>* grad_b) {
    const int n = data.size();
    if (n == 0) throw InvalidArgument("empty dataset");
    if (data.dim() != model.arch.front())
        throw InvalidArgument("dataset dimension does not match MLP input");
    const size_t L = model.weights.size();

    Eigen::MatrixXd x0(model.arch.front(), n);
    for (int i = 0; i < n; ++i) {
        x0(0, i) = data.points[i].x();
        if (model.arch.front() == 2) x0(1, i) = data.points[i].y();
    }

    // forward pass, keeping hidden activations for backprop
    std::vector<Eigen::MatrixXd> act(L); // act[l] = input to layer l
    act[0] = std::move(x0);
    for (size_t l = 0; l + 1 < L; ++l)
        act[l + 1] = ((model.weights[l] * act[l]).colwise() + model.biases[l])
                         .array().tanh().matrix();
    Eigen::RowVectorXd pred =
        (model.weights[L - 1] * act[L - 1]).colwise() + model.biases[L - 1];

    Eigen::RowVectorXd resid = pred - data.values.transpose();
    const double loss = resid.squaredNorm() / n;
    if (!grad_w && !grad_b) return loss;

    grad_w->assign(L, {});
    grad_b->assign(L, {});
    Eigen::MatrixXd delta = (2.0 / n) * resid; // dL/dz at the output layer
    for (size_t l = L; l-- > 0;) {
        (*grad_w)[l] = delta * act[l].transpose();
        (*grad_b)[l] = delta.rowwise().sum();
        if (l > 0)
            delta = (model.weights[l].transpose() * delta).array() *
                    (1.0 - act[l].array().square());
    }
    return loss;
}

TrainResult mlp_train(MlpModel& model, const ScatteredDataset& data,
                      const TrainConfig& config) {
    if (!(config.learning_rate > 0.0) || !(config.beta1 > 0.0 && config.beta1 < 1.0) ||
        !(config.beta2 > 0.0 && config.beta2 < 1.0) || !(config.epsilon > 0.0))
        throw InvalidArgument("invalid Adam hyperparameters");
    if (config.max_iterations < 0)
        throw InvalidArgument("max iterations must be non-negative");

    const size_t L = model.weights.size();
    if (!model.adam) {
        AdamState s;
        for (size_t l = 0; l < L; ++l) {
            s.mW.push_back(Eigen::MatrixXd::Zero(model.weights[l].rows(),
                                                 model.weights[l].cols()));
            s.vW.push_back(Eigen::MatrixXd::Zero(model.weights[l].rows(),
                                                 model.weights[l].cols()));
            s.mb.push_back(Eigen::VectorXd::Zero(model.biases[l].size()));
            s.vb.push_back(Eigen::VectorXd::Zero(model.biases[l].size()));
        }
        model.adam = std::move(s);
    }
    AdamState& s = *model.adam;

    TrainResult result;
    std::vector<Eigen::MatrixXd> gW;
    std::vector<Eigen::VectorXd> gb;
    for (long it = 0; it < config.max_iterations; ++it) {
        const double loss = mlp_loss_gradient(model, data, &gW, &gb);
        if (!std::isfinite(loss))
            throw TrainingDiverged("training loss became non-finite", (int)it);
        result.loss_history.push_back(loss);
        if (config.loss_tolerance > 0.0 && loss < config.loss_tolerance) break;

        s.t += 1;
        const double bc1 = 1.0 - std::pow(config.beta1, (double)s.t);
        const double bc2 = 1.0 - std::pow(config.beta2, (double)s.t);
        for (size_t l = 0; l < L; ++l) {
            s.mW[l] = config.beta1 * s.mW[l] + (1.0 - config.beta1) * gW[l];
            s.vW[l] = config.beta2 * s.vW[l].array() +
                      (1.0 - config.beta2) * gW[l].array().square();
            model.weights[l].array() -=
                config.learning_rate * (s.mW[l].array() / bc1) /
                ((s.vW[l].array() / bc2).sqrt() + config.epsilon);
            s.mb[l] = config.beta1 * s.mb[l] + (1.0 - config.beta1) * gb[l];
            s.vb[l] = config.beta2 * s.vb[l].array() +
                      (1.0 - config.beta2) * gb[l].array().square();
            model.biases[l].array() -=
                config.learning_rate * (s.mb[l].array() / bc1) /
                ((s.vb[l].array() / bc2).sqrt() + config.epsilon);
        }
    }
    return result;
}

} // namespace fieldxfer
