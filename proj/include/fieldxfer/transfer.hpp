#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "fieldxfer/baseline.hpp"
#include "fieldxfer/dataset.hpp"
#include "fieldxfer/surrogate.hpp"

namespace fieldxfer {

double mae(const Eigen::VectorXd& pred, const Eigen::VectorXd& truth);
double rl2(const Eigen::VectorXd& pred, const Eigen::VectorXd& truth);

// Fit-then-predict contract shared by the piecewise-linear baseline and the
// surrogate families. Prediction needs no target mesh connectivity.
class Interpolator {
public:
    virtual ~Interpolator() = default;
    virtual std::string name() const = 0;
    // source_mesh is only consulted by the piecewise-linear method
    virtual void fit(const Mesh& source_mesh, const ScatteredDataset& data) = 0;
    virtual Eigen::VectorXd evaluate(const std::vector<Point>& targets) const = 0;
};

struct MethodConfig {
    enum class Kind { piecewise_linear, mlp, elm, rbf_elm };
    Kind kind = Kind::rbf_elm;

    // rbf_elm
    int num_centers = 100;
    double epsilon = 100.0;
    RbfConvention convention = RbfConvention::inverse_width;
    CenterStrategy strategy = CenterStrategy::random;

    // elm
    std::array<int, 4> elm_arch = {2, 256, 2500, 1};
    double init_range = 0.4;

    // mlp
    std::vector<int> mlp_arch = {2, 64, 64, 1};
    TrainConfig train;

    LeastSquaresOptions least_squares;
    std::uint64_t base_seed = 0;

    static Kind parse_kind(const std::string& s);
    std::string label() const;
    std::string summary() const; // key=value echo for provenance
};

// Builds a fresh interpolator for one fit; random draws derive their seed
// from base_seed + iteration.
std::unique_ptr<Interpolator> make_interpolator(const MethodConfig& config,
                                                int iteration);

enum class Direction { AtoB, BtoA };
const char* to_string(Direction d);

struct TransferRecord {
    int iteration = 0; // 1-based
    Direction direction = Direction::AtoB;
    double mae = 0.0;
    double rl2 = 0.0;
};

struct TransferReport {
    std::string method;
    std::vector<TransferRecord> records;
    std::string config_summary;
    std::string error; // non-empty when the method aborted
};

// Alternating transfer: each iteration fits on the current source dataset,
// evaluates at the other mesh's nodes, scores against the exact field there,
// then reverses direction. Refits always use the transferred values.
TransferReport ping_pong(const Mesh& mesh_a, const Mesh& mesh_b,
                         const BenchmarkField& field, const MethodConfig& method,
                         int iterations);

// Runs ping_pong per method on identical mesh pairs; a failing method is
// reported in its TransferReport without aborting the others.
std::vector<TransferReport> compare_methods(const Mesh& mesh_a, const Mesh& mesh_b,
                                            const BenchmarkField& field,
                                            const std::vector<MethodConfig>& methods,
                                            int iterations);

// CSV columns: method,iteration,direction,mae,rl2
void write_report_csv(const std::vector<TransferReport>& reports, std::ostream& os);

} // namespace fieldxfer
