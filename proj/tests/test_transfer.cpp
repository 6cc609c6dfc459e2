#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "fieldxfer/transfer.hpp"

using namespace fieldxfer;

TEST_CASE("mae and rl2 match hand computations") {
    Eigen::VectorXd pred(3), truth(3);
    pred << 1.0, 2.0, 4.0;
    truth << 1.0, 1.0, 2.0;
    CHECK(mae(pred, truth) == doctest::Approx(1.0).epsilon(1e-15));
    double expect_rl2 = std::sqrt(0.0 + 1.0 + 4.0) / std::sqrt(1.0 + 1.0 + 4.0);
    CHECK(rl2(pred, truth) == doctest::Approx(expect_rl2).epsilon(1e-15));
}

TEST_CASE("metrics agree with a scalar-loop oracle") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2, 2);
    Eigen::VectorXd pred(200), truth(200);
    for (int i = 0; i < 200; ++i) {
        pred[i] = u(rng);
        truth[i] = u(rng);
    }
    double abs_sum = 0.0, sq_sum = 0.0, ref_sq = 0.0;
    for (int i = 0; i < 200; ++i) {
        abs_sum += std::abs(pred[i] - truth[i]);
        sq_sum += (pred[i] - truth[i]) * (pred[i] - truth[i]);
        ref_sq += truth[i] * truth[i];
    }
    CHECK(mae(pred, truth) == doctest::Approx(abs_sum / 200.0).epsilon(1e-14));
    CHECK(rl2(pred, truth) ==
          doctest::Approx(std::sqrt(sq_sum) / std::sqrt(ref_sq)).epsilon(1e-14));
}

TEST_CASE("metric validation") {
    Eigen::VectorXd a(2), b(3);
    a.setOnes();
    b.setOnes();
    CHECK_THROWS_AS(mae(a, b), InvalidArgument);
    CHECK_THROWS_AS(rl2(a, b), InvalidArgument);
    Eigen::VectorXd empty;
    CHECK_THROWS_AS(mae(empty, empty), InvalidArgument);
    Eigen::VectorXd zeros = Eigen::VectorXd::Zero(2);
    CHECK_THROWS_AS(rl2(a, zeros), UndefinedMetric);
    CHECK(mae(a, zeros) == 1.0);
}

TEST_CASE("method kind parsing and labels") {
    CHECK(MethodConfig::parse_kind("pl") == MethodConfig::Kind::piecewise_linear);
    CHECK(MethodConfig::parse_kind("piecewise_linear") ==
          MethodConfig::Kind::piecewise_linear);
    CHECK(MethodConfig::parse_kind("mlp") == MethodConfig::Kind::mlp);
    CHECK(MethodConfig::parse_kind("elm") == MethodConfig::Kind::elm);
    CHECK(MethodConfig::parse_kind("rbf-elm") == MethodConfig::Kind::rbf_elm);
    CHECK(MethodConfig::parse_kind("rbf_elm") == MethodConfig::Kind::rbf_elm);
    CHECK_THROWS_AS(MethodConfig::parse_kind("spline"), InvalidArgument);

    MethodConfig cfg;
    cfg.kind = MethodConfig::Kind::rbf_elm;
    CHECK(cfg.label() == "rbf_elm");
    CHECK(cfg.summary().find("nc=100") != std::string::npos);
    cfg.kind = MethodConfig::Kind::piecewise_linear;
    CHECK(cfg.label() == "pl");
}

TEST_CASE("identical meshes transfer exactly under piecewise linear") {
    Mesh m = generate_uniform_triangular(8, 8, Bounds{-1, 1, -1, 1});
    BenchmarkField field(FieldId::osc2d);
    MethodConfig cfg;
    cfg.kind = MethodConfig::Kind::piecewise_linear;
    TransferReport rep = ping_pong(m, m, field, cfg, 3);
    REQUIRE(rep.records.size() == 6);
    for (const TransferRecord& r : rep.records) {
        CHECK(r.mae == 0.0);
        CHECK(r.rl2 == 0.0);
    }
    CHECK(rep.error.empty());
}

TEST_CASE("iteration one matches the one-shot baseline") {
    Mesh a = generate_uniform_triangular(9, 9, Bounds{-1, 1, -1, 1});
    Mesh b = derive_midpoint_mesh(a);
    BenchmarkField field(FieldId::paraboloid2d);
    MethodConfig cfg;
    cfg.kind = MethodConfig::Kind::piecewise_linear;
    TransferReport rep = ping_pong(a, b, field, cfg, 1);
    REQUIRE(rep.records.size() == 2);
    CHECK(rep.records[0].iteration == 1);
    CHECK(rep.records[0].direction == Direction::AtoB);
    CHECK(rep.records[1].direction == Direction::BtoA);

    ScatteredDataset exact_a = sample_at_nodes(a, field);
    ScatteredDataset exact_b = sample_at_nodes(b, field);
    NodalField fa(a, exact_a.values);
    Eigen::VectorXd pred_b = pl_interpolate_batch(fa, b.nodes());
    CHECK(rep.records[0].mae == mae(pred_b, exact_b.values));
    CHECK(rep.records[0].rl2 == rl2(pred_b, exact_b.values));

    NodalField fb(b, pred_b);
    Eigen::VectorXd pred_a = pl_interpolate_batch(fb, a.nodes());
    CHECK(rep.records[1].mae == mae(pred_a, exact_a.values));
    CHECK(rep.records[1].rl2 == rl2(pred_a, exact_a.values));
}

TEST_CASE("piecewise-linear error accumulates monotonically on a concave field") {
    // linear interpolation of a concave function underestimates everywhere, so
    // each pass pushes values further down and the error can only grow
    Mesh a = generate_uniform_triangular(10, 10, Bounds{-1, 1, -1, 1});
    Mesh b = derive_midpoint_mesh(a);
    BenchmarkField field(FieldId::paraboloid2d);
    MethodConfig cfg;
    cfg.kind = MethodConfig::Kind::piecewise_linear;
    TransferReport rep = ping_pong(a, b, field, cfg, 6);
    double prev = 0.0;
    for (const TransferRecord& r : rep.records) {
        if (r.direction != Direction::BtoA) continue;
        CHECK(r.mae >= prev - 1e-15);
        prev = r.mae;
    }
    CHECK(prev > 0.0);
}

TEST_CASE("rbf-elm transfers a smooth field accurately") {
    Mesh a = generate_uniform_triangular(9, 9, Bounds{-1, 1, -1, 1});
    Mesh b = derive_midpoint_mesh(a);
    BenchmarkField field(FieldId::paraboloid2d);
    MethodConfig cfg;
    cfg.kind = MethodConfig::Kind::rbf_elm;
    cfg.num_centers = 81;
    cfg.epsilon = 2.0;
    cfg.base_seed = 5;
    TransferReport rep = ping_pong(a, b, field, cfg, 2);
    REQUIRE(rep.records.size() == 4);
    for (const TransferRecord& r : rep.records) CHECK(r.rl2 < 0.05);
}

TEST_CASE("reports are deterministic per seed") {
    Mesh a = generate_uniform_triangular(6, 6, Bounds{0, 1, 0, 1});
    Mesh b = derive_midpoint_mesh(a);
    BenchmarkField field(FieldId::multipeak2d);
    MethodConfig cfg;
    cfg.kind = MethodConfig::Kind::rbf_elm;
    cfg.num_centers = 25;
    cfg.epsilon = 3.0;
    cfg.base_seed = 11;

    auto run = [&] {
        std::ostringstream os;
        write_report_csv({ping_pong(a, b, field, cfg, 3)}, os);
        return os.str();
    };
    std::string first = run(), second = run();
    CHECK(first == second);

    cfg.base_seed = 12;
    CHECK(run() != first);
}

TEST_CASE("compare_methods isolates a failing method") {
    Mesh a = generate_uniform_triangular(5, 5, Bounds{-1, 1, -1, 1});
    Mesh b = derive_midpoint_mesh(a);
    BenchmarkField field(FieldId::osc2d);

    MethodConfig pl;
    pl.kind = MethodConfig::Kind::piecewise_linear;
    MethodConfig broken;
    broken.kind = MethodConfig::Kind::rbf_elm;
    broken.num_centers = 100000; // more centers than data points

    auto reports = compare_methods(a, b, field, {broken, pl}, 2);
    REQUIRE(reports.size() == 2);
    CHECK(reports[0].records.empty());
    CHECK(reports[0].error.find("iteration 1 AtoB") != std::string::npos);
    CHECK(reports[1].error.empty());
    CHECK(reports[1].records.size() == 4);
}

TEST_CASE("report csv layout") {
    TransferReport rep;
    rep.method = "pl";
    rep.records.push_back({1, Direction::AtoB, 0.5, 0.25});
    rep.records.push_back({1, Direction::BtoA, 0.0, 1.0});
    std::ostringstream os;
    write_report_csv({rep}, os);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "method,iteration,direction,mae,rl2");
    std::getline(is, line);
    CHECK(line == "pl,1,AtoB,5.0000000000000000e-01,2.5000000000000000e-01");
    std::getline(is, line);
    CHECK(line == "pl,1,BtoA,0.0000000000000000e+00,1.0000000000000000e+00");
    CHECK(!std::getline(is, line));
}

TEST_CASE("ping_pong rejects non-positive iteration counts") {
    Mesh m = generate_uniform_triangular(3, 3, Bounds{-1, 1, -1, 1});
    MethodConfig cfg;
    cfg.kind = MethodConfig::Kind::piecewise_linear;
    CHECK_THROWS_AS(ping_pong(m, m, BenchmarkField(FieldId::osc2d), cfg, 0),
                    InvalidArgument);
}
