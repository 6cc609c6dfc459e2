#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fieldxfer/transfer.hpp"

namespace fs = std::filesystem;
using namespace fieldxfer;

namespace {

using KV = std::vector<std::pair<std::string, std::string>>;

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                             start).count();
    }
};

fs::path resolve_out(const std::string& out_dir, const std::string& name) {
    fs::path p(name);
    if (p.is_absolute()) return p;
    return fs::path(out_dir) / p;
}

// write-to-temp-then-rename so a crash never leaves a truncated artifact
void commit_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp);
        if (!os) throw std::runtime_error("cannot write " + tmp.string());
        os << text;
    }
    fs::rename(tmp, path);
}

template <class Saveable>
void commit_save(const Saveable& obj, const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    obj.save(tmp.string());
    fs::rename(tmp, path);
}

void write_config_echo(const fs::path& artifact, const KV& kv) {
    std::ostringstream os;
    for (const auto& [k, v] : kv) os << k << "=" << v << "\n";
    fs::path p = artifact;
    p += ".config";
    commit_text(p, os.str());
}

Bounds parse_bounds(const std::string& s) {
    Bounds b;
    char c;
    std::istringstream is(s);
    if (!(is >> b.xmin >> c >> b.xmax >> c >> b.ymin >> c >> b.ymax))
        throw InvalidArgument("bounds must be xmin,xmax,ymin,ymax: '" + s + "'");
    return b;
}

Interval parse_interval(const std::string& s) {
    Interval iv;
    char c;
    std::istringstream is(s);
    if (!(is >> iv.a >> c >> iv.b))
        throw InvalidArgument("interval must be a,b: '" + s + "'");
    return iv;
}

std::vector<int> parse_arch(const std::string& s) {
    std::vector<int> arch;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, ',')) arch.push_back(std::stoi(tok));
    if (arch.size() < 2) throw InvalidArgument("architecture needs >= 2 layers");
    return arch;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

// target points: CSV whose header is x[,y][,value]; any value column is
// ignored
std::vector<Point> read_points(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw InvalidArgument("cannot open points file " + path);
    std::string line;
    if (!std::getline(is, line)) throw ParseError("empty points file " + path, 1);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    int dim;
    if (line == "x" || line == "x,value") dim = 1;
    else if (line == "x,y" || line == "x,y,value") dim = 2;
    else throw ParseError("unrecognized points header '" + line + "' in " + path, 1);

    std::vector<Point> pts;
    long lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream row(line);
        double x = 0, y = 0;
        char c;
        if (!(row >> x)) throw ParseError("bad row in " + path, lineno);
        if (dim == 2 && !(row >> c >> y))
            throw ParseError("bad row in " + path, lineno);
        pts.push_back(dim == 1 ? Point::make1(x) : Point::make2(x, y));
    }
    return pts;
}

bool is_field_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw InvalidArgument("cannot open model file " + path);
    std::string head;
    std::getline(is, head);
    return head.rfind("FIELDv1", 0) == 0;
}

struct GlobalOpts {
    std::uint64_t seed = 0;
    std::string out_dir = ".";
};

struct MeshGenOpts {
    std::string out;
    int nx = 0, ny = 0, n = 0, target_nodes = 0;
    std::string bounds = "-1,1,-1,1";
    std::string interval = "0,1";
    std::string graded_field;
    double amp = 49.0;
    double t = 0.125;
};

int run_mesh_gen(const GlobalOpts& g, const MeshGenOpts& o) {
    fs::path out = resolve_out(g.out_dir, o.out);
    KV echo = {{"command", "mesh gen"}, {"seed", std::to_string(g.seed)},
               {"out", out.string()}};
    Mesh mesh = [&] {
        if (!o.graded_field.empty()) {
            if (o.target_nodes < 3)
                throw InvalidArgument("--target-nodes must be >= 3 for graded meshes");
            BenchmarkField f = BenchmarkField::parse(o.graded_field, o.t);
            if (f.dim() != 2)
                throw InvalidArgument("graded meshes require a 2D density field");
            double amp = o.amp;
            DensityField density = [f, amp](const Point& p) {
                return 1.0 + amp * std::abs(f.eval(p));
            };
            echo.insert(echo.end(), {{"graded", o.graded_field},
                                     {"target_nodes", std::to_string(o.target_nodes)},
                                     {"amp", fmt(o.amp)},
                                     {"bounds", o.bounds}});
            return generate_graded_mesh(density, o.target_nodes,
                                        parse_bounds(o.bounds), g.seed);
        }
        if (o.n > 0) {
            echo.insert(echo.end(),
                        {{"n", std::to_string(o.n)}, {"interval", o.interval}});
            return generate_uniform_1d(o.n, parse_interval(o.interval));
        }
        if (o.nx > 0 && o.ny > 0) {
            echo.insert(echo.end(), {{"nx", std::to_string(o.nx)},
                                     {"ny", std::to_string(o.ny)},
                                     {"bounds", o.bounds}});
            return generate_uniform_triangular(o.nx, o.ny, parse_bounds(o.bounds));
        }
        throw InvalidArgument("specify --nx/--ny, --n, or --graded");
    }();
    commit_save(mesh, out);
    write_config_echo(out, echo);
    std::cout << "wrote " << out.string() << ": " << mesh.num_nodes()
              << " nodes, " << mesh.num_elements() << " elements\n";
    return 0;
}

int run_mesh_derive(const GlobalOpts& g, const std::string& in,
                    const std::string& out_name) {
    fs::path out = resolve_out(g.out_dir, out_name);
    Mesh derived = derive_midpoint_mesh(Mesh::load(in));
    commit_save(derived, out);
    write_config_echo(out, {{"command", "mesh derive"}, {"in", in},
                            {"out", out.string()}});
    std::cout << "wrote " << out.string() << ": " << derived.num_nodes()
              << " nodes, " << derived.num_elements() << " elements\n";
    return 0;
}

int run_mesh_info(const std::string& in) {
    Mesh mesh = Mesh::load(in);
    std::cout << mesh.num_nodes() << " nodes, " << mesh.num_elements()
              << " elements\n";
    std::vector<double> measures = mesh.element_measures();
    double lo = measures[0], hi = measures[0];
    for (double m : measures) {
        lo = std::min(lo, m);
        hi = std::max(hi, m);
    }
    std::cout << "min_element_measure=" << fmt(lo)
              << " max_element_measure=" << fmt(hi) << "\n";
    std::cout << "command=mesh info in=" << in << "\n";
    return 0;
}

struct DatasetOpts {
    std::string mesh, field, out, in, values;
    double t = 0.125;
    double threshold = -1.0;
    int ppe = 16;
};

int run_dataset_sample(const GlobalOpts& g, const DatasetOpts& o) {
    fs::path out = resolve_out(g.out_dir, o.out);
    Mesh mesh = Mesh::load(o.mesh);
    BenchmarkField field = BenchmarkField::parse(o.field, o.t);
    ScatteredDataset data = sample_at_nodes(mesh, field);
    commit_save(data, out);
    write_config_echo(out, {{"command", "dataset sample"}, {"mesh", o.mesh},
                            {"field", o.field}, {"t", fmt(o.t)},
                            {"out", out.string()}});
    std::cout << "wrote " << out.string() << ": " << data.size() << " samples\n";
    return 0;
}

int run_dataset_enrich(const GlobalOpts& g, const DatasetOpts& o) {
    fs::path out = resolve_out(g.out_dir, o.out);
    Mesh mesh = Mesh::load(o.mesh);
    ScatteredDataset base = ScatteredDataset::load(o.in);
    KV echo = {{"command", "dataset enrich"}, {"mesh", o.mesh}, {"in", o.in},
               {"threshold", fmt(o.threshold)}, {"ppe", std::to_string(o.ppe)},
               {"out", out.string()}};
    ScatteredDataset enriched = [&] {
        if (!o.values.empty()) {
            auto [vals, mesh_ref] = NodalField::load(o.values);
            if (vals.size() != mesh.num_nodes())
                throw InvalidArgument("field file " + o.values +
                                      " does not match the mesh node count");
            echo.push_back({"values", o.values});
            NodalField f(mesh, vals);
            return enrich_with_quadrature(mesh, base, &f, o.threshold, o.ppe);
        }
        if (o.field.empty())
            throw InvalidArgument("specify --field or --values for enrichment");
        echo.insert(echo.end(), {{"field", o.field}, {"t", fmt(o.t)}});
        return enrich_with_quadrature(mesh, base,
                                      BenchmarkField::parse(o.field, o.t),
                                      o.threshold, o.ppe);
    }();
    commit_save(enriched, out);
    write_config_echo(out, echo);
    std::cout << "wrote " << out.string() << ": " << enriched.size()
              << " samples (" << enriched.size() - base.size() << " added)\n";
    return 0;
}

struct FitOpts {
    std::string data, out;
    std::string arch = "2,64,64,1";
    double lr = 1e-3;
    long iters = 5000;
    double tol = 0.0;
    std::string elm_arch = "2,256,2500,1";
    double range = 0.4;
    int nc = 100;
    double eps = 100.0;
    std::string convention = "inverse_width";
    std::string strategy = "random";
    double lambda = -1.0;
    std::string solver = "normal";
};

LeastSquaresOptions make_ls_options(const FitOpts& o) {
    LeastSquaresOptions ls;
    ls.ridge_lambda = o.lambda;
    if (o.solver == "svd") ls.method = LeastSquaresOptions::Method::svd_pinv;
    else if (o.solver != "normal")
        throw InvalidArgument("solver must be 'normal' or 'svd'");
    return ls;
}

int run_fit(const GlobalOpts& g, const std::string& kind, const FitOpts& o) {
    fs::path out = resolve_out(g.out_dir, o.out);
    ScatteredDataset data = ScatteredDataset::load(o.data);
    KV echo = {{"command", "fit " + kind}, {"data", o.data},
               {"seed", std::to_string(g.seed)}, {"out", out.string()}};
    Timer timer;
    if (kind == "mlp") {
        MlpModel model = mlp_init(parse_arch(o.arch), g.seed);
        TrainConfig tc;
        tc.learning_rate = o.lr;
        tc.max_iterations = o.iters;
        tc.loss_tolerance = o.tol;
        tc.seed = g.seed;
        TrainResult r = mlp_train(model, data, tc);
        commit_save(model, out);
        echo.insert(echo.end(), {{"arch", o.arch}, {"lr", fmt(o.lr)},
                                 {"iters", std::to_string(o.iters)},
                                 {"tol", fmt(o.tol)}});
        write_config_echo(out, echo);
        std::cout << "wrote " << out.string()
                  << ": final_loss=" << fmt(r.loss_history.back())
                  << " iterations=" << r.loss_history.size()
                  << " wall_s=" << timer.seconds() << "\n";
    } else if (kind == "elm") {
        std::vector<int> arch = parse_arch(o.elm_arch);
        if (arch.size() != 4)
            throw InvalidArgument("ELM architecture must have 4 entries");
        ElmModel model = elm_init({arch[0], arch[1], arch[2], arch[3]},
                                  o.range, g.seed);
        double resid = elm_fit(model, data, make_ls_options(o));
        commit_save(model, out);
        echo.insert(echo.end(), {{"arch", o.elm_arch}, {"range", fmt(o.range)},
                                 {"lambda", fmt(o.lambda)}, {"solver", o.solver}});
        write_config_echo(out, echo);
        std::cout << "wrote " << out.string() << ": residual=" << fmt(resid)
                  << " wall_s=" << timer.seconds() << "\n";
    } else { // rbf-elm
        RbfElmModel model = rbf_elm_fit(data, o.nc, o.eps,
                                        parse_rbf_convention(o.convention),
                                        parse_center_strategy(o.strategy),
                                        g.seed, make_ls_options(o));
        commit_save(model, out);
        echo.insert(echo.end(), {{"nc", std::to_string(o.nc)},
                                 {"eps", fmt(o.eps)},
                                 {"convention", o.convention},
                                 {"strategy", o.strategy},
                                 {"lambda", fmt(o.lambda)},
                                 {"solver", o.solver}});
        write_config_echo(out, echo);
        std::cout << "wrote " << out.string()
                  << ": residual=" << fmt(model.fit_residual)
                  << " wall_s=" << timer.seconds() << "\n";
    }
    return 0;
}

struct EvalOpts {
    std::string model, mesh, points, truth, out;
    double t = 0.125;
};

int run_eval(const GlobalOpts& g, const EvalOpts& o) {
    fs::path out = resolve_out(g.out_dir, o.out);
    std::vector<Point> targets;
    if (!o.mesh.empty()) targets = Mesh::load(o.mesh).nodes();
    else if (!o.points.empty()) targets = read_points(o.points);
    else throw InvalidArgument("specify --mesh or --points for targets");

    Eigen::VectorXd pred;
    int model_dim;
    // optional storage so the mesh outlives the nodal field bound to it
    std::optional<Mesh> pl_mesh;
    if (is_field_file(o.model)) {
        auto [vals, mesh_ref] = NodalField::load(o.model);
        fs::path mp(mesh_ref);
        if (!mp.is_absolute() && fs::path(o.model).has_parent_path())
            mp = fs::path(o.model).parent_path() / mp;
        pl_mesh.emplace(Mesh::load(mp.string()));
        if (vals.size() != pl_mesh->num_nodes())
            throw InvalidArgument("field file " + o.model +
                                  " does not match its mesh node count");
        NodalField f(*pl_mesh, vals);
        model_dim = pl_mesh->dim();
        for (const Point& p : targets)
            if (p.dim() != model_dim)
                throw InvalidArgument("target dimension does not match field mesh");
        pred = pl_interpolate_batch(f, targets);
    } else {
        auto model = load_model(o.model);
        model_dim = model->input_dim();
        pred = model->predict(targets);
    }

    std::ostringstream csv;
    csv << (model_dim == 1 ? "x,value" : "x,y,value") << "\n";
    for (size_t i = 0; i < targets.size(); ++i) {
        csv << fmt(targets[i].x());
        if (model_dim == 2) csv << "," << fmt(targets[i].y());
        csv << "," << fmt(pred[i]) << "\n";
    }
    commit_text(out, csv.str());
    KV echo = {{"command", "eval"}, {"model", o.model}, {"out", out.string()}};
    if (!o.mesh.empty()) echo.push_back({"mesh", o.mesh});
    if (!o.points.empty()) echo.push_back({"points", o.points});

    std::cout << "wrote " << out.string() << ": " << targets.size()
              << " predictions\n";
    if (!o.truth.empty()) {
        BenchmarkField field = BenchmarkField::parse(o.truth, o.t);
        Eigen::VectorXd exact(targets.size());
        for (size_t i = 0; i < targets.size(); ++i)
            exact[i] = field.eval(targets[i]);
        echo.insert(echo.end(), {{"truth", o.truth}, {"t", fmt(o.t)}});
        std::cout << "mae=" << fmt(mae(pred, exact))
                  << " rl2=" << fmt(rl2(pred, exact)) << "\n";
    }
    write_config_echo(out, echo);
    return 0;
}

struct TransferOpts {
    std::string mesh_a, mesh_b, field, out;
    std::string methods = "pl,rbf-elm";
    int iters = 100;
    double t = 0.125;
    FitOpts fit; // shared hyperparameter pool for the method list
};

int run_transfer(const GlobalOpts& g, const TransferOpts& o) {
    fs::path out = resolve_out(g.out_dir, o.out);
    Mesh a = Mesh::load(o.mesh_a);
    Mesh b = Mesh::load(o.mesh_b);
    BenchmarkField field = BenchmarkField::parse(o.field, o.t);

    std::vector<MethodConfig> methods;
    std::istringstream is(o.methods);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        MethodConfig cfg;
        cfg.kind = MethodConfig::parse_kind(tok);
        cfg.num_centers = o.fit.nc;
        cfg.epsilon = o.fit.eps;
        cfg.convention = parse_rbf_convention(o.fit.convention);
        cfg.strategy = parse_center_strategy(o.fit.strategy);
        std::vector<int> ea = parse_arch(o.fit.elm_arch);
        if (ea.size() != 4)
            throw InvalidArgument("ELM architecture must have 4 entries");
        cfg.elm_arch = {ea[0], ea[1], ea[2], ea[3]};
        cfg.init_range = o.fit.range;
        cfg.mlp_arch = parse_arch(o.fit.arch);
        cfg.train.learning_rate = o.fit.lr;
        cfg.train.max_iterations = o.fit.iters;
        cfg.train.loss_tolerance = o.fit.tol;
        cfg.least_squares = make_ls_options(o.fit);
        cfg.base_seed = g.seed;
        methods.push_back(cfg);
    }
    if (methods.empty()) throw InvalidArgument("empty method list");

    auto reports = compare_methods(a, b, field, methods, o.iters);
    std::ostringstream csv;
    write_report_csv(reports, csv);
    commit_text(out, csv.str());

    KV echo = {{"command", "transfer"}, {"mesh_a", o.mesh_a},
               {"mesh_b", o.mesh_b}, {"field", o.field}, {"t", fmt(o.t)},
               {"iters", std::to_string(o.iters)},
               {"seed", std::to_string(g.seed)}, {"out", out.string()}};
    int failed = 0;
    for (const TransferReport& r : reports) {
        echo.push_back({"config." + r.method, r.config_summary});
        if (!r.error.empty()) {
            ++failed;
            std::cerr << "method " << r.method << " failed: " << r.error << "\n";
        } else {
            const TransferRecord& last = r.records.back();
            std::cout << r.method << " final mae=" << fmt(last.mae)
                      << " rl2=" << fmt(last.rl2) << "\n";
        }
    }
    write_config_echo(out, echo);
    std::cout << "wrote " << out.string() << "\n";
    return failed == (int)reports.size() ? 1 : 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"scalar field transfer between unstructured meshes"};
    app.set_config("--config", "", "key=value config file; flags take precedence");
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--seed", g.seed, "base RNG seed")->capture_default_str();
    app.add_option("--out-dir", g.out_dir, "directory for output artifacts")
        ->capture_default_str();

    // mesh
    auto* mesh = app.add_subcommand("mesh", "mesh generation and inspection");
    mesh->require_subcommand(1);
    mesh->fallthrough();
    MeshGenOpts mg;
    auto* mesh_gen = mesh->add_subcommand("gen", "generate a uniform or graded mesh");
    mesh_gen->fallthrough();
    mesh_gen->add_option("--out", mg.out)->required();
    mesh_gen->add_option("--nx", mg.nx, "quad columns (2D)");
    mesh_gen->add_option("--ny", mg.ny, "quad rows (2D)");
    mesh_gen->add_option("--bounds", mg.bounds, "xmin,xmax,ymin,ymax")
        ->capture_default_str();
    mesh_gen->add_option("--n", mg.n, "segment count (1D)");
    mesh_gen->add_option("--interval", mg.interval, "a,b (1D)")
        ->capture_default_str();
    mesh_gen->add_option("--graded", mg.graded_field,
                         "field id used as density for a graded mesh");
    mesh_gen->add_option("--target-nodes", mg.target_nodes);
    mesh_gen->add_option("--amp", mg.amp, "graded density amplitude")
        ->capture_default_str();
    mesh_gen->add_option("--t", mg.t, "field time parameter")->capture_default_str();

    std::string md_in, md_out, mi_in;
    auto* mesh_derive = mesh->add_subcommand("derive", "midpoint-derived mesh");
    mesh_derive->fallthrough();
    mesh_derive->add_option("--in", md_in)->required();
    mesh_derive->add_option("--out", md_out)->required();
    auto* mesh_info = mesh->add_subcommand("info", "print mesh statistics");
    mesh_info->fallthrough();
    mesh_info->add_option("--in", mi_in)->required();

    // dataset
    auto* dataset = app.add_subcommand("dataset", "sampling and enrichment");
    dataset->require_subcommand(1);
    dataset->fallthrough();
    DatasetOpts ds, de;
    auto* dataset_sample =
        dataset->add_subcommand("sample", "sample a benchmark field at mesh nodes");
    dataset_sample->fallthrough();
    dataset_sample->add_option("--mesh", ds.mesh)->required();
    dataset_sample->add_option("--field", ds.field)->required();
    dataset_sample->add_option("--t", ds.t)->capture_default_str();
    dataset_sample->add_option("--out", ds.out)->required();
    auto* dataset_enrich =
        dataset->add_subcommand("enrich", "add quadrature points in large elements");
    dataset_enrich->fallthrough();
    dataset_enrich->add_option("--mesh", de.mesh)->required();
    dataset_enrich->add_option("--in", de.in, "base dataset CSV")->required();
    dataset_enrich->add_option("--field", de.field, "analytic value source");
    dataset_enrich->add_option("--values", de.values, "nodal field value source");
    dataset_enrich->add_option("--t", de.t)->capture_default_str();
    dataset_enrich->add_option("--threshold", de.threshold, "element area threshold")
        ->required();
    dataset_enrich->add_option("--ppe", de.ppe, "points per element (1, 3 or 16)")
        ->capture_default_str();
    dataset_enrich->add_option("--out", de.out)->required();

    // fit
    auto* fit = app.add_subcommand("fit", "train a surrogate model");
    fit->require_subcommand(1);
    fit->fallthrough();
    FitOpts fo;
    std::string fit_kind;
    for (const char* kind : {"mlp", "elm", "rbf-elm"}) {
        auto* sub = fit->add_subcommand(kind);
        sub->fallthrough();
        sub->callback([&fit_kind, kind] { fit_kind = kind; });
        sub->add_option("--data", fo.data)->required();
        sub->add_option("--out", fo.out)->required();
        if (std::string(kind) == "mlp") {
            sub->add_option("--arch", fo.arch)->capture_default_str();
            sub->add_option("--lr", fo.lr)->capture_default_str();
            sub->add_option("--iters", fo.iters)->capture_default_str();
            sub->add_option("--tol", fo.tol)->capture_default_str();
        } else {
            sub->add_option("--lambda", fo.lambda)->capture_default_str();
            sub->add_option("--solver", fo.solver, "normal or svd")
                ->capture_default_str();
            if (std::string(kind) == "elm") {
                sub->add_option("--arch", fo.elm_arch)->capture_default_str();
                sub->add_option("--range", fo.range)->capture_default_str();
            } else {
                sub->add_option("--nc", fo.nc)->capture_default_str();
                sub->add_option("--eps", fo.eps)->capture_default_str();
                sub->add_option("--convention", fo.convention)
                    ->capture_default_str();
                sub->add_option("--strategy", fo.strategy)->capture_default_str();
            }
        }
    }

    // eval
    EvalOpts ev;
    auto* eval = app.add_subcommand("eval", "evaluate a model or nodal field");
    eval->fallthrough();
    eval->add_option("--model", ev.model, "model JSON or FIELDv1 file")->required();
    eval->add_option("--mesh", ev.mesh, "target mesh (evaluate at its nodes)");
    eval->add_option("--points", ev.points, "target points CSV");
    eval->add_option("--truth", ev.truth, "benchmark field id for metrics");
    eval->add_option("--t", ev.t)->capture_default_str();
    eval->add_option("--out", ev.out, "predictions CSV")->required();

    // transfer
    TransferOpts tr;
    auto* transfer = app.add_subcommand("transfer", "ping-pong mesh-to-mesh transfer");
    transfer->fallthrough();
    transfer->add_option("--mesh-a", tr.mesh_a)->required();
    transfer->add_option("--mesh-b", tr.mesh_b)->required();
    transfer->add_option("--field", tr.field)->required();
    transfer->add_option("--t", tr.t)->capture_default_str();
    transfer->add_option("--methods", tr.methods)->capture_default_str();
    transfer->add_option("--iters", tr.iters)->capture_default_str();
    transfer->add_option("--out", tr.out, "report CSV")->required();
    transfer->add_option("--nc", tr.fit.nc)->capture_default_str();
    transfer->add_option("--eps", tr.fit.eps)->capture_default_str();
    transfer->add_option("--convention", tr.fit.convention)->capture_default_str();
    transfer->add_option("--strategy", tr.fit.strategy)->capture_default_str();
    transfer->add_option("--elm-arch", tr.fit.elm_arch)->capture_default_str();
    transfer->add_option("--range", tr.fit.range)->capture_default_str();
    transfer->add_option("--mlp-arch", tr.fit.arch)->capture_default_str();
    transfer->add_option("--lr", tr.fit.lr)->capture_default_str();
    transfer->add_option("--train-iters", tr.fit.iters)->capture_default_str();
    transfer->add_option("--tol", tr.fit.tol)->capture_default_str();
    transfer->add_option("--lambda", tr.fit.lambda)->capture_default_str();
    transfer->add_option("--solver", tr.fit.solver)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (mesh_gen->parsed()) return run_mesh_gen(g, mg);
        if (mesh_derive->parsed()) return run_mesh_derive(g, md_in, md_out);
        if (mesh_info->parsed()) return run_mesh_info(mi_in);
        if (dataset_sample->parsed()) return run_dataset_sample(g, ds);
        if (dataset_enrich->parsed()) return run_dataset_enrich(g, de);
        if (fit->parsed()) return run_fit(g, fit_kind, fo);
        if (eval->parsed()) return run_eval(g, ev);
        if (transfer->parsed()) return run_transfer(g, tr);
        std::cerr << "no subcommand given\n";
        return 2;
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
