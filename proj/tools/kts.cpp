// kts: find all real zeros of a bivariate polynomial system in [0,1]^2 by
// Kantorovich-certified subdivision, or intersect a line with a parametric
// surface patch. See README.md for file formats.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kts/intersect.hpp"
#include "kts/io.hpp"
#include "kts/solver.hpp"
#include "kts/verify.hpp"

namespace {

enum class LogLevel { Quiet, Info, Trace };

LogLevel log_level() {
    const char* env = std::getenv("KTS_LOG");
    if (!env) return LogLevel::Quiet;
    const std::string s(env);
    if (s == "trace") return LogLevel::Trace;
    if (s == "info") return LogLevel::Info;
    return LogLevel::Quiet;
}

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw kts::ParseError("cannot write '" + out_path + "'");
    out << text;
}

void log_run(const kts::SolveResult& res) {
    const LogLevel level = log_level();
    if (level == LogLevel::Quiet) return;
    if (level == LogLevel::Trace) {
        for (const kts::PatchTrace& t : res.trace)
            std::fprintf(stderr, "patch center=(%.17g,%.17g) r=%.17g outcome=%s\n",
                         t.center[0], t.center[1], t.radius, kts::outcome_name(t.outcome));
    }
    std::fprintf(stderr,
                 "kts: %zu patches examined, smallest width %.6g, %zu zeros, %zu unresolved\n",
                 res.stats.patches_examined, res.stats.smallest_width, res.zeros.size(),
                 res.unresolved.size());
}

double milliseconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

// Condition anchors: real zeros in a box slightly wider than D', so
// near-square zeros (the ill-conditioned fixtures put them just below v=0)
// contribute to the estimate.
double cond_lower_bound(const kts::TensorPoly<2>& f) {
    const kts::Box2 box = kts::dprime_box(kts::theta(f));
    const std::vector<kts::Vec2> zeros = kts::zeros_in_box(f, box, 256);
    if (zeros.empty()) return 0.0;
    return kts::estimate_condition(f, zeros, 2000).cond_lb;
}

struct SolveOptions {
    std::string input;
    std::string out;
    double min_width = 0.0;
    std::size_t max_patches = 0;
    bool with_cond = false;
};

int run_solve(const SolveOptions& opt) {
    kts::ProblemFile pf = kts::read_problem_file(opt.input);
    if (pf.mode != kts::ProblemFile::Mode::System2D)
        throw kts::ParseError("solve expects a system2d problem file");
    if (opt.min_width > 0.0) pf.config.min_patch_width = opt.min_width;
    if (opt.max_patches > 0) pf.config.max_patches = opt.max_patches;

    const auto start = std::chrono::steady_clock::now();
    const kts::SolveResult res = kts::solve(*pf.system, pf.config);
    std::optional<double> cond;
    if (opt.with_cond) cond = cond_lower_bound(*pf.system);

    const kts::json rep = kts::report_json(res, cond, milliseconds_since(start));
    emit(opt.out, rep.dump(2) + "\n");
    log_run(res);
    return res.complete() ? 0 : 2;
}

struct IntersectOptions {
    std::string input;
    std::string out;
    bool ray_only = false;
};

int run_intersect(const IntersectOptions& opt) {
    const kts::ProblemFile pf = kts::read_problem_file(opt.input);
    if (pf.mode != kts::ProblemFile::Mode::SurfaceLine)
        throw kts::ParseError("intersect expects a surface_line problem file");
    if (kts::norm_inf(pf.line->d) == 0.0)
        throw kts::ParseError("field 'line.d': must be nonzero");

    const auto start = std::chrono::steady_clock::now();
    kts::IntersectResult res = kts::intersect(*pf.surface, *pf.line, pf.config);
    if (opt.ray_only) {
        std::erase_if(res.intersections,
                      [](const kts::Intersection& hit) { return hit.t < 0.0; });
    }
    const kts::json rep = kts::report_json(res, milliseconds_since(start));
    emit(opt.out, rep.dump(2) + "\n");
    return res.complete() ? 0 : 2;
}

struct BenchRow {
    std::string name;
    bool ok = false;
    std::string error;
    double cond_lb = 0.0;
    std::size_t num_zeros = 0;
    std::optional<double> min_zero_distance;
    kts::SolveStats stats;
};

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

int run_bench(const std::string& dir, const std::string& csv_path) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw kts::ParseError("'" + dir + "' is not a directory");
    std::vector<fs::path> files;
    for (const fs::directory_entry& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw kts::ParseError("no .json problem files in '" + dir + "'");

    std::vector<BenchRow> rows;
    for (const fs::path& path : files) {
        BenchRow row;
        row.name = path.stem().string();
        try {
            const kts::ProblemFile pf = kts::read_problem_file(path.string());
            const kts::TensorPoly<2> f = pf.mode == kts::ProblemFile::Mode::System2D
                                             ? *pf.system
                                             : kts::reduce(*pf.surface, *pf.line);
            const kts::SolveResult res = kts::solve(f, pf.config);
            row.stats = res.stats;
            row.num_zeros = res.zeros.size();
            for (std::size_t i = 0; i < res.zeros.size(); ++i)
                for (std::size_t j = i + 1; j < res.zeros.size(); ++j) {
                    const double d = kts::dist_inf(res.zeros[i], res.zeros[j]);
                    if (!row.min_zero_distance || d < *row.min_zero_distance)
                        row.min_zero_distance = d;
                }
            row.cond_lb = cond_lower_bound(f);
            row.ok = true;
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        rows.push_back(row);
    }

    std::string csv =
        "name,cond_lb,num_zeros,min_zero_distance,patches_examined,smallest_width,"
        "max_newton_iterations,status\n";
    bool any_ok = false;
    for (const BenchRow& row : rows) {
        if (row.ok) {
            any_ok = true;
            csv += row.name + "," + format_double(row.cond_lb) + "," +
                   std::to_string(row.num_zeros) + "," +
                   (row.min_zero_distance ? format_double(*row.min_zero_distance)
                                          : std::string("-")) +
                   "," + std::to_string(row.stats.patches_examined) + "," +
                   format_double(row.stats.smallest_width) + "," +
                   std::to_string(row.stats.max_newton_iterations) + ",ok\n";
        } else {
            std::string msg = row.error;
            std::replace(msg.begin(), msg.end(), ',', ';');
            std::replace(msg.begin(), msg.end(), '\n', ' ');
            csv += row.name + ",,,,,,,error: " + msg + "\n";
        }
    }
    emit(csv_path, csv);
    return any_ok ? 0 : 1;
}

struct FixtureOptions {
    std::string kind;
    std::string out;
    std::uint64_t seed = 0;
    double eps = 0.1;
    double u0 = 0.5;
    double v0 = 0.05;
    double omega = 20.0;
    std::vector<double> alpha{0.1, 0.0, 0.0, 0.3};
    std::vector<double> center{0.5, 0.5};
    std::vector<int> deg{2, 2};
    std::string basis = "bernstein";
};

int run_fixtures(const FixtureOptions& opt) {
    kts::TensorPoly<2> f(kts::Basis::Power, 0, 0);
    if (opt.kind == "illconditioned") {
        f = kts::fixture_illconditioned(opt.u0, opt.v0, opt.eps);
    } else if (opt.kind == "nearest_zero") {
        if (opt.alpha.size() != 4) throw kts::ParseError("--alpha expects 4 numbers");
        if (opt.center.size() != 2) throw kts::ParseError("--center expects 2 numbers");
        f = kts::fixture_nearest_zero(
            {opt.center[0], opt.center[1]},
            kts::Mat2{opt.alpha[0], opt.alpha[1], opt.alpha[2], opt.alpha[3]}, opt.omega);
    } else if (opt.kind == "random") {
        if (opt.deg.size() != 2 || opt.deg[0] < 0 || opt.deg[1] < 0)
            throw kts::ParseError("--deg expects two non-negative integers");
        f = kts::random_system(opt.seed, kts::basis_from_name(opt.basis), opt.deg[0],
                               opt.deg[1]);
    } else {
        throw kts::ParseError("unknown fixture kind '" + opt.kind +
                              "' (try illconditioned, nearest_zero, random)");
    }
    emit(opt.out, kts::to_json(kts::make_system_problem(f)).dump(2) + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Certified real-zero finding for bivariate polynomial systems in [0,1]^2,\n"
                 "with a line/parametric-surface intersection front-end."};
    app.require_subcommand(1);

    SolveOptions solve_opt;
    CLI::App* solve_cmd = app.add_subcommand("solve", "find all zeros of a 2x2 system");
    solve_cmd->add_option("file", solve_opt.input, "problem file (mode system2d)")->required();
    solve_cmd->add_option("--out", solve_opt.out, "write the report here instead of stdout");
    solve_cmd->add_option("--min-width", solve_opt.min_width,
                          "override the minimum patch width");
    solve_cmd->add_option("--max-patches", solve_opt.max_patches, "override the patch budget");
    solve_cmd->add_flag("--cond", solve_opt.with_cond,
                        "include the condition-number lower bound in the report");

    IntersectOptions intersect_opt;
    CLI::App* intersect_cmd =
        app.add_subcommand("intersect", "intersect a line with a parametric surface");
    intersect_cmd->add_option("file", intersect_opt.input, "problem file (mode surface_line)")
        ->required();
    intersect_cmd->add_option("--out", intersect_opt.out,
                              "write the report here instead of stdout");
    intersect_cmd->add_flag("--ray", intersect_opt.ray_only, "keep only hits with t >= 0");

    std::string bench_dir, bench_csv;
    CLI::App* bench_cmd = app.add_subcommand("bench", "run a directory of problem files");
    bench_cmd->add_option("dir", bench_dir, "directory of .json problem files")->required();
    bench_cmd->add_option("--csv", bench_csv, "write the CSV here instead of stdout");

    FixtureOptions fx;
    CLI::App* fixtures_cmd =
        app.add_subcommand("fixtures", "emit a generated problem file");
    fixtures_cmd->add_option("kind", fx.kind, "illconditioned | nearest_zero | random")
        ->required();
    fixtures_cmd->add_option("--out", fx.out, "write the problem here instead of stdout");
    fixtures_cmd->add_option("--seed", fx.seed, "random kind: RNG seed");
    fixtures_cmd->add_option("--eps", fx.eps,
                             "illconditioned kind: zero offset below the square");
    fixtures_cmd->add_option("--u0", fx.u0, "illconditioned kind: zero pair u-location");
    fixtures_cmd->add_option("--v0", fx.v0, "illconditioned kind: probe patch v-location");
    fixtures_cmd->add_option("--omega", fx.omega, "nearest_zero kind: Lipschitz constant");
    fixtures_cmd->add_option("--alpha", fx.alpha, "nearest_zero kind: Jacobian a11 a12 a21 a22")
        ->expected(4);
    fixtures_cmd->add_option("--center", fx.center, "nearest_zero kind: the zero u v")
        ->expected(2);
    fixtures_cmd->add_option("--deg", fx.deg, "random kind: degrees m n")->expected(2);
    fixtures_cmd->add_option("--basis", fx.basis, "random kind: power | bernstein | chebyshev");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve_cmd->parsed()) return run_solve(solve_opt);
        if (intersect_cmd->parsed()) return run_intersect(intersect_opt);
        if (bench_cmd->parsed()) return run_bench(bench_dir, bench_csv);
        if (fixtures_cmd->parsed()) return run_fixtures(fx);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
