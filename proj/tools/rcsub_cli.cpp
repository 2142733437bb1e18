#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "rcsub/rcsub.hpp"

namespace fs = std::filesystem;
using namespace rcsub;

namespace {

struct Options {
    int n = 16;
    int levels = 5;
    double a = 0.0;
    bool point = false;
    bool cell = false;
    std::string scheme = "rc";
    double threshold = DetectionParams{}.score_threshold;
    std::string out;
};

Framework framework_of(const Options& o, Framework fallback)
{
    if (o.point && o.cell)
        throw Error(ErrorCode::invalid_argument, "--point and --cell are mutually exclusive");
    if (o.point) return Framework::point;
    if (o.cell) return Framework::cell;
    return fallback;
}

Scheme scheme_of(const Options& o)
{
    if (o.scheme == "rc") return Scheme::rc;
    if (o.scheme == "linear") return Scheme::linear;
    throw Error(ErrorCode::invalid_argument, "scheme must be rc or linear, got '" + o.scheme + "'");
}

DetectionParams params_of(const Options& o)
{
    DetectionParams p;
    p.score_threshold = o.threshold;
    p.validate();
    return p;
}

void write_text(const fs::path& p, const std::string& text)
{
    if (p.has_parent_path())
        fs::create_directories(p.parent_path());
    std::ofstream f(p, std::ios::binary);
    if (!f)
        throw Error(ErrorCode::io, "cannot write " + p.string());
    f << text;
}

void emit(const Options& o, const std::string& text)
{
    if (o.out.empty())
        std::cout << text;
    else
        write_text(o.out, text);
}

void cmd_gen(const std::string& name, const Options& o)
{
    if (o.n < 1)
        throw Error(ErrorCode::bad_resolution, "--n must be at least 1");
    const auto grid = UniformGrid1D::unit(static_cast<std::size_t>(o.n));
    std::ostringstream text;
    if (is_2d_function(name)) {
        const Function2D f = make_function_2d(name);
        const Framework fw = framework_of(o, Framework::cell);
        write_matrix(text, fw == Framework::point ? sample(f, grid, grid) : average(f, grid, grid));
    } else {
        const PiecewiseFunction f = make_function(name, o.a);
        if (framework_of(o, Framework::point) == Framework::point)
            write_series(text, sample(f, grid));
        else
            write_series(text, average(f, grid));
    }
    emit(o, text.str());
}

bool is_matrix_file(const fs::path& p)
{
    std::ifstream in(p);
    std::string line;
    if (!in || !std::getline(in, line))
        throw Error(ErrorCode::io, "cannot read " + p.string());
    return parse_header(line).count("x_origin") > 0;
}

void cmd_rc_2d(const fs::path& in, const fs::path& dir, const Options& o)
{
    const Grid2DSamples data = read_matrix_file(in);
    if ((o.point && data.framework != Framework::point) || (o.cell && data.framework != Framework::cell))
        throw Error(ErrorCode::invalid_argument, "input kind does not match the requested framework");
    const DetectionParams p = params_of(o);
    if (data.framework == Framework::cell) {
        write_matrix_file(dir / "output.csv", rc2d_cell_averages(data, o.levels, p, scheme_of(o)));
        return;
    }
    if (scheme_of(o) == Scheme::linear) {
        Grid2DSamples cur = data;
        for (int k = 0; k < o.levels; ++k)
            cur = tensor_dd4_step(cur);
        write_matrix_file(dir / "output.csv", cur);
        return;
    }
    const Rc2DResult r = rc2d_point_values(data, o.levels, p);
    write_matrix_file(dir / "output.csv", r.output);
    write_matrix_file(dir / "smoothed.csv", r.smoothed);
    write_matrix_file(dir / "correction.csv", r.correction);
    write_matrix_file(dir / "masked.csv", r.masked);
    if (r.curve) {
        std::ofstream c(dir / "curve.csv", std::ios::binary);
        write_curve(c, *r.curve, r.output.y_grid);
    }
}

void cmd_rc(const fs::path& in, const Options& o)
{
    if (o.levels < 0)
        throw Error(ErrorCode::invalid_argument, "--levels must be non-negative");
    const fs::path dir = o.out.empty() ? fs::path("rc_out") : fs::path(o.out);
    fs::create_directories(dir);
    const auto t0 = std::chrono::steady_clock::now();
    if (is_matrix_file(in)) {
        cmd_rc_2d(in, dir, o);
    } else {
        const AnySeries series = read_series_file(in);
        const Framework fw = std::holds_alternative<SampleSeries>(series) ? Framework::point : Framework::cell;
        if (framework_of(o, fw) != fw)
            throw Error(ErrorCode::invalid_argument, "input kind does not match the requested framework");
        const Scheme scheme = scheme_of(o);
        const DetectionParams p = params_of(o);
        RunMeta meta{o.levels, fw, scheme, p, false};
        if (fw == Framework::point) {
            const auto& s = std::get<SampleSeries>(series);
            const RCResult r = scheme == Scheme::rc ? rc_point_values(s, o.levels, p) : linear_point_values(s, o.levels);
            meta.degraded = r.degraded();
            write_result_dir(dir, r, meta);
        } else {
            const auto& c = std::get<CellAverageSeries>(series);
            const CellRCResult r = scheme == Scheme::rc ? rc_cell_averages(c, o.levels, p) : linear_cell_averages(c, o.levels);
            meta.degraded = r.primitive.degraded();
            write_result_dir(dir, r, meta);
        }
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    write_timings(dir, ms);
}

void cmd_table(int id, const Options& o)
{
    const TableReport t = make_table(id, params_of(o));
    if (o.out.empty()) {
        std::cout << to_csv(t);
        return;
    }
    write_text(o.out, to_csv(t));
    std::cout << to_text(t);
}

void cmd_fig(int id, const Options& o)
{
    const FigureBundle b = make_figure(id, params_of(o));
    const fs::path dir = o.out.empty() ? fs::path("fig" + std::to_string(id)) : fs::path(o.out);
    for (const auto& [name, content] : b.files)
        write_text(dir / name, content);
    std::cout << "figure " << id << ": " << b.title << '\n';
    for (const auto& f : b.files)
        std::cout << "  " << (dir / f.first).string() << '\n';
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Regularization-correction subdivision: data generation, pipelines, tables and figure data"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value file; keys are the long option names", false);
    app.allow_config_extras(CLI::config_extras_mode::error);

    Options o;
    app.add_option("--n", o.n, "number of cells")->capture_default_str();
    app.add_option("--levels", o.levels, "subdivision levels")->capture_default_str();
    app.add_option("--a", o.a, "jump size of exp1")->capture_default_str();
    app.add_flag("--point", o.point, "point-value sampling");
    app.add_flag("--cell", o.cell, "cell-average sampling");
    app.add_option("--scheme", o.scheme, "rc or linear")->capture_default_str();
    app.add_option("--threshold", o.threshold, "detection threshold, in multiples of the median")->capture_default_str();
    app.add_option("--out", o.out, "output file or directory");

    std::string fn_name, input;
    int table_id = 0, fig_id = 0;
    auto* gen = app.add_subcommand("gen", "sample a test function");
    gen->add_option("function", fn_name, "exp1, exp2, exp3, exp4, smooth, exp2D_point or exp2D")->required();
    auto* rc = app.add_subcommand("rc", "run the pipeline on a CSV series or matrix");
    rc->add_option("input", input, "input CSV")->required()->check(CLI::ExistingFile);
    auto* table = app.add_subcommand("table", "reproduce a convergence or regularity table");
    table->add_option("id", table_id, "1..5")->required();
    auto* fig = app.add_subcommand("fig", "emit plot-ready CSV for a figure");
    fig->add_option("id", fig_id, "1..11")->required();
    for (auto* s : {gen, rc, table, fig})
        s->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_status(ErrorCode::invalid_argument);
    }

    try {
        if (*gen) cmd_gen(fn_name, o);
        else if (*rc) cmd_rc(input, o);
        else if (*table) cmd_table(table_id, o);
        else if (*fig) cmd_fig(fig_id, o);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_status(e.code());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_status(ErrorCode::io);
    }
    return 0;
}
