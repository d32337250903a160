// Command-line front end: direct scattering, N-soliton synthesis and the
// stability-decay experiment, with one JSON manifest per run.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "nlsist/errors.hpp"
#include "nlsist/io.hpp"
#include "nlsist/recipes.hpp"
#include "nlsist/soliton.hpp"
#include "nlsist/stability.hpp"
#include "nlsist/zs.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace nlsist;

namespace {

struct RangeSpec {
    double lo = 0.0, hi = 0.0;
    int n = 0;
};

RangeSpec parse_range(const std::string& s, const char* what) {
    RangeSpec r;
    char c1, c2;
    std::istringstream is(s);
    if (!(is >> r.lo >> c1 >> r.hi >> c2 >> r.n) || c1 != ':' || c2 != ':' || r.n < 2 ||
        !(r.hi > r.lo))
        throw ValidationError("invalid-config",
                              std::string(what) + " must be lo:hi:n, got '" + s + "'");
    return r;
}

SearchBox parse_box(const std::string& s) {
    SearchBox b;
    char c1, c2, c3;
    std::istringstream is(s);
    if (!(is >> b.re_min >> c1 >> b.re_max >> c2 >> b.im_min >> c3 >> b.im_max) ||
        c1 != ':' || c2 != ':' || c3 != ':' || !(b.re_max > b.re_min) ||
        !(b.im_max > b.im_min) || !(b.im_min > 0.0))
        throw ValidationError("invalid-config",
                              "--box must be re_min:re_max:im_min:im_max inside Im z > 0");
    return b;
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stod(tok));
    }
    if (out.empty()) throw ValidationError("invalid-config", "empty list: " + s);
    return out;
}

struct Manifest {
    std::string command;
    json config = json::object();
    json inputs = json::object();
    std::vector<std::string> outputs;
    Tolerances tol;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    void note_input(const std::string& path) { inputs[path] = file_hash(path); }
    void write(const std::string& out_dir) {
        json j;
        j["command"] = command;
        j["config"] = config;
        j["inputs"] = inputs;
        j["outputs"] = outputs;
        j["tolerances"] = {{"root_tol", tol.root_tol},
                           {"unitarity_tol", tol.unitarity_tol},
                           {"gamma_tol", tol.gamma_tol},
                           {"tail_tol", tol.tail_tol},
                           {"a_floor", tol.a_floor},
                           {"pole_sep_tol", tol.pole_sep_tol}};
        j["wall_time_s"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        write_json_file(out_dir + "/manifest.json", j);
    }
};

// tiny raster plot of the decay table (PGM, white background)
void write_decay_plot(const std::string& path, const std::vector<StabilityPoint>& pts) {
    const int W = 640, H = 420, m = 40;
    std::vector<unsigned char> img(W * H, 255);
    double tmax = 1.0, ymax = 1e-300;
    for (const auto& p : pts) {
        tmax = std::max(tmax, std::abs(p.t));
        ymax = std::max(ymax, p.scaled);
    }
    const auto px = [&](double t) {
        return m + static_cast<int>((W - 2 * m) * std::abs(t) / (1.05 * tmax));
    };
    const auto py = [&](double y) {
        return H - m - static_cast<int>((H - 2 * m) * y / (1.1 * ymax));
    };
    for (int x = m; x < W - m; ++x) img[(H - m) * W + x] = 0;
    for (int y = m; y < H - m; ++y) img[y * W + m] = 0;
    const auto dot = [&](int cx, int cy) {
        for (int dy = -2; dy <= 2; ++dy)
            for (int dx = -2; dx <= 2; ++dx) {
                const int x = cx + dx, y = cy + dy;
                if (x >= 0 && x < W && y >= 0 && y < H) img[y * W + x] = 0;
            }
    };
    int px_prev = -1, py_prev = -1;
    for (const auto& p : pts) {
        const int cx = px(p.t), cy = py(p.scaled);
        dot(cx, cy);
        if (px_prev >= 0) {
            const int steps = std::max(std::abs(cx - px_prev), std::abs(cy - py_prev)) + 1;
            for (int s = 0; s <= steps; ++s) {
                const int x = px_prev + (cx - px_prev) * s / steps;
                const int y = py_prev + (cy - py_prev) * s / steps;
                img[y * W + x] = 0;
            }
        }
        px_prev = cx;
        py_prev = cy;
    }
    std::ofstream os(path, std::ios::binary);
    os << "P5\n" << W << " " << H << "\n255\n";
    os.write(reinterpret_cast<const char*>(img.data()), img.size());
}

void add_tolerance_flags(CLI::App* cmd, Tolerances& tol) {
    cmd->add_option("--tol-root", tol.root_tol, "zero refinement tolerance on |a|");
    cmd->add_option("--tol-unitarity", tol.unitarity_tol, "|a|^2+|b|^2 defect bound");
    cmd->add_option("--tol-gamma", tol.gamma_tol, "bound-state ratio consistency");
    cmd->add_option("--tol-tail", tol.tail_tol, "allowed |u| at the window edges");
    cmd->add_option("--tol-a-floor", tol.a_floor, "spectral-singularity floor for |a|");
    cmd->add_option("--tol-pole-sep", tol.pole_sep_tol, "minimal pole separation");
}

int run_scatter(const std::string& input, const std::string& grid_s,
                const std::string& box_s, const std::string& out_dir,
                const Tolerances& tol) {
    Manifest man;
    man.command = "scatter";
    man.tol = tol;
    man.config = {{"input", input}, {"grid", grid_s}, {"box", box_s}, {"out_dir", out_dir}};
    man.note_input(input);

    SampledPotential pot = input.size() > 5 && input.substr(input.size() - 5) == ".json"
                               ? potential_from_json(read_json_file(input))
                               : read_potential_csv(input);
    const RangeSpec g = parse_range(grid_s, "--grid");
    const ScatteringData sd =
        scatter(pot, uniform_grid(g.lo, g.hi, g.n), parse_box(box_s), tol);

    fs::create_directories(out_dir);
    const std::string out = out_dir + "/scattering.json";
    write_json_file(out, to_json(sd, tol));
    man.outputs.push_back(out);
    man.write(out_dir);

    double rmax = 0.0;
    for (const Complex& r : sd.r_values) rmax = std::max(rmax, std::abs(r));
    std::printf("scatter: %d pole(s); max|r| = %.3e; wrote %s\n", sd.order(), rmax,
                out.c_str());
    return 0;
}

int run_synthesize(const std::string& params_path, const std::string& xgrid_s, double t,
                   const std::string& out_dir, const Tolerances& tol) {
    Manifest man;
    man.command = "synthesize";
    man.tol = tol;
    man.config = {{"params", params_path}, {"xgrid", xgrid_s}, {"t", t}, {"out_dir", out_dir}};
    man.note_input(params_path);

    const SolitonParams p = params_from_json(read_json_file(params_path));
    p.validate(tol.pole_sep_tol);
    const RangeSpec g = parse_range(xgrid_s, "--xgrid");
    const auto xs = uniform_grid(g.lo, g.hi, g.n);
    const auto u = n_soliton_profile(p, xs, t, tol);

    fs::create_directories(out_dir);
    std::ostringstream name;
    name << out_dir << "/field_t" << t << ".csv";
    write_field_csv(name.str(), xs, u);
    man.outputs.push_back(name.str());
    man.write(out_dir);
    std::printf("synthesize: N=%d field at t=%g on %d nodes; wrote %s\n", p.order(), t, g.n,
                name.str().c_str());
    return 0;
}

int run_verify(const std::string& params_path, const std::string& shape_s, double eps,
               double center, double width, std::uint64_t seed, const std::string& sign_s,
               const std::string& tlist_s, const std::string& grid_s,
               const std::string& box_s, double window, int modes, double dt,
               const std::string& out_dir, bool plot, const Tolerances& tol) {
    Manifest man;
    man.command = "verify-stability";
    man.tol = tol;
    man.config = {{"params", params_path}, {"shape", shape_s},   {"eps", eps},
                  {"center", center},      {"width", width},     {"seed", seed},
                  {"sign", sign_s},        {"t_list", tlist_s},  {"grid", grid_s},
                  {"box", box_s},          {"window", window},   {"modes", modes},
                  {"dt", dt},              {"out_dir", out_dir}, {"plot", plot}};
    man.note_input(params_path);

    StabilityOptions opt;
    opt.params = params_from_json(read_json_file(params_path));
    opt.shape = perturbation_shape_from_string(shape_s);
    opt.eps = eps;
    opt.center = center;
    opt.width = width;
    opt.seed = seed;
    if (sign_s == "+" || sign_s == "plus")
        opt.sign = Sign::Plus;
    else if (sign_s == "-" || sign_s == "minus")
        opt.sign = Sign::Minus;
    else
        throw ValidationError("invalid-config", "--sign must be + or -");
    opt.t_list = parse_list(tlist_s);
    const RangeSpec g = parse_range(grid_s, "--grid");
    opt.r_grid = uniform_grid(g.lo, g.hi, g.n);
    opt.box = parse_box(box_s);
    opt.window_half = window;
    opt.n_modes = modes;
    opt.dt = dt;
    opt.tol = tol;

    const StabilityReport rep = run_stability(opt);

    fs::create_directories(out_dir);
    const std::string decay_path = out_dir + "/decay.csv";
    {
        std::ofstream os(decay_path);
        os << "# t,sup_residual,sqrt_t_scaled,skipped\n";
        os.precision(12);
        for (const auto& p : rep.points)
            os << p.t << "," << p.sup_err << "," << p.scaled << "," << (p.skipped ? 1 : 0)
               << "\n";
    }
    man.outputs.push_back(decay_path);
    const std::string sd_path = out_dir + "/scattering.json";
    write_json_file(sd_path, to_json(rep.measured, tol));
    man.outputs.push_back(sd_path);
    const std::string ac_path = out_dir + "/couplings.json";
    json acj = to_json(rep.couplings);
    acj["param_closeness"] = rep.param_closeness;
    acj["eps"] = rep.eps;
    write_json_file(ac_path, acj);
    man.outputs.push_back(ac_path);
    if (plot) {
        const std::string plot_path = out_dir + "/decay.pgm";
        write_decay_plot(plot_path, rep.points);
        man.outputs.push_back(plot_path);
    }
    man.config["conserved"] = {{"mass", rep.mass}, {"energy", rep.energy}};
    man.write(out_dir);

    std::printf("verify-stability: eps=%g sign=%s  |z-z'|+|c-c^s| = %.3e\n", eps,
                sign_s.c_str(), rep.param_closeness);
    for (const auto& p : rep.points)
        std::printf("  t=%8.3f  sup|u-u_sol| = %.6e  sqrt(t)-scaled = %.6e%s\n", p.t,
                    p.sup_err, p.scaled, p.skipped ? "  [skipped: frame not asymptotic]" : "");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"inverse-scattering toolkit for the cubic focusing NLS equation"};
    app.require_subcommand(1);

    Tolerances tol;

    // scatter
    auto* sc = app.add_subcommand("scatter", "compute scattering data from a potential file");
    std::string sc_input, sc_grid = "-6:6:257", sc_box = "-1.5:1.5:0.1:2.0", sc_out = "out";
    sc->add_option("--input", sc_input, "potential CSV (x,re,im) or JSON")->required();
    sc->add_option("--grid", sc_grid, "reflection grid lo:hi:n");
    sc->add_option("--box", sc_box, "pole search box re_min:re_max:im_min:im_max");
    sc->add_option("--out-dir", sc_out, "output directory");
    add_tolerance_flags(sc, tol);

    // synthesize
    auto* sy = app.add_subcommand("synthesize", "evaluate an exact N-soliton field");
    std::string sy_params, sy_xgrid = "-20:20:1025", sy_out = "out";
    double sy_t = 0.0;
    sy->add_option("--params", sy_params, "soliton parameters JSON")->required();
    sy->add_option("--xgrid", sy_xgrid, "evaluation grid lo:hi:n");
    sy->add_option("--t", sy_t, "time of the slice");
    sy->add_option("--out-dir", sy_out, "output directory");
    add_tolerance_flags(sy, tol);

    // verify-stability
    auto* vs = app.add_subcommand("verify-stability",
                                  "perturb a soliton and track the residual decay");
    std::string vs_params, vs_shape = "gaussian", vs_sign = "+", vs_tlist = "5,10,20,40";
    std::string vs_grid = "-6:6:1025", vs_box = "-1.5:1.5:0.1:2.0", vs_out = "out";
    double vs_eps = 0.05, vs_center = 0.0, vs_width = 1.0, vs_window = 128.0, vs_dt = 1e-3;
    int vs_modes = 16384;
    std::uint64_t vs_seed = 1;
    bool vs_plot = false;
    vs->add_option("--params", vs_params, "unperturbed soliton parameters JSON")->required();
    vs->add_option("--shape", vs_shape, "perturbation: gaussian | sech-bump | phase-noise");
    vs->add_option("--eps", vs_eps, "perturbation amplitude");
    vs->add_option("--center", vs_center, "perturbation center");
    vs->add_option("--width", vs_width, "perturbation width");
    vs->add_option("--seed", vs_seed, "seed for randomized shapes");
    vs->add_option("--sign", vs_sign, "time direction: + or -");
    vs->add_option("--t-list", vs_tlist, "comma-separated times");
    vs->add_option("--grid", vs_grid, "reflection grid lo:hi:n");
    vs->add_option("--box", vs_box, "pole search box");
    vs->add_option("--window", vs_window, "evolution half-window");
    vs->add_option("--modes", vs_modes, "evolution grid points (power of two)");
    vs->add_option("--dt", vs_dt, "evolution time step");
    vs->add_option("--out-dir", vs_out, "output directory");
    vs->add_flag("--plot", vs_plot, "write a raster decay plot next to the CSV");
    add_tolerance_flags(vs, tol);

    try {
        app.parse(argc, argv);
        if (sc->parsed()) return run_scatter(sc_input, sc_grid, sc_box, sc_out, tol);
        if (sy->parsed()) return run_synthesize(sy_params, sy_xgrid, sy_t, sy_out, tol);
        if (vs->parsed())
            return run_verify(vs_params, vs_shape, vs_eps, vs_center, vs_width, vs_seed,
                              vs_sign, vs_tlist, vs_grid, vs_box, vs_window, vs_modes, vs_dt,
                              vs_out, vs_plot, tol);
        return 2;
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const ValidationError& e) {
        json err{{"error", e.code()}, {"detail", e.what()}};
        std::cerr << err.dump() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        json err{{"error", e.code()}, {"detail", e.what()}};
        std::cerr << err.dump() << "\n";
        return 1;
    } catch (const std::exception& e) {
        json err{{"error", "internal"}, {"detail", e.what()}};
        std::cerr << err.dump() << "\n";
        return 1;
    }
}
