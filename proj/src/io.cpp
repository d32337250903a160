#include "nlsist/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "nlsist/errors.hpp"

namespace nlsist {

namespace {

using nlohmann::json;

json complex_array(const std::vector<Complex>& v) {
    json a = json::array();
    for (const Complex& c : v) a.push_back({c.real(), c.imag()});
    return a;
}

std::vector<Complex> complex_array_from(const json& a, const char* what) {
    if (!a.is_array()) throw ValidationError("invalid-json", std::string("expected array: ") + what);
    std::vector<Complex> v;
    v.reserve(a.size());
    for (const auto& e : a) {
        if (!e.is_array() || e.size() != 2)
            throw ValidationError("invalid-json", std::string("expected [re,im] pairs: ") + what);
        v.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    return v;
}

json tolerances_json(const Tolerances& t) {
    return {{"root_tol", t.root_tol},
            {"unitarity_tol", t.unitarity_tol},
            {"gamma_tol", t.gamma_tol},
            {"tail_tol", t.tail_tol},
            {"a_floor", t.a_floor},
            {"deriv_floor", t.deriv_floor},
            {"pole_sep_tol", t.pole_sep_tol},
            {"h_deriv", t.h_deriv},
            {"linsys_tol", t.linsys_tol},
            {"quad_tol", t.quad_tol},
            {"ray_tol", t.ray_tol},
            {"lambda_tail_tol", t.lambda_tail_tol},
            {"c1_tol", t.c1_tol},
            {"nodes_per_circle", t.nodes_per_circle}};
}

} // namespace

json to_json(const ScatteringData& sd, const Tolerances& tol) {
    json j;
    j["kind"] = "scattering_data";
    j["grid"] = sd.r_grid;
    j["r"] = complex_array(sd.r_values);
    j["poles"] = complex_array(sd.poles);
    j["couplings"] = complex_array(sd.couplings);
    j["a_prime"] = complex_array(sd.a_prime_at_poles);
    j["meta"] = {{"tolerances", tolerances_json(tol)},
                 {"grid_window",
                  {sd.r_grid.empty() ? 0.0 : sd.r_grid.front(),
                   sd.r_grid.empty() ? 0.0 : sd.r_grid.back()}},
                 {"n_poles", sd.order()}};
    return j;
}

json to_json(const SolitonParams& p, const Tolerances& tol) {
    json j;
    j["kind"] = "soliton_params";
    j["poles"] = complex_array(p.poles);
    j["couplings"] = complex_array(p.couplings);
    j["meta"] = {{"tolerances", tolerances_json(tol)}, {"n_poles", p.order()}};
    return j;
}

json to_json(const SampledPotential& pot, const Tolerances& tol) {
    json j;
    j["kind"] = "potential";
    j["x_min"] = pot.x_min;
    j["x_max"] = pot.x_max;
    j["samples"] = complex_array(pot.samples);
    j["meta"] = {{"tolerances", tolerances_json(tol)}, {"n_points", pot.n_points()}};
    return j;
}

json to_json(const AsymptoticCouplings& ac) {
    json j;
    j["kind"] = "asymptotic_couplings";
    j["lambdas_plus"] = complex_array(ac.lambdas_plus);
    j["lambdas_minus"] = complex_array(ac.lambdas_minus);
    j["c_plus"] = complex_array(ac.c_plus);
    j["c_minus"] = complex_array(ac.c_minus);
    j["smallness_ratio"] = ac.smallness_ratio;
    j["r_l2_sq"] = ac.r_l2_sq;
    return j;
}

json to_json(const SmallNormSolution& sol) {
    return {{"kind", "small_norm_diagnostics"},
            {"v_minus_one_inf", sol.v_minus_one_inf},
            {"v_minus_one_per_circle", sol.v_minus_one_per_circle},
            {"contraction", sol.contraction},
            {"kappa", sol.kappa},
            {"c1_norm", sol.c1_norm},
            {"c1", {{sol.C1.m11.real(), sol.C1.m11.imag()},
                    {sol.C1.m12.real(), sol.C1.m12.imag()},
                    {sol.C1.m21.real(), sol.C1.m21.imag()},
                    {sol.C1.m22.real(), sol.C1.m22.imag()}}},
            {"residual", sol.residual},
            {"nodes", sol.nodes}};
}

ScatteringData scattering_from_json(const json& j) {
    ScatteringData sd;
    if (j.contains("grid")) sd.r_grid = j.at("grid").get<std::vector<double>>();
    if (j.contains("r")) sd.r_values = complex_array_from(j.at("r"), "r");
    sd.poles = complex_array_from(j.at("poles"), "poles");
    sd.couplings = complex_array_from(j.at("couplings"), "couplings");
    if (j.contains("a_prime"))
        sd.a_prime_at_poles = complex_array_from(j.at("a_prime"), "a_prime");
    else
        sd.a_prime_at_poles.assign(sd.poles.size(), Complex{1.0, 0.0});
    return sd;
}

SolitonParams params_from_json(const json& j) {
    SolitonParams p;
    p.poles = complex_array_from(j.at("poles"), "poles");
    p.couplings = complex_array_from(j.at("couplings"), "couplings");
    return p;
}

SampledPotential potential_from_json(const json& j) {
    SampledPotential pot;
    pot.x_min = j.at("x_min").get<double>();
    pot.x_max = j.at("x_max").get<double>();
    pot.samples = complex_array_from(j.at("samples"), "samples");
    return pot;
}

void write_potential_csv(const std::string& path, const SampledPotential& pot) {
    std::ofstream os(path);
    if (!os) throw ValidationError("io", "cannot open for writing: " + path);
    os << "# x,re_u,im_u\n";
    os.precision(17);
    for (int i = 0; i < pot.n_points(); ++i)
        os << pot.x(i) << "," << pot.samples[i].real() << "," << pot.samples[i].imag() << "\n";
}

SampledPotential read_potential_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ValidationError("io", "cannot open: " + path);
    std::vector<double> xs;
    std::vector<Complex> us;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        double x, re, im;
        char c1, c2;
        if (!(ls >> x >> c1 >> re >> c2 >> im) || c1 != ',' || c2 != ',')
            throw ValidationError("invalid-sample", "malformed CSV line: " + line);
        xs.push_back(x);
        us.emplace_back(re, im);
    }
    if (xs.size() < 16) throw ValidationError("invalid-grid", "potential CSV too short");
    const double dx = xs[1] - xs[0];
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (std::abs(xs[i] - xs[i - 1] - dx) > 1e-9 * std::max(1.0, std::abs(dx)))
            throw ValidationError("invalid-grid", "potential CSV grid is not uniform");
    SampledPotential pot;
    pot.x_min = xs.front();
    pot.x_max = xs.back();
    pot.samples = std::move(us);
    for (const Complex& s : pot.samples)
        if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
            throw ValidationError("invalid-sample", "potential contains a non-finite sample");
    return pot;
}

void write_field_csv(const std::string& path, const std::vector<double>& xs,
                     const std::vector<Complex>& u) {
    if (xs.size() != u.size())
        throw ValidationError("invalid-grid", "field CSV length mismatch");
    std::ofstream os(path);
    if (!os) throw ValidationError("io", "cannot open for writing: " + path);
    os << "# x,re_u,im_u\n";
    os.precision(17);
    for (std::size_t i = 0; i < xs.size(); ++i)
        os << xs[i] << "," << u[i].real() << "," << u[i].imag() << "\n";
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream os(path);
    if (!os) throw ValidationError("io", "cannot open for writing: " + path);
    os << j.dump(2) << "\n";
}

json read_json_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ValidationError("io", "cannot open: " + path);
    json j;
    try {
        is >> j;
    } catch (const json::exception& e) {
        throw ValidationError("invalid-json", std::string("JSON parse failure: ") + e.what());
    }
    return j;
}

std::string file_hash(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ValidationError("io", "cannot open: " + path);
    std::uint64_t h = 1469598103934665603ull;
    char buf[4096];
    while (is.read(buf, sizeof(buf)) || is.gcount() > 0) {
        for (std::streamsize i = 0; i < is.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ull;
        }
        if (!is) break;
    }
    char out[32];
    std::snprintf(out, sizeof(out), "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    return out;
}

} // namespace nlsist
