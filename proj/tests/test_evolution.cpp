#include <doctest.h>

#include <cmath>

#include "nlsist/errors.hpp"
#include "nlsist/evolution.hpp"
#include "nlsist/recipes.hpp"
#include "nlsist/soliton.hpp"

using namespace nlsist;

namespace {

constexpr Complex I{0.0, 1.0};

SampledPotential soliton_ic(Complex z1, Complex c1, double half, int n) {
    SolitonParams p{{z1}, {c1}};
    return sample_n_soliton(p, -half, half, n, 0.0);
}

EvolutionConfig config_for(const SampledPotential& pot, double dt, double t_final) {
    EvolutionConfig cfg;
    cfg.dt = dt;
    cfg.t_final = t_final;
    cfg.n_modes = pot.n_points();
    cfg.x_min = pot.x_min;
    cfg.x_max = pot.x_max;
    return cfg;
}

double sup_err_vs_exact(const SampledPotential& ev, const SolitonParams& p, double t) {
    double worst = 0.0;
    for (int i = 0; i < ev.n_points(); ++i)
        worst = std::max(worst, std::abs(ev.samples[i] - n_soliton(p, ev.x(i), t)));
    return worst;
}

} // namespace

TEST_CASE("zero initial data stays zero") {
    SampledPotential pot;
    pot.x_min = -20.0;
    pot.x_max = 20.0;
    pot.samples.assign(1024, Complex{0.0, 0.0});
    const auto out = evolve(pot, config_for(pot, 1e-3, 0.5));
    for (const Complex& s : out.samples) CHECK(std::abs(s) == 0.0);
}

TEST_CASE("stationary soliton keeps its sech profile") {
    const Complex z1{0.0, 0.5};
    const Complex c1{0.0, -1.0}; // u(x,0) = sech(x)
    SampledPotential pot = soliton_ic(z1, c1, 40.0, 2048);
    const auto out = evolve(pot, config_for(pot, 2.5e-4, 5.0));
    const SolitonParams p{{z1}, {c1}};
    CHECK(sup_err_vs_exact(out, p, 5.0) < 1e-6);
    for (int i = 0; i < out.n_points(); i += 17)
        CHECK(std::abs(std::abs(out.samples[i]) - 1.0 / std::cosh(out.x(i))) < 1e-6);
}

TEST_CASE("mass and energy are conserved on a two-soliton") {
    // colliding pair: the O(dt^2) shadow-energy excursion peaks mid-collision,
    // so the 1e-8 target fixes the step size
    SolitonParams p{{Complex{0.25, 0.6}, Complex{-0.25, 0.45}},
                    {Complex{1.0, 0.0}, Complex{0.4, 0.6}}};
    SampledPotential pot = sample_n_soliton(p, -32.0, 32.0, 1024, 0.0);
    EvolutionConfig cfg = config_for(pot, 2.4e-5, 10.0);
    ConservedTrace trace;
    const auto out = evolve(pot, cfg, &trace);
    (void)out;
    REQUIRE(trace.mass.size() > 4);
    const double m0 = trace.mass.front();
    const double e0 = trace.energy.front();
    for (std::size_t i = 0; i < trace.mass.size(); ++i) {
        CHECK(std::abs(trace.mass[i] - m0) / m0 < 1e-10 * std::max(1.0, trace.t[i]));
        CHECK(std::abs(trace.energy[i] - e0) / std::abs(e0) < 1e-8);
    }
}

TEST_CASE("Strang splitting converges at second order") {
    const Complex z1{0.0, 0.5};
    const Complex c1{0.0, -1.0};
    SampledPotential pot = soliton_ic(z1, c1, 30.0, 1024);
    const SolitonParams p{{z1}, {c1}};
    const double e1 = sup_err_vs_exact(evolve(pot, config_for(pot, 2e-3, 1.0)), p, 1.0);
    const double e2 = sup_err_vs_exact(evolve(pot, config_for(pot, 1e-3, 1.0)), p, 1.0);
    const double ratio = e1 / e2;
    CHECK(ratio > 3.0);
    CHECK(ratio < 5.0);
}

TEST_CASE("traveling soliton moves at -4 Re z within one percent") {
    const Complex z1{0.3, 0.6};
    const Complex c1{1.0, 0.0};
    SampledPotential pot = soliton_ic(z1, c1, 40.0, 2048);
    const double T = 6.0;
    const auto out = evolve(pot, config_for(pot, 1e-3, T));
    double best = 0.0, xpk = 0.0;
    for (int i = 0; i < out.n_points(); ++i)
        if (std::abs(out.samples[i]) > best) {
            best = std::abs(out.samples[i]);
            xpk = out.x(i);
        }
    const double x0 = one_soliton_center(z1, c1, 0.0);
    const double v_meas = (xpk - x0) / T;
    CHECK(std::abs(v_meas - (-4.0 * z1.real())) < 0.01 * 4.0 * std::abs(z1.real()) + 0.02);
}

TEST_CASE("backward evolution undoes forward evolution") {
    SolitonParams p{{Complex{0.1, 0.5}}, {Complex{0.8, 0.3}}};
    SampledPotential pot = sample_n_soliton(p, -30.0, 30.0, 1024, 0.0);
    SampledPotential fwd = evolve(pot, config_for(pot, 1e-3, 1.5));
    EvolutionConfig back = config_for(fwd, 1e-3, -1.5);
    SampledPotential rt = evolve(fwd, back);
    double worst = 0.0;
    for (int i = 0; i < pot.n_points(); ++i)
        worst = std::max(worst, std::abs(rt.samples[i] - pot.samples[i]));
    CHECK(worst < 1e-9);
}

TEST_CASE("window auto-widening keeps the edges quiet") {
    // initial data intentionally close to the edge-mass threshold
    SolitonParams p{{Complex{0.0, 0.4}}, {Complex{1.0, 0.0}}};
    SampledPotential pot = sample_n_soliton(p, -16.0, 16.0, 512, 0.0);
    EvolutionConfig cfg = config_for(pot, 1e-3, 0.5);
    cfg.edge_mass_tol = 1e-12;
    const auto out = evolve(pot, cfg);
    CHECK(out.n_points() > pot.n_points()); // widened at least once
    CHECK(out.x_min < pot.x_min);
    // field identical where it lives
    double worst = 0.0;
    for (int i = 0; i < out.n_points(); ++i) {
        const double x = out.x(i);
        if (std::abs(x) > 12.0) continue;
        worst = std::max(worst, std::abs(out.samples[i] - n_soliton(p, x, 0.5)));
    }
    CHECK(worst < 1e-5);
}

TEST_CASE("config validation and blow-up guard") {
    SampledPotential pot;
    pot.x_min = -10.0;
    pot.x_max = 10.0;
    pot.samples.assign(512, Complex{0.0, 0.0});
    EvolutionConfig cfg = config_for(pot, 1e-3, 1.0);
    cfg.n_modes = 500; // not a power of two
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg = config_for(pot, 0.1, 1.0); // dt > dx
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg = config_for(pot, 1e-3, 1.0);
    cfg.n_modes = 1024; // grid mismatch
    CHECK_THROWS_AS(evolve(pot, cfg), ValidationError);

    // u0 = 2 sech x breathes up to |u| ~ 4; a tight blow-up factor trips
    SampledPotential breather;
    breather.x_min = -24.0;
    breather.x_max = 24.0;
    breather.samples.resize(1024);
    for (int i = 0; i < 1024; ++i)
        breather.samples[i] = 2.0 / std::cosh(breather.x(i));
    EvolutionConfig bc = config_for(breather, 1e-3, 1.0);
    bc.blowup_factor = 1.5;
    CHECK_THROWS_AS(evolve(breather, bc), NumericalError);
    bc.blowup_factor = 10.0;
    CHECK_NOTHROW(evolve(breather, bc));
}

TEST_CASE("isospectrality of a perturbed soliton") {
    SolitonParams p{{Complex{0.0, 0.6}}, {Complex{1.0, 0.0}}};
    SampledPotential pot = sample_n_soliton(p, -48.0, 48.0, 4096, 0.0);
    pot = apply_perturbation(pot, PerturbationShape::Gaussian, 0.05, 0.0, 1.0);
    EvolutionConfig cfg = config_for(pot, 5e-4, 2.0);
    const auto grid = uniform_grid(-3.0, 3.0, 41);
    const SearchBox box{-0.8, 0.8, 0.15, 1.2};
    const IsospectralityReport rep = isospectrality_check(pot, 2.0, cfg, grid, box);
    CHECK(rep.max_pole_drift < 1e-5);
    CHECK(rep.max_a_drift < 1e-4);
    CHECK(rep.max_r_factor_err < 1e-3);
    CHECK(rep.max_c_factor_err < 1e-3);
}

TEST_CASE("perturbation recipes") {
    SolitonParams p{{Complex{0.0, 0.5}}, {Complex{1.0, 0.0}}};
    SampledPotential pot = sample_n_soliton(p, -24.0, 24.0, 1024, 0.0);
    const auto g = apply_perturbation(pot, PerturbationShape::Gaussian, 0.05, 0.0, 1.0);
    CHECK(std::abs(g.samples[512] - pot.samples[512]) > 0.01);
    const auto s = apply_perturbation(pot, PerturbationShape::SechBump, 0.05, 2.0, 1.0);
    CHECK(std::abs(s.samples.front() - pot.samples.front()) < 1e-8);
    const auto ph = apply_perturbation(pot, PerturbationShape::PhaseNoise, 0.1, 0.0, 2.0, 7);
    for (int i = 0; i < pot.n_points(); i += 97)
        CHECK(std::abs(std::abs(ph.samples[i]) - std::abs(pot.samples[i])) < 1e-12);
    const auto ph2 = apply_perturbation(pot, PerturbationShape::PhaseNoise, 0.1, 0.0, 2.0, 7);
    CHECK(ph2.samples[100] == ph.samples[100]); // deterministic given the seed
    CHECK(perturbation_shape_from_string("gaussian") == PerturbationShape::Gaussian);
    CHECK_THROWS_AS(perturbation_shape_from_string("box"), ValidationError);
}
