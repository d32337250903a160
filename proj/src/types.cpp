#include "nlsist/types.hpp"

#include <cmath>
#include <sstream>

namespace nlsist {

void SampledPotential::validate(double tail_tol) const {
    if (n_points() < 16)
        throw ValidationError("invalid-grid", "potential needs at least 16 nodes");
    if (!(x_min < x_max))
        throw ValidationError("invalid-grid", "potential window is empty");
    for (const Complex& s : samples)
        if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
            throw ValidationError("invalid-sample", "potential contains a non-finite sample");
    const double tl = std::abs(samples.front());
    const double tr = std::abs(samples.back());
    if (tl > tail_tol || tr > tail_tol) {
        std::ostringstream os;
        os << "potential tails exceed tail_tol=" << tail_tol << " (|u(x_min)|=" << tl
           << ", |u(x_max)|=" << tr << "); widen the window";
        throw ValidationError("tail", os.str());
    }
}

SampledPotential make_potential(double x_min, double x_max, int n,
                                const std::vector<Complex>& samples) {
    if (static_cast<int>(samples.size()) != n)
        throw ValidationError("invalid-grid", "sample count does not match n_points");
    SampledPotential pot;
    pot.x_min = x_min;
    pot.x_max = x_max;
    pot.samples = samples;
    return pot;
}

namespace {

void validate_poles(const std::vector<Complex>& poles, double pole_sep_tol) {
    for (const Complex& z : poles)
        if (!(z.imag() > 0.0))
            throw ValidationError("invalid-pole", "poles must lie in the open upper half-plane");
    for (std::size_t i = 0; i < poles.size(); ++i)
        for (std::size_t j = i + 1; j < poles.size(); ++j)
            if (std::abs(poles[i] - poles[j]) <= pole_sep_tol)
                throw ValidationError("pole-separation",
                                      "poles closer than pole_sep_tol; degenerate data");
}

void validate_couplings(const std::vector<Complex>& c, std::size_t n_poles) {
    if (c.size() != n_poles)
        throw ValidationError("invalid-coupling", "coupling count does not match pole count");
    for (const Complex& v : c)
        if (!(std::abs(v) > 0.0) || !std::isfinite(std::abs(v)))
            throw ValidationError("invalid-coupling", "couplings must be nonzero and finite");
}

} // namespace

void ScatteringData::validate(double pole_sep_tol) const {
    validate_poles(poles, pole_sep_tol);
    validate_couplings(couplings, poles.size());
    if (a_prime_at_poles.size() != poles.size())
        throw ValidationError("invalid-pole", "a' values do not match pole count");
    if (r_grid.size() != r_values.size())
        throw ValidationError("invalid-grid", "reflection grid/value size mismatch");
    for (std::size_t i = 1; i < r_grid.size(); ++i)
        if (!(r_grid[i] > r_grid[i - 1]))
            throw ValidationError("invalid-grid", "reflection grid must be strictly increasing");
}

void SolitonParams::validate(double pole_sep_tol) const {
    validate_poles(poles, pole_sep_tol);
    validate_couplings(couplings, poles.size());
}

} // namespace nlsist
