#include "cev/lattice.hpp"

#include "cev/errors.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cev {

namespace {

// sigma^2 S^beta dt, the right-hand side of the recombination identity.
double diffusion_term(const CevParams& p, double middle, double dt) {
    return p.sigma * p.sigma * std::pow(middle, p.beta) * dt;
}

void check_spacing(double gap, double middle) {
    if (!(gap > 1e-14 * middle))
        throw numerical_error("degenerate grid spacing");
}

} // namespace

double first_up_value(const CevParams& p, double dt) {
    validate_for_tree(p);
    if (!(dt > 0.0)) throw validation_error("dt must be > 0");
    return p.s0 * std::exp(p.sigma * std::pow(p.s0, 0.5 * p.beta - 1.0) * std::sqrt(dt));
}

double extend_top(double middle, double lower, const CevParams& p, double dt) {
    const double gap = middle - lower;
    check_spacing(gap, middle);
    return middle + diffusion_term(p, middle, dt) / gap;
}

ExtendResult extend_bottom(double middle, double upper, const CevParams& p, double dt) {
    const double gap = upper - middle;
    check_spacing(gap, middle);
    const double eps = 1e-8 * p.s0;
    const double candidate = middle - diffusion_term(p, middle, dt) / gap;
    if (candidate <= eps) return {eps, true};
    return {candidate, false};
}

Lattice build_lattice(const CevParams& p, double maturity, int n_steps) {
    validate_for_tree(p);
    if (n_steps < 1) throw validation_error("steps must be >= 1");
    if (!(maturity > 0.0)) throw validation_error("maturity must be > 0");

    Lattice lat;
    lat.n_steps = n_steps;
    lat.dt = maturity / n_steps;
    lat.eps_floor = 1e-8 * p.s0;
    lat.row.assign(2 * static_cast<size_t>(n_steps) + 1, 0.0);
    lat.floored_below = -1;

    // Every level is a centered window of the final row: node (i, j) lives at
    // row index n_steps - i + j, so one extend_top and one extend_bottom per
    // level build the whole grid in linear space.
    const long n = n_steps;
    lat.row[n] = p.s0;
    lat.row[n + 1] = first_up_value(p, lat.dt);
    {
        const ExtendResult bot = extend_bottom(p.s0, lat.row[n + 1], p, lat.dt);
        lat.row[n - 1] = bot.value;
        if (bot.floored) lat.floored_below = n - 1;
    }
    for (long k = 2; k <= n; ++k) {
        try {
            lat.row[n + k] = extend_top(lat.row[n + k - 1], lat.row[n + k - 2], p, lat.dt);
        } catch (const numerical_error& e) {
            throw numerical_error(std::string(e.what()) + " extending the top of level "
                                  + std::to_string(k + 1));
        }
        if (lat.floored_below >= 0) {
            // Below an absorbed node everything stays absorbed.
            lat.row[n - k] = lat.eps_floor;
            continue;
        }
        try {
            const ExtendResult bot = extend_bottom(lat.row[n - k + 1], lat.row[n - k + 2], p, lat.dt);
            lat.row[n - k] = bot.value;
            if (bot.floored) lat.floored_below = n - k;
        } catch (const numerical_error& e) {
            throw numerical_error(std::string(e.what()) + " extending the bottom of level "
                                  + std::to_string(k + 1));
        }
    }
    return lat;
}

std::vector<double> Lattice::level(int i) const {
    if (i < 1 || i > levels())
        throw validation_error("level index out of range: " + std::to_string(i));
    std::vector<double> out;
    out.reserve(2 * static_cast<size_t>(i) - 1);
    for (int j = 1; j <= 2 * i - 1; ++j) out.push_back(at(i, j));
    return out;
}

double envelope_closed_form(const CevParams& p, double tau, Direction dir) {
    validate_for_tree(p);
    if (tau < 0.0) throw validation_error("tau must be >= 0");
    const double sgn = (dir == Direction::up) ? 1.0 : -1.0;
    if (std::fabs(p.beta - 2.0) < 1e-9)
        return p.s0 * std::exp(sgn * p.sigma * tau);
    const double half = 0.5 * (2.0 - p.beta);
    const double c = std::pow(p.s0, half) / half;
    const double arg = sgn * p.sigma * tau + c;
    if (arg <= 0.0) return 0.0; // lower branch hit the origin
    return std::pow(half * arg, 1.0 / half);
}

double envelope_deviation(const Lattice& lat, const CevParams& p) {
    // Topmost branch against the closed form at tau = (i-1) sqrt(dt); the
    // offset pins level 1 to tau = 0 where both are s0 by construction.
    const double sq = std::sqrt(lat.dt);
    double worst = 0.0;
    for (int i = 1; i <= lat.levels(); ++i) {
        const double env = envelope_closed_form(p, (i - 1) * sq, Direction::up);
        worst = std::max(worst, std::fabs(lat.at(i, 2 * i - 1) - env) / env);
    }
    return worst;
}

std::string lattice_to_json(const Lattice& lat) {
    nlohmann::json out;
    out["dt"] = lat.dt;
    out["n_steps"] = lat.n_steps;
    auto levels = nlohmann::json::array();
    auto floored = nlohmann::json::array();
    for (int i = 1; i <= lat.levels(); ++i) {
        auto lv = nlohmann::json::array();
        auto fl = nlohmann::json::array();
        for (int j = 1; j <= 2 * i - 1; ++j) {
            lv.push_back(lat.at(i, j));
            fl.push_back(lat.floored(i, j));
        }
        levels.push_back(std::move(lv));
        floored.push_back(std::move(fl));
    }
    out["levels"] = std::move(levels);
    out["floored"] = std::move(floored);
    return out.dump();
}

} // namespace cev
