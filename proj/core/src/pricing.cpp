#include "cev/pricing.hpp"

#include "cev/errors.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cev {

const char* to_string(WeightsMode mode) {
    return mode == WeightsMode::exact_h ? "exact-h" : "approx-p";
}

const char* to_string(ExerciseStyle style) {
    return style == ExerciseStyle::european ? "european" : "american";
}

namespace {

void check_weight(double w) {
    if (!(w > 0.0) || !(w < 1.0))
        throw numerical_error("inadmissible weights; increase n_steps");
}

double payoff_value(const PayoffSpec& payoff, double s) {
    const double intrinsic = (payoff.kind == OptionKind::put) ? payoff.strike - s
                                                              : s - payoff.strike;
    return std::max(intrinsic, 0.0);
}

// Weight pair at final-row index m. The node's next-level triple is the
// final-row triple (m-1, m, m+1). When the down neighbor sits on the
// absorption floor its stored value is a clamp, not the spacing the
// recombination identity produced, so that spacing is reconstructed from
// the up gap; this keeps h_up + h_down = 1.
TransitionWeights exact_weights_at(const Lattice& lat, long m, const CevParams& p) {
    const double mid = lat.row[static_cast<size_t>(m)];
    const double up = lat.row[static_cast<size_t>(m + 1)];
    const double num = p.sigma * p.sigma * std::pow(mid, p.beta) * lat.dt;
    const double du = up - mid;
    double dd;
    if (m - 1 <= lat.floored_below)
        dd = num / du;
    else
        dd = mid - lat.row[static_cast<size_t>(m - 1)];
    const double span = du + dd;
    const double rate_term = p.r * lat.dt * mid / span;
    TransitionWeights w;
    w.mode = WeightsMode::exact_h;
    w.h_up = rate_term + num / (span * du);
    w.h_down = -rate_term + num / (span * dd);
    check_weight(w.h_up);
    check_weight(w.h_down);
    return w;
}

} // namespace

TransitionWeights weights_from_triple(double down, double middle, double up,
                                      const CevParams& p, double dt) {
    if (!(down < middle) || !(middle < up))
        throw validation_error("weights_from_triple requires down < middle < up");
    const double num = p.sigma * p.sigma * std::pow(middle, p.beta) * dt;
    const double du = up - middle;
    const double dd = middle - down;
    const double span = up - down;
    const double rate_term = p.r * dt * middle / span;
    TransitionWeights w;
    w.mode = WeightsMode::exact_h;
    w.h_up = rate_term + num / (span * du);
    w.h_down = -rate_term + num / (span * dd);
    check_weight(w.h_up);
    check_weight(w.h_down);
    return w;
}

TransitionWeights transition_weights_exact(const Lattice& lat, int level, int node,
                                           const CevParams& p) {
    if (level < 1 || level > lat.n_steps)
        throw validation_error("transition weights need a next level; level "
                               + std::to_string(level) + " has none");
    if (node < 1 || node > 2 * level - 1)
        throw validation_error("node index out of range: " + std::to_string(node));
    if (lat.floored(level, node))
        throw validation_error("floored node has no transition weights; "
                               "it is absorbed");
    return exact_weights_at(lat, static_cast<long>(lat.n_steps) - level + node, p);
}

double up_probability_approx(double node_price, const CevParams& p, double dt) {
    if (!(node_price > 0.0))
        throw validation_error("up_probability_approx requires node_price > 0");
    const double pref = std::exp(p.r * dt) / (1.0 + p.r * dt);
    const double tilt = 0.5 * p.r * std::sqrt(dt)
                      * std::pow(node_price, 1.0 - 0.5 * p.beta) / p.sigma;
    const double prob = pref * (tilt + 0.5);
    if (!(prob > 0.0) || !(prob < 1.0))
        throw numerical_error("inadmissible probability; increase n_steps");
    return prob;
}

PricingResult price_option(const Lattice& lat, const PayoffSpec& payoff,
                           ExerciseStyle style, const CevParams& p,
                           WeightsMode mode) {
    validate_for_tree(p);
    if (!(payoff.strike > 0.0)) throw validation_error("strike must be > 0");

    const long n = lat.n_steps;
    const long fb = lat.floored_below;
    const double dt = lat.dt;
    const double disc = (mode == WeightsMode::exact_h) ? 1.0 / (1.0 + p.r * dt)
                                                       : std::exp(-p.r * dt);

    // Weights depend only on the final-row position, not on the level: the
    // next-level triple around any copy of node m is always rows m-1, m, m+1.
    std::vector<double> wu(lat.row.size(), 0.0);
    std::vector<double> wd(lat.row.size(), 0.0);
    const double pref = std::exp(p.r * dt) / (1.0 + p.r * dt);
    for (long m = std::max(1L, fb + 1); m <= 2 * n - 1; ++m) {
        try {
            if (mode == WeightsMode::exact_h) {
                const TransitionWeights w = exact_weights_at(lat, m, p);
                wu[static_cast<size_t>(m)] = w.h_up;
                wd[static_cast<size_t>(m)] = w.h_down;
            } else {
                const double prob = up_probability_approx(lat.row[static_cast<size_t>(m)], p, dt);
                wu[static_cast<size_t>(m)] = prob;
                // The pair sums to e^{r dt}/(1 + r dt), not 1; kept as written.
                wd[static_cast<size_t>(m)] = pref - prob;
            }
        } catch (const numerical_error& e) {
            throw numerical_error(std::string(e.what()) + " (node price "
                                  + std::to_string(lat.row[static_cast<size_t>(m)]) + ")");
        }
    }

    const bool is_put = payoff.kind == OptionKind::put;
    const auto absorbed_value = [&](long level) -> double {
        if (!is_put) return 0.0;
        if (style == ExerciseStyle::american) return payoff.strike;
        const double remaining = static_cast<double>(n + 1 - level) * dt;
        return payoff.strike * std::exp(-p.r * remaining);
    };

    // One value slot per final-row position. Level i occupies positions of a
    // single parity, level i+1 the other, so the backward sweep can update in
    // place: sources m-1, m+1 are never targets within the same level.
    std::vector<double> value(lat.row.size(), 0.0);
    for (long m = 0; m <= 2 * n; m += 2)
        value[static_cast<size_t>(m)] = (m <= fb) ? absorbed_value(n + 1)
                                                  : payoff_value(payoff, lat.row[static_cast<size_t>(m)]);

    std::vector<std::pair<int, double>> boundary;
    for (long i = n; i >= 1; --i) {
        double exercised_at = -1.0;
        for (long m = n - i + 1; m <= n + i - 1; m += 2) {
            const size_t um = static_cast<size_t>(m);
            if (m <= fb) {
                value[um] = absorbed_value(i);
                if (style == ExerciseStyle::american && is_put)
                    exercised_at = std::max(exercised_at, lat.row[um]);
                continue;
            }
            const double cont = disc * (wu[um] * value[um + 1] + wd[um] * value[um - 1]);
            if (style == ExerciseStyle::american) {
                const double exercise = payoff_value(payoff, lat.row[um]);
                if (exercise >= cont && exercise > 0.0) {
                    value[um] = exercise;
                    exercised_at = std::max(exercised_at, lat.row[um]);
                } else {
                    value[um] = cont;
                }
            } else {
                value[um] = cont;
            }
        }
        if (style == ExerciseStyle::american && exercised_at >= 0.0)
            boundary.emplace_back(static_cast<int>(i - 1), exercised_at);
    }

    PricingResult res;
    res.price = value[static_cast<size_t>(n)];
    res.style = style;
    res.mode = mode;
    res.n_steps = static_cast<int>(n);
    if (style == ExerciseStyle::american) {
        std::reverse(boundary.begin(), boundary.end());
        res.exercise_boundary = std::move(boundary);
    }
    return res;
}

std::vector<std::pair<double, double>>
terminal_distribution(const Lattice& lat, const CevParams& p, WeightsMode mode) {
    validate_for_tree(p);
    const long n = lat.n_steps;
    const long fb = lat.floored_below;
    const double dt = lat.dt;
    const double pref = std::exp(p.r * dt) / (1.0 + p.r * dt);

    std::vector<double> mass(lat.row.size(), 0.0);
    std::vector<double> next(lat.row.size(), 0.0);
    mass[static_cast<size_t>(n)] = 1.0;

    for (long i = 1; i <= n; ++i) {
        std::fill(next.begin(), next.end(), 0.0);
        for (long m = n - i + 1; m <= n + i - 1; m += 2) {
            const size_t um = static_cast<size_t>(m);
            const double pm = mass[um];
            if (pm == 0.0) continue;
            if (m <= fb) {
                // Absorbed mass stays on the floor; the down slot at the next
                // level is another floored node.
                next[um - 1] += pm;
                continue;
            }
            double w_up;
            double w_down;
            if (mode == WeightsMode::exact_h) {
                const TransitionWeights w = exact_weights_at(lat, m, p);
                const double sum = w.h_up + w.h_down;
                w_up = w.h_up / sum;
                w_down = w.h_down / sum;
            } else {
                const double prob = up_probability_approx(lat.row[um], p, dt);
                w_up = prob / pref;
                w_down = (pref - prob) / pref;
            }
            next[um + 1] += w_up * pm;
            next[um - 1] += w_down * pm;
        }
        mass.swap(next);
    }

    std::vector<std::pair<double, double>> out;
    out.reserve(static_cast<size_t>(n) + 1);
    if (fb >= 0) {
        double absorbed = 0.0;
        for (long m = 0; m <= fb; ++m) absorbed += mass[static_cast<size_t>(m)];
        out.emplace_back(lat.eps_floor, absorbed);
    }
    // Terminal reachable positions are m = 0, 2, ..., 2n.
    for (long m = 0; m <= 2 * n; m += 2)
        if (m > fb)
            out.emplace_back(lat.row[static_cast<size_t>(m)], mass[static_cast<size_t>(m)]);
    return out;
}

std::string pricing_result_to_json(const PricingResult& res) {
    nlohmann::json out;
    out["price"] = res.price;
    out["style"] = to_string(res.style);
    out["mode"] = to_string(res.mode);
    out["n_steps"] = res.n_steps;
    if (res.exercise_boundary) {
        auto arr = nlohmann::json::array();
        for (const auto& [idx, price] : *res.exercise_boundary)
            arr.push_back(nlohmann::json::array({idx, price}));
        out["exercise_boundary"] = std::move(arr);
    } else {
        out["exercise_boundary"] = nullptr;
    }
    return out.dump();
}

} // namespace cev
