#pragma once

#include "cev/lattice.hpp"
#include "cev/params.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cev {

// merged finite-difference weights (exact-h) with 1/(1+r dt) discounting,
// or the approximate branch probabilities (approx-p) with e^{-r dt}
// discounting. The approximate pair is sub-stochastic by design:
// p + (1-p) = e^{r dt}/(1 + r dt).
enum class WeightsMode { exact_h, approx_p };
enum class ExerciseStyle { european, american };

const char* to_string(WeightsMode mode);
const char* to_string(ExerciseStyle style);

struct TransitionWeights {
    double h_up;
    double h_down;
    WeightsMode mode;
};

struct PayoffSpec {
    OptionKind kind = OptionKind::put;
    double strike = 1.0;
};

struct PricingResult {
    double price = 0.0;
    ExerciseStyle style = ExerciseStyle::european;
    WeightsMode mode = WeightsMode::exact_h;
    int n_steps = 0;
    // American only: per time step, the largest reachable price at which
    // immediate exercise is optimal (time index = level - 1).
    std::optional<std::vector<std::pair<int, double>>> exercise_boundary;
};

// Weights from a raw next-level triple (down < middle < up):
//   h_up   =  r dt mid / (up - down) + sigma^2 mid^beta dt / ((up - down)(up - mid))
//   h_down = -r dt mid / (up - down) + sigma^2 mid^beta dt / ((up - down)(mid - down))
// On a triple satisfying the recombination identity the pair sums to 1.
// Throws numerical_error("inadmissible weights; increase n_steps") when a
// weight leaves (0,1).
TransitionWeights weights_from_triple(double down, double middle, double up,
                                      const CevParams& p, double dt);

// Exact weights for the node (level, node) read off the spacings around its
// copy at the next level. When the down neighbor is a floor clamp, the
// spacing the recombination identity would have produced is reconstructed
// so the pair still sums to 1. Floored nodes themselves have no weights
// (absorption is handled by price_option) and are rejected.
TransitionWeights transition_weights_exact(const Lattice& lat, int level, int node,
                                           const CevParams& p);

// Approximate probability of an up move:
//   p = e^{r dt}/(1 + r dt) * (r sqrt(dt) S^{1 - beta/2} / (2 sigma) + 1/2)
// Throws numerical_error("inadmissible probability; increase n_steps") when
// the result leaves (0,1).
double up_probability_approx(double node_price, const CevParams& p, double dt);

// Backward induction over reachable nodes. Floored nodes are valued
// analytically: European put E e^{-r (remaining)}, American put E, calls 0.
// American compares intrinsic with continuation at every node; exact ties
// count as exercised so the reported boundary is deterministic.
PricingResult price_option(const Lattice& lat, const PayoffSpec& payoff,
                           ExerciseStyle style, const CevParams& p,
                           WeightsMode mode);

// Forward induction of node-reach probabilities with the weights normalized
// to sum to 1 per node, so the result is a probability measure. Returns
// terminal (price, mass) pairs in ascending price order; mass absorbed at
// the floor is aggregated into a single entry at eps_floor.
std::vector<std::pair<double, double>>
terminal_distribution(const Lattice& lat, const CevParams& p, WeightsMode mode);

// {"price", "style", "mode", "n_steps", "exercise_boundary": [[i, S],...] | null}
std::string pricing_result_to_json(const PricingResult& res);

} // namespace cev
