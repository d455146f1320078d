#pragma once

#include "cev/params.hpp"

#include <string>
#include <vector>

namespace cev {

// Exactly-recombining price grid. Adjacent levels satisfy the recombination
// identity (S(i,j+1) - S(i,j)) * (S(i,j) - S(i,j-1)) = sigma^2 S(i,j)^beta dt,
// and every interior node is a copy of the node one level earlier:
// S(i,j) = S(i-1,j-1). That shift identity means level i is the centered
// window of width 2i-1 inside the final level, so a single row of 2N+1
// values stores the whole tree in O(N) memory.
//
// Indices follow the 1-based convention: level i in [1, N+1] holds nodes
// j in [1, 2i-1]; states reachable from the root are the odd j.
struct Lattice {
    double dt = 0.0;
    int n_steps = 0;
    double eps_floor = 0.0;            // absorption clamp, 1e-8 * s0
    std::vector<double> row;           // final level; row[n_steps] = s0
    long floored_below = -1;           // row[m] is a clamp for all m <= this

    int levels() const { return n_steps + 1; }
    double at(int i, int j) const {
        return row[static_cast<std::size_t>(n_steps - i + j)];
    }
    bool floored(int i, int j) const {
        return static_cast<long>(n_steps - i + j) <= floored_below;
    }
    std::vector<double> level(int i) const;
};

// First upward node: S(2,3) = s0 * exp(sigma * s0^{beta/2 - 1} * sqrt(dt)).
double first_up_value(const CevParams& p, double dt);

// Solve the recombination identity for the value above `middle` given the
// value below it. Throws numerical_error("degenerate grid spacing") when
// middle - lower <= 1e-14 * middle.
double extend_top(double middle, double lower, const CevParams& p, double dt);

struct ExtendResult {
    double value;
    bool floored;
};

// Solve for the value below `middle`; candidates at or below the absorption
// floor (1e-8 * s0) are clamped and flagged.
ExtendResult extend_bottom(double middle, double upper, const CevParams& p, double dt);

// Build the full grid for maturity T and N steps (dt = T/N). Deterministic:
// the first up move fixes every other node. Requires q = 0 and beta <= 2.
Lattice build_lattice(const CevParams& p, double maturity, int n_steps);

enum class Direction { up, down };

// Asymptotic envelope of the extreme branches in rescaled time tau = t/sqrt(dt),
// solving (y')^2 = sigma^2 y^beta:
//   beta = 2:      y = s0 * exp(+-sigma tau)
//   0 < beta < 2:  y = ((2-beta)/2 * (+-sigma tau + c))^{2/(2-beta)},
//                  c = 2/(2-beta) * s0^{(2-beta)/2}
// The down branch clamps to 0 once its argument is nonpositive.
double envelope_closed_form(const CevParams& p, double tau, Direction dir);

// Max over levels i of the relative gap between the uppermost branch
// S(i,2i-1) and the envelope at tau = (i-1) sqrt(dt) (the root sits at tau=0).
double envelope_deviation(const Lattice& lat, const CevParams& p);

// JSON dump {"dt", "n_steps", "levels", "floored"} with levels[i-1][j-1] = S(i,j).
std::string lattice_to_json(const Lattice& lat);

} // namespace cev
