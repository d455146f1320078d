#pragma once

#include "cev/params.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace cev {

struct McConfig {
    std::int64_t n_paths = 100000;
    int n_time_steps = 365;
    std::uint64_t seed = 0;
    bool antithetic = false;
};

// Philox4x32-10 counter-based generator. Stateless: each (counter, key)
// pair maps to four 32-bit words, so any path/step cell can be generated
// independently of every other, which keeps the simulation reproducible
// under any thread count.
struct Philox4x32 {
    static std::array<std::uint32_t, 4> round10(std::array<std::uint32_t, 4> ctr,
                                                std::array<std::uint32_t, 2> key);
};

// Standard normal draw for (path, step): counter = {path_lo, path_hi, step, 0},
// key = {seed_lo, seed_hi}, first two output words -> one Box-Muller cosine.
double philox_normal(std::uint64_t path, std::uint32_t step, std::uint64_t seed);

// Full-truncation Euler terminal values, one per path. A path is absorbed
// at zero the first time it touches zero or below. With antithetic on,
// paths 2k and 2k+1 share normals up to sign. Output depends only on
// (params, maturity, cfg), never on the thread count.
std::vector<double> simulate_terminal(const CevParams& p, double maturity,
                                      const McConfig& cfg);

struct McPrice {
    double price = 0.0;
    double std_error = 0.0;
};

// Discounted-payoff Monte Carlo estimate with standard error. Antithetic
// runs estimate the error across pair means. The payoff buffer is reduced
// in path-index order, so results do not depend on the thread count.
McPrice mc_european_price(const CevParams& p, double strike, double maturity,
                          OptionKind kind, const McConfig& cfg);

// Worker count: CEV_THREADS if set (> 0 caps, 0 or unset picks hardware
// concurrency).
int thread_budget();

} // namespace cev
