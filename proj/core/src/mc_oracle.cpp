#include "cev/mc_oracle.hpp"

#include "cev/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace cev {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void philox_round(std::array<std::uint32_t, 4>& x,
                         const std::array<std::uint32_t, 2>& key) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * x[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * x[2];
    x = {static_cast<std::uint32_t>(p1 >> 32) ^ x[1] ^ key[0],
         static_cast<std::uint32_t>(p1),
         static_cast<std::uint32_t>(p0 >> 32) ^ x[3] ^ key[1],
         static_cast<std::uint32_t>(p0)};
}

// 53-bit uniform strictly inside (0, 1), safe under log().
inline double u01(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 21) | (lo >> 11);
    return (static_cast<double>(bits) + 0.5) * 0x1p-53;
}

// max(s, 0)^{beta/2} with shortcuts for the common elasticities.
inline double half_power(double s, double beta) {
    const double base = std::max(s, 0.0);
    if (beta == 2.0) return base;
    if (beta == 1.0) return std::sqrt(base);
    if (beta == 0.5) return std::sqrt(std::sqrt(base));
    return std::pow(base, 0.5 * beta);
}

double one_terminal(const CevParams& p, double dt, double sqdt, int n_steps,
                    const McConfig& cfg, std::int64_t path) {
    std::uint64_t stream = static_cast<std::uint64_t>(path);
    double sign = 1.0;
    if (cfg.antithetic) {
        stream >>= 1;
        if (path & 1) sign = -1.0;
    }
    const double drift = p.r - p.q;
    double s = p.s0;
    for (int step = 0; step < n_steps; ++step) {
        const double z = sign * philox_normal(stream, static_cast<std::uint32_t>(step), cfg.seed);
        s += drift * s * dt + p.sigma * half_power(s, p.beta) * z * sqdt;
        if (s <= 0.0) return 0.0; // absorbed
    }
    return s;
}

void check_config(const McConfig& cfg) {
    if (cfg.n_paths < 2)
        throw validation_error("n_paths must be >= 2");
    if (cfg.n_time_steps < 1)
        throw validation_error("n_time_steps must be >= 1");
    if (cfg.antithetic && (cfg.n_paths % 2) != 0)
        throw validation_error("antithetic sampling needs an even n_paths");
    if (cfg.antithetic && cfg.n_paths < 4)
        throw validation_error("antithetic sampling needs >= 4 paths for a standard error");
}

} // namespace

std::array<std::uint32_t, 4> Philox4x32::round10(std::array<std::uint32_t, 4> ctr,
                                                 std::array<std::uint32_t, 2> key) {
    for (int r = 0; r < 10; ++r) {
        philox_round(ctr, key);
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

double philox_normal(std::uint64_t path, std::uint32_t step, std::uint64_t seed) {
    const std::array<std::uint32_t, 4> ctr = {static_cast<std::uint32_t>(path),
                                              static_cast<std::uint32_t>(path >> 32),
                                              step, 0u};
    const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed),
                                              static_cast<std::uint32_t>(seed >> 32)};
    const auto words = Philox4x32::round10(ctr, key);
    const double u1 = u01(words[0], words[1]);
    const double u2 = u01(words[2], words[3]);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

int thread_budget() {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const char* env = std::getenv("CEV_THREADS");
    if (env == nullptr || *env == '\0') return static_cast<int>(hw);
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 0)
        throw validation_error("CEV_THREADS must be a nonnegative integer");
    if (v == 0) return static_cast<int>(hw);
    return static_cast<int>(v);
}

std::vector<double> simulate_terminal(const CevParams& p, double maturity,
                                      const McConfig& cfg) {
    validate(p);
    if (!(maturity > 0.0)) throw validation_error("maturity must be > 0");
    check_config(cfg);

    const double dt = maturity / cfg.n_time_steps;
    const double sqdt = std::sqrt(dt);
    std::vector<double> out(static_cast<size_t>(cfg.n_paths), 0.0);

    const std::int64_t n = cfg.n_paths;
    const int workers = static_cast<int>(std::min<std::int64_t>(thread_budget(), n));
    if (workers <= 1) {
        for (std::int64_t i = 0; i < n; ++i)
            out[static_cast<size_t>(i)] = one_terminal(p, dt, sqdt, cfg.n_time_steps, cfg, i);
        return out;
    }

    // Contiguous disjoint slices; content is per-path deterministic, so the
    // partition shape does not affect the result.
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        const std::int64_t lo = n * w / workers;
        const std::int64_t hi = n * (w + 1) / workers;
        pool.emplace_back([&, lo, hi] {
            for (std::int64_t i = lo; i < hi; ++i)
                out[static_cast<size_t>(i)] = one_terminal(p, dt, sqdt, cfg.n_time_steps, cfg, i);
        });
    }
    for (auto& t : pool) t.join();
    return out;
}

McPrice mc_european_price(const CevParams& p, double strike, double maturity,
                          OptionKind kind, const McConfig& cfg) {
    if (strike < 0.0) throw validation_error("strike must be >= 0");

    std::vector<double> samples = simulate_terminal(p, maturity, cfg);
    for (double& s : samples) {
        const double intrinsic = (kind == OptionKind::put) ? strike - s : s - strike;
        s = std::max(intrinsic, 0.0);
    }
    if (cfg.antithetic) {
        // Collapse to pair means; the standard error is measured across pairs.
        const size_t pairs = samples.size() / 2;
        for (size_t k = 0; k < pairs; ++k)
            samples[k] = 0.5 * (samples[2 * k] + samples[2 * k + 1]);
        samples.resize(pairs);
    }

    // Index-order reduction, independent of how the paths were generated.
    const size_t n = samples.size();
    double mean = 0.0;
    for (const double s : samples) mean += s;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (const double s : samples) var += (s - mean) * (s - mean);
    var /= static_cast<double>(n - 1);

    const double df = std::exp(-p.r * maturity);
    McPrice res;
    res.price = df * mean;
    res.std_error = df * std::sqrt(var / static_cast<double>(n));
    return res;
}

} // namespace cev
