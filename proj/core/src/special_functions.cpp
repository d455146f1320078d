#include "cev/special_functions.hpp"

#include "cev/errors.hpp"

#include <cmath>
#include <cstdio>
#include <string>

namespace cev {

namespace {

constexpr int kMaxIter = 1000000;

std::string gamma_context(const char* what, double s, double x) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s (s=%.17g, x=%.17g)", what, s, x);
    return buf;
}

// Series for P(s, x), valid and fast for x < s + 1. Term count grows like
// sqrt(s) when x is near s, hence the generous cap.
double lower_gamma_series(double s, double x) {
    double ap = s;
    double sum = 1.0 / s;
    double del = sum;
    for (int n = 0; n < kMaxIter; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-15)
            return sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
    }
    throw numerical_error(gamma_context("reg_lower_gamma series failed to converge", s, x));
}

// Modified Lentz continued fraction for Q(s, x), valid for x >= s + 1.
double upper_gamma_cf(double s, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIter; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - s);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-15)
            return std::exp(-x + s * std::log(x) - std::lgamma(s)) * h;
    }
    throw numerical_error(gamma_context("reg_lower_gamma continued fraction failed to converge", s, x));
}

} // namespace

double reg_lower_gamma(double s, double x) {
    if (!(s > 0.0))
        throw numerical_error(gamma_context("reg_lower_gamma requires s > 0", s, x));
    if (x < 0.0)
        throw numerical_error(gamma_context("reg_lower_gamma requires x >= 0", s, x));
    if (x == 0.0) return 0.0;
    if (x < s + 1.0) return lower_gamma_series(s, x);
    return 1.0 - upper_gamma_cf(s, x);
}

double normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

// Poisson mixture of central chi-square CDFs, summed outward from the mode
// of the Poisson(lambda/2) weights. The gamma CDF P and its stepping term t
// satisfy P(s+1, x) = P(s, x) - x^s e^{-x} / Gamma(s+1), so each direction
// needs one gamma evaluation at the anchor and pure recurrences after that.
// Each direction stops once the accumulated Poisson mass covers 1 - 1e-13
// or its weight underflows past 1e-17; clamping P into [0, 1] keeps the
// recurrences harmless long after t underflows.
double ncx2_cdf(double x, double k, double lambda) {
    if (!(k > 0.0))
        throw numerical_error(gamma_context("ncx2_cdf requires k > 0", k, x));
    if (!(lambda >= 0.0))
        throw numerical_error(gamma_context("ncx2_cdf requires lambda >= 0", lambda, x));
    if (x <= 0.0) return 0.0;

    const double xx = 0.5 * x;
    const double h = 0.5 * lambda;
    if (h == 0.0) return reg_lower_gamma(0.5 * k, xx);

    const double tail = 1e-13;
    const double wfloor = 1e-17;
    const long budget = 2000000;

    const long j0 = static_cast<long>(std::floor(h));
    const double s_anchor = 0.5 * k + static_cast<double>(j0);
    const double P0 = reg_lower_gamma(s_anchor, xx);
    const double t0 = std::exp(s_anchor * std::log(xx) - xx - std::lgamma(s_anchor + 1.0));
    const double w0 = std::exp(-h + static_cast<double>(j0) * std::log(h)
                               - std::lgamma(static_cast<double>(j0) + 1.0));

    double total = w0 * P0;
    double covered = w0;

    // Upward sweep: j0 + 1, j0 + 2, ...
    {
        double P = P0;
        double t = t0;
        double w = w0;
        long j = j0;
        for (long it = 0; covered < 1.0 - tail && it < budget; ++it) {
            P -= t;
            if (P < 0.0) P = 0.0;
            t *= xx / (0.5 * k + static_cast<double>(j) + 1.0);
            w *= h / (static_cast<double>(j) + 1.0);
            ++j;
            total += w * P;
            covered += w;
            if (w < wfloor) break;
        }
    }

    // Downward sweep: j0 - 1, ..., 0.
    if (covered < 1.0 - tail && j0 > 0) {
        double P = P0;
        double t = t0;
        double w = w0;
        long j = j0;
        for (long it = 0; j > 0 && covered < 1.0 - tail && it < budget; ++it) {
            t *= (0.5 * k + static_cast<double>(j)) / xx;
            P += t;
            if (P > 1.0) P = 1.0;
            w *= static_cast<double>(j) / h;
            --j;
            total += w * P;
            covered += w;
            if (w < wfloor) break;
        }
    }

    if (total < 0.0) return 0.0;
    if (total > 1.0) return 1.0;
    return total;
}

} // namespace cev
