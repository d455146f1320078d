#include "cev/analytic.hpp"

#include "cev/errors.hpp"
#include "cev/special_functions.hpp"

#include <algorithm>
#include <cmath>

namespace cev {

namespace {

void check_contract(const CevParams& p, double strike, double maturity) {
    validate(p);
    if (!(p.sigma > 0.0))
        throw validation_error("closed form requires sigma > 0");
    if (!(strike > 0.0))
        throw validation_error("strike must be > 0");
    if (!(maturity > 0.0))
        throw validation_error("maturity must be > 0");
}

} // namespace

AnalyticInputs analytic_inputs(const CevParams& p, double strike, double maturity) {
    check_contract(p, strike, maturity);
    const double alpha = 0.5 * p.beta;
    const double drift = p.r - p.q;
    const double kappa = 2.0 * drift * (alpha - 1.0);
    double omega;
    if (std::fabs(drift) < 1e-12)
        omega = p.sigma * p.sigma * maturity;
    else
        omega = p.sigma * p.sigma * std::expm1(kappa * maturity) / kappa;

    const double one_m_a = 1.0 - alpha;
    const double denom = one_m_a * one_m_a * omega;
    const double kf = strike * std::exp(-drift * maturity);

    AnalyticInputs in;
    in.omega = omega;
    in.b = 1.0 / one_m_a;
    in.a = std::pow(kf, 2.0 * one_m_a) / denom;
    in.c = std::pow(p.s0, 2.0 * one_m_a) / denom;
    return in;
}

double black_scholes_price(double s0, double strike, double r, double q,
                           double sigma_bs, double maturity, OptionKind kind) {
    if (!(s0 > 0.0) || !(strike > 0.0))
        throw validation_error("black_scholes_price requires s0 > 0 and strike > 0");
    if (sigma_bs < 0.0 || maturity < 0.0)
        throw validation_error("black_scholes_price requires sigma >= 0 and maturity >= 0");

    const double df_r = std::exp(-r * maturity);
    const double df_q = std::exp(-q * maturity);
    const double vol = sigma_bs * std::sqrt(maturity);
    if (vol == 0.0) {
        const double fwd = s0 * df_q / df_r;
        const double intrinsic = (kind == OptionKind::call) ? fwd - strike : strike - fwd;
        return df_r * std::max(intrinsic, 0.0);
    }
    const double d1 = (std::log(s0 / strike) + (r - q + 0.5 * sigma_bs * sigma_bs) * maturity) / vol;
    const double d2 = d1 - vol;
    if (kind == OptionKind::call)
        return s0 * df_q * normal_cdf(d1) - strike * df_r * normal_cdf(d2);
    return strike * df_r * normal_cdf(-d2) - s0 * df_q * normal_cdf(-d1);
}

double lognormal_pdf(double x, double s0, double mu, double sigma_bs, double t) {
    if (!(s0 > 0.0) || !(sigma_bs > 0.0) || !(t > 0.0))
        throw validation_error("lognormal_pdf requires s0 > 0, sigma > 0, t > 0");
    if (x <= 0.0) return 0.0;
    const double sd = sigma_bs * std::sqrt(t);
    const double z = (std::log(x / s0) - (mu - 0.5 * sigma_bs * sigma_bs) * t) / sd;
    return std::exp(-0.5 * z * z) / (x * sd * std::sqrt(2.0 * M_PI));
}

double european_price_cev(const CevParams& p, double strike, double maturity,
                          OptionKind kind) {
    check_contract(p, strike, maturity);
    if (std::fabs(p.beta - 2.0) < 1e-9)
        return black_scholes_price(p.s0, strike, p.r, p.q, p.sigma, maturity, kind);

    const AnalyticInputs in = analytic_inputs(p, strike, maturity);
    const double df_k = strike * std::exp(-p.r * maturity);
    const double df_s = p.s0 * std::exp(-p.q * maturity);

    double price;
    if (p.beta < 2.0) {
        if (kind == OptionKind::call)
            price = df_s * (1.0 - ncx2_cdf(in.a, in.b + 2.0, in.c))
                  - df_k * ncx2_cdf(in.c, in.b, in.a);
        else
            price = df_k * (1.0 - ncx2_cdf(in.c, in.b, in.a))
                  - df_s * ncx2_cdf(in.a, in.b + 2.0, in.c);
    } else {
        if (kind == OptionKind::call)
            price = df_s * (1.0 - ncx2_cdf(in.c, -in.b, in.a))
                  - df_k * ncx2_cdf(in.a, 2.0 - in.b, in.c);
        else
            price = df_k * (1.0 - ncx2_cdf(in.a, 2.0 - in.b, in.c))
                  - df_s * ncx2_cdf(in.c, -in.b, in.a);
    }
    return std::max(price, 0.0);
}

} // namespace cev
