#pragma once

#include "cev/params.hpp"

namespace cev {

// Parameter bundle of the closed-form CEV price (alpha = beta/2 != 1):
//   omega = sigma^2 (e^{2(r-q)(alpha-1)T} - 1) / (2(r-q)(alpha-1))
//   b     = 1/(1-alpha)
//   a     = (K e^{-(r-q)T})^{2(1-alpha)} / ((1-alpha)^2 omega)
//   c     = S0^{2(1-alpha)} / ((1-alpha)^2 omega)
struct AnalyticInputs {
    double a;
    double b;
    double c;
    double omega;
};

AnalyticInputs analytic_inputs(const CevParams& p, double strike, double maturity);

double black_scholes_price(double s0, double strike, double r, double q,
                           double sigma_bs, double maturity, OptionKind kind);

// Density of S_t under GBM with drift mu:
// f(x) = 1/(x sigma sqrt(2 pi t)) exp(-(log(x/s0) - (mu - sigma^2/2) t)^2 / (2 sigma^2 t))
double lognormal_pdf(double x, double s0, double mu, double sigma_bs, double t);

// Closed-form European CEV price. Dispatch: |beta - 2| < 1e-9 goes to
// Black-Scholes (b = 1/(1-alpha) diverges at alpha = 1); beta < 2 and
// beta > 2 use the two noncentral chi-square branches. beta > 2 is
// supported here even though the lattice rejects it.
double european_price_cev(const CevParams& p, double strike, double maturity,
                          OptionKind kind);

} // namespace cev
