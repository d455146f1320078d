#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cev/analytic.hpp"
#include "cev/errors.hpp"
#include "cev/params.hpp"

#include "quadrature.hpp"

#include <cmath>

using cev::black_scholes_price;
using cev::CevParams;
using cev::european_price_cev;
using cev::lognormal_pdf;
using cev::OptionKind;

namespace {

CevParams make(double s0, double beta) {
    CevParams p;
    p.s0 = s0;
    p.beta = beta;
    return p; // sigma=0.2, r=0.05, q=0 defaults
}

void check_price(double got, double want) {
    CHECK(std::fabs(got - want) <= std::max(1e-9 * want, 1e-12));
}

} // namespace

TEST_CASE("square-root and absolute elasticity puts, pinned") {
    // beta = 0.5, maturities 0.25 / 0.5 / 1
    check_price(european_price_cev(make(0.5, 0.5), 1.0, 0.25, OptionKind::put), 0.4875778013985641);
    check_price(european_price_cev(make(0.5, 0.5), 1.0, 0.50, OptionKind::put), 0.47531349495042435);
    check_price(european_price_cev(make(0.5, 0.5), 1.0, 1.00, OptionKind::put), 0.45158299402396768);
    check_price(european_price_cev(make(1.0, 0.5), 1.0, 0.25, OptionKind::put), 0.033737118308865277);
    check_price(european_price_cev(make(1.0, 0.5), 1.0, 0.50, OptionKind::put), 0.044223617830562945);
    check_price(european_price_cev(make(1.0, 0.5), 1.0, 1.00, OptionKind::put), 0.055809852491775336);
    check_price(european_price_cev(make(1.5, 0.5), 1.0, 0.25, OptionKind::put), 1.0236103691173607e-08);
    check_price(european_price_cev(make(1.5, 0.5), 1.0, 0.50, OptionKind::put), 6.7793612857841102e-06);
    check_price(european_price_cev(make(1.5, 0.5), 1.0, 1.00, OptionKind::put), 0.00024435219355619254);

    // beta = 1
    check_price(european_price_cev(make(0.5, 1.0), 1.0, 0.25, OptionKind::put), 0.48757780055478189);
    check_price(european_price_cev(make(0.5, 1.0), 1.0, 0.50, OptionKind::put), 0.47531078215294753);
    check_price(european_price_cev(make(0.5, 1.0), 1.0, 1.00, OptionKind::put), 0.45139389301210309);
    check_price(european_price_cev(make(1.0, 1.0), 1.0, 0.25, OptionKind::put), 0.033731921460139591);
    check_price(european_price_cev(make(1.0, 1.0), 1.0, 0.50, OptionKind::put), 0.044208915750355349);
    check_price(european_price_cev(make(1.0, 1.0), 1.0, 1.00, OptionKind::put), 0.055768277787892895);
    check_price(european_price_cev(make(1.5, 1.0), 1.0, 0.25, OptionKind::put), 3.9277642479738909e-08);
    check_price(european_price_cev(make(1.5, 1.0), 1.0, 0.50, OptionKind::put), 1.4735924062261429e-05);
    check_price(european_price_cev(make(1.5, 1.0), 1.0, 1.00, OptionKind::put), 0.00039854022541410249);
}

TEST_CASE("black_scholes_price pinned values") {
    CHECK(black_scholes_price(1.0, 1.0, 0.05, 0.0, 0.2, 0.25, OptionKind::put)
          == doctest::Approx(0.033727771789910044).epsilon(1e-12));
    CHECK(black_scholes_price(1.0, 1.0, 0.05, 0.0, 0.2, 0.5, OptionKind::put)
          == doctest::Approx(0.04419719780513881).epsilon(1e-12));
    CHECK(black_scholes_price(1.0, 1.0, 0.05, 0.0, 0.2, 1.0, OptionKind::put)
          == doctest::Approx(0.055735260222569749).epsilon(1e-12));
    CHECK(black_scholes_price(0.5, 1.0, 0.05, 0.0, 0.2, 1.0, OptionKind::put)
          == doctest::Approx(0.45125341867624713).epsilon(1e-12));
    CHECK(black_scholes_price(1.5, 1.0, 0.05, 0.0, 0.2, 1.0, OptionKind::put)
          == doctest::Approx(0.00093082588070597487).epsilon(1e-12));
    CHECK(black_scholes_price(1.0, 1.0, 0.05, 0.0, 0.2, 1.0, OptionKind::call)
          == doctest::Approx(0.10450583572185568).epsilon(1e-12));
    CHECK(black_scholes_price(1.0, 1.0, 0.05, 0.02, 0.2, 1.0, OptionKind::put)
          == doctest::Approx(0.063300806275499166).epsilon(1e-12));
}

TEST_CASE("black_scholes_price parity and limits") {
    for (double s : {0.6, 1.0, 1.7}) {
        for (double t : {0.1, 1.0, 3.0}) {
            const double c = black_scholes_price(s, 1.1, 0.04, 0.01, 0.3, t, OptionKind::call);
            const double p = black_scholes_price(s, 1.1, 0.04, 0.01, 0.3, t, OptionKind::put);
            const double fwd = s * std::exp(-0.01 * t) - 1.1 * std::exp(-0.04 * t);
            CHECK(c - p == doctest::Approx(fwd).epsilon(1e-12));
        }
    }
    // tiny strike: put worthless
    CHECK(black_scholes_price(1.0, 1e-12, 0.05, 0.0, 0.2, 1.0, OptionKind::put)
          == doctest::Approx(0.0).epsilon(1e-15));
    // zero volatility degenerates to discounted forward intrinsic
    CHECK(black_scholes_price(1.0, 1.0, 0.05, 0.0, 0.0, 1.0, OptionKind::call)
          == doctest::Approx(1.0 - std::exp(-0.05)).epsilon(1e-14));
}

TEST_CASE("beta = 2 dispatches to Black-Scholes") {
    const CevParams p = make(1.0, 2.0);
    const double bs = black_scholes_price(1.0, 1.0, 0.05, 0.0, 0.2, 1.0, OptionKind::put);
    CHECK(european_price_cev(p, 1.0, 1.0, OptionKind::put) == bs);
    CHECK(european_price_cev(make(1.0, 2.0 - 1e-10), 1.0, 1.0, OptionKind::put) == bs);
    CHECK(european_price_cev(make(1.0, 2.0 + 1e-10), 1.0, 1.0, OptionKind::put) == bs);
}

TEST_CASE("continuity across the beta = 2 dispatch seam") {
    for (double s : {0.5, 1.0, 1.5}) {
        for (double t : {0.25, 0.5, 1.0}) {
            const double near2 = european_price_cev(make(s, 1.999), 1.0, t, OptionKind::put);
            const double bs = black_scholes_price(s, 1.0, 0.05, 0.0, 0.2, t, OptionKind::put);
            CHECK(std::fabs(near2 - bs) <= 5e-4);
        }
    }
}

TEST_CASE("elasticity above 2, pinned") {
    check_price(european_price_cev(make(1.0, 2.5), 1.0, 1.0, OptionKind::put), 0.05574349472889234);
    check_price(european_price_cev(make(1.0, 3.0), 1.0, 1.0, OptionKind::put), 0.055768277787893172);
    // at-the-money with q = 0, beta = 3 and beta = 1 price identically
    CHECK(european_price_cev(make(1.0, 3.0), 1.0, 1.0, OptionKind::put)
          == doctest::Approx(european_price_cev(make(1.0, 1.0), 1.0, 1.0, OptionKind::put))
                 .epsilon(1e-12));
}

TEST_CASE("dividend yield and the r = q limit, pinned") {
    CevParams p = make(1.0, 0.5);
    p.q = 0.05;
    check_price(european_price_cev(p, 1.0, 1.0, OptionKind::put), 0.075841442880746568);
    p.r = 0.03;
    p.q = 0.03;
    check_price(european_price_cev(p, 1.0, 1.0, OptionKind::put), 0.077373541656500233);
}

TEST_CASE("CEV put-call parity") {
    for (double beta : {0.5, 1.0, 1.6, 2.0, 3.0}) {
        CevParams p = make(0.9, beta);
        p.q = 0.015;
        const double c = european_price_cev(p, 1.05, 0.75, OptionKind::call);
        const double put = european_price_cev(p, 1.05, 0.75, OptionKind::put);
        const double fwd = 0.9 * std::exp(-0.015 * 0.75) - 1.05 * std::exp(-0.05 * 0.75);
        CHECK(std::fabs(c - put - fwd) <= 1e-8);
    }
}

TEST_CASE("closed-form monotonicity in spot and strike") {
    for (double beta : {0.5, 1.0, 2.0}) {
        double prev = 1e9;
        for (double s = 0.6; s <= 1.4; s += 0.1) {
            const double v = european_price_cev(make(s, beta), 1.0, 1.0, OptionKind::put);
            CHECK(v <= prev + 1e-12);
            prev = v;
        }
        double prev_e = -1.0;
        for (double e = 0.6; e <= 1.4; e += 0.1) {
            const double v = european_price_cev(make(1.0, beta), e, 1.0, OptionKind::put);
            CHECK(v >= prev_e - 1e-12);
            prev_e = v;
        }
    }
}

TEST_CASE("analytic_inputs invariants") {
    const cev::AnalyticInputs in = cev::analytic_inputs(make(1.0, 1.0), 1.0, 1.0);
    CHECK(in.a > 0.0);
    CHECK(in.c > 0.0);
    CHECK(in.omega > 0.0);
    CHECK(in.b == doctest::Approx(2.0).epsilon(1e-15)); // 1/(1 - beta/2) at beta = 1
}

TEST_CASE("lognormal_pdf properties") {
    const double s0 = 1.0, mu = 0.05, sig = 0.2, t = 1.0;
    const auto f = [&](double x) { return lognormal_pdf(x, s0, mu, sig, t); };
    const double total = oracle::integrate_panels(f, 1e-9, s0 * std::exp(mu * t + 8.0 * sig), 1e-9, 128);
    CHECK(std::fabs(total - 1.0) <= 1e-6);

    // stationary point at s0 exp((mu - 3 sigma^2 / 2) t)
    const double mode = s0 * std::exp((mu - 1.5 * sig * sig) * t);
    const double h = 1e-6;
    CHECK(f(mode - h) < f(mode));
    CHECK(f(mode + h) < f(mode));

    CHECK(lognormal_pdf(0.0, s0, mu, sig, t) == 0.0);
    CHECK(lognormal_pdf(1e-300, s0, mu, sig, t) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("closed form validates its inputs") {
    CHECK_THROWS_AS(european_price_cev(make(1.0, 1.0), 0.0, 1.0, OptionKind::put),
                    cev::validation_error);
    CHECK_THROWS_AS(european_price_cev(make(1.0, 1.0), 1.0, 0.0, OptionKind::put),
                    cev::validation_error);
    CevParams p = make(1.0, 1.0);
    p.sigma = 0.0;
    CHECK_THROWS_AS(european_price_cev(p, 1.0, 1.0, OptionKind::put), cev::validation_error);
    // deep out-of-the-money stays clamped at zero
    CHECK(european_price_cev(make(30.0, 0.5), 1.0, 0.1, OptionKind::put) >= 0.0);
}
