#include "doctest.h"

#include <cmath>
#include <limits>
#include <vector>

#include "dirout/errors.hpp"
#include "dirout/normal.hpp"
#include "dirout/rho.hpp"
#include "dirout/rng.hpp"
#include "dirout/scales.hpp"

using namespace dirout;

namespace {

// Independent numeric route for the consistency constant: Simpson's rule for
// the quadratic head on [0, c] plus the exact flat-tail mass via erfc.
double alpha_by_quadrature(double c) {
    const int n = 4000; // even
    const double hstep = c / n;
    auto f = [c](double t) {
        return (t / c) * (t / c) * std::exp(-0.5 * t * t) / std::sqrt(2.0 * M_PI);
    };
    double sum = f(0.0) + f(c);
    for (int i = 1; i < n; ++i) sum += f(i * hstep) * (i % 2 == 1 ? 4.0 : 2.0);
    const double head = sum * hstep / 3.0;
    const double tail = 0.5 * std::erfc(c / std::sqrt(2.0));
    return head + tail;
}

} // namespace

TEST_CASE("consistency constant: closed form matches quadrature and frozen values") {
    CHECK(rho_consistency_constant(2.1) == doctest::Approx(0.10624764683907195).epsilon(1e-12));
    CHECK(rho_consistency_constant(1.0) == doctest::Approx(0.25802927548085675).epsilon(1e-12));
    CHECK(rho_consistency_constant(1.5) == doctest::Approx(0.1729922702609934).epsilon(1e-12));
    CHECK(rho_consistency_constant(3.0) == doctest::Approx(0.055278182113025154).epsilon(1e-12));
    for (double c : {0.5, 1.0, 1.5, 2.1, 3.0}) {
        CHECK(std::abs(rho_consistency_constant(c) - alpha_by_quadrature(c)) < 1e-10);
    }
    // Limits: c -> 0 gives 1/2 (pure tail); for large c the quadratic head
    // dominates and alpha(c) ~ 1/(2 c^2).
    CHECK(rho_consistency_constant(1e-6) == doctest::Approx(0.5).epsilon(1e-5));
    CHECK(rho_consistency_constant(8.0) == doctest::Approx(1.0 / 128.0).epsilon(1e-6));
    // Config always recomputes alpha from c.
    const RhoConfig cfg = RhoConfig::with_c(1.7);
    CHECK(cfg.alpha == doctest::Approx(rho_consistency_constant(1.7)).epsilon(1e-15));
    CHECK_THROWS_AS(RhoConfig::with_c(0.0), ConfigError);
    CHECK_THROWS_AS(RhoConfig::with_c(-2.0), ConfigError);
    CHECK_THROWS_AS(RhoConfig::with_c(std::numeric_limits<double>::quiet_NaN()), ConfigError);
}

TEST_CASE("rho function shape") {
    const double c = 2.1;
    CHECK(huber_rho(0.0, c) == 0.0);
    CHECK(huber_rho(c, c) == 1.0);
    CHECK(huber_rho(-c, c) == 1.0);
    CHECK(huber_rho(100.0, c) == 1.0);
    CHECK(huber_rho(1.05, c) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(huber_rho_deriv(1.0, c) == doctest::Approx(2.0 / (c * c)).epsilon(1e-15));
    CHECK(huber_rho_deriv(3.0, c) == 0.0);
    CHECK(huber_rho_deriv(-1.0, c) == doctest::Approx(-2.0 / (c * c)).epsilon(1e-15));
}

TEST_CASE("half-sample scales reproduce hand-derived values (odd n)") {
    const RhoConfig cfg = RhoConfig::standard();
    const ScalePair sp = half_sample_scales(UnivariateSample({1, 2, 3, 4, 5}), cfg);
    CHECK(sp.n == 5);
    CHECK(sp.h == 3);
    CHECK(sp.median == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(sp.s0_above == doctest::Approx(1.4826022185056023).epsilon(1e-13));
    CHECK(sp.s_above == doctest::Approx(1.3336148481571688).epsilon(1e-13));
    // The sample is symmetric about 3, so the two sides agree.
    CHECK(sp.s_below == doctest::Approx(sp.s_above).epsilon(1e-13));
    CHECK(sp.s0_below == doctest::Approx(sp.s0_above).epsilon(1e-13));
    CHECK(directional_outlyingness(5.0, sp) == doctest::Approx(1.4996833626767603).epsilon(1e-13));
    CHECK(directional_outlyingness(1.0, sp) ==
          doctest::Approx(directional_outlyingness(5.0, sp)).epsilon(1e-13));
    CHECK(directional_outlyingness(3.0, sp) == 0.0);
}

TEST_CASE("half-sample scales reproduce hand-derived values (even n)") {
    const RhoConfig cfg = RhoConfig::standard();
    const ScalePair sp = half_sample_scales(UnivariateSample({4, 1, 3, 2}), cfg); // order-free
    CHECK(sp.n == 4);
    CHECK(sp.h == 2);
    CHECK(sp.median == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(sp.s0_above == doctest::Approx(1.4826022185056023).epsilon(1e-13));
    CHECK(sp.s_above == doctest::Approx(1.1549443373682351).epsilon(1e-13));
    CHECK(sp.s_below == doctest::Approx(sp.s_above).epsilon(1e-13));
    CHECK(directional_outlyingness(4.0, sp) == doctest::Approx(1.2987638897109459).epsilon(1e-13));
}

TEST_CASE("affine equivariance and sign-flip symmetry") {
    const RhoConfig cfg = RhoConfig::standard();
    Rng rng(17);
    std::vector<double> y(101);
    for (double& v : y) v = rng.normal() + 0.3 * rng.lognormal();

    const ScalePair base = half_sample_scales(y, cfg);
    const double q = y[7] + 1.9; // strictly above the center for this draw

    for (double a : {0.5, 3.0, 123.456}) {
        for (double b : {-7.0, 0.0, 2.5}) {
            std::vector<double> t(y.size());
            for (std::size_t i = 0; i < y.size(); ++i) t[i] = a * y[i] + b;
            const ScalePair sp = half_sample_scales(t, cfg);
            CHECK(sp.median == doctest::Approx(a * base.median + b).epsilon(1e-12));
            CHECK(sp.s_above == doctest::Approx(a * base.s_above).epsilon(1e-12));
            CHECK(sp.s_below == doctest::Approx(a * base.s_below).epsilon(1e-12));
            CHECK(directional_outlyingness(a * q + b, sp) ==
                  doctest::Approx(directional_outlyingness(q, base)).epsilon(1e-12));
        }
    }

    // Negating the sample swaps the two sides.
    std::vector<double> neg(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) neg[i] = -y[i];
    const ScalePair flipped = half_sample_scales(neg, cfg);
    CHECK(flipped.median == doctest::Approx(-base.median).epsilon(1e-12));
    CHECK(flipped.s_above == doctest::Approx(base.s_below).epsilon(1e-12));
    CHECK(flipped.s_below == doctest::Approx(base.s_above).epsilon(1e-12));
    CHECK(directional_outlyingness(-q, flipped) ==
          doctest::Approx(directional_outlyingness(q, base)).epsilon(1e-12));
}

TEST_CASE("outlyingness grows monotonically away from the median") {
    const RhoConfig cfg = RhoConfig::standard();
    Rng rng(5);
    std::vector<double> y(60);
    for (double& v : y) v = rng.lognormal();
    const ScalePair sp = half_sample_scales(y, cfg);
    double prev = 0.0;
    for (int k = 1; k <= 20; ++k) {
        const double cur = directional_outlyingness(sp.median + 0.17 * k, sp);
        CHECK(cur > prev);
        prev = cur;
    }
    prev = 0.0;
    for (int k = 1; k <= 20; ++k) {
        const double cur = directional_outlyingness(sp.median - 0.17 * k, sp);
        CHECK(cur > prev);
        prev = cur;
    }
}

TEST_CASE("gaussian consistency: both scales approach 1, symmetric outlyingness agrees") {
    const RhoConfig cfg = RhoConfig::standard();
    Rng rng(20240801);
    std::vector<double> y(20001);
    for (double& v : y) v = rng.normal();
    const ScalePair sp = half_sample_scales(y, cfg);
    CHECK(sp.s_above == doctest::Approx(1.0).epsilon(0.03));
    CHECK(sp.s_below == doctest::Approx(1.0).epsilon(0.03));
    CHECK(sp.median == doctest::Approx(0.0).epsilon(0.03));
    const LocationMad lm = location_mad_copy(y);
    CHECK(lm.mad == doctest::Approx(1.0).epsilon(0.03));
    // At a symmetric model the directional and symmetric measures roughly agree.
    const double q = 1.6448536269514722; // upper 5% point
    CHECK(directional_outlyingness(q, sp) ==
          doctest::Approx(symmetric_outlyingness(q, lm)).epsilon(0.05));
}

TEST_CASE("skewed data yields asymmetric scales") {
    const RhoConfig cfg = RhoConfig::standard();
    Rng rng(99);
    std::vector<double> y(5001);
    for (double& v : y) v = rng.lognormal();
    const ScalePair sp = half_sample_scales(y, cfg);
    CHECK(sp.s_above > 2.0 * sp.s_below); // heavy right tail
    // Same point is less surprising on the long-tail side.
    const double far = sp.median + 3.0;
    const double near = sp.median - 0.8;
    CHECK(directional_outlyingness(far, sp) < symmetric_outlyingness(far, location_mad_copy(y)));
    CHECK(near > 0.0); // sanity: stays inside the support for this draw
}

TEST_CASE("degenerate sides and the sentinel policy") {
    const RhoConfig cfg = RhoConfig::standard();
    const ScalePair sp = half_sample_scales(UnivariateSample({0, 0, 0, 1, 2}), cfg);
    CHECK(sp.median == 0.0);
    CHECK(sp.s_below == 0.0);
    CHECK(sp.s0_below == 0.0);
    CHECK(sp.s_above == doctest::Approx(1.3336148481571688).epsilon(1e-13));

    CHECK(directional_outlyingness(0.0, sp) == 0.0); // at the median: defined even here
    CHECK(std::isinf(directional_outlyingness(-1.0, sp)));
    CHECK_THROWS_AS(directional_outlyingness(-1.0, sp, DegeneratePolicy::Throw),
                    DegenerateDataError);
    CHECK(directional_outlyingness(1.0, sp) > 0.0);
    CHECK(std::isfinite(directional_outlyingness(1.0, sp)));

    // Fully constant sample: both sides collapse.
    const ScalePair flat = half_sample_scales(UnivariateSample({5, 5, 5, 5, 5}), cfg);
    CHECK(flat.s_above == 0.0);
    CHECK(flat.s_below == 0.0);
    CHECK(directional_outlyingness(5.0, flat) == 0.0);
    CHECK(std::isinf(directional_outlyingness(6.0, flat)));
}

TEST_CASE("input validation") {
    const RhoConfig cfg = RhoConfig::standard();
    CHECK_THROWS_AS(UnivariateSample({}), InputError);
    CHECK_THROWS_AS(UnivariateSample({1.0, std::numeric_limits<double>::quiet_NaN()}), InputError);
    CHECK_THROWS_AS(UnivariateSample({1.0, std::numeric_limits<double>::infinity()}), InputError);
    CHECK_THROWS_AS(half_sample_scales(UnivariateSample({1.0, 2.0}), cfg), InputError);
    const ScalePair sp = half_sample_scales(UnivariateSample({1, 2, 3}), cfg);
    CHECK_THROWS_AS(directional_outlyingness(std::numeric_limits<double>::quiet_NaN(), sp),
                    InputError);
}

TEST_CASE("symmetric outlyingness frozen value and depth transform") {
    const LocationMad lm = location_mad_copy(std::vector<double>{1, 2, 3, 4, 5});
    CHECK(lm.median == 3.0);
    CHECK(lm.mad == doctest::Approx(1.4826022185056023).epsilon(1e-13));
    CHECK(symmetric_outlyingness(5.0, lm) == doctest::Approx(1.3489795003921632).epsilon(1e-13));

    CHECK(depth_from_outlyingness(0.0) == 1.0);
    CHECK(depth_from_outlyingness(1.0) == 0.5);
    CHECK(depth_from_outlyingness(std::numeric_limits<double>::infinity()) == 0.0);
    // Strictly decreasing on a grid.
    double prev = 2.0;
    for (double v = 0.0; v < 30.0; v += 0.37) {
        const double d = depth_from_outlyingness(v);
        CHECK(d > 0.0);
        CHECK(d <= 1.0);
        CHECK(d < prev);
        prev = d;
    }
}

TEST_CASE("median and MAD helpers") {
    std::vector<double> odd{9, 1, 5};
    CHECK(median_copy(odd) == 5.0);
    std::vector<double> even{4, 1, 3, 2};
    CHECK(median_copy(even) == 2.5);
    CHECK_THROWS_AS(median_copy(std::vector<double>{}), InputError);
    CHECK(kth_smallest_inplace(odd, 0) == 1.0);
    CHECK(kth_smallest_inplace(odd, 2) == 9.0);
}
