#pragma once

// Bounded rho function used by the one-step half-sample scale estimators, plus
// the consistency constant that makes those scales unbiased at the normal model.

namespace dirout {

// Quadratic-then-flat bounded loss: (t/c)^2 for |t| <= c, and 1 beyond.
double huber_rho(double t, double c);

// Derivative of huber_rho: 2t/c^2 on [-c, c], 0 beyond (jump points at +-c
// resolved to the inner value).
double huber_rho_deriv(double t, double c);

// Expectation of huber_rho(Z, c) over the right half of a standard normal,
// i.e. the integral of rho against the normal density from 0 to infinity.
// Closed form; a quadrature cross-check lives in the tests.
double rho_consistency_constant(double c);

// Tuning constant plus its derived consistency constant. `alpha` is always
// recomputed from `c`; the two cannot drift apart.
struct RhoConfig {
    double c;
    double alpha;

    // Throws ConfigError unless c is finite and > 0.
    static RhoConfig with_c(double c);

    // Default tuning (c = 2.1): flags beyond ~2.1 rescaled units as fully outlying.
    static RhoConfig standard();
};

} // namespace dirout
