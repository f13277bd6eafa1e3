#include "dirout/rho.hpp"

#include <cmath>

#include "dirout/errors.hpp"
#include "dirout/normal.hpp"

namespace dirout {

double huber_rho(double t, double c) {
    const double a = std::abs(t);
    if (a <= c) {
        const double r = t / c;
        return r * r;
    }
    return 1.0;
}

double huber_rho_deriv(double t, double c) {
    if (std::abs(t) <= c) return 2.0 * t / (c * c);
    return 0.0;
}

double rho_consistency_constant(double c) {
    // Integrate (z/c)^2 over [0, c] by parts against the normal density, then
    // add the flat tail mass: ((Phi(c) - c phi(c) - 1/2) / c^2) + (1 - Phi(c)).
    const double head = (norm_cdf(c) - c * norm_pdf(c) - 0.5) / (c * c);
    const double tail = 1.0 - norm_cdf(c);
    return head + tail;
}

RhoConfig RhoConfig::with_c(double c) {
    if (!std::isfinite(c) || c <= 0.0)
        throw ConfigError("rho tuning constant must be finite and positive");
    return RhoConfig{c, rho_consistency_constant(c)};
}

RhoConfig RhoConfig::standard() {
    return with_c(2.1);
}

} // namespace dirout
