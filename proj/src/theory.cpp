#include "dirout/theory.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "dirout/errors.hpp"
#include "dirout/normal.hpp"
#include "dirout/rng.hpp"
#include "dirout/scales.hpp"

namespace dirout {

namespace {

constexpr double kQuadTol = 1e-10;

template <class F>
double integrate(F&& f, double a, double b) {
    return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        std::forward<F>(f), a, b, 15, kQuadTol);
}

// Integral of rho_c((x - m) / s) dF(x) over [m, infinity). The integrand has a
// kink where the rho clips, so the smooth quadratic head is integrated on
// [m, m + c*s] and the flat tail contributes exactly 1 - F(m + c*s).
double rho_integral_above(double m, double s, const RhoConfig& cfg,
                          const ReferenceDistribution& F) {
    const double kink = m + cfg.c * s;
    const double head = integrate(
        [&](double x) { return huber_rho((x - m) / s, cfg.c) * F.pdf(x); }, m, kink);
    return head + (1.0 - F.cdf(kink));
}

void validate_bias_fraction(double eps) {
    if (!(eps > 0.0) || !(eps < 0.25)) {
        throw ConfigError("contamination fraction must lie strictly inside (0, 0.25), got " +
                          std::to_string(eps));
    }
}

// Contaminated-model median shared by both bias curves: the adversary places
// all mass above, pushing the median to the (1 / (2(1 - eps)))-quantile.
double biased_median(double eps, const ReferenceDistribution& F) {
    return F.quantile(1.0 / (2.0 * (1.0 - eps)));
}

JumpSide flip(JumpSide side) {
    switch (side) {
    case JumpSide::Left: return JumpSide::Right;
    case JumpSide::Right: return JumpSide::Left;
    default: return JumpSide::Auto;
    }
}

// Side-aware step helpers: the Left/Right variants report the one-sided limit
// of the corresponding discontinuous factor at its jump point.
double signum(double t, JumpSide side) {
    if (side == JumpSide::Left) return t > 0.0 ? 1.0 : -1.0;
    if (side == JumpSide::Right) return t >= 0.0 ? 1.0 : -1.0;
    return t > 0.0 ? 1.0 : (t < 0.0 ? -1.0 : 0.0);
}

double indicator_nonneg(double t, JumpSide side) {
    if (side == JumpSide::Left) return t > 0.0 ? 1.0 : 0.0;
    return t >= 0.0 ? 1.0 : 0.0;
}

} // namespace

double StandardNormal::pdf(double x) const { return norm_pdf(x); }
double StandardNormal::cdf(double x) const { return norm_cdf(x); }
double StandardNormal::quantile(double p) const { return norm_quantile(p); }

const StandardNormal& standard_normal() {
    static const StandardNormal dist;
    return dist;
}

double implosion_bias(double eps, const RhoConfig& cfg, const ReferenceDistribution& F) {
    validate_bias_fraction(eps);
    const double med = biased_median(eps, F);
    // Initial upper scale when the contamination sits exactly at the shifted
    // median: the upper-half median comes from the (3 - 4 eps)/(4(1 - eps))
    // quantile of the clean part.
    const double soa = (F.quantile((3.0 - 4.0 * eps) / (4.0 * (1.0 - eps))) - med) /
                       mad_normalizer();
    if (!(soa > 0.0)) return 0.0;
    const double integral = (1.0 - eps) * rho_integral_above(med, soa, cfg, F);
    return std::sqrt(soa * soa / cfg.alpha * integral);
}

double explosion_bias(double eps, const RhoConfig& cfg, const ReferenceDistribution& F) {
    validate_bias_fraction(eps);
    const double med = biased_median(eps, F);
    // Remote contamination inflates the initial upper scale: the upper-half
    // median comes from the 3/(4(1 - eps)) quantile of the clean part, and the
    // contaminated point contributes a fully clipped rho term of eps.
    const double soa = (F.quantile(3.0 / (4.0 * (1.0 - eps))) - med) / mad_normalizer();
    const double integral = (1.0 - eps) * rho_integral_above(med, soa, cfg, F) + eps;
    return std::sqrt(soa * soa / cfg.alpha * integral);
}

double if_median(double z, JumpSide side) {
    return signum(z, side) / (2.0 * norm_pdf(0.0));
}

double if_initial_scale(double z, JumpSide side) {
    const double q3 = norm_quantile(0.75);
    const double phi0 = norm_pdf(0.0);
    const double phi_q3 = norm_pdf(q3);
    // Gateaux derivative of the upper-half median deviation: an indicator-sign
    // term from the upper-half quantile plus a median-shift correction, then
    // rescaled by the consistency normalizer applied to the initial scale.
    const double raw = (indicator_nonneg(z, side) * signum(z - q3, side) +
                        if_median(z, side) * (phi0 - 2.0 * phi_q3)) /
                       (2.0 * phi_q3);
    return raw / q3;
}

double if_refined_scale(double z, const RhoConfig& cfg, JumpSide side) {
    const double c = cfg.c;
    // Moments of rho and its derivative over the upper half of the reference
    // normal; rho' vanishes beyond the clip, so no tail terms are needed.
    const double rho_mean =
        integrate([&](double x) { return huber_rho(x, c) * norm_pdf(x); }, 0.0, c) +
        (1.0 - norm_cdf(c));
    const double deriv_mean =
        integrate([&](double x) { return huber_rho_deriv(x, c) * norm_pdf(x); }, 0.0, c);
    const double weighted_deriv_mean =
        integrate([&](double x) { return x * huber_rho_deriv(x, c) * norm_pdf(x); }, 0.0, c);

    const double scale_term = (2.0 * rho_mean - weighted_deriv_mean) * if_initial_scale(z, side);
    const double median_term = deriv_mean * if_median(z, side);
    const double direct_term = indicator_nonneg(z, side) * huber_rho(z, c) - cfg.alpha;
    return (scale_term - median_term + direct_term) / (2.0 * cfg.alpha);
}

double if_outlyingness(double x, double z, const RhoConfig& cfg, JumpSide side) {
    if (x == 0.0) {
        throw ConfigError("outlyingness influence is undefined at the reference median x = 0");
    }
    // At the standard normal the median is 0 and both refined scales are 1.
    if (x > 0.0) {
        return -(if_median(z, side) + if_refined_scale(z, cfg, side) * x);
    }
    // Mirror identity: the lower scale's influence at z equals the upper
    // scale's influence at -z (with the approach side reflected).
    const double if_lower_scale = if_refined_scale(-z, cfg, flip(side));
    return if_median(z, side) - if_lower_scale * (0.0 - x);
}

double GaussianPointMixture::cdf(double x) const {
    return (1.0 - eps) * norm_cdf(x) + (x >= z ? eps : 0.0);
}

double GaussianPointMixture::quantile(double p) const {
    if (!(p > 0.0) || !(p < 1.0)) {
        throw ConfigError("mixture quantile level must lie in (0, 1), got " + std::to_string(p));
    }
    const double below_atom = (1.0 - eps) * norm_cdf(z);
    if (p <= below_atom) return norm_quantile(p / (1.0 - eps));
    if (p <= below_atom + eps) return z;
    return norm_quantile((p - eps) / (1.0 - eps));
}

double mixture_median(const GaussianPointMixture& g) { return g.quantile(0.5); }

double mixture_initial_scale(const GaussianPointMixture& g) {
    return (g.quantile(0.75) - g.quantile(0.5)) / mad_normalizer();
}

double mixture_refined_scale(const GaussianPointMixture& g, const RhoConfig& cfg) {
    const double med = mixture_median(g);
    const double soa = mixture_initial_scale(g);
    if (!(soa > 0.0)) {
        throw DegenerateDataError("mixture upper half collapsed; initial scale is zero");
    }
    double integral = (1.0 - g.eps) * rho_integral_above(med, soa, cfg, standard_normal());
    if (g.z >= med) {
        integral += g.eps * huber_rho((g.z - med) / soa, cfg.c);
    }
    return std::sqrt(soa * soa / cfg.alpha * integral);
}

double mixture_outlyingness(double x, const GaussianPointMixture& g, const RhoConfig& cfg) {
    const double med = mixture_median(g);
    if (x == med) return 0.0;
    if (x < med) {
        // The lower side of the mixture is the upper side of its reflection.
        return mixture_outlyingness(-x, GaussianPointMixture{g.eps, -g.z}, cfg);
    }
    return (x - med) / mixture_refined_scale(g, cfg);
}

double mixture_gateaux(EstimatorId est, double z, double eps, const RhoConfig& cfg, double x) {
    if (!(eps > 0.0) || !(eps < 0.25)) {
        throw ConfigError("gateaux step must lie strictly inside (0, 0.25), got " +
                          std::to_string(eps));
    }
    const GaussianPointMixture clean{0.0, z};
    const GaussianPointMixture dirty{eps, z};
    const auto apply = [&](const GaussianPointMixture& g) {
        switch (est) {
        case EstimatorId::Median: return mixture_median(g);
        case EstimatorId::InitialScale: return mixture_initial_scale(g);
        case EstimatorId::RefinedScale: return mixture_refined_scale(g, cfg);
        case EstimatorId::Outlyingness: return mixture_outlyingness(x, g, cfg);
        }
        throw ConfigError("unknown estimator id");
    };
    return (apply(dirty) - apply(clean)) / eps;
}

double empirical_if(EstimatorId est, double z, double eps, std::size_t n, std::uint64_t seed,
                    const RhoConfig& cfg, double x) {
    if (n < 8) throw InputError("sampled sensitivity needs at least 8 observations");
    if (!(eps > 0.0) || !(eps < 0.5)) {
        throw ConfigError("sampled contamination fraction must lie in (0, 0.5), got " +
                          std::to_string(eps));
    }
    const std::size_t m = std::max<std::size_t>(1, static_cast<std::size_t>(
        std::llround(eps * static_cast<double>(n))));
    if (2 * m >= n) {
        throw ConfigError("sampled contamination would replace half the sample or more");
    }

    Rng rng(seed);
    std::vector<double> clean(n);
    for (double& v : clean) v = rng.normal();
    std::vector<double> dirty = clean;
    std::fill(dirty.end() - static_cast<std::ptrdiff_t>(m), dirty.end(), z);

    const auto apply = [&](const std::vector<double>& sample) {
        switch (est) {
        case EstimatorId::Median: return median_copy(sample);
        case EstimatorId::InitialScale: return half_sample_scales(sample, cfg).s0_above;
        case EstimatorId::RefinedScale: return half_sample_scales(sample, cfg).s_above;
        case EstimatorId::Outlyingness:
            return directional_outlyingness(x, half_sample_scales(sample, cfg));
        }
        throw ConfigError("unknown estimator id");
    };
    const double fraction = static_cast<double>(m) / static_cast<double>(n);
    return (apply(dirty) - apply(clean)) / fraction;
}

} // namespace dirout
