#pragma once

// Asymptotic theory oracles for the half-sample scale estimator and the
// outlyingness built on it, evaluated at the standard normal reference model:
// worst-case contamination bias curves (implosion and explosion of the upper
// scale), influence functions of the median, the initial scale, the refined
// scale, and the outlyingness at a fixed point, plus explicit contaminated
// mixture functionals used as independent finite-difference verifiers.

#include <cstdint>
#include <optional>

#include "dirout/rho.hpp"

namespace dirout {

// Reference model hook. Implementations must describe a continuous symmetric
// distribution; only the standard normal is exercised by the test suite.
class ReferenceDistribution {
public:
    virtual ~ReferenceDistribution() = default;
    virtual double pdf(double x) const = 0;
    virtual double cdf(double x) const = 0;
    virtual double quantile(double p) const = 0;
};

class StandardNormal final : public ReferenceDistribution {
public:
    double pdf(double x) const override;
    double cdf(double x) const override;
    double quantile(double p) const override;
};

const StandardNormal& standard_normal();

// One row of an emitted bias curve table.
struct BiasCurvePoint {
    double epsilon = 0.0; // contamination fraction, strictly inside (0, 0.25)
    double value = 0.0;   // scale units
};

// One row of an emitted influence-function table. `x` is only meaningful for
// the outlyingness surface.
struct IfPoint {
    double z = 0.0;
    std::optional<double> x;
    double value = 0.0;
};

// Worst-case downward bias of the upper half-sample scale under an
// eps-fraction of adversarial contamination. Tends to 1 as eps -> 0 and to 0
// at the 25% breakdown fraction. Throws ConfigError outside (0, 0.25).
double implosion_bias(double eps, const RhoConfig& cfg,
                      const ReferenceDistribution& F = standard_normal());

// Worst-case upward bias; same domain, tends to +infinity at breakdown.
double explosion_bias(double eps, const RhoConfig& cfg,
                      const ReferenceDistribution& F = standard_normal());

// Influence functions have jumps (the estimators involve quantiles and an
// indicator); evaluate exactly at a jump with an explicit one-sided limit.
// Auto evaluates the defining formulas literally (sign(0) = 0 conventions).
enum class JumpSide { Auto, Left, Right };

// Influence function of the median at the standard normal: sign(z) / (2 phi(0)).
double if_median(double z, JumpSide side = JumpSide::Auto);

// Influence function of the initial (quantile-based) upper scale at the
// standard normal. Jumps at 0 and at the third quartile.
double if_initial_scale(double z, JumpSide side = JumpSide::Auto);

// Influence function of the rho-refined upper scale at the standard normal;
// bounded in z, with jumps inherited from the initial scale and the median.
double if_refined_scale(double z, const RhoConfig& cfg, JumpSide side = JumpSide::Auto);

// Influence function of the outlyingness of a fixed point x != 0 under
// contamination at z, at the standard normal. Uses the mirror identity for
// x below the median. Throws ConfigError at x = 0.
double if_outlyingness(double x, double z, const RhoConfig& cfg, JumpSide side = JumpSide::Auto);

// The explicitly contaminated model (1 - eps) * N(0,1) + eps * point mass at
// z, with exact cdf and (generalized inverse) quantile function. This is the
// machinery behind the bias-curve attainment checks and the deterministic
// Gateaux difference quotients; it shares no code path with the closed forms.
struct GaussianPointMixture {
    double eps = 0.0;
    double z = 0.0;
    double cdf(double x) const;
    double quantile(double p) const;
};

double mixture_median(const GaussianPointMixture& g);
double mixture_initial_scale(const GaussianPointMixture& g);       // upper side
double mixture_refined_scale(const GaussianPointMixture& g, const RhoConfig& cfg);
// Outlyingness of x under the mixture (either side of its median).
double mixture_outlyingness(double x, const GaussianPointMixture& g, const RhoConfig& cfg);

enum class EstimatorId { Median, InitialScale, RefinedScale, Outlyingness };

// Deterministic Gateaux difference quotient (T(G_eps_z) - T(Phi)) / eps
// through the mixture functionals. `x` applies to Outlyingness only.
double mixture_gateaux(EstimatorId est, double z, double eps, const RhoConfig& cfg,
                       double x = 1.0);

// Sampled sensitivity estimate of the same derivative: an n-point gaussian
// sample with round(n * eps) entries replaced by z, common random numbers.
double empirical_if(EstimatorId est, double z, double eps, std::size_t n, std::uint64_t seed,
                    const RhoConfig& cfg, double x = 1.0);

} // namespace dirout
