#pragma once

// Thin wrappers around the standard normal distribution. All internal code goes
// through these so the underlying implementation stays swappable.

#include <boost/math/distributions/normal.hpp>

namespace dirout {

inline double norm_pdf(double x) {
    static const boost::math::normal_distribution<double> n01;
    return boost::math::pdf(n01, x);
}

inline double norm_cdf(double x) {
    static const boost::math::normal_distribution<double> n01;
    return boost::math::cdf(n01, x);
}

// p must lie in (0, 1).
inline double norm_quantile(double p) {
    static const boost::math::normal_distribution<double> n01;
    return boost::math::quantile(n01, p);
}

// Scale factor that makes the median absolute deviation and the half-sample
// initial scales consistent at the normal model: the 0.75 normal quantile.
inline double mad_normalizer() {
    static const double v = norm_quantile(0.75);
    return v;
}

} // namespace dirout
