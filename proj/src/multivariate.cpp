#include "dirout/multivariate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dirout/errors.hpp"
#include "dirout/rng.hpp"

namespace dirout {

PointCloud::PointCloud(std::size_t n, std::size_t d, std::vector<double> data)
    : n_(n), d_(d), data_(std::move(data)) {
    if (n_ == 0 || d_ == 0) throw InputError("point cloud must have n >= 1 and d >= 1");
    if (data_.size() != n_ * d_)
        throw InputError("point cloud data length does not match n * d");
    for (double v : data_) {
        if (!std::isfinite(v)) throw InputError("point cloud contains a non-finite value");
    }
}

PointCloud PointCloud::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw InputError("point cloud must have n >= 1 and d >= 1");
    const std::size_t d = rows.front().size();
    std::vector<double> flat;
    flat.reserve(rows.size() * d);
    for (const auto& r : rows) {
        if (r.size() != d) throw InputError("point cloud rows have inconsistent lengths");
        flat.insert(flat.end(), r.begin(), r.end());
    }
    return PointCloud(rows.size(), d, std::move(flat));
}

DirectionSet DirectionSet::prefix(std::size_t k) const {
    if (k > count()) throw ConfigError("direction prefix longer than the set");
    DirectionSet out;
    out.dim = dim;
    out.seed = seed;
    out.vectors.assign(vectors.begin(), vectors.begin() + static_cast<std::ptrdiff_t>(k * dim));
    out.point_rows.assign(point_rows.begin(),
                          point_rows.begin() + static_cast<std::ptrdiff_t>(k * dim));
    return out;
}

std::size_t default_direction_count(std::size_t d) {
    return 250 * d;
}

namespace {

// Unit normal of the hyperplane spanned by rows[0..d-1] of the cloud, i.e. a
// unit vector orthogonal to all rows[i] - rows[0]. Computed via Householder QR
// of the d x (d-1) difference matrix; returns false when the sampled points
// are (numerically) affinely dependent.
bool hyperplane_normal(const PointCloud& cloud, std::span<const std::uint32_t> rows,
                       std::span<double> normal) {
    const std::size_t d = cloud.dim();
    if (d == 1) {
        normal[0] = 1.0;
        return true;
    }
    const std::size_t m = d - 1;

    // Column-major d x m difference matrix.
    std::vector<double> a(d * m);
    double frob2 = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        const auto p = cloud.row(rows[k + 1]);
        const auto p0 = cloud.row(rows[0]);
        for (std::size_t i = 0; i < d; ++i) {
            const double v = p[i] - p0[i];
            a[k * d + i] = v;
            frob2 += v * v;
        }
    }
    if (frob2 == 0.0) return false;
    const double rank_tol = 1e-10 * std::sqrt(frob2);

    // Householder vectors, one per column, stored densely (w[k] acts on rows k..d-1).
    std::vector<double> w(d * m, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
        double* col = a.data() + k * d;
        double norm2 = 0.0;
        for (std::size_t i = k; i < d; ++i) norm2 += col[i] * col[i];
        const double norm = std::sqrt(norm2);
        if (norm <= rank_tol) return false; // deficient pivot

        const double alpha = (col[k] >= 0.0) ? -norm : norm;
        double* wk = w.data() + k * d;
        double wnorm2 = 0.0;
        for (std::size_t i = k; i < d; ++i) {
            wk[i] = col[i] - (i == k ? alpha : 0.0);
            wnorm2 += wk[i] * wk[i];
        }
        const double wnorm = std::sqrt(wnorm2);
        if (wnorm == 0.0) return false;
        for (std::size_t i = k; i < d; ++i) wk[i] /= wnorm;

        // Apply the reflector to the remaining columns.
        for (std::size_t j = k + 1; j < m; ++j) {
            double* cj = a.data() + j * d;
            double dot = 0.0;
            for (std::size_t i = k; i < d; ++i) dot += wk[i] * cj[i];
            for (std::size_t i = k; i < d; ++i) cj[i] -= 2.0 * dot * wk[i];
        }
    }

    // normal = Q e_{d-1}: apply reflectors to the last basis vector in reverse.
    std::fill(normal.begin(), normal.end(), 0.0);
    normal[d - 1] = 1.0;
    for (std::size_t kk = m; kk-- > 0;) {
        const double* wk = w.data() + kk * d;
        double dot = 0.0;
        for (std::size_t i = kk; i < d; ++i) dot += wk[i] * normal[i];
        for (std::size_t i = kk; i < d; ++i) normal[i] -= 2.0 * dot * wk[i];
    }

    // Canonical sign: largest-magnitude component positive.
    std::size_t imax = 0;
    for (std::size_t i = 1; i < d; ++i) {
        if (std::abs(normal[i]) > std::abs(normal[imax])) imax = i;
    }
    if (normal[imax] < 0.0) {
        for (double& v : normal) v = -v;
    }
    return true;
}

} // namespace

DirectionSet generate_directions(const PointCloud& cloud, std::size_t count, std::uint64_t seed) {
    const std::size_t n = cloud.size();
    const std::size_t d = cloud.dim();
    if (count == 0) throw ConfigError("direction count must be positive");
    if (d > 1 && n < d + 1)
        throw DegenerateDataError("need at least d + 1 points to sample projection directions");

    DirectionSet out;
    out.dim = d;
    out.seed = seed;
    out.vectors.resize(count * d);
    out.point_rows.resize(count * d);

    constexpr int kMaxTries = 200;
    std::vector<std::uint32_t> rows(d);
    for (std::size_t i = 0; i < count; ++i) {
        // Independent substream per direction: prefixes of larger sets match.
        Rng rng(derive_seed(seed, i));
        bool ok = false;
        for (int attempt = 0; attempt < kMaxTries && !ok; ++attempt) {
            for (std::size_t j = 0; j < d; ++j) {
                for (;;) {
                    const auto r = static_cast<std::uint32_t>(rng.uniform_index(n));
                    if (std::find(rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(j), r) ==
                        rows.begin() + static_cast<std::ptrdiff_t>(j)) {
                        rows[j] = r;
                        break;
                    }
                }
            }
            ok = hyperplane_normal(cloud, rows,
                                   std::span<double>(out.vectors.data() + i * d, d));
        }
        if (!ok)
            throw DegenerateDataError(
                "could not find affinely independent point tuples; data may lie in a "
                "lower-dimensional affine subspace");
        std::copy(rows.begin(), rows.end(), out.point_rows.begin() + static_cast<std::ptrdiff_t>(i * d));
    }
    return out;
}

DirectionSet rebuild_directions(const PointCloud& cloud, const DirectionSet& reference) {
    const std::size_t d = cloud.dim();
    if (d != reference.dim)
        throw ConfigError("direction set dimension does not match the cloud");
    DirectionSet out;
    out.dim = d;
    out.seed = reference.seed;
    out.point_rows = reference.point_rows;
    out.vectors.resize(reference.vectors.size());
    const std::size_t count = reference.count();
    for (std::size_t i = 0; i < count; ++i) {
        std::span<const std::uint32_t> rows(reference.point_rows.data() + i * d, d);
        for (std::uint32_t r : rows) {
            if (r >= cloud.size()) throw InputError("stored direction row index out of range");
        }
        if (!hyperplane_normal(cloud, rows, std::span<double>(out.vectors.data() + i * d, d)))
            throw DegenerateDataError("stored point tuple is affinely dependent on this data");
    }
    return out;
}

namespace {

double dot_product(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

void project_cloud(const PointCloud& cloud, std::span<const double> dir,
                   std::vector<double>& out) {
    const std::size_t n = cloud.size();
    out.resize(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = dot_product(cloud.row(i), dir);
}

} // namespace

DoProjection::DoProjection(const PointCloud& cloud, const DirectionSet& directions,
                           const RhoConfig& cfg)
    : dirs_(directions) {
    if (cloud.dim() != dirs_.dim)
        throw ConfigError("direction set dimension does not match the cloud");
    const std::size_t count = dirs_.count();
    scales_.reserve(count);
    std::vector<double> proj;
    for (std::size_t i = 0; i < count; ++i) {
        project_cloud(cloud, dirs_.direction(i), proj);
        scales_.push_back(half_sample_scales_inplace(proj, cfg));
    }
}

double DoProjection::evaluate(std::span<const double> point, DegeneratePolicy policy) const {
    if (point.size() != dirs_.dim) throw InputError("query point dimension mismatch");
    double best = 0.0;
    const std::size_t count = dirs_.count();
    for (std::size_t i = 0; i < count; ++i) {
        const double p = dot_product(point, dirs_.direction(i));
        const double v = directional_outlyingness(p, scales_[i], policy);
        if (v > best) best = v;
    }
    return best;
}

std::vector<double> DoProjection::evaluate_rows(const PointCloud& cloud,
                                                DegeneratePolicy policy) const {
    std::vector<double> out(cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) out[i] = evaluate(cloud.row(i), policy);
    return out;
}

SdoProjection::SdoProjection(const PointCloud& cloud, const DirectionSet& directions)
    : dirs_(directions) {
    if (cloud.dim() != dirs_.dim)
        throw ConfigError("direction set dimension does not match the cloud");
    const std::size_t count = dirs_.count();
    stats_.reserve(count);
    std::vector<double> proj;
    for (std::size_t i = 0; i < count; ++i) {
        project_cloud(cloud, dirs_.direction(i), proj);
        stats_.push_back(location_mad_inplace(proj));
    }
}

double SdoProjection::evaluate(std::span<const double> point, DegeneratePolicy policy) const {
    if (point.size() != dirs_.dim) throw InputError("query point dimension mismatch");
    double best = 0.0;
    const std::size_t count = dirs_.count();
    for (std::size_t i = 0; i < count; ++i) {
        const double p = dot_product(point, dirs_.direction(i));
        const double v = symmetric_outlyingness(p, stats_[i], policy);
        if (v > best) best = v;
    }
    return best;
}

std::vector<double> SdoProjection::evaluate_rows(const PointCloud& cloud,
                                                 DegeneratePolicy policy) const {
    std::vector<double> out(cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) out[i] = evaluate(cloud.row(i), policy);
    return out;
}

ComponentwiseDo::ComponentwiseDo(const PointCloud& cloud, const RhoConfig& cfg) {
    const std::size_t d = cloud.dim();
    marginals_.reserve(d);
    std::vector<double> column(cloud.size());
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t i = 0; i < cloud.size(); ++i) column[i] = cloud.at(i, j);
        marginals_.push_back(half_sample_scales_inplace(column, cfg));
    }
}

double ComponentwiseDo::evaluate(std::span<const double> point, DegeneratePolicy policy) const {
    if (point.size() != marginals_.size()) throw InputError("query point dimension mismatch");
    double sum2 = 0.0;
    for (std::size_t j = 0; j < marginals_.size(); ++j) {
        const double v = directional_outlyingness(point[j], marginals_[j], policy);
        sum2 += v * v;
    }
    return std::sqrt(sum2);
}

std::vector<double> ComponentwiseDo::evaluate_rows(const PointCloud& cloud,
                                                   DegeneratePolicy policy) const {
    std::vector<double> out(cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) out[i] = evaluate(cloud.row(i), policy);
    return out;
}

std::vector<double> evaluate_do_grid(const DoProjection& index, const Lattice2D& grid,
                                     DegeneratePolicy policy) {
    if (index.directions().dim != 2) throw ConfigError("grid evaluation requires d = 2");
    if (grid.nx < 2 || grid.ny < 2) throw ConfigError("grid needs at least 2 nodes per axis");
    if (!(grid.x1 > grid.x0) || !(grid.y1 > grid.y0))
        throw ConfigError("grid bounds must satisfy x0 < x1 and y0 < y1");
    std::vector<double> out(grid.nx * grid.ny);
    const double dx = (grid.x1 - grid.x0) / static_cast<double>(grid.nx - 1);
    const double dy = (grid.y1 - grid.y0) / static_cast<double>(grid.ny - 1);
    for (std::size_t iy = 0; iy < grid.ny; ++iy) {
        const double y = grid.y0 + dy * static_cast<double>(iy);
        for (std::size_t ix = 0; ix < grid.nx; ++ix) {
            const double x = grid.x0 + dx * static_cast<double>(ix);
            const double p[2] = {x, y};
            out[iy * grid.nx + ix] = index.evaluate(std::span<const double>(p, 2), policy);
        }
    }
    return out;
}

} // namespace dirout
