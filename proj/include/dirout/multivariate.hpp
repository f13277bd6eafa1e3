#pragma once

// Multivariate directional outlyingness via random projections. Directions are
// unit normals of hyperplanes through sampled data points, so the procedure is
// affine invariant: rebuilding the directions from the same sampled rows on
// transformed data reproduces the same outlyingness values.

#include <cstdint>
#include <span>
#include <vector>

#include "dirout/scales.hpp"

namespace dirout {

// Row-major point cloud: n points in d dimensions. Rejects non-finite entries.
class PointCloud {
public:
    PointCloud(std::size_t n, std::size_t d, std::vector<double> data);
    static PointCloud from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t size() const noexcept { return n_; }
    std::size_t dim() const noexcept { return d_; }
    double at(std::size_t i, std::size_t j) const { return data_[i * d_ + j]; }
    std::span<const double> row(std::size_t i) const {
        return std::span<const double>(data_.data() + i * d_, d_);
    }
    const std::vector<double>& data() const noexcept { return data_; }
    std::vector<double>& mutable_data() noexcept { return data_; }

private:
    std::size_t n_;
    std::size_t d_;
    std::vector<double> data_;
};

// A reproducible set of unit directions. `point_rows` records which data rows
// spanned each hyperplane so the logically-same set can be rebuilt on
// transformed data. Direction i is generated from an independent substream of
// `seed`, which makes sets with the same seed nest: the first k directions of
// a larger set equal the k-direction set.
struct DirectionSet {
    std::size_t dim = 0;
    std::uint64_t seed = 0;
    std::vector<double> vectors;            // count x dim, row-major
    std::vector<std::uint32_t> point_rows;  // count x dim

    std::size_t count() const noexcept { return dim == 0 ? 0 : vectors.size() / dim; }
    std::span<const double> direction(std::size_t i) const {
        return std::span<const double>(vectors.data() + i * dim, dim);
    }
    // First k directions as an independent set.
    DirectionSet prefix(std::size_t k) const;
};

// Default direction budget for a d-dimensional cloud.
std::size_t default_direction_count(std::size_t d);

// Sample `count` hyperplane-normal directions. Throws DegenerateDataError if
// the cloud cannot supply affinely independent point tuples.
DirectionSet generate_directions(const PointCloud& cloud, std::size_t count, std::uint64_t seed);

// Recompute direction vectors from the stored sampled rows against `cloud`
// (typically a transformed copy of the original data).
DirectionSet rebuild_directions(const PointCloud& cloud, const DirectionSet& reference);

// Precomputed projection index: half-sample scales of the projected cloud for
// every direction. Query evaluation is O(count * dim) with no allocation.
class DoProjection {
public:
    DoProjection(const PointCloud& cloud, const DirectionSet& directions, const RhoConfig& cfg);

    // Max over directions of the univariate outlyingness of the projection.
    double evaluate(std::span<const double> point,
                    DegeneratePolicy policy = DegeneratePolicy::InfiniteSentinel) const;
    // Outlyingness of every row of `cloud` (rows must match `dim`).
    std::vector<double> evaluate_rows(const PointCloud& cloud,
                                      DegeneratePolicy policy = DegeneratePolicy::InfiniteSentinel) const;

    const DirectionSet& directions() const noexcept { return dirs_; }
    const ScalePair& scales(std::size_t i) const { return scales_[i]; }

private:
    DirectionSet dirs_;
    std::vector<ScalePair> scales_;
};

// Symmetric (median/MAD) projection outlyingness over the same machinery.
class SdoProjection {
public:
    SdoProjection(const PointCloud& cloud, const DirectionSet& directions);
    double evaluate(std::span<const double> point,
                    DegeneratePolicy policy = DegeneratePolicy::InfiniteSentinel) const;
    std::vector<double> evaluate_rows(const PointCloud& cloud,
                                      DegeneratePolicy policy = DegeneratePolicy::InfiniteSentinel) const;
    const DirectionSet& directions() const noexcept { return dirs_; }

private:
    DirectionSet dirs_;
    std::vector<LocationMad> stats_;
};

// Componentwise route: per-coordinate univariate outlyingness combined as a
// Euclidean norm. Not affine invariant, but cheap and direction-free.
class ComponentwiseDo {
public:
    ComponentwiseDo(const PointCloud& cloud, const RhoConfig& cfg);
    double evaluate(std::span<const double> point,
                    DegeneratePolicy policy = DegeneratePolicy::InfiniteSentinel) const;
    std::vector<double> evaluate_rows(const PointCloud& cloud,
                                      DegeneratePolicy policy = DegeneratePolicy::InfiniteSentinel) const;
    const ScalePair& marginal(std::size_t j) const { return marginals_[j]; }

private:
    std::vector<ScalePair> marginals_;
};

// Rectangular evaluation lattice for d = 2 clouds; nx, ny >= 2.
struct Lattice2D {
    double x0, x1;
    std::size_t nx;
    double y0, y1;
    std::size_t ny;
};

// Row-major field, ny rows by nx columns; row iy sits at
// y = y0 + iy * (y1 - y0) / (ny - 1), column ix likewise in x.
std::vector<double> evaluate_do_grid(const DoProjection& index, const Lattice2D& grid,
                                     DegeneratePolicy policy = DegeneratePolicy::InfiniteSentinel);

} // namespace dirout
