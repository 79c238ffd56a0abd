#pragma once

// Data-parallel inner loops of the SOM. Each kernel exists twice: a plain
// serial reference and an OpenMP version. Both produce bit-identical results
// (per-unit arithmetic is the same; reductions stay serial), which the unit
// tests assert and the benchmark target compares for speed.

#include <cmath>
#include <cstddef>
#include <span>

namespace cellsom::kernels {

namespace serial {

/// out[u] = ||x - codebook[u]||^2 for every unit u.
void squared_distances(std::span<const double> codebook, std::size_t dim,
                       std::span<const double> x, std::span<double> out);

/// Index of the nearest unit; ties go to the lowest index.
std::size_t best_matching_unit(std::span<const double> codebook, std::size_t dim,
                               std::span<const double> x);

/// BMU of every row of `inputs` (row-major, `dim` columns).
void best_matching_units(std::span<const double> codebook, std::size_t dim,
                         std::span<const double> inputs, std::span<std::size_t> out);

/// m_i += alpha * exp(-d^2(c,i) / (2 sigma^2)) * (x - m_i), where
/// `lattice_sq_dist[i]` holds d^2(c,i). sigma == 0 updates only d == 0.
void neighborhood_update(std::span<double> codebook, std::size_t dim,
                         std::span<const double> lattice_sq_dist, std::span<const double> x,
                         double alpha, double sigma);

/// Euclidean distance between codebook vectors for each (a, b) pair.
void pair_distances(std::span<const double> codebook, std::size_t dim,
                    std::span<const std::size_t> pair_a, std::span<const std::size_t> pair_b,
                    std::span<double> out);

}  // namespace serial

namespace parallel {

void squared_distances(std::span<const double> codebook, std::size_t dim,
                       std::span<const double> x, std::span<double> out);
std::size_t best_matching_unit(std::span<const double> codebook, std::size_t dim,
                               std::span<const double> x);
void best_matching_units(std::span<const double> codebook, std::size_t dim,
                         std::span<const double> inputs, std::span<std::size_t> out);
void neighborhood_update(std::span<double> codebook, std::size_t dim,
                         std::span<const double> lattice_sq_dist, std::span<const double> x,
                         double alpha, double sigma);
void pair_distances(std::span<const double> codebook, std::size_t dim,
                    std::span<const std::size_t> pair_a, std::span<const std::size_t> pair_b,
                    std::span<double> out);

}  // namespace parallel

/// Neighborhood weight h for a squared lattice distance.
inline double neighborhood_weight(double sq_dist, double alpha, double sigma) noexcept {
  if (sigma <= 0.0) return sq_dist == 0.0 ? alpha : 0.0;
  return alpha * std::exp(-sq_dist / (2.0 * sigma * sigma));
}

/// Work below this many multiply-adds stays on one thread.
inline constexpr std::size_t kParallelThreshold = 1 << 14;

}  // namespace cellsom::kernels

