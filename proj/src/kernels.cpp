#include "cellsom/kernels.hpp"

#include <cmath>
#include <vector>

#include "cellsom/error.hpp"

namespace cellsom::kernels {

namespace {

inline double sq_dist(const double* a, const double* b, std::size_t dim) {
  double s = 0.0;
  for (std::size_t k = 0; k < dim; ++k) {
    double d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

inline std::size_t argmin(std::span<const double> d) {
  std::size_t best = 0;
  for (std::size_t u = 1; u < d.size(); ++u)
    if (d[u] < d[best]) best = u;
  return best;
}

void check(std::span<const double> codebook, std::size_t dim, std::span<const double> x) {
  if (dim == 0 || codebook.size() % dim != 0 || codebook.empty())
    throw DimensionError("codebook size is not a positive multiple of the input dimension");
  if (x.size() != dim)
    throw DimensionError("input has dimension " + std::to_string(x.size()) + ", codebook expects " +
                         std::to_string(dim));
}

}  // namespace

namespace serial {

void squared_distances(std::span<const double> codebook, std::size_t dim,
                       std::span<const double> x, std::span<double> out) {
  check(codebook, dim, x);
  const std::size_t units = codebook.size() / dim;
  for (std::size_t u = 0; u < units; ++u) out[u] = sq_dist(codebook.data() + u * dim, x.data(), dim);
}

std::size_t best_matching_unit(std::span<const double> codebook, std::size_t dim,
                               std::span<const double> x) {
  std::vector<double> d(codebook.size() / (dim ? dim : 1));
  squared_distances(codebook, dim, x, d);
  return argmin(d);
}

void best_matching_units(std::span<const double> codebook, std::size_t dim,
                         std::span<const double> inputs, std::span<std::size_t> out) {
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = best_matching_unit(codebook, dim, inputs.subspan(i * dim, dim));
}

void neighborhood_update(std::span<double> codebook, std::size_t dim,
                         std::span<const double> lattice_sq_dist, std::span<const double> x,
                         double alpha, double sigma) {
  check(codebook, dim, x);
  const std::size_t units = codebook.size() / dim;
  for (std::size_t u = 0; u < units; ++u) {
    double h = neighborhood_weight(lattice_sq_dist[u], alpha, sigma);
    if (h == 0.0) continue;
    double* m = codebook.data() + u * dim;
    for (std::size_t k = 0; k < dim; ++k) m[k] += h * (x[k] - m[k]);
  }
}

void pair_distances(std::span<const double> codebook, std::size_t dim,
                    std::span<const std::size_t> pair_a, std::span<const std::size_t> pair_b,
                    std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = std::sqrt(sq_dist(codebook.data() + pair_a[i] * dim, codebook.data() + pair_b[i] * dim, dim));
}

}  // namespace serial

namespace parallel {

void squared_distances(std::span<const double> codebook, std::size_t dim,
                       std::span<const double> x, std::span<double> out) {
  check(codebook, dim, x);
  const std::ptrdiff_t units = static_cast<std::ptrdiff_t>(codebook.size() / dim);
#pragma omp parallel for schedule(static) if (codebook.size() >= kParallelThreshold)
  for (std::ptrdiff_t u = 0; u < units; ++u)
    out[static_cast<std::size_t>(u)] = sq_dist(codebook.data() + u * dim, x.data(), dim);
}

std::size_t best_matching_unit(std::span<const double> codebook, std::size_t dim,
                               std::span<const double> x) {
  std::vector<double> d(codebook.size() / (dim ? dim : 1));
  squared_distances(codebook, dim, x, d);
  return argmin(d);
}

void best_matching_units(std::span<const double> codebook, std::size_t dim,
                         std::span<const double> inputs, std::span<std::size_t> out) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(out.size());
  if (n > 0) check(codebook, dim, inputs.subspan(0, dim));
#pragma omp parallel for schedule(static) if (codebook.size() * out.size() >= kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double* x = inputs.data() + i * dim;
    const std::size_t units = codebook.size() / dim;
    std::size_t best = 0;
    double best_d = sq_dist(codebook.data(), x, dim);
    for (std::size_t u = 1; u < units; ++u) {
      double d = sq_dist(codebook.data() + u * dim, x, dim);
      if (d < best_d) {
        best_d = d;
        best = u;
      }
    }
    out[static_cast<std::size_t>(i)] = best;
  }
}

void neighborhood_update(std::span<double> codebook, std::size_t dim,
                         std::span<const double> lattice_sq_dist, std::span<const double> x,
                         double alpha, double sigma) {
  check(codebook, dim, x);
  const std::ptrdiff_t units = static_cast<std::ptrdiff_t>(codebook.size() / dim);
#pragma omp parallel for schedule(static) if (codebook.size() >= kParallelThreshold)
  for (std::ptrdiff_t u = 0; u < units; ++u) {
    double h = neighborhood_weight(lattice_sq_dist[static_cast<std::size_t>(u)], alpha, sigma);
    if (h == 0.0) continue;
    double* m = codebook.data() + u * dim;
    for (std::size_t k = 0; k < dim; ++k) m[k] += h * (x[k] - m[k]);
  }
}

void pair_distances(std::span<const double> codebook, std::size_t dim,
                    std::span<const std::size_t> pair_a, std::span<const std::size_t> pair_b,
                    std::span<double> out) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static) if (out.size() * dim >= kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] = std::sqrt(sq_dist(codebook.data() + pair_a[i] * dim,
                                                         codebook.data() + pair_b[i] * dim, dim));
}

}  // namespace parallel

}  // namespace cellsom::kernels
