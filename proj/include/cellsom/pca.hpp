#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace cellsom {

struct Eigenpair {
  double value = 0.0;
  std::vector<double> vector;  // unit length
};

/// Leading principal components of `rows` x `dim` row-major samples.
struct PrincipalComponents {
  std::vector<double> mean;
  std::vector<Eigenpair> components;  // descending eigenvalue
};

struct PowerIterationOptions {
  double tolerance = 1e-10;
  int max_iterations = 10000;
};

/// Sample covariance (divisor rows - 1, or 1 when rows == 1) of the
/// mean-centered rows. Returns a dim x dim row-major matrix.
std::vector<double> covariance(std::span<const double> samples, std::size_t rows, std::size_t dim,
                               std::vector<double>* mean_out = nullptr);

/// Top `count` eigenpairs of a symmetric positive semi-definite matrix by
/// power iteration with Hotelling deflation. Each eigenvector's largest-
/// magnitude component is made positive (first such index on ties).
std::vector<Eigenpair> top_eigenpairs(std::span<const double> symmetric, std::size_t dim,
                                      std::size_t count, const PowerIterationOptions& opts = {});

PrincipalComponents principal_components(std::span<const double> samples, std::size_t rows,
                                         std::size_t dim, std::size_t count,
                                         const PowerIterationOptions& opts = {});

}  // namespace cellsom
