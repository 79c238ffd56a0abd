#include "cellsom/pca.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "cellsom/error.hpp"

namespace cellsom {

namespace {

double norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

void fix_sign(std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (std::abs(v[i]) > std::abs(v[best]) + 1e-12) best = i;
  if (v[best] < 0)
    for (double& x : v) x = -x;
}

}  // namespace

std::vector<double> covariance(std::span<const double> samples, std::size_t rows, std::size_t dim,
                               std::vector<double>* mean_out) {
  if (samples.size() != rows * dim) throw DimensionError("covariance: sample buffer size mismatch");
  std::vector<double> mean(dim, 0.0);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t j = 0; j < dim; ++j) mean[j] += samples[r * dim + j];
  for (double& m : mean) m /= static_cast<double>(std::max<std::size_t>(rows, 1));

  std::vector<double> cov(dim * dim, 0.0);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t a = 0; a < dim; ++a) {
      double da = samples[r * dim + a] - mean[a];
      for (std::size_t b = a; b < dim; ++b) cov[a * dim + b] += da * (samples[r * dim + b] - mean[b]);
    }
  double div = rows > 1 ? static_cast<double>(rows - 1) : 1.0;
  for (std::size_t a = 0; a < dim; ++a)
    for (std::size_t b = a; b < dim; ++b) {
      cov[a * dim + b] /= div;
      cov[b * dim + a] = cov[a * dim + b];
    }
  if (mean_out) *mean_out = std::move(mean);
  return cov;
}

std::vector<Eigenpair> top_eigenpairs(std::span<const double> symmetric, std::size_t dim,
                                      std::size_t count, const PowerIterationOptions& opts) {
  if (symmetric.size() != dim * dim) throw DimensionError("top_eigenpairs: matrix is not dim x dim");
  std::vector<double> a(symmetric.begin(), symmetric.end());
  std::vector<Eigenpair> out;
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> unit(0.5, 1.5);

  for (std::size_t k = 0; k < std::min(count, dim); ++k) {
    std::vector<double> v(dim), w(dim);
    for (double& x : v) x = unit(rng);
    // Start orthogonal to the pairs already found so deflation residue
    // cannot pull the iterate back toward them.
    auto orthogonalize = [&](std::vector<double>& x) {
      for (const auto& e : out) {
        double d = 0.0;
        for (std::size_t i = 0; i < dim; ++i) d += x[i] * e.vector[i];
        for (std::size_t i = 0; i < dim; ++i) x[i] -= d * e.vector[i];
      }
    };
    orthogonalize(v);
    double n = norm(v);
    for (double& x : v) x /= n;

    double lambda = 0.0;
    for (int it = 0; it < opts.max_iterations; ++it) {
      for (std::size_t i = 0; i < dim; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < dim; ++j) s += a[i * dim + j] * v[j];
        w[i] = s;
      }
      orthogonalize(w);
      double wn = norm(w);
      if (wn < 1e-300) {
        // Remaining spectrum is zero; any unit vector orthogonal to the
        // found ones is an eigenvector.
        lambda = 0.0;
        break;
      }
      for (double& x : w) x /= wn;
      // Power iteration on a PSD matrix converges without sign flips.
      double delta = 0.0;
      for (std::size_t i = 0; i < dim; ++i) delta = std::max(delta, std::abs(w[i] - v[i]));
      v.swap(w);
      lambda = wn;
      if (delta < opts.tolerance) break;
    }
    // Rayleigh quotient is the more accurate eigenvalue estimate.
    double rq = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < dim; ++j) s += a[i * dim + j] * v[j];
      rq += v[i] * s;
    }
    lambda = std::max(rq, 0.0);
    fix_sign(v);

    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) a[i * dim + j] -= lambda * v[i] * v[j];
    out.push_back({lambda, std::move(v)});
  }
  return out;
}

PrincipalComponents principal_components(std::span<const double> samples, std::size_t rows,
                                         std::size_t dim, std::size_t count,
                                         const PowerIterationOptions& opts) {
  PrincipalComponents pc;
  auto cov = covariance(samples, rows, dim, &pc.mean);
  pc.components = top_eigenpairs(cov, dim, count, opts);
  return pc;
}

}  // namespace cellsom
