#include "uogp/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <utility>

#include <Eigen/Dense>
#include <fmt/format.h>

namespace uogp {
namespace {

/// Golub-Welsch: nodes are the eigenvalues of the symmetric tridiagonal
/// Jacobi matrix with zero diagonal and the given off-diagonal; weight i is
/// mu0 times the squared first component of the i-th normalized eigenvector.
GaussRule golub_welsch(const std::vector<double>& offdiag, double mu0) {
  const int n = static_cast<int>(offdiag.size()) + 1;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) {
    J(i, i + 1) = offdiag[static_cast<std::size_t>(i)];
    J(i + 1, i) = offdiag[static_cast<std::size_t>(i)];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(J);
  if (solver.info() != Eigen::Success) {
    raise(ErrorCode::NotConverged, "quadrature eigensolve failed");
  }
  GaussRule rule;
  rule.x.resize(static_cast<std::size_t>(n));
  rule.w.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    rule.x[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
    const double v0 = solver.eigenvectors()(0, i);
    rule.w[static_cast<std::size_t>(i)] = mu0 * v0 * v0;
  }
  return rule;
}

/// Gauss weight at node x from the Christoffel sum 1 / sum_j p_j(x)^2 over
/// the orthonormal polynomials. The eigenvector route loses the weights of
/// far-out nodes (their first components sink below double precision); the
/// rescaled recurrence keeps full relative accuracy at every node.
double hermite_weight(double x, int n) {
  double pm1 = 0.0;
  double p0 = 1.0;
  double sum = 1.0;
  double log_scale = 0.0;
  for (int j = 0; j + 1 < n; ++j) {
    const double p1 =
        (x * p0 - std::sqrt(static_cast<double>(j)) * pm1) /
        std::sqrt(static_cast<double>(j) + 1.0);
    pm1 = p0;
    p0 = p1;
    if (std::abs(p0) > 1e140) {
      constexpr double f = 1e-140;
      pm1 *= f;
      p0 *= f;
      sum *= f * f;
      log_scale += std::log(1.0 / f);
    }
    sum += p0 * p0;
  }
  // True sum is sum * e^{2 log_scale}; the weight may legitimately underflow.
  return std::exp(-(std::log(sum) + 2.0 * log_scale));
}

template <typename Make>
const GaussRule& cached_rule(std::map<int, GaussRule>& cache, std::mutex& mu,
                             int n, Make make) {
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make(n)).first;
  return it->second;
}

}  // namespace

const GaussRule& gauss_hermite(int n) {
  if (n < 1) raise(ErrorCode::InvalidArgument, "rule size must be positive");
  static std::map<int, GaussRule> cache;
  static std::mutex mu;
  return cached_rule(cache, mu, n, [](int m) {
    std::vector<double> off(static_cast<std::size_t>(m) - 1);
    for (int j = 1; j < m; ++j) {
      off[static_cast<std::size_t>(j) - 1] = std::sqrt(static_cast<double>(j));
    }
    GaussRule rule = golub_welsch(off, 1.0);
    for (int i = 0; i < m; ++i) {
      rule.w[static_cast<std::size_t>(i)] =
          hermite_weight(rule.x[static_cast<std::size_t>(i)], m);
    }
    return rule;
  });
}

const GaussRule& gauss_legendre(int n) {
  if (n < 1) raise(ErrorCode::InvalidArgument, "rule size must be positive");
  static std::map<int, GaussRule> cache;
  static std::mutex mu;
  return cached_rule(cache, mu, n, [](int m) {
    std::vector<double> off(static_cast<std::size_t>(m) - 1);
    for (int j = 1; j < m; ++j) {
      off[static_cast<std::size_t>(j) - 1] =
          j / std::sqrt(4.0 * j * j - 1.0);
    }
    return golub_welsch(off, 2.0);
  });
}

const QuadratureConfig& validate_config(const QuadratureConfig& cfg) {
  if (cfg.nodes_per_level < 16) {
    raise(ErrorCode::InvalidArgument,
          fmt::format("nodes_per_level must be at least 16, got {}",
                      cfg.nodes_per_level));
  }
  if (!(cfg.truncation > 0.0) || !std::isfinite(cfg.truncation)) {
    raise(ErrorCode::InvalidArgument,
          fmt::format("truncation must be positive, got {}", cfg.truncation));
  }
  return cfg;
}

}  // namespace uogp
