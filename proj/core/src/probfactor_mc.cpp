#include <atomic>
#include <cmath>
#include <cstdint>
#include <vector>

#include <fmt/format.h>

#include "uogp/parallel.hpp"
#include "uogp/probfactor.hpp"

namespace uogp {
namespace {

/// splitmix64 step: the standard 64-bit finalizer-based generator, used here
/// only to expand a (seed, chunk) pair into xoshiro state.
std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// xoshiro256++ with explicit state seeding; fixed algorithm so streams are
/// identical across platforms and standard-library versions.
class Xoshiro256pp {
 public:
  Xoshiro256pp(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t sm = seed ^ (0xA0761D6478BD642FULL * (stream + 1));
    for (auto& w : s_) w = splitmix64(sm);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform double in (0, 1] (53-bit, never zero so log() is safe).
  double uniform_pos() {
    return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int r) {
    return (x << r) | (x >> (64 - r));
  }
  std::uint64_t s_[4];
};

/// Box-Muller pair; explicit transform keeps the stream identical across
/// toolchains (library normal distributions are implementation-defined).
void normal_pair(Xoshiro256pp& rng, double& z0, double& z1) {
  const double u1 = rng.uniform_pos();
  const double u2 = rng.uniform_pos();
  const double rad = std::sqrt(-2.0 * std::log(u1));
  const double ang = 6.283185307179586476925286766559 * u2;
  z0 = rad * std::cos(ang);
  z1 = rad * std::sin(ang);
}

}  // namespace

McEstimate mc_orthant_prob(const Eigen::MatrixXd& Q, double kappa,
                           std::uint64_t samples, std::uint64_t seed) {
  const auto n = static_cast<int>(Q.rows());
  if (Q.cols() != n || n < 1) {
    raise(ErrorCode::NotPSD, "covariance must be square and non-empty");
  }
  if ((Q - Q.transpose()).cwiseAbs().maxCoeff() > 1e-10) {
    raise(ErrorCode::NotPSD, "covariance is not symmetric");
  }
  if (samples == 0) {
    raise(ErrorCode::InvalidArgument, "sample count must be positive");
  }

  // Symmetric factorization Q = A A^T via the eigendecomposition: tolerant
  // of the semidefinite boundary (overlaps near 1), unlike plain Cholesky.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Q);
  if (eig.info() != Eigen::Success) {
    raise(ErrorCode::NotPSD, "covariance eigendecomposition failed");
  }
  const double lambda_max = eig.eigenvalues().maxCoeff();
  if (eig.eigenvalues().minCoeff() < -1e-10 * std::max(1.0, lambda_max)) {
    raise(ErrorCode::NotPSD,
          fmt::format("covariance has negative eigenvalue {:.3e}",
                      eig.eigenvalues().minCoeff()));
  }
  Eigen::MatrixXd A = eig.eigenvectors() *
                      eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();

  // Fixed-size chunks with per-chunk derived streams: the hit counts are
  // integers, so any summation order (and worker count) gives the same total.
  constexpr std::uint64_t kChunk = 65536;
  const std::uint64_t n_chunks = (samples + kChunk - 1) / kChunk;
  std::atomic<std::uint64_t> hits{0};
  const int half = (n + 1) / 2;

  parallel_for_chunks(static_cast<std::int64_t>(n_chunks), [&](std::int64_t c) {
    Xoshiro256pp rng(seed, static_cast<std::uint64_t>(c));
    const std::uint64_t begin = static_cast<std::uint64_t>(c) * kChunk;
    const std::uint64_t end = std::min(samples, begin + kChunk);
    Eigen::VectorXd z(n);
    std::uint64_t local = 0;
    for (std::uint64_t i = begin; i < end; ++i) {
      for (int p = 0; p < half; ++p) {
        double z0, z1;
        normal_pair(rng, z0, z1);
        z(2 * p) = z0;
        if (2 * p + 1 < n) z(2 * p + 1) = z1;
      }
      const Eigen::VectorXd x = A * z;
      if (x.cwiseAbs().maxCoeff() <= kappa) ++local;
    }
    hits.fetch_add(local, std::memory_order_relaxed);
  });

  McEstimate out;
  out.hits = hits.load();
  out.samples = samples;
  out.p_hat = static_cast<double>(out.hits) / static_cast<double>(samples);
  out.std_error = std::sqrt(out.p_hat * (1.0 - out.p_hat) /
                            static_cast<double>(samples));
  return out;
}

}  // namespace uogp
