#include "uogp/combfactor.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "combfactor_layout.hpp"
#include "uogp/special.hpp"
#include "uogp/ultrametric.hpp"

namespace uogp {
namespace {

constexpr double kTolKkt = 1e-10;
constexpr double kTolStall = 1e-7;
constexpr double kPhiDivergence = -1e10;
constexpr int kMaxIter = 300;

/// Dense equality-constrained program: rows of M are constraints (the
/// normalization row last), c the targets.
struct DenseProgram {
  Eigen::MatrixXd M;
  Eigen::VectorXd c;
};

struct DualResult {
  Eigen::VectorXd x;
  Eigen::VectorXd nu;
  double residual = 0.0;
};

/// Entropy maximization via its smooth dual: minimize
///   phi(nu) = sum_l exp(-1 - (M^T nu)_l) + c^T nu,
/// whose gradient c - M x vanishes exactly when the closed-form primal
/// x = exp(-1 - M^T nu) meets the constraints. Safeguarded Newton with
/// Levenberg damping and an Armijo halving search; a divergent phi certifies
/// that no nonnegative solution exists.
DualResult solve_dual(const DenseProgram& prog) {
  const Eigen::Index rows = prog.M.rows();
  const Eigen::Index n = prog.M.cols();

  const auto primal = [&](const Eigen::VectorXd& nu) -> Eigen::VectorXd {
    return (-1.0 - (prog.M.transpose() * nu).array()).exp();
  };
  const auto phi_of = [&](const Eigen::VectorXd& nu) -> double {
    const Eigen::ArrayXd expo = -1.0 - (prog.M.transpose() * nu).array();
    if ((expo > 700.0).any()) return std::numeric_limits<double>::infinity();
    return expo.exp().sum() + prog.c.dot(nu);
  };

  Eigen::VectorXd nu = Eigen::VectorXd::Zero(rows);
  nu(rows - 1) = std::log(static_cast<double>(n)) - 1.0;
  double phi = phi_of(nu);

  double residual = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < kMaxIter; ++iter) {
    const Eigen::VectorXd x = primal(nu);
    const Eigen::VectorXd g = prog.c - prog.M * x;
    residual = g.lpNorm<Eigen::Infinity>();
    if (residual <= kTolKkt) return {x, nu, residual};
    if (phi < kPhiDivergence)
      throw Error(ErrorCode::Infeasible,
                  "entropy program has no nonnegative solution");

    const Eigen::MatrixXd h =
        prog.M * x.asDiagonal() * prog.M.transpose();
    const double trace_scale = h.trace() / static_cast<double>(rows);

    bool moved = false;
    double damp = 0.0;
    for (int attempt = 0; attempt < 12 && !moved; ++attempt) {
      Eigen::MatrixXd hd = h;
      if (damp > 0.0) hd.diagonal().array() += damp;
      const Eigen::LDLT<Eigen::MatrixXd> ldlt(hd);
      Eigen::VectorXd d = ldlt.solve(-g);
      if (d.allFinite()) {
        const double slope = g.dot(d);
        double step = 1.0;
        for (int halving = 0; halving < 60; ++halving, step *= 0.5) {
          const Eigen::VectorXd trial = nu + step * d;
          const double phi_trial = phi_of(trial);
          // Accept on sufficient phi decrease or, once phi differences fall
          // below double rounding, on a clear drop of the KKT residual (the
          // latter preserves the quadratic Newton tail).
          bool accept = phi_trial <= phi + 1e-4 * step * slope &&
                        phi_trial < phi;
          if (!accept && std::isfinite(phi_trial)) {
            const double r_trial =
                (prog.c - prog.M * primal(trial)).lpNorm<Eigen::Infinity>();
            accept = r_trial < 0.9 * residual;
          }
          if (accept) {
            nu = trial;
            phi = phi_trial;
            moved = true;
            break;
          }
        }
      }
      damp = damp == 0.0 ? std::max(1e-12 * trace_scale, 1e-300)
                         : damp * 100.0;
    }
    if (!moved) {
      if (residual < kTolStall) return {primal(nu), nu, residual};
      throw Error(ErrorCode::NotConverged,
                  fmt::format("dual Newton stalled at residual {:.3e} after "
                              "{} iterations",
                              residual, iter));
    }
  }
  const Eigen::VectorXd x = primal(nu);
  residual = (prog.c - prog.M * x).lpNorm<Eigen::Infinity>();
  if (residual < kTolStall) return {x, nu, residual};
  throw Error(ErrorCode::NotConverged,
              fmt::format("dual Newton did not reach tolerance; residual {:.3e}",
                          residual));
}

/// Base-2 vector entropy with the 0 log 0 = 0 convention for the tiny
/// near-boundary values the dual solve can produce.
double entropy_bits(const Eigen::VectorXd& x) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (x(i) > 0.0) h -= x(i) * std::log2(x(i));
  return h;
}

/// Whether vectors j and t (1 <= j < t <= k) agree on coordinates of finest
/// pattern v (bit k - t of v records vector t's agreement with vector 1).
bool agree_fine(int k, std::uint32_t v, int j, int t) {
  const bool t_bit = ((v >> (k - t)) & 1u) != 0;
  if (j == 1) return t_bit;
  return (((v >> (k - j)) & 1u) != 0) == t_bit;
}

DenseProgram pairwise_program(const UltrametricSpec& spec, OverlapMode mode) {
  const int k = spec.k.total();
  const std::int64_t n_leaves = std::int64_t{1} << (k - 1);
  const std::int64_t n_pairs = static_cast<std::int64_t>(k) * (k - 1) / 2;

  DenseProgram prog;
  prog.M = Eigen::MatrixXd::Zero(n_pairs + 1, n_leaves);
  prog.c.resize(n_pairs + 1);
  std::int64_t row = 0;
  for (int t = 2; t <= k; ++t) {
    for (int j = 1; j < t; ++j, ++row) {
      for (std::int64_t v = 0; v < n_leaves; ++v)
        if (agree_fine(k, static_cast<std::uint32_t>(v), j, t))
          prog.M(row, v) = 1.0;
      double target = 0.5 * (1.0 + spec.q.q[level_of_pair(spec, j, t)]);
      if (mode == OverlapMode::literal && t == 3 && spec.s >= 2)
        target = 0.5 * (1.0 + spec.q.q[2]);
      prog.c(row) = target;
    }
  }
  prog.M.row(n_pairs).setOnes();
  prog.c(n_pairs) = 1.0;
  return prog;
}

}  // namespace

namespace detail {

EntropySolution leaf_entropy_solve(const UltrametricSpec& spec,
                                   OverlapMode mode) {
  validate_spec(spec);
  const DenseProgram prog = pairwise_program(spec, mode);
  const DualResult res = solve_dual(prog);
  EntropySolution sol;
  sol.a = res.x;
  sol.h = 1.0 + entropy_bits(res.x);
  sol.dual = res.nu;
  sol.kkt_residual = res.residual;
  return sol;
}

}  // namespace detail

EntropySolution max_entropy_solve(const ConstraintSystem& sys) {
  const int k = sys.k;
  if (k < 4 || sys.A.cols() != system_cols(k) || sys.b.size() != sys.A.rows())
    throw Error(ErrorCode::InvalidArgument,
                "constraint system is not a well-formed recursive tuple system");
  const std::int64_t n_leaves = std::int64_t{1} << (k - 1);

  // Substitute every aggregate segment by the sum of the finest-partition
  // segments it tiles (pattern v at step m covers the contiguous leaf range
  // [v, v + 1) << (k - m)). Splitting rows cancel to empty rows and are
  // dropped; the overlap and block-length rows become the leaf program.
  const Eigen::SparseMatrix<double, Eigen::RowMajor> by_row(sys.A);
  std::vector<Eigen::VectorXd> kept_rows;
  std::vector<double> kept_rhs;
  std::vector<std::int64_t> kept_index;
  for (Eigen::Index r = 0; r < by_row.rows(); ++r) {
    Eigen::VectorXd leaf_row = Eigen::VectorXd::Zero(n_leaves);
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(by_row,
                                                                        r);
         it; ++it) {
      const auto [m, v] = detail::pattern_of_col(k, it.col());
      const std::int64_t lo = static_cast<std::int64_t>(v) << (k - m);
      const std::int64_t hi = static_cast<std::int64_t>(v + 1) << (k - m);
      for (std::int64_t leaf = lo; leaf < hi; ++leaf)
        leaf_row(leaf) += it.value();
    }
    if (leaf_row.lpNorm<Eigen::Infinity>() < 1e-12) {
      if (std::abs(sys.b(r)) > 1e-12)
        throw Error(ErrorCode::Infeasible,
                    fmt::format("row {} reduces to 0 = {:.3g}", r, sys.b(r)));
      continue;
    }
    kept_rows.push_back(std::move(leaf_row));
    kept_rhs.push_back(sys.b(r));
    kept_index.push_back(r);
  }

  DenseProgram prog;
  prog.M.resize(static_cast<Eigen::Index>(kept_rows.size()) + 1, n_leaves);
  prog.c.resize(prog.M.rows());
  for (std::size_t i = 0; i < kept_rows.size(); ++i) {
    prog.M.row(static_cast<Eigen::Index>(i)) = kept_rows[i].transpose();
    prog.c(static_cast<Eigen::Index>(i)) = kept_rhs[i];
  }
  prog.M.row(prog.M.rows() - 1).setOnes();
  prog.c(prog.M.rows() - 1) = 1.0;

  const DualResult res = solve_dual(prog);

  EntropySolution sol;
  sol.a.resize(sys.n_vars);
  for (std::int64_t c = 0; c < sys.A.cols(); ++c) {
    const auto [m, v] = detail::pattern_of_col(k, c);
    const std::int64_t lo = static_cast<std::int64_t>(v) << (k - m);
    const std::int64_t hi = static_cast<std::int64_t>(v + 1) << (k - m);
    sol.a(c) = res.x.segment(lo, hi - lo).sum();
  }
  sol.a(sys.n_vars - 1) = res.x(n_leaves - 2);
  sol.h = 1.0 + entropy_bits(res.x);
  sol.dual = Eigen::VectorXd::Zero(sys.A.rows() + 1);
  for (std::size_t i = 0; i < kept_index.size(); ++i)
    sol.dual(kept_index[i]) = res.nu(static_cast<Eigen::Index>(i));
  sol.dual(sys.A.rows()) = res.nu(res.nu.size() - 1);
  sol.kkt_residual = res.residual;
  return sol;
}

double tuple_entropy(const UltrametricSpec& spec, OverlapMode mode) {
  validate_spec(spec);
  const int k = spec.k.total();
  if (k == 1) return 1.0;
  if (k == 2) return closed_form_h(spec.q.q[1], 2);
  if (k == 3) return closed_form_h(spec.q.q[1], 3);
  overlap_params(spec, mode);  // surfaces InfeasibleTriple before solving
  return detail::leaf_entropy_solve(spec, mode).h;
}

}  // namespace uogp
