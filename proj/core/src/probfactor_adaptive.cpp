#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <functional>
#include <numeric>
#include <vector>

#include <fmt/format.h>

#include "uogp/parallel.hpp"
#include "uogp/probfactor.hpp"
#include "uogp/special.hpp"

namespace uogp {
namespace detail {
namespace {

/// Contributions this many nats below the running maximum are abandoned
/// (two whole panels in a row must fall below before a scan direction
/// stops, so weight oscillation within a panel cannot trigger it early).
constexpr double kStopGap = 55.0;

/// Composite Gauss-Legendre nodes over [-R, R] with per-node constants
/// log(scaled weight) + r * logV_lower(t) - log(amp sqrt(2 pi)) baked in, so
/// each target point only adds its own Gaussian-kernel quadratic.
struct PanelGrid {
  double lo = 0.0;
  double width = 0.0;
  int n_panels = 0;
  std::vector<double> t;
  std::vector<double> logc;
};

PanelGrid build_panel_grid(double R, double panel_w, double amp, double r,
                           const std::function<double(double)>& log_lower) {
  PanelGrid g;
  g.n_panels = std::max(8, static_cast<int>(std::ceil(2.0 * R / panel_w)));
  if (g.n_panels > 5'000'000) {
    raise(ErrorCode::SizeLimit,
          fmt::format("level quadrature needs {} panels; the overlap "
                      "geometry is too extreme for the resolution requested",
                      g.n_panels));
  }
  g.lo = -R;
  g.width = 2.0 * R / g.n_panels;
  const auto& gl = gauss_legendre(8);
  const double half = 0.5 * g.width;
  const double log_norm = -std::log(amp) - kLogSqrt2Pi;
  g.t.resize(static_cast<std::size_t>(g.n_panels) * 8);
  g.logc.resize(g.t.size());
  for (int p = 0; p < g.n_panels; ++p) {
    const double center = g.lo + (p + 0.5) * g.width;
    for (int j = 0; j < 8; ++j) {
      const std::size_t idx = static_cast<std::size_t>(p) * 8 +
                              static_cast<std::size_t>(j);
      const double tj = center + half * gl.x[static_cast<std::size_t>(j)];
      g.t[idx] = tj;
      g.logc[idx] = std::log(half * gl.w[static_cast<std::size_t>(j)]) +
                    log_norm + r * log_lower(tj);
    }
  }
  return g;
}

/// log integral of N(mu, amp^2) against the tabulated V^r, scanning panels
/// outward from mu with a streaming log-sum-exp; each direction stops at the
/// truncation window or after two panels fall kStopGap below the maximum.
double integrate_panels(const PanelGrid& g, double amp, double trunc,
                        double mu) {
  const double win = amp * trunc;
  const double inv2a2 = 1.0 / (2.0 * amp * amp);
  double m = -std::numeric_limits<double>::infinity();
  double acc = 0.0;

  const int p0 = std::clamp(
      static_cast<int>((mu - g.lo) / g.width), 0, g.n_panels - 1);

  auto scan = [&](int begin, int step) {
    int low_run = 0;
    for (int p = begin; p >= 0 && p < g.n_panels; p += step) {
      const double p_lo = g.lo + p * g.width;
      const double p_hi = p_lo + g.width;
      if (p_lo > mu + win || p_hi < mu - win) break;
      double panel_max = -std::numeric_limits<double>::infinity();
      for (int j = 0; j < 8; ++j) {
        const std::size_t idx = static_cast<std::size_t>(p) * 8 +
                                static_cast<std::size_t>(j);
        const double d = g.t[idx] - mu;
        if (std::abs(d) > win) continue;
        const double term = g.logc[idx] - d * d * inv2a2;
        panel_max = std::max(panel_max, term);
        if (term <= m) {
          acc += std::exp(term - m);
        } else {
          acc = acc * std::exp(m - term) + 1.0;
          m = term;
        }
      }
      if (panel_max < m - kStopGap) {
        if (++low_run >= 2) break;
      } else {
        low_run = 0;
      }
    }
  };
  scan(p0, +1);
  scan(p0 - 1, -1);

  if (!(acc > 0.0) || !std::isfinite(m)) return kLogZero;
  return m + std::log(acc);
}

/// Uniform table of logV on mu >= 0 (V is even), read back with 4-point
/// Lagrange interpolation and reflection at the origin.
struct MuTable {
  double h = 0.0;
  std::vector<double> v;

  double read(double mu) const {
    const double a = std::abs(mu) / h;
    const auto j0 = static_cast<std::ptrdiff_t>(std::floor(a));
    const double u = a - static_cast<double>(j0);
    const auto n = static_cast<std::ptrdiff_t>(v.size());
    if (j0 + 2 >= n) return kLogZero;
    const auto at = [&](std::ptrdiff_t i) {
      return v[static_cast<std::size_t>(i < 0 ? -i : i)];
    };
    const double wm1 = -u * (u - 1.0) * (u - 2.0) / 6.0;
    const double w0 = (u * u - 1.0) * (u - 2.0) / 2.0;
    const double w1 = -u * (u + 1.0) * (u - 2.0) / 2.0;
    const double w2 = u * (u * u - 1.0) / 6.0;
    return wm1 * at(j0 - 1) + w0 * at(j0) + w1 * at(j0 + 1) + w2 * at(j0 + 2);
  }
};

}  // namespace

double log_nested_prob_adaptive(const UltrametricSpec& spec,
                                const QuadratureConfig& cfg) {
  const int s = spec.s;
  const auto& q = spec.q.q;
  const auto& k = spec.k.k;
  const double trunc = cfg.truncation;
  const double scale = 80.0 / cfg.nodes_per_level;
  const double sigma0 = std::sqrt(1.0 - q[1]);
  const double k_total = std::accumulate(k.begin(), k.end(), 0.0);

  std::vector<double> amp(static_cast<std::size_t>(s) + 1, 0.0);
  for (int l = 1; l <= s; ++l) {
    amp[static_cast<std::size_t>(l)] = std::sqrt(q[l] - q[l + 1]);
  }

  // Extent of mu each level must be tabulated on (top-down: the level above
  // reads it shifted by its own kernel width), and the smallest analytic
  // feature width of each level (bottom-up: powering sharpens by sqrt(ratio),
  // the Gaussian kernel then smooths to at least its own width).
  std::vector<double> need(static_cast<std::size_t>(s) + 1, 0.0);
  for (int l = s - 1; l >= 1; --l) {
    need[static_cast<std::size_t>(l)] = need[static_cast<std::size_t>(l) + 1] +
                                        amp[static_cast<std::size_t>(l) + 1] *
                                            trunc +
                                        0.5;
  }
  std::vector<double> feat(static_cast<std::size_t>(s) + 1, sigma0);
  for (int l = 1; l <= s; ++l) {
    const double fb = feat[static_cast<std::size_t>(l) - 1] /
                      std::sqrt(static_cast<double>(spec.k.ratio(l)));
    feat[static_cast<std::size_t>(l)] =
        std::hypot(fb, amp[static_cast<std::size_t>(l)]);
  }

  const double kappa = spec.kappa;
  std::function<double(double)> reader = [sigma0, kappa](double mu) {
    return log_gauss_window(mu, sigma0, kappa);
  };
  std::deque<MuTable> tables;

  for (int l = 1; l <= s; ++l) {
    const double a = amp[static_cast<std::size_t>(l)];
    const double r = spec.k.ratio(l);
    // Panel width sized to the sharpest feature the powered lower level can
    // show under this kernel, never wider than half a kernel sigma.
    const double wf =
        std::max(sigma0 / (a * std::sqrt(k_total)), 1e-3);
    const double panel_w = a * scale * 0.5 * std::min(1.0, wf);
    const double R = need[static_cast<std::size_t>(l)] + a * trunc + 0.25;
    const PanelGrid grid = build_panel_grid(R, panel_w, a, r, reader);

    if (l == s) return integrate_panels(grid, a, trunc, 0.0);

    MuTable tab;
    tab.h = scale * feat[static_cast<std::size_t>(l)] / 64.0;
    const auto n = static_cast<std::size_t>(
                       std::ceil(need[static_cast<std::size_t>(l)] / tab.h)) +
                   6;
    tab.v.resize(n);
    constexpr std::size_t kBlock = 128;
    const auto n_blocks =
        static_cast<std::int64_t>((n + kBlock - 1) / kBlock);
    parallel_for_chunks(n_blocks, [&](std::int64_t blk) {
      const std::size_t begin = static_cast<std::size_t>(blk) * kBlock;
      const std::size_t end = std::min(n, begin + kBlock);
      for (std::size_t i = begin; i < end; ++i) {
        tab.v[i] = std::min(
            0.0, integrate_panels(grid, a, trunc, static_cast<double>(i) *
                                                      tab.h));
      }
    });
    tables.push_back(std::move(tab));
    const MuTable* tp = &tables.back();
    reader = [tp](double mu) { return tp->read(mu); };
  }
  return kLogZero;  // unreachable: the l == s branch always returns
}

}  // namespace detail
}  // namespace uogp
