#pragma once

// Independent integration route for BD-rate checks: evaluate the same
// monotone-cubic interpolants on a dense grid and integrate with the
// trapezoid rule. Also hosts the random monotone curve generator shared by
// the unit and acceptance suites.

#include <cmath>
#include <random>
#include <vector>

#include "ogop/quality_metrics.h"

namespace ogop::testing {

inline double oracle_component(const RdPoint& p, RdComponent comp) {
  switch (comp) {
    case RdComponent::Y: return p.psnr_y;
    case RdComponent::U: return p.psnr_u;
    case RdComponent::V: return p.psnr_v;
    case RdComponent::WeightedYuv: return yuv_psnr(p);
  }
  return 0.0;
}

inline double bd_rate_trapezoid(const RdCurve& anchor, const RdCurve& test,
                                RdComponent comp = RdComponent::WeightedYuv,
                                int samples = 20000) {
  auto build = [&](const RdCurve& c) {
    std::vector<double> q, lr;
    for (const RdPoint& p : c.points) {
      q.push_back(oracle_component(p, comp));
      lr.push_back(std::log10(p.rate_kbps));
    }
    return PchipInterpolant(std::move(q), std::move(lr));
  };
  const PchipInterpolant fa = build(anchor);
  const PchipInterpolant ft = build(test);
  const double lo = std::max(fa.x_min(), ft.x_min());
  const double hi = std::min(fa.x_max(), ft.x_max());
  const double h = (hi - lo) / samples;
  double acc = 0.0;
  for (int i = 0; i <= samples; ++i) {
    const double x = lo + i * h;
    const double diff = ft(x) - fa(x);
    acc += (i == 0 || i == samples) ? diff / 2.0 : diff;
  }
  const double avg = acc * h / (hi - lo);
  return 100.0 * (std::pow(10.0, avg) - 1.0);
}

// Random monotone 4-point anchor/test pair with overlapping quality ranges.
inline std::pair<RdCurve, RdCurve> random_curve_pair(std::mt19937& rng) {
  std::uniform_real_distribution<double> q0(30.0, 36.0);
  std::uniform_real_distribution<double> qgap(0.8, 3.0);
  std::uniform_real_distribution<double> r0(500.0, 2000.0);
  std::uniform_real_distribution<double> rratio(1.4, 2.2);
  std::uniform_real_distribution<double> jitter(-0.35, 0.35);
  std::uniform_real_distribution<double> rscale(0.8, 1.25);

  RdCurve anchor;
  double q = q0(rng);
  double r = r0(rng);
  for (int i = 0; i < 4; ++i) {
    anchor.points.push_back({r, q, q + 3.0, q - 3.0});
    q += qgap(rng);
    r *= rratio(rng);
  }
  RdCurve test = anchor;
  for (RdPoint& p : test.points) {
    p.rate_kbps *= rscale(rng);
    const double dq = jitter(rng);
    p.psnr_y += dq;
    p.psnr_u += dq;
    p.psnr_v += dq;
  }
  for (size_t i = 1; i < test.points.size(); ++i) {
    if (test.points[i].psnr_y <= test.points[i - 1].psnr_y + 0.05) {
      const double fix =
          test.points[i - 1].psnr_y + 0.05 - test.points[i].psnr_y;
      test.points[i].psnr_y += fix;
      test.points[i].psnr_u += fix;
      test.points[i].psnr_v += fix;
    }
    if (test.points[i].rate_kbps <= test.points[i - 1].rate_kbps) {
      test.points[i].rate_kbps = test.points[i - 1].rate_kbps * 1.05;
    }
  }
  return {anchor, test};
}

}  // namespace ogop::testing
