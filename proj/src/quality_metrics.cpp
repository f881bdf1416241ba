/* Copyright (c) 2026 the ogopsim authors. All rights reserved.
 * Distributed under the BSD 3-Clause License (see LICENSE file). */

#include "ogop/quality_metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ogop {

void RdCurve::validate() const {
  if (points.size() < 4) {
    throw std::invalid_argument("RD curve needs at least 4 points");
  }
  for (size_t i = 0; i < points.size(); ++i) {
    const RdPoint& p = points[i];
    if (!(p.rate_kbps > 0.0)) {
      throw std::invalid_argument("RD point rates must be positive");
    }
    if (!std::isfinite(p.psnr_y) || !std::isfinite(p.psnr_u) ||
        !std::isfinite(p.psnr_v)) {
      throw std::invalid_argument("RD point PSNRs must be finite");
    }
    if (i > 0) {
      if (!(points[i - 1].rate_kbps < p.rate_kbps)) {
        throw std::invalid_argument("RD point rates must strictly increase");
      }
      if (yuv_psnr(p) < yuv_psnr(points[i - 1])) {
        throw std::invalid_argument(
            "weighted quality must be non-decreasing with rate");
      }
    }
  }
}

double yuv_psnr(double psnr_y, double psnr_u, double psnr_v) {
  return (6.0 * psnr_y + psnr_u + psnr_v) / 8.0;
}

double yuv_psnr(const RdPoint& p) { return yuv_psnr(p.psnr_y, p.psnr_u, p.psnr_v); }

PchipInterpolant::PchipInterpolant(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const size_t n = x_.size();
  if (n < 2 || y_.size() != n) {
    throw std::invalid_argument("interpolant needs >= 2 matching samples");
  }
  for (size_t i = 1; i < n; ++i) {
    if (!(x_[i] > x_[i - 1])) {
      throw std::invalid_argument(
          "interpolation abscissae must strictly increase (degenerate curve)");
    }
  }

  std::vector<double> h(n - 1), delta(n - 1);
  for (size_t i = 0; i + 1 < n; ++i) {
    h[i] = x_[i + 1] - x_[i];
    delta[i] = (y_[i + 1] - y_[i]) / h[i];
  }

  slope_.assign(n, 0.0);
  if (n == 2) {
    slope_[0] = slope_[1] = delta[0];
  } else {
    for (size_t i = 1; i + 1 < n; ++i) {
      if (delta[i - 1] * delta[i] <= 0.0) {
        slope_[i] = 0.0;
      } else {
        const double w1 = 2.0 * h[i] + h[i - 1];
        const double w2 = h[i] + 2.0 * h[i - 1];
        slope_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
      }
    }
    // One-sided three-point endpoint slopes, limited to keep monotonicity.
    auto endpoint = [](double h0, double h1, double d0, double d1) {
      double m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
      if (m * d0 <= 0.0) {
        m = 0.0;
      } else if (d0 * d1 <= 0.0 && std::abs(m) > 3.0 * std::abs(d0)) {
        m = 3.0 * d0;
      }
      return m;
    };
    slope_[0] = endpoint(h[0], h[1], delta[0], delta[1]);
    slope_[n - 1] = endpoint(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
  }
}

namespace {

// Cubic coefficients in the normalized coordinate s = (x - x_i) / h of one
// Hermite segment: y(s) = c0 + c1 s + c2 s^2 + c3 s^3.
struct SegPoly {
  double c0, c1, c2, c3, h;
};

SegPoly segment_poly(double y0, double y1, double m0, double m1, double h) {
  SegPoly p;
  p.h = h;
  p.c0 = y0;
  p.c1 = h * m0;
  p.c2 = -3.0 * y0 - 2.0 * h * m0 + 3.0 * y1 - h * m1;
  p.c3 = 2.0 * y0 + h * m0 - 2.0 * y1 + h * m1;
  return p;
}

double poly_eval(const SegPoly& p, double s) {
  return ((p.c3 * s + p.c2) * s + p.c1) * s + p.c0;
}

// Integral of y dx over s in [a, b] (dx = h ds).
double poly_integral(const SegPoly& p, double a, double b) {
  auto anti = [&](double s) {
    return ((p.c3 / 4.0 * s + p.c2 / 3.0) * s + p.c1 / 2.0) * s * s + p.c0 * s;
  };
  return p.h * (anti(b) - anti(a));
}

}  // namespace

double PchipInterpolant::operator()(double x) const {
  const size_t n = x_.size();
  size_t i = std::upper_bound(x_.begin(), x_.end(), x) - x_.begin();
  if (i == 0) i = 1;
  if (i >= n) i = n - 1;
  const size_t k = i - 1;
  const double h = x_[k + 1] - x_[k];
  const SegPoly p = segment_poly(y_[k], y_[k + 1], slope_[k], slope_[k + 1], h);
  return poly_eval(p, (x - x_[k]) / h);
}

double PchipInterpolant::integrate(double a, double b) const {
  if (b < a) return -integrate(b, a);
  double total = 0.0;
  for (size_t k = 0; k + 1 < x_.size(); ++k) {
    const double lo = std::max(a, x_[k]);
    const double hi = std::min(b, x_[k + 1]);
    if (hi <= lo) continue;
    const double h = x_[k + 1] - x_[k];
    const SegPoly p =
        segment_poly(y_[k], y_[k + 1], slope_[k], slope_[k + 1], h);
    total += poly_integral(p, (lo - x_[k]) / h, (hi - x_[k]) / h);
  }
  return total;
}

namespace {

double component_of(const RdPoint& p, RdComponent comp) {
  switch (comp) {
    case RdComponent::Y: return p.psnr_y;
    case RdComponent::U: return p.psnr_u;
    case RdComponent::V: return p.psnr_v;
    case RdComponent::WeightedYuv: return yuv_psnr(p);
  }
  return 0.0;
}

PchipInterpolant quality_to_lograte(const RdCurve& curve, RdComponent comp) {
  std::vector<double> q, lr;
  q.reserve(curve.points.size());
  lr.reserve(curve.points.size());
  for (const RdPoint& p : curve.points) {
    q.push_back(component_of(p, comp));
    lr.push_back(std::log10(p.rate_kbps));
  }
  return PchipInterpolant(std::move(q), std::move(lr));
}

}  // namespace

double bd_rate(const RdCurve& anchor, const RdCurve& test, RdComponent comp) {
  anchor.validate();
  test.validate();
  const PchipInterpolant fa = quality_to_lograte(anchor, comp);
  const PchipInterpolant ft = quality_to_lograte(test, comp);

  const double lo = std::max(fa.x_min(), ft.x_min());
  const double hi = std::min(fa.x_max(), ft.x_max());
  if (!(hi > lo)) {
    throw NoOverlapError("quality ranges of anchor and test do not overlap");
  }
  const double avg_log_diff = (ft.integrate(lo, hi) - fa.integrate(lo, hi)) / (hi - lo);
  return 100.0 * (std::pow(10.0, avg_log_diff) - 1.0);
}

BdRateTable bd_rate_table(const RdCurve& anchor, const RdCurve& test) {
  BdRateTable t;
  t.y = bd_rate(anchor, test, RdComponent::Y);
  t.u = bd_rate(anchor, test, RdComponent::U);
  t.v = bd_rate(anchor, test, RdComponent::V);
  t.weighted = bd_rate(anchor, test, RdComponent::WeightedYuv);
  return t;
}

void TransitionParams::validate() const {
  for (double v : {up_mean_below_high_db, up_mean_above_low_db,
                   down_mean_below_high_db, down_mean_above_low_db,
                   down_first_rasl_drop_db}) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("transition parameters must be >= 0");
    }
  }
}

namespace {

// Linear ramp of n values with exact mean `target`, confined to [lo, hi]
// with the widest symmetric span that still fits. Values follow
// v_i = low' + (i+1)/(n+1) * (high' - low').
void append_ramp(std::vector<double>& out, int n, double target, double lo,
                 double hi, bool& clamped) {
  if (n <= 0) return;
  double span = 2.0 * std::min(target - lo, hi - target);
  if (span < 0.0) {  // target outside [lo, hi]: flat, clamped series
    span = 0.0;
    clamped = true;
  }
  const double base = target - span / 2.0;
  for (int i = 0; i < n; ++i) {
    double v = base + span * static_cast<double>(i + 1) /
                          static_cast<double>(n + 1);
    if (v < lo) {
      v = lo;
      clamped = true;
    } else if (v > hi) {
      v = hi;
      clamped = true;
    }
    out.push_back(v);
  }
}

}  // namespace

TransitionProfile transition_profile(SwitchDirection direction, double high_db,
                                     double low_db, int n_rasl,
                                     const TransitionParams& params) {
  params.validate();
  if (n_rasl < 0) throw std::invalid_argument("n_rasl must be >= 0");
  if (high_db < low_db) {
    throw std::invalid_argument("high_db must be >= low_db");
  }

  TransitionProfile profile;
  if (n_rasl == 0) return profile;
  profile.values_db.reserve(n_rasl);

  if (direction == SwitchDirection::Up) {
    const double mean = high_db - params.up_mean_below_high_db;
    append_ramp(profile.values_db, n_rasl, mean, low_db, high_db,
                profile.clamped);
    return profile;
  }

  double first = high_db - params.down_first_rasl_drop_db;
  if (first < low_db) {
    first = low_db;
    profile.clamped = true;
  }
  profile.values_db.push_back(first);
  if (n_rasl == 1) return profile;

  const double mean_all = high_db - params.down_mean_below_high_db;
  const double rest_mean =
      (n_rasl * mean_all - first) / static_cast<double>(n_rasl - 1);
  append_ramp(profile.values_db, n_rasl - 1, rest_mean, low_db, high_db,
              profile.clamped);
  return profile;
}

SessionQuality session_quality(
    const std::vector<double>& timeline_db,
    const std::vector<std::vector<int>>& switch_windows) {
  if (timeline_db.empty()) {
    throw std::invalid_argument("timeline must not be empty");
  }
  SessionQuality q;
  double sum = 0.0;
  double mn = std::numeric_limits<double>::infinity();
  for (double v : timeline_db) {
    sum += v;
    mn = std::min(mn, v);
  }
  q.mean_db = sum / static_cast<double>(timeline_db.size());
  q.min_db = mn;
  for (const auto& window : switch_windows) {
    double wsum = 0.0;
    int count = 0;
    for (int idx : window) {
      if (idx < 0 || idx >= static_cast<int>(timeline_db.size())) {
        throw std::invalid_argument("switch window index out of range");
      }
      wsum += timeline_db[idx];
      ++count;
    }
    q.transition_means_db.push_back(count > 0 ? wsum / count : 0.0);
  }
  return q;
}

}  // namespace ogop
