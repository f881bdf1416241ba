/* Copyright (c) 2026 the ogopsim authors. All rights reserved.
 * Distributed under the BSD 3-Clause License (see LICENSE file). */

#pragma once

#include <stdexcept>
#include <vector>

namespace ogop {

struct RdPoint {
  double rate_kbps = 0.0;
  double psnr_y = 0.0;
  double psnr_u = 0.0;
  double psnr_v = 0.0;

  bool operator==(const RdPoint&) const = default;
};

/// 4+ rate/distortion samples sorted by rate ascending.
struct RdCurve {
  std::vector<RdPoint> points;

  void validate() const;  // throws std::invalid_argument
  bool operator==(const RdCurve&) const = default;
};

/// 6/1/1-weighted YUV-PSNR.
double yuv_psnr(double psnr_y, double psnr_u, double psnr_v);
double yuv_psnr(const RdPoint& p);

enum class RdComponent { Y, U, V, WeightedYuv };

/// Thrown by bd_rate when the two curves' quality ranges do not intersect.
class NoOverlapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Monotone piecewise-cubic interpolant (Fritsch-Carlson slope limiting).
/// Used on (quality, log10 rate) pairs; exposed so independent integration
/// oracles can evaluate the exact same interpolant.
class PchipInterpolant {
 public:
  PchipInterpolant(std::vector<double> x, std::vector<double> y);

  double operator()(double x) const;
  double integrate(double a, double b) const;  // closed-form segment integrals

  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }

 private:
  std::vector<double> x_, y_, slope_;
};

/// Bjontegaard delta-rate in percent: average bitrate difference of `test`
/// against `anchor` at equal quality, negative when `test` saves bitrate.
double bd_rate(const RdCurve& anchor, const RdCurve& test,
               RdComponent comp = RdComponent::WeightedYuv);

struct BdRateTable {
  double y = 0.0;
  double u = 0.0;
  double v = 0.0;
  double weighted = 0.0;
};

BdRateTable bd_rate_table(const RdCurve& anchor, const RdCurve& test);

/// Quality-transition offsets across a RASL set at a switch; defaults are
/// the measured averages for GOP 32 / IRAP 64.
struct TransitionParams {
  double up_mean_below_high_db = 1.77;
  double up_mean_above_low_db = 2.82;
  double down_mean_below_high_db = 3.72;
  double down_mean_above_low_db = 0.87;
  double down_first_rasl_drop_db = 2.92;

  void validate() const;
  bool operator==(const TransitionParams&) const = default;
};

enum class SwitchDirection { Up, Down };

struct TransitionProfile {
  std::vector<double> values_db;  // presentation order across the RASL set
  bool clamped = false;           // offsets were infeasible for the gap
};

/// Per-picture quality across the n_rasl pictures bridging a switch.
/// Up: a linear ramp whose mean is exactly high - up_mean_below_high_db.
/// Down: first picture at high - down_first_rasl_drop_db, then a rising
/// linear series placed so the overall mean is high - down_mean_below_high_db.
/// All values stay within [low_db, high_db]; when the configured offsets do
/// not fit the gap the profile clamps and reports it.
TransitionProfile transition_profile(SwitchDirection direction, double high_db,
                                     double low_db, int n_rasl,
                                     const TransitionParams& params = {});

struct SessionQuality {
  double mean_db = 0.0;
  double min_db = 0.0;
  std::vector<double> transition_means_db;  // one per switch window
};

/// Arithmetic statistics over a per-picture quality series; windows are
/// index ranges of the series belonging to individual switch transitions.
SessionQuality session_quality(
    const std::vector<double>& timeline_db,
    const std::vector<std::vector<int>>& switch_windows = {});

}  // namespace ogop
