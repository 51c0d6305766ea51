#pragma once

#include <optional>
#include <string>
#include <vector>

#include "catalysis/common.hpp"

namespace catalysis {

// Parameter set of the nonlinear catalysis model.
struct CatalysisParams {
    double strengthening = 1.0;  // uphill rate toward collaboration (1/min)
    double weakening = 1.0;      // relaxation rate (1/min)
    double p_min = 0.0;          // lower stable probability at I = 0
    double p_mem = 0.5;          // memory state
    double p_max = 1.0;          // upper bound approached at I = i_max
    double i_c = 0.5;            // barrier vanishes at this intensity
    double i_max = 1.0;          // maximum possible intensity
    double prior_scale = 0.0;    // couples prior knowledge K0 into intensity

    // Throws DomainError unless
    // 0 <= p_min < p_mem < p_max <= 1, 0 < i_c < i_max, rates > 0, prior_scale >= 0.
    void validate() const;
};

enum class PotentialRegime { low_i, med_i, high_i };

struct StationaryPoint {
    double p = 0;
    enum class Kind { minimum, maximum } kind = Kind::minimum;
};

// Piecewise-quadratic double-well potential V(P; I).
//
// Up to three interaction regimes, split at i_c and i_cint. Every branch is
// an upward parabola; the two wells sit at the branch-geometry points p_low
// and p_high, the barrier (when I < i_c) at the corner p_med. i_cint is found
// once at construction by bracketing the P-boundary of the medium regime.
class Potential {
  public:
    explicit Potential(const CatalysisParams& params);

    const CatalysisParams& params() const { return params_; }
    double i_cint() const { return i_cint_; }
    PotentialRegime regime(double intensity) const;

    double value(double intensity, double p) const;
    double gradient(double intensity, double p) const;

    // For I < i_c: {lower min, barrier max, upper min}; otherwise the single
    // minimum. Positions are the branch vertices/corners.
    std::vector<StationaryPoint> stationary_points(double intensity) const;

    // Branch geometry at a given intensity.
    double p_low(double intensity) const;
    double p_med(double intensity) const;
    double p_high(double intensity) const;
    double p_int(double intensity) const;

    // Non-empty if the branch ordering p_low <= p_med <= p_high failed
    // anywhere on an intensity grid (not expected for admissible params).
    const std::optional<std::string>& geometry_diagnostic() const {
        return geometry_diagnostic_;
    }

    // Gradient evaluation without the [0,1] domain check, linear beyond the
    // outermost branches; integrator stages may overshoot slightly.
    double gradient_unchecked(double intensity, double p) const;

  private:
    void check_domain(double intensity, double p) const;
    double compute_i_cint() const;

    CatalysisParams params_;
    double i_cint_ = 0;
    std::optional<std::string> geometry_diagnostic_;
};

// One-shot conveniences (construct a Potential internally).
double potential_value(const CatalysisParams& params, double intensity, double p);
double potential_gradient(const CatalysisParams& params, double intensity, double p);
std::vector<StationaryPoint> stationary_points(const CatalysisParams& params,
                                               double intensity);
double compute_i_cint(const CatalysisParams& params);

}  // namespace catalysis
