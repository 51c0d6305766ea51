#include "catalysis/potential.hpp"

#include <cmath>
#include <limits>

namespace catalysis {

void CatalysisParams::validate() const {
    if (!(strengthening > 0) || !(weakening > 0)) {
        throw DomainError("rates must be positive");
    }
    if (!(0 <= p_min && p_min < p_mem && p_mem < p_max && p_max <= 1)) {
        throw DomainError("need 0 <= p_min < p_mem < p_max <= 1");
    }
    if (!(0 < i_c && i_c < i_max)) {
        throw DomainError("need 0 < i_c < i_max");
    }
    if (!(prior_scale >= 0)) {
        throw DomainError("prior_scale must be >= 0");
    }
}

namespace {

constexpr double k_intensity_slack = 1e-9;  // tolerance on the I <= i_max check

}  // namespace

Potential::Potential(const CatalysisParams& params) : params_(params) {
    params_.validate();
    i_cint_ = compute_i_cint();

    // Branch-ordering diagnostic (holds algebraically for admissible
    // parameters; checked anyway, see geometry_diagnostic()).
    for (int i = 0; i <= 64; ++i) {
        const double intensity = params_.i_c * i / 64.0;
        const double lo = p_low(intensity), mid = p_med(intensity), hi = p_high(intensity);
        if (!(lo <= mid + 1e-12 && mid <= hi + 1e-12)) {
            geometry_diagnostic_ = "branch ordering violated at I = " +
                                   std::to_string(intensity) + ": p_low=" +
                                   std::to_string(lo) + " p_med=" + std::to_string(mid) +
                                   " p_high=" + std::to_string(hi);
            break;
        }
    }
}

double Potential::p_low(double intensity) const {
    const auto& q = params_;
    return q.p_min + (q.p_mem - q.p_min) * intensity / (4.0 * q.i_c);
}

double Potential::p_med(double intensity) const {
    const auto& q = params_;
    return (q.p_min * (intensity + 2.0 * q.i_c) - q.p_mem * (intensity - 2.0 * q.i_c)) /
           (4.0 * q.i_c);
}

double Potential::p_high(double intensity) const {
    const auto& q = params_;
    return q.p_mem + (q.p_max - q.p_mem) * intensity / q.i_max;
}

double Potential::p_int(double intensity) const {
    const auto& q = params_;
    const double s = q.strengthening, w = q.weakening;
    const double dm = q.p_mem - q.p_min;  // memory-to-min gap
    const double du = q.p_max - q.p_mem;  // max-to-memory gap
    const double I = intensity, ic = q.i_c, im = q.i_max;
    const double den =
        16.0 * s * ic * ((du * I + im * dm) * ic - I * im * dm / 4.0);
    const double num =
        (8.0 * s * (q.p_mem + q.p_min) * du * I +
         6.0 * ((s + w / 3.0) * q.p_mem + 5.0 * (s - w / 5.0) * q.p_min / 3.0) * dm * im) *
            ic * ic -
        4.0 * dm * (s * du * I + ((s + 2.0 * w) * q.p_mem + q.p_min * (s - 2.0 * w)) * im / 2.0) *
            I * ic -
        I * I * im * dm * dm * (s - 2.0 * w);
    return num / den;
}

PotentialRegime Potential::regime(double intensity) const {
    if (intensity <= params_.i_c) return PotentialRegime::low_i;
    if (intensity <= i_cint_) return PotentialRegime::med_i;
    return PotentialRegime::high_i;
}

double Potential::compute_i_cint() const {
    // I_cint = smallest I in (i_c, i_max] where P_int leaves [0,1]; i_max if
    // it never does. P_int(i_c) = p_med(i_c) lies strictly inside (0,1), and
    // sign-change bracketing on a fine grid plus bisection resolves every
    // crossing; a residual check drops brackets that straddle a pole of
    // P_int instead of a root.
    const int grid = 1000;
    const double lo = params_.i_c, hi = params_.i_max;
    double best = hi;
    for (double target : {0.0, 1.0}) {
        double prev_i = lo + (hi - lo) * 1e-9;
        double prev_f = p_int(prev_i) - target;
        for (int g = 1; g <= grid; ++g) {
            const double cur_i = lo + (hi - lo) * g / grid;
            const double cur_f = p_int(cur_i) - target;
            if (std::isfinite(prev_f) && std::isfinite(cur_f) && prev_f * cur_f <= 0) {
                double a = prev_i, b = cur_i, fa = prev_f;
                while (b - a > 1e-10) {
                    const double m = 0.5 * (a + b);
                    const double fm = p_int(m) - target;
                    if (fa * fm <= 0) {
                        b = m;
                    } else {
                        a = m;
                        fa = fm;
                    }
                }
                const double root = 0.5 * (a + b);
                if (std::abs(p_int(root) - target) < 1e-6 && root < best) {
                    best = root;
                }
            }
            prev_i = cur_i;
            prev_f = cur_f;
        }
    }
    return best;
}

void Potential::check_domain(double intensity, double p) const {
    if (!(intensity >= 0) || intensity > params_.i_max * (1.0 + k_intensity_slack)) {
        throw DomainError("intensity outside [0, i_max]");
    }
    if (!(p >= 0.0 && p <= 1.0)) {
        throw DomainError("probability outside [0, 1]");
    }
}

double Potential::value(double intensity, double p) const {
    check_domain(intensity, p);
    const auto& q = params_;
    const double s = q.strengthening, w = q.weakening;
    const double I = intensity, ic = q.i_c, im = q.i_max;
    const double pm = q.p_min, pe = q.p_mem, px = q.p_max;
    const double dm = pe - pm;
    const double du = px - pe;

    // shared S/W parabolas about the upper well
    const double r = (pe - p) * im + du * I;
    const double v_upper_s = s * r * r / (im * im);
    const double v_upper_w = w * r * r / (im * im);

    const PotentialRegime reg = regime(I);
    if (reg == PotentialRegime::high_i) {
        return p <= p_high(I) ? v_upper_s : v_upper_w;
    }

    // low- and medium-regime left parabola (identical expression; the SI
    // 1/i_max^2 prefactor is kept verbatim)
    auto v1 = [&](double pp) {
        const double braced =
            (((8.0 * pp * pp - 16.0 * pp * pm + 2.0 * pe * pe - 4.0 * pe * pm +
               10.0 * pm * pm) * s -
              2.0 * dm * dm * w) * ic * ic -
             4.0 * dm * I * ((-pm / 2.0 - pe / 2.0 + pp) * s - w * dm) * ic +
             I * I * dm * dm * (s - 2.0 * w)) * im * im +
            4.0 * I * s * ic * dm * du * (I + 2.0 * ic) * im +
            8.0 * I * I * s * ic * ic * du * du;
        return braced / (8.0 * ic * ic * im * im);
    };

    if (reg == PotentialRegime::med_i) {
        if (p <= p_int(I)) return v1(p);
        return p <= p_high(I) ? v_upper_s : v_upper_w;
    }

    // low regime: V1, V2, then the upper parabolas
    if (p <= p_low(I)) return v1(p);
    if (p <= p_med(I)) {
        const double braced =
            (((4.0 * s - 4.0 * w) * pe * pe - 8.0 * pm * (s - w) * pe + 4.0 * s * pm * pm +
              16.0 * (p - pm / 2.0) * (p - 3.0 * pm / 2.0) * w) * ic * ic -
             8.0 * dm * ((-s / 2.0 - w) * pe + p * w + pm * s / 2.0) * I * ic +
             I * I * dm * dm * (s - 3.0 * w)) * im * im +
            8.0 * I * s * ic * dm * du * (I + 2.0 * ic) * im +
            16.0 * I * I * s * ic * ic * du * du;
        return braced / (16.0 * ic * ic * im * im);
    }
    return p <= p_high(I) ? v_upper_s : v_upper_w;
}

double Potential::gradient_unchecked(double intensity, double p) const {
    // Each branch is an upward parabola; its derivative is 2*rate*(p - vertex)
    // with vertex p_low (left well) or p_high (right well). Junction points
    // take the right-hand branch.
    const auto& q = params_;
    const double two_s = 2.0 * q.strengthening, two_w = 2.0 * q.weakening;
    const double hi = p_high(intensity);
    switch (regime(intensity)) {
        case PotentialRegime::low_i: {
            const double lo = p_low(intensity);
            if (p < lo) return two_s * (p - lo);
            if (p < p_med(intensity)) return two_w * (p - lo);
            if (p < hi) return two_s * (p - hi);
            return two_w * (p - hi);
        }
        case PotentialRegime::med_i: {
            if (p < p_int(intensity)) return two_s * (p - p_low(intensity));
            if (p < hi) return two_s * (p - hi);
            return two_w * (p - hi);
        }
        default:
            if (p < hi) return two_s * (p - hi);
            return two_w * (p - hi);
    }
}

double Potential::gradient(double intensity, double p) const {
    check_domain(intensity, p);
    return gradient_unchecked(intensity, p);
}

std::vector<StationaryPoint> Potential::stationary_points(double intensity) const {
    if (!(intensity >= 0) || intensity > params_.i_max * (1.0 + k_intensity_slack)) {
        throw DomainError("intensity outside [0, i_max]");
    }
    std::vector<StationaryPoint> out;
    if (intensity < params_.i_c) {
        out.push_back({p_low(intensity), StationaryPoint::Kind::minimum});
        out.push_back({p_med(intensity), StationaryPoint::Kind::maximum});
    }
    out.push_back({p_high(intensity), StationaryPoint::Kind::minimum});
    return out;
}

double potential_value(const CatalysisParams& params, double intensity, double p) {
    return Potential(params).value(intensity, p);
}

double potential_gradient(const CatalysisParams& params, double intensity, double p) {
    return Potential(params).gradient(intensity, p);
}

std::vector<StationaryPoint> stationary_points(const CatalysisParams& params,
                                               double intensity) {
    return Potential(params).stationary_points(intensity);
}

double compute_i_cint(const CatalysisParams& params) {
    return Potential(params).i_cint();
}

}  // namespace catalysis
