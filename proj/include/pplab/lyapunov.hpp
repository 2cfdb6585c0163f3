#pragma once

#include <iosfwd>
#include <vector>

#include <nlohmann/json.hpp>

#include "pplab/ode_lv.hpp"

namespace pplab::lyap {

using lv::LVParams;
using lv::Point;

/// V(x, y) = d (x - x* ln x) + b (y - y* ln y) - [d (x* - x* ln x*) + b (y* - y* ln y*)]
/// with (x*, y*) = (c/d, a/b), so that V(x*, y*) = 0.
///
/// Evaluated as d x* h(x/x*) + b y* h(y/y*) with h(u) = u - 1 - ln u, which
/// is the same function without the cancellation near the equilibrium.
/// Throws std::domain_error unless x, y > 0.
double v_value(const LVParams& p, double x, double y);

/// The bracketed formula above, evaluated term by term as written.
double v_value_literal(const LVParams& p, double x, double y);

/// dV/dt along the flow, expanded:
///   a d (x - x*) - b c (y - y*) + b d (x* y - y* x)
double v_dot(const LVParams& p, double x, double y);

/// dV/dt by the chain rule: dV/dx (a x - b x y) + dV/dy (-c y + d x y).
double v_dot_chain_rule(const LVParams& p, double x, double y);

/// Sum of the magnitudes of the terms in the expanded dV/dt. Rounding in
/// either form of dV/dt is relative to this, not to the (zero) result.
double v_dot_scale(const LVParams& p, double x, double y);

/// Rectangular scan grid in the open quadrant. Log spacing puts equal
/// numbers of points on each side of the equilibrium.
struct GridSpec {
    double x_min = 0.1;
    double x_max = 10.0;
    double y_min = 0.1;
    double y_max = 10.0;
    int nx = 200;
    int ny = 200;
    bool log_spaced = true;

    void validate() const;
    std::vector<double> xs() const;
    std::vector<double> ys() const;
};

/// 200 x 200 log-spaced points over [x*/10, 10 x*] x [y*/10, 10 y*].
GridSpec default_grid(const LVParams& p);

struct LyapunovReport {
    LVParams params;
    Point equilibrium;

    bool condition1_zero_at_eq = false;
    double condition1_residual = 0.0;

    bool condition2_positive = false;
    /// Grid point (off the equilibrium) with the smallest V.
    double condition2_worst_x = 0.0;
    double condition2_worst_y = 0.0;
    double condition2_worst_v = 0.0;

    double condition3_max_vdot = 0.0;
    double condition3_min_vdot = 0.0;
    double condition3_epsilon = 0.0;
    /// Share of grid points with |dV/dt| <= epsilon.
    double condition3_fraction_near_zero = 0.0;

    /// Partial derivatives of dV/dt: a d - b d y*  and  -b c + b d x*.
    double dvdot_dx = 0.0;
    double dvdot_dy = 0.0;
    /// The stability inequalities a < b y* and c > d x*, evaluated literally.
    bool inequality_a_lt_by = false;
    bool inequality_c_gt_dx = false;

    std::size_t grid_points = 0;
};

inline constexpr double kVdotEpsilon = 1e-9;
inline constexpr double kConditionOneTolerance = 1e-12;

LyapunovReport check_conditions(const LVParams& p, const GridSpec& grid,
                                double epsilon = kVdotEpsilon);

nlohmann::ordered_json report_to_json(const LyapunovReport& r);

/// `x,y,V,Vdot` for every grid point, after a `#` parameter header.
void write_grid_csv(std::ostream& os, const LVParams& p, const GridSpec& grid);

/// Minima of the anharmonic potential V(x) = a x^2 / 2 + b x^4 / 4.
struct AnharmonicMinima {
    int count = 0;
    std::vector<double> locations;  ///< ascending
    /// a == 0: the single minimum is quartic (V'' = 0 there).
    bool flat = false;
};

/// One minimum at 0 for a >= 0, two at +-sqrt(-a/b) for a < 0.
/// Throws std::invalid_argument unless b > 0.
AnharmonicMinima anharmonic_minima(double a, double b);

double anharmonic_potential(double a, double b, double x) noexcept;

}  // namespace pplab::lyap
