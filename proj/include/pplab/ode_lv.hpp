#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <vector>

namespace pplab::lv {

/// Coefficients of  x' = a x - b x y,  y' = -c y + d x y.
/// a: prey growth, b: predation, c: predator decay, d: conversion.
struct LVParams {
    double a = 1.0;
    double b = 1.0;
    double c = 1.0;
    double d = 1.0;

    /// Throws std::invalid_argument unless all four are finite and > 0.
    void validate() const;

    friend bool operator==(const LVParams&, const LVParams&) = default;
};

struct ODEState {
    double x = 0.0;  ///< prey density
    double y = 0.0;  ///< predator density
    double t = 0.0;
};

struct Derivative {
    double dx = 0.0;
    double dy = 0.0;
};

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Thrown when an integration leaves the positive quadrant.
class IntegrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// States closer than this to an axis are treated as a step-size failure.
inline constexpr double kPositivityFloor = 1e-12;

struct Trajectory {
    LVParams params;
    double dt = 0.0;
    /// states[k].t == states[0].t + k * dt
    std::vector<ODEState> states;
};

Derivative rhs(const LVParams& p, const ODEState& s) noexcept;

/// Coexistence equilibrium (c/d, a/b).
Point equilibrium_point(const LVParams& p);

/// Closed-form solution from an axis initial condition:
/// (x0 e^{a t}, 0) when y0 = 0, (0, y0 e^{-c t}) when x0 = 0.
/// Throws std::invalid_argument for interior (x0 > 0 and y0 > 0) or negative starts.
Point boundary_solution(const LVParams& p, double x0, double y0, double t);

/// One classical fourth-order Runge-Kutta step. No positivity check, so it
/// also integrates axis starts.
ODEState rk4_step(const LVParams& p, const ODEState& s, double dt) noexcept;

/// Fixed-step RK4 from `initial` until the first grid time >= t_end.
/// Requires dt > 0, t_end > initial.t and a start in the open quadrant.
Trajectory integrate(const LVParams& p, const ODEState& initial, double dt, double t_end);

/// State at exactly initial.t + duration: whole dt steps followed by one
/// shorter final step.
ODEState integrate_to(const LVParams& p, const ODEState& initial, double dt, double duration);

/// Times at which a trajectory crosses the half-line x = x*, y > y*
/// (moving toward smaller x), linearly interpolated between samples.
std::vector<double> poincare_crossings(const Trajectory& traj);

/// Orbit period from the first two Poincaré crossings found within t_max,
/// or nullopt if fewer than two occur.
std::optional<double> find_period(const LVParams& p, const ODEState& initial, double dt,
                                  double t_max);

/// `t,x,y` rows after a `#` header echoing a, b, c, d and dt.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

}  // namespace pplab::lv
