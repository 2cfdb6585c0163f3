#include "pplab/ode_lv.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "pplab/format.hpp"

namespace pplab::lv {

void LVParams::validate() const {
    for (double v : {a, b, c, d}) {
        if (!std::isfinite(v) || v <= 0.0) {
            throw std::invalid_argument("Lotka-Volterra coefficients must be finite and positive");
        }
    }
}

Derivative rhs(const LVParams& p, const ODEState& s) noexcept {
    return {p.a * s.x - p.b * s.x * s.y, -p.c * s.y + p.d * s.x * s.y};
}

Point equilibrium_point(const LVParams& p) {
    p.validate();
    return {p.c / p.d, p.a / p.b};
}

Point boundary_solution(const LVParams& p, double x0, double y0, double t) {
    p.validate();
    if (x0 < 0.0 || y0 < 0.0) throw std::invalid_argument("densities must be non-negative");
    if (x0 > 0.0 && y0 > 0.0) {
        throw std::invalid_argument("boundary_solution needs x0 = 0 or y0 = 0");
    }
    if (y0 == 0.0) return {x0 * std::exp(p.a * t), 0.0};
    return {0.0, y0 * std::exp(-p.c * t)};
}

ODEState rk4_step(const LVParams& p, const ODEState& s, double dt) noexcept {
    const auto k1 = rhs(p, s);
    const auto k2 = rhs(p, {s.x + 0.5 * dt * k1.dx, s.y + 0.5 * dt * k1.dy, s.t + 0.5 * dt});
    const auto k3 = rhs(p, {s.x + 0.5 * dt * k2.dx, s.y + 0.5 * dt * k2.dy, s.t + 0.5 * dt});
    const auto k4 = rhs(p, {s.x + dt * k3.dx, s.y + dt * k3.dy, s.t + dt});
    return {s.x + dt / 6.0 * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx),
            s.y + dt / 6.0 * (k1.dy + 2.0 * k2.dy + 2.0 * k3.dy + k4.dy), s.t + dt};
}

namespace {

void check_start(const LVParams& p, const ODEState& initial, double dt) {
    p.validate();
    if (!std::isfinite(dt) || dt <= 0.0) throw std::invalid_argument("dt must be positive");
    if (!(initial.x > 0.0 && initial.y > 0.0)) {
        throw std::invalid_argument("initial state must lie in the open positive quadrant");
    }
}

void check_positive(const ODEState& s) {
    if (!(s.x >= kPositivityFloor && s.y >= kPositivityFloor)) {
        throw IntegrationError("state left the positive quadrant at t = " + format_number(s.t) +
                               " (x = " + format_number(s.x) + ", y = " + format_number(s.y) +
                               "); reduce dt");
    }
}

}  // namespace

Trajectory integrate(const LVParams& p, const ODEState& initial, double dt, double t_end) {
    check_start(p, initial, dt);
    if (!(t_end > initial.t)) throw std::invalid_argument("t_end must exceed the initial time");

    // Tolerate t_end landing a hair past a grid point.
    const auto steps = static_cast<long long>(std::ceil((t_end - initial.t) / dt - 1e-9));

    Trajectory traj{p, dt, {}};
    traj.states.reserve(static_cast<std::size_t>(steps) + 1);
    traj.states.push_back(initial);
    ODEState s = initial;
    for (long long k = 1; k <= steps; ++k) {
        s = rk4_step(p, s, dt);
        s.t = initial.t + static_cast<double>(k) * dt;
        check_positive(s);
        traj.states.push_back(s);
    }
    return traj;
}

ODEState integrate_to(const LVParams& p, const ODEState& initial, double dt, double duration) {
    check_start(p, initial, dt);
    if (!(duration >= 0.0)) throw std::invalid_argument("duration must be non-negative");

    const auto whole = static_cast<long long>(std::floor(duration / dt));
    ODEState s = initial;
    for (long long k = 1; k <= whole; ++k) {
        s = rk4_step(p, s, dt);
        s.t = initial.t + static_cast<double>(k) * dt;
        check_positive(s);
    }
    const double rest = duration - static_cast<double>(whole) * dt;
    if (rest > 0.0) {
        s = rk4_step(p, s, rest);
        check_positive(s);
    }
    s.t = initial.t + duration;
    return s;
}

std::vector<double> poincare_crossings(const Trajectory& traj) {
    const auto eq = equilibrium_point(traj.params);
    std::vector<double> times;
    for (std::size_t k = 1; k < traj.states.size(); ++k) {
        const auto& s0 = traj.states[k - 1];
        const auto& s1 = traj.states[k];
        if (s0.x >= eq.x && s1.x < eq.x) {
            const double frac = (s0.x - eq.x) / (s0.x - s1.x);
            const double y = s0.y + frac * (s1.y - s0.y);
            if (y > eq.y) times.push_back(s0.t + frac * (s1.t - s0.t));
        }
    }
    return times;
}

std::optional<double> find_period(const LVParams& p, const ODEState& initial, double dt,
                                  double t_max) {
    const auto crossings = poincare_crossings(integrate(p, initial, dt, t_max));
    if (crossings.size() < 2) return std::nullopt;
    return crossings[1] - crossings[0];
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    const auto& p = traj.params;
    os << "# a = " << format_number(p.a) << ", b = " << format_number(p.b)
       << ", c = " << format_number(p.c) << ", d = " << format_number(p.d)
       << ", dt = " << format_number(traj.dt) << '\n';
    os << "t,x,y\n";
    for (const auto& s : traj.states) {
        os << format_number(s.t) << ',' << format_number(s.x) << ',' << format_number(s.y) << '\n';
    }
}

}  // namespace pplab::lv
