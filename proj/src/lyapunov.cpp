#include "pplab/lyapunov.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "pplab/format.hpp"

namespace pplab::lyap {

namespace {

void require_interior(double x, double y) {
    if (!(x > 0.0 && y > 0.0) || !std::isfinite(x) || !std::isfinite(y)) {
        throw std::domain_error("Lyapunov function is defined for x > 0 and y > 0 only");
    }
}

/// u - 1 - ln u, non-negative, zero only at u = 1.
double excess(double u) {
    const double e = u - 1.0;
    return e - std::log1p(e);
}

}  // namespace

double v_value(const LVParams& p, double x, double y) {
    require_interior(x, y);
    const auto eq = lv::equilibrium_point(p);
    return p.d * eq.x * excess(x / eq.x) + p.b * eq.y * excess(y / eq.y);
}

double v_value_literal(const LVParams& p, double x, double y) {
    require_interior(x, y);
    const auto eq = lv::equilibrium_point(p);
    const double constant =
        p.d * (eq.x - eq.x * std::log(eq.x)) + p.b * (eq.y - eq.y * std::log(eq.y));
    return p.d * (x - eq.x * std::log(x)) + p.b * (y - eq.y * std::log(y)) - constant;
}

double v_dot(const LVParams& p, double x, double y) {
    require_interior(x, y);
    const auto eq = lv::equilibrium_point(p);
    return p.a * p.d * (x - eq.x) - p.b * p.c * (y - eq.y) + p.b * p.d * (eq.x * y - eq.y * x);
}

double v_dot_chain_rule(const LVParams& p, double x, double y) {
    require_interior(x, y);
    const auto eq = lv::equilibrium_point(p);
    const double dv_dx = p.d - p.d * eq.x / x;
    const double dv_dy = p.b - p.b * eq.y / y;
    return dv_dx * (p.a * x - p.b * x * y) + dv_dy * (-p.c * y + p.d * x * y);
}

double v_dot_scale(const LVParams& p, double x, double y) {
    require_interior(x, y);
    const auto eq = lv::equilibrium_point(p);
    return std::abs(p.a * p.d * x) + std::abs(p.a * p.d * eq.x) + std::abs(p.b * p.c * y) +
           std::abs(p.b * p.c * eq.y) + std::abs(p.b * p.d * eq.x * y) +
           std::abs(p.b * p.d * eq.y * x);
}

void GridSpec::validate() const {
    if (!(x_min > 0.0 && y_min > 0.0)) throw std::invalid_argument("grid must exclude the axes");
    if (!(x_max > x_min && y_max > y_min)) throw std::invalid_argument("grid bounds are empty");
    if (nx < 2 || ny < 2) throw std::invalid_argument("grid needs at least 2 points per axis");
}

namespace {

std::vector<double> axis(double lo, double hi, int n, bool log_spaced) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double f = static_cast<double>(i) / (n - 1);
        v[static_cast<std::size_t>(i)] =
            log_spaced ? std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo)))
                       : lo + f * (hi - lo);
    }
    v.front() = lo;
    v.back() = hi;
    return v;
}

}  // namespace

std::vector<double> GridSpec::xs() const { return axis(x_min, x_max, nx, log_spaced); }
std::vector<double> GridSpec::ys() const { return axis(y_min, y_max, ny, log_spaced); }

GridSpec default_grid(const LVParams& p) {
    const auto eq = lv::equilibrium_point(p);
    GridSpec g;
    g.x_min = eq.x / 10.0;
    g.x_max = eq.x * 10.0;
    g.y_min = eq.y / 10.0;
    g.y_max = eq.y * 10.0;
    return g;
}

LyapunovReport check_conditions(const LVParams& p, const GridSpec& grid, double epsilon) {
    p.validate();
    grid.validate();

    LyapunovReport r;
    r.params = p;
    r.equilibrium = lv::equilibrium_point(p);
    const auto& eq = r.equilibrium;

    r.condition1_residual = std::abs(v_value(p, eq.x, eq.y));
    r.condition1_zero_at_eq = r.condition1_residual <= kConditionOneTolerance;

    r.condition2_positive = true;
    r.condition2_worst_v = std::numeric_limits<double>::infinity();
    r.condition3_max_vdot = -std::numeric_limits<double>::infinity();
    r.condition3_min_vdot = std::numeric_limits<double>::infinity();
    r.condition3_epsilon = epsilon;

    std::size_t near_zero = 0;
    for (const double y : grid.ys()) {
        for (const double x : grid.xs()) {
            ++r.grid_points;
            const double vd = v_dot(p, x, y);
            r.condition3_max_vdot = std::max(r.condition3_max_vdot, vd);
            r.condition3_min_vdot = std::min(r.condition3_min_vdot, vd);
            if (std::abs(vd) <= epsilon) ++near_zero;

            if (x == eq.x && y == eq.y) continue;
            const double v = v_value(p, x, y);
            if (v < r.condition2_worst_v) {
                r.condition2_worst_v = v;
                r.condition2_worst_x = x;
                r.condition2_worst_y = y;
            }
            if (!(v > 0.0)) r.condition2_positive = false;
        }
    }
    r.condition3_fraction_near_zero =
        static_cast<double>(near_zero) / static_cast<double>(r.grid_points);

    r.dvdot_dx = p.a * p.d - p.b * p.d * eq.y;
    r.dvdot_dy = -p.b * p.c + p.b * p.d * eq.x;
    r.inequality_a_lt_by = p.a < p.b * eq.y;
    r.inequality_c_gt_dx = p.c > p.d * eq.x;
    return r;
}

nlohmann::ordered_json report_to_json(const LyapunovReport& r) {
    nlohmann::ordered_json j;
    j["params"] = {{"a", r.params.a}, {"b", r.params.b}, {"c", r.params.c}, {"d", r.params.d}};
    j["equilibrium"] = {{"x", r.equilibrium.x}, {"y", r.equilibrium.y}};
    j["grid_points"] = r.grid_points;
    j["condition1_zero_at_eq"] = {{"holds", r.condition1_zero_at_eq},
                                  {"residual", r.condition1_residual}};
    j["condition2_positive"] = {{"holds", r.condition2_positive},
                                {"worst_x", r.condition2_worst_x},
                                {"worst_y", r.condition2_worst_y},
                                {"worst_v", r.condition2_worst_v}};
    j["condition3_vdot_sign"] = {{"max_vdot", r.condition3_max_vdot},
                                 {"min_vdot", r.condition3_min_vdot},
                                 {"epsilon", r.condition3_epsilon},
                                 {"fraction_near_zero", r.condition3_fraction_near_zero}};
    j["vdot_partials"] = {{"d_dx", r.dvdot_dx}, {"d_dy", r.dvdot_dy}};
    j["inequality_a_lt_by"] = r.inequality_a_lt_by;
    j["inequality_c_gt_dx"] = r.inequality_c_gt_dx;
    return j;
}

void write_grid_csv(std::ostream& os, const LVParams& p, const GridSpec& grid) {
    p.validate();
    grid.validate();
    os << "# a = " << format_number(p.a) << ", b = " << format_number(p.b)
       << ", c = " << format_number(p.c) << ", d = " << format_number(p.d) << '\n';
    os << "x,y,V,Vdot\n";
    for (const double y : grid.ys()) {
        for (const double x : grid.xs()) {
            os << format_number(x) << ',' << format_number(y) << ','
               << format_number(v_value(p, x, y)) << ',' << format_number(v_dot(p, x, y)) << '\n';
        }
    }
}

AnharmonicMinima anharmonic_minima(double a, double b) {
    if (!std::isfinite(b) || b <= 0.0) throw std::invalid_argument("anharmonic b must be positive");
    if (!std::isfinite(a)) throw std::invalid_argument("anharmonic a must be finite");

    AnharmonicMinima m;
    if (a >= 0.0) {
        m.count = 1;
        m.locations = {0.0};
        m.flat = a == 0.0;
    } else {
        const double r = std::sqrt(-a / b);
        m.count = 2;
        m.locations = {-r, r};
    }
    return m;
}

double anharmonic_potential(double a, double b, double x) noexcept {
    const double x2 = x * x;
    return 0.5 * a * x2 + 0.25 * b * x2 * x2;
}

}  // namespace pplab::lyap
