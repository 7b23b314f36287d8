#include "absim/actuators.hpp"

#include <algorithm>
#include <cmath>

#include "absim/errors.hpp"

namespace absim {

namespace {
constexpr double kIdleRevs = 1e-9; // below this the propeller is stopped
constexpr double kBollardJ = 1e-6;
} // namespace

double propeller_thrust(double u, const PropellerParams& p, double rho) {
    if (std::abs(p.n_P) < kIdleRevs) return 0.0;
    const double J = u * (1.0 - p.w_P) / (p.n_P * p.D_P);
    const double kt = p.k0 + p.k1 * J + p.k2 * J * J;
    return (1.0 - p.t_ded) * rho * p.n_P * p.n_P * std::pow(p.D_P, 4) * kt;
}

RudderInflow rudder_inflow(const VesselState& s, double delta, const PropellerParams& p,
                           const RudderParams& rp, double L) {
    double u_R;
    if (std::abs(p.n_P) < kIdleRevs) {
        u_R = rp.eps_ratio * s.u * (1.0 - p.w_P);
    } else {
        const double J = s.u * (1.0 - p.w_P) / (p.n_P * p.D_P);
        if (std::abs(J) < kBollardJ) {
            // Analytic J -> 0 limit of the slipstream factor.
            u_R = rp.eps_ratio * rp.kappa * p.n_P * p.D_P * std::sqrt(8.0 * p.k0 / M_PI);
        } else {
            const double kt = p.k0 + p.k1 * J + p.k2 * J * J;
            const double arg = 1.0 + 8.0 * kt / (M_PI * J * J);
            const double slip = arg > 0.0 ? std::sqrt(arg) - 1.0 : -1.0;
            u_R = rp.eps_ratio * s.u * (1.0 - p.w_P) * (1.0 + rp.kappa * slip);
        }
    }
    const double v_R = rp.gamma_R * (s.v + rp.l_R_prime * L * s.r);

    RudderInflow out;
    out.U_R = std::hypot(u_R, v_R);
    out.alpha_R = delta - std::atan2(v_R, u_R);
    return out;
}

Forces rudder_forces(const VesselState& s, double delta, const PropellerParams& p,
                     const RudderParams& rp, double rho, double L) {
    if (std::abs(delta) > rp.delta_max + 1e-12) {
        throw Error(ErrorCode::DeltaOutOfRange, "|delta| exceeds delta_max");
    }
    const RudderInflow in = rudder_inflow(s, delta, p, rp, L);
    const double lift_slope = 6.13 * rp.Lambda / (rp.Lambda + 2.25);
    const double F_N = 0.5 * rho * rp.A_R * in.U_R * in.U_R * lift_slope * std::sin(in.alpha_R);
    const double pair = 2.0 * F_N; // port + starboard, identical inflow

    Forces out;
    out.X = -(1.0 - rp.t_R) * pair * std::sin(delta);
    out.Y = -(1.0 + rp.a_H) * pair * std::cos(delta);
    out.N = -(rp.x_R + rp.a_H * rp.x_H) * pair * std::cos(delta);
    return out;
}

double rudder_servo(double delta_actual, double delta_cmd, double dt, const RudderParams& rp) {
    const double target = std::clamp(delta_cmd, -rp.delta_max, rp.delta_max);
    const double max_move = rp.delta_rate_max * dt;
    const double diff = target - delta_actual;
    if (std::abs(diff) <= max_move) return target;
    return delta_actual + std::copysign(max_move, diff);
}

} // namespace absim
