#include "absim/vessel.hpp"

#include <cmath>

#include "absim/errors.hpp"

namespace absim {

DerivedKinematics derived_kinematics(const VesselState& s, const ShipParams& p) {
    DerivedKinematics k;
    k.U = std::hypot(s.u, s.v);
    if (k.U < kSpeedEpsilon) return k; // beta_m and r' defined as 0 at rest
    k.beta_m = std::atan2(-s.v, s.u);
    k.r_prime = s.r * p.L / k.U;
    return k;
}

Forces hull_forces(const VesselState& s, const ShipParams& p, const HullDerivatives& d) {
    const DerivedKinematics k = derived_kinematics(s, p);
    if (k.U < kSpeedEpsilon) return {};

    const double b = k.beta_m;
    const double rp = k.r_prime;
    const double cb = std::cos(b);

    const double Xp = -p.R0_prime * cb * cb + d.X_bb * b * b + d.X_br * b * rp +
                      d.X_rr * rp * rp + d.X_bbbb * b * b * b * b;
    const double Yp = d.Y_b * b + d.Y_r * rp + d.Y_bbb * b * b * b + d.Y_bbr * b * b * rp +
                      d.Y_brr * b * rp * rp + d.Y_rrr * rp * rp * rp;
    const double Np = d.N_b * b + d.N_r * rp + d.N_bbb * b * b * b + d.N_bbr * b * b * rp +
                      d.N_brr * b * rp * rp + d.N_rrr * rp * rp * rp;

    const double q = 0.5 * p.rho * p.L * p.T_d * k.U * k.U;
    return {q * Xp, q * Yp, q * p.L * Np};
}

Accelerations rigid_body_accelerations(const Forces& total, const VesselState& s,
                                       const ShipParams& p) {
    // Surge row stands alone.
    const double du =
        (total.X + (p.m + p.m_y) * s.v * s.r + p.x_G * p.m * s.r * s.r) / (p.m + p.m_x);

    // Sway and yaw rows: [m+m_y, xG m; xG m, Iz + xG^2 m + Jz] [dv, dr]' = rhs.
    const double a11 = p.m + p.m_y;
    const double a12 = p.x_G * p.m;
    const double a22 = p.I_z + p.x_G * p.x_G * p.m + p.J_z;
    const double b1 = total.Y + (p.m + p.m_x) * s.u * s.r;
    const double b2 = total.N - p.x_G * p.m * s.u * s.r;

    const double det = a11 * a22 - a12 * a12;
    if (det == 0.0 || !std::isfinite(det)) {
        throw Error(ErrorCode::SingularMassMatrix, "sway/yaw mass matrix is singular");
    }
    const double dv = (b1 * a22 - b2 * a12) / det;
    const double dr = (b2 * a11 - b1 * a12) / det;
    return {du, dv, dr};
}

StateDerivative state_derivative(const VesselState& s, const Forces& total, const ShipParams& p,
                                 const Vec2& current) {
    const Accelerations acc = rigid_body_accelerations(total, s, p);
    StateDerivative d;
    d.dx = s.u * std::cos(s.psi) - s.v * std::sin(s.psi) + current.x;
    d.dy = s.u * std::sin(s.psi) + s.v * std::cos(s.psi) + current.y;
    d.dpsi = s.r;
    d.du = acc.du;
    d.dv = acc.dv;
    d.dr = acc.dr;
    return d;
}

namespace {

VesselState advance(const VesselState& s, const StateDerivative& d, double h) {
    VesselState out = s;
    out.x += d.dx * h;
    out.y += d.dy * h;
    out.psi += d.dpsi * h; // wrapped only at step end
    out.u += d.du * h;
    out.v += d.dv * h;
    out.r += d.dr * h;
    return out;
}

} // namespace

VesselState integrate_step(const VesselState& s, const ForceModel& force, const ShipParams& p,
                           double dt, const Vec2& current) {
    const StateDerivative k1 = state_derivative(s, force(s), p, current);
    const VesselState s2 = advance(s, k1, dt / 2.0);
    const StateDerivative k2 = state_derivative(s2, force(s2), p, current);
    const VesselState s3 = advance(s, k2, dt / 2.0);
    const StateDerivative k3 = state_derivative(s3, force(s3), p, current);
    const VesselState s4 = advance(s, k3, dt);
    const StateDerivative k4 = state_derivative(s4, force(s4), p, current);

    VesselState out = s;
    const double h = dt / 6.0;
    out.x += h * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx);
    out.y += h * (k1.dy + 2.0 * k2.dy + 2.0 * k3.dy + k4.dy);
    out.psi += h * (k1.dpsi + 2.0 * k2.dpsi + 2.0 * k3.dpsi + k4.dpsi);
    out.u += h * (k1.du + 2.0 * k2.du + 2.0 * k3.du + k4.du);
    out.v += h * (k1.dv + 2.0 * k2.dv + 2.0 * k3.dv + k4.dv);
    out.r += h * (k1.dr + 2.0 * k2.dr + 2.0 * k3.dr + k4.dr);
    out.psi = wrap_angle(out.psi);

    if (!is_finite(out)) {
        throw Error(ErrorCode::NonFiniteState, "integration produced a non-finite state");
    }
    return out;
}

bool is_finite(const VesselState& s) {
    return std::isfinite(s.x) && std::isfinite(s.y) && std::isfinite(s.psi) &&
           std::isfinite(s.u) && std::isfinite(s.v) && std::isfinite(s.r);
}

} // namespace absim
