#pragma once

#include <functional>

#include "absim/geometry.hpp"

namespace absim {

// Planar pose plus body-frame velocities. psi is measured counterclockwise
// from east and kept wrapped to (-pi, pi].
struct VesselState {
    double x = 0.0;   // m east
    double y = 0.0;   // m north
    double psi = 0.0; // rad
    double u = 0.0;   // surge, m/s
    double v = 0.0;   // sway, m/s
    double r = 0.0;   // yaw rate, rad/s
};

struct ShipParams {
    double m = 0.0;        // kg
    double m_x = 0.0;      // added mass, surge, kg
    double m_y = 0.0;      // added mass, sway, kg
    double I_z = 0.0;      // yaw inertia, kg m^2
    double J_z = 0.0;      // added yaw inertia, kg m^2
    double x_G = 0.0;      // CG offset from midship, m (positive forward)
    double L = 0.0;        // length, m
    double T_d = 0.0;      // draught, m
    double rho = 1000.0;   // kg/m^3
    double R0_prime = 0.0; // nondimensional resistance, shallow-water corrected
};

// Nondimensional hull derivatives of the beta_m / r' polynomials.
struct HullDerivatives {
    double X_bb = 0.0, X_br = 0.0, X_rr = 0.0, X_bbbb = 0.0;
    double Y_b = 0.0, Y_r = 0.0, Y_bbb = 0.0, Y_bbr = 0.0, Y_brr = 0.0, Y_rrr = 0.0;
    double N_b = 0.0, N_r = 0.0, N_bbb = 0.0, N_bbr = 0.0, N_brr = 0.0, N_rrr = 0.0;
};

struct DerivedKinematics {
    double U = 0.0;       // total speed, m/s
    double beta_m = 0.0;  // drift angle, rad
    double r_prime = 0.0; // nondimensional yaw rate
};

struct Forces {
    double X = 0.0; // N
    double Y = 0.0; // N
    double N = 0.0; // N m
};

struct Accelerations {
    double du = 0.0; // m/s^2
    double dv = 0.0; // m/s^2
    double dr = 0.0; // rad/s^2
};

// Speeds below this are treated as rest: beta_m, r' and the hull polynomial
// are zeroed to avoid the U -> 0 singularity.
constexpr double kSpeedEpsilon = 1e-6;

// U, beta_m = atan2(-v, u), r' = r L / U.
DerivedKinematics derived_kinematics(const VesselState& s, const ShipParams& p);

// Hull force polynomial, dimensionalized with 0.5 rho L T U^2 (L^2 for the moment).
Forces hull_forces(const VesselState& s, const ShipParams& p, const HullDerivatives& d);

// Solves the rigid-body equations for (du, dv, dr). The sway and yaw rows
// couple through x_G m and are solved jointly.
Accelerations rigid_body_accelerations(const Forces& total, const VesselState& s,
                                       const ShipParams& p);

// [dx, dy, dpsi, du, dv, dr]. `current` advects the pose only; u and v stay
// through-water velocities.
struct StateDerivative {
    double dx = 0.0, dy = 0.0, dpsi = 0.0;
    double du = 0.0, dv = 0.0, dr = 0.0;
};
StateDerivative state_derivative(const VesselState& s, const Forces& total,
                                 const ShipParams& p, const Vec2& current = {});

// Total force as a function of the instantaneous state, with actuator
// commands frozen by the caller for the duration of a step.
using ForceModel = std::function<Forces(const VesselState&)>;

// Classical RK4 step; forces are re-evaluated at every stage state.
// Throws NonFiniteState if the result is not finite.
VesselState integrate_step(const VesselState& s, const ForceModel& force, const ShipParams& p,
                           double dt, const Vec2& current = {});

bool is_finite(const VesselState& s);

} // namespace absim
