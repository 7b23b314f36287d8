#pragma once

#include "absim/vessel.hpp"

namespace absim {

struct PropellerParams {
    double D_P = 0.0;   // diameter, m
    double t_ded = 0.0; // thrust deduction
    double n_P = 0.0;   // rev/s, >= 0
    double w_P = 0.2;   // wake fraction
    double k0 = 0.0, k1 = 0.0, k2 = 0.0; // K_T(J) = k0 + k1 J + k2 J^2
};

struct RudderParams {
    double A_R = 0.0;      // area per rudder, m^2
    double Lambda = 0.0;   // aspect ratio
    double x_R = 0.0;      // moment lever, m (positive aft)
    double x_H = 0.0;      // lateral-force acting point lever, m (positive aft)
    double t_R = 0.0;      // steering resistance deduction
    double a_H = 0.0;      // rudder force increase factor
    double gamma_R = 0.4;  // flow straightening
    double l_R_prime = 0.0; // nondimensional lateral-inflow lever
    double eps_ratio = 1.09; // wake ratio at the rudder
    double kappa = 0.5;      // slipstream blending
    double delta_max = 0.0;      // rad
    double delta_rate_max = 0.0; // rad/s
};

struct RudderInflow {
    double U_R = 0.0;     // m/s
    double alpha_R = 0.0; // rad
};

// X_P = (1 - t) rho n^2 D^4 K_T(J), J = u (1 - w_P) / (n D). Zero for a
// stopped propeller.
double propeller_thrust(double u, const PropellerParams& p, double rho);

// Effective inflow speed and angle at the rudder, propeller slipstream
// included. The J -> 0 bollard limit is handled analytically.
RudderInflow rudder_inflow(const VesselState& s, double delta, const PropellerParams& p,
                           const RudderParams& rp, double L);

// Twin-rudder force set; both rudders see the same inflow, so the pair
// contributes 2 F_N. Throws DeltaOutOfRange for |delta| > delta_max.
Forces rudder_forces(const VesselState& s, double delta, const PropellerParams& p,
                     const RudderParams& rp, double rho, double L);

// Rate- and authority-limited steering gear: one step toward the command.
double rudder_servo(double delta_actual, double delta_cmd, double dt, const RudderParams& rp);

} // namespace absim
