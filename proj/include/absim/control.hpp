#pragma once

#include <vector>

namespace absim {

// Discrete PID on heading error, Kp psi_e + Td (psi_e - psi_e_old) + (1/Ti) sum(psi_e).
// T_i is carried as its inverse so 0 switches the integral term off.
struct PidParams {
    double K_p = 1.0;
    double inv_T_i = 0.0;        // 1/s of steps
    double T_d = 0.0;            // per-step difference gain
    double psi_d_old = 0.0;      // stored reference from the last step
    double error_old = 0.0;      // stored error from the last step
    double integral_acc = 0.0;   // clamped running error sum
    double integral_limit = 0.0; // 0 disables the clamp
};

struct PidResult {
    double delta_c = 0.0;
    PidParams state; // updated copy
};

// One controller step; output saturated to +-delta_max.
PidResult pid_step(double psi, double psi_d, const PidParams& p, double delta_max);

struct MpcParams {
    double T_s = 0.5;      // sampling time, s
    int N = 20;            // prediction horizon, steps
    double headingGain = 10.0;
    double rateGain = 0.0;
    double rudderGain = 1.0;
    int max_iter = 60;
    double deltaMAX = 0.0; // rad
    double nomoto_K = -0.03; // rad/s per rad; sign follows the rudder lever convention
    double nomoto_T = 50.0;  // s
    double r_max = 0.0523598775598299; // permissible-state box on |r|, rad/s
    double r_penalty = 1000.0;         // quadratic penalty weight outside the box
};

struct ControlState {
    double r = 0.0;   // rad/s
    double psi = 0.0; // rad, wrapped
};

struct ControlRef {
    double r_d = 0.0;
    double psi_d = 0.0;
};

// First-order Nomoto prediction, forward Euler at T_s. Returns N+1 states
// starting at s. Throws DeltaOutOfRange if any |delta| > deltaMAX.
std::vector<ControlState> nomoto_predict(const ControlState& s,
                                         const std::vector<double>& delta_seq,
                                         const MpcParams& p);

// Stage cost sum over the horizon; heading errors are wrapped before
// squaring, and the |r| <= r_max box enters as a quadratic penalty.
double mpc_cost(const std::vector<ControlState>& pred, const ControlRef& ref,
                const std::vector<double>& delta_seq, const MpcParams& p);

struct MpcSolution {
    double delta_c = 0.0;           // first control, applied this step
    std::vector<double> delta_seq;  // full optimized sequence (warm start source)
    double cost = 0.0;
    int iterations = 0;
};

// Single-shooting projected-gradient solver with adjoint gradients, box
// projection to +-deltaMAX and Armijo backtracking. Starts from the better
// of the warm start and the zero sequence.
MpcSolution mpc_solve(const ControlState& s, const ControlRef& ref,
                      const std::vector<double>& warm_start, const MpcParams& p);

// Gradient of mpc_cost w.r.t. the control sequence via the adjoint
// recursion; exposed for verification against finite differences.
std::vector<double> mpc_cost_gradient(const ControlState& s, const ControlRef& ref,
                                      const std::vector<double>& delta_seq, const MpcParams& p);

// Least-squares (K, T) fit of dr = (K delta - r) / T from a recorded
// turning test sampled at dt.
struct NomotoFit {
    double K = 0.0;
    double T = 0.0;
};
NomotoFit fit_nomoto(const std::vector<double>& r_series, const std::vector<double>& delta_series,
                     double dt);

} // namespace absim
