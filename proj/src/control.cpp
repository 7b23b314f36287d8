#include "absim/control.hpp"

#include <algorithm>
#include <cmath>

#include "absim/errors.hpp"
#include "absim/geometry.hpp"

namespace absim {

PidResult pid_step(double psi, double psi_d, const PidParams& p, double delta_max) {
    PidResult out;
    out.state = p;

    const double err = wrap_angle(psi - psi_d);
    out.state.integral_acc += err;
    if (p.integral_limit > 0.0) {
        out.state.integral_acc =
            std::clamp(out.state.integral_acc, -p.integral_limit, p.integral_limit);
    }

    double delta = p.K_p * err + p.T_d * (err - p.error_old) + p.inv_T_i * out.state.integral_acc;
    if (delta_max > 0.0) delta = std::clamp(delta, -delta_max, delta_max);

    out.delta_c = delta;
    out.state.error_old = err;
    out.state.psi_d_old = psi_d;
    return out;
}

std::vector<ControlState> nomoto_predict(const ControlState& s,
                                         const std::vector<double>& delta_seq,
                                         const MpcParams& p) {
    for (double d : delta_seq) {
        if (std::abs(d) > p.deltaMAX + 1e-12) {
            throw Error(ErrorCode::DeltaOutOfRange, "|delta| exceeds deltaMAX in prediction");
        }
    }
    std::vector<ControlState> pred;
    pred.reserve(delta_seq.size() + 1);
    pred.push_back(s);
    ControlState cur = s;
    for (double d : delta_seq) {
        ControlState next;
        next.r = cur.r + p.T_s * (p.nomoto_K * d - cur.r) / p.nomoto_T;
        next.psi = cur.psi + p.T_s * cur.r;
        pred.push_back(next);
        cur = next;
    }
    return pred;
}

namespace {

double box_excess(double r, double r_max) {
    if (r_max <= 0.0) return 0.0;
    const double over = std::abs(r) - r_max;
    return over > 0.0 ? over : 0.0;
}

} // namespace

double mpc_cost(const std::vector<ControlState>& pred, const ControlRef& ref,
                const std::vector<double>& delta_seq, const MpcParams& p) {
    double J = 0.0;
    for (std::size_t i = 1; i < pred.size(); ++i) {
        const double re = pred[i].r - ref.r_d;
        const double pe = wrap_angle(pred[i].psi - ref.psi_d);
        J += p.rateGain * re * re + p.headingGain * pe * pe;
        const double over = box_excess(pred[i].r, p.r_max);
        J += p.r_penalty * over * over;
    }
    for (double d : delta_seq) J += p.rudderGain * d * d;
    return J;
}

std::vector<double> mpc_cost_gradient(const ControlState& s, const ControlRef& ref,
                                      const std::vector<double>& delta_seq, const MpcParams& p) {
    const std::size_t n = delta_seq.size();
    const auto pred = nomoto_predict(s, delta_seq, p);

    // Linear dynamics z_{k+1} = A z_k + B d_k with z = (r, psi):
    //   A = [1 - T_s/T, 0; T_s, 1], B = [T_s K / T, 0].
    const double a11 = 1.0 - p.T_s / p.nomoto_T;
    const double a21 = p.T_s;
    const double b1 = p.T_s * p.nomoto_K / p.nomoto_T;

    std::vector<double> grad(n, 0.0);
    double lam_r = 0.0, lam_psi = 0.0;
    for (std::size_t k = n; k >= 1; --k) {
        // Stage-cost gradient at state k.
        const double re = pred[k].r - ref.r_d;
        const double pe = wrap_angle(pred[k].psi - ref.psi_d);
        double gr = 2.0 * p.rateGain * re;
        const double over = box_excess(pred[k].r, p.r_max);
        if (over > 0.0) gr += 2.0 * p.r_penalty * over * (pred[k].r > 0.0 ? 1.0 : -1.0);
        const double gp = 2.0 * p.headingGain * pe;

        lam_r += gr;
        lam_psi += gp;
        grad[k - 1] = 2.0 * p.rudderGain * delta_seq[k - 1] + b1 * lam_r;

        // Pull the adjoint back through A for the next (earlier) stage.
        const double next_r = a11 * lam_r + a21 * lam_psi;
        lam_r = next_r;
        // psi column of A is (0, 1): lam_psi unchanged.
    }
    return grad;
}

MpcSolution mpc_solve(const ControlState& s, const ControlRef& ref,
                      const std::vector<double>& warm_start, const MpcParams& p) {
    const std::size_t n = static_cast<std::size_t>(std::max(p.N, 1));
    auto project = [&](std::vector<double>& d) {
        for (double& v : d) v = std::clamp(v, -p.deltaMAX, p.deltaMAX);
    };
    auto eval = [&](const std::vector<double>& d) {
        return mpc_cost(nomoto_predict(s, d, p), ref, d, p);
    };

    std::vector<double> cur(n, 0.0);
    if (warm_start.size() == n) {
        cur = warm_start;
        project(cur);
    }
    double cur_cost = eval(cur);
    const std::vector<double> zeros(n, 0.0);
    const double zero_cost = eval(zeros);
    if (zero_cost < cur_cost) {
        cur = zeros;
        cur_cost = zero_cost;
    }
    if (!std::isfinite(cur_cost)) {
        throw Error(ErrorCode::NonFiniteCost, "initial MPC cost is not finite");
    }

    double step = 1.0;
    int iters = 0;
    for (; iters < p.max_iter; ++iters) {
        const auto grad = mpc_cost_gradient(s, ref, cur, p);

        // Projected-gradient stationarity residual.
        double residual = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double moved = std::clamp(cur[i] - grad[i], -p.deltaMAX, p.deltaMAX);
            residual = std::max(residual, std::abs(cur[i] - moved));
        }
        if (residual < 1e-8) break;

        // Armijo backtracking on the projected step.
        bool accepted = false;
        for (int bt = 0; bt < 60; ++bt) {
            std::vector<double> trial(n);
            double decrease = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                trial[i] = std::clamp(cur[i] - step * grad[i], -p.deltaMAX, p.deltaMAX);
                decrease += grad[i] * (cur[i] - trial[i]);
            }
            const double trial_cost = eval(trial);
            if (!std::isfinite(trial_cost)) {
                throw Error(ErrorCode::NonFiniteCost, "MPC line search diverged");
            }
            if (trial_cost <= cur_cost - 1e-4 * decrease) {
                cur = std::move(trial);
                cur_cost = trial_cost;
                accepted = true;
                step *= 2.0; // let the step grow back after successes
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break; // step underflow: nothing left to gain
    }

    MpcSolution out;
    out.delta_seq = std::move(cur);
    out.delta_c = out.delta_seq.front();
    out.cost = cur_cost;
    out.iterations = iters;
    return out;
}

NomotoFit fit_nomoto(const std::vector<double>& r_series, const std::vector<double>& delta_series,
                     double dt) {
    // dr/dt = a delta + b r with a = K/T, b = -1/T, least squares over samples.
    const std::size_t n = std::min(r_series.size(), delta_series.size());
    if (n < 3 || dt <= 0.0) return {};
    double sdd = 0.0, sdr = 0.0, srr = 0.0, sdy = 0.0, sry = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double y = (r_series[k + 1] - r_series[k]) / dt;
        const double d = delta_series[k];
        const double r = r_series[k];
        sdd += d * d;
        sdr += d * r;
        srr += r * r;
        sdy += d * y;
        sry += r * y;
    }
    const double det = sdd * srr - sdr * sdr;
    if (std::abs(det) < 1e-12) return {};
    const double a = (sdy * srr - sry * sdr) / det;
    const double b = (sry * sdd - sdy * sdr) / det;
    if (b >= 0.0) return {}; // unstable fit, reject
    NomotoFit fit;
    fit.T = -1.0 / b;
    fit.K = a * fit.T;
    return fit;
}

} // namespace absim
