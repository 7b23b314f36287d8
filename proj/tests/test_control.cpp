#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "absim/control.hpp"
#include "absim/errors.hpp"
#include "absim/geometry.hpp"

using namespace absim;

namespace {

MpcParams mpc_defaults() {
    MpcParams p;
    p.T_s = 1.0;
    p.N = 10;
    p.headingGain = 5.0;
    p.rateGain = 1.0;
    p.rudderGain = 0.5;
    p.max_iter = 200;
    p.deltaMAX = 35.0 * M_PI / 180.0;
    p.nomoto_K = 0.2;
    p.nomoto_T = 10.0;
    p.r_max = 0.0;      // box penalty off unless a test enables it
    p.r_penalty = 0.0;
    return p;
}

// Plain re-summation of the cost, coded independently of mpc_cost.
double cost_oracle(const std::vector<ControlState>& pred, const ControlRef& ref,
                   const std::vector<double>& d, const MpcParams& p) {
    double J = 0.0;
    for (std::size_t i = 1; i < pred.size(); ++i) {
        const double er = pred[i].r - ref.r_d;
        double ep = std::remainder(pred[i].psi - ref.psi_d, 2.0 * M_PI);
        if (ep <= -M_PI) ep += 2.0 * M_PI;
        J += p.rateGain * er * er + p.headingGain * ep * ep;
        if (p.r_max > 0.0) {
            const double over = std::max(0.0, std::abs(pred[i].r) - p.r_max);
            J += p.r_penalty * over * over;
        }
    }
    for (double v : d) J += p.rudderGain * v * v;
    return J;
}

} // namespace

TEST_CASE("PID pure proportional") {
    PidParams p;
    p.K_p = 2.0;
    p.T_d = 0.0;
    p.inv_T_i = 0.0;
    const auto res = pid_step(0.1, 0.0, p, 0.0);
    CHECK(res.delta_c == doctest::Approx(0.2).epsilon(1e-14));
}

TEST_CASE("PID zero error on the first step") {
    PidParams p;
    p.K_p = 3.0;
    p.T_d = 5.0;
    p.inv_T_i = 0.0;
    const auto res = pid_step(0.7, 0.7, p, 0.0);
    CHECK(res.delta_c == 0.0);
}

TEST_CASE("PID integral accumulation, hand-iterated sequence") {
    // Constant error 0.1, K_p = 1, T_d = 0, 1/T_i = 0.1:
    // delta sequence 0.11, 0.12, 0.13.
    PidParams p;
    p.K_p = 1.0;
    p.T_d = 0.0;
    p.inv_T_i = 0.1;
    auto r1 = pid_step(0.1, 0.0, p, 0.0);
    CHECK(r1.delta_c == doctest::Approx(0.11).epsilon(1e-12));
    auto r2 = pid_step(0.1, 0.0, r1.state, 0.0);
    CHECK(r2.delta_c == doctest::Approx(0.12).epsilon(1e-12));
    auto r3 = pid_step(0.1, 0.0, r2.state, 0.0);
    CHECK(r3.delta_c == doctest::Approx(0.13).epsilon(1e-12));
}

TEST_CASE("PID derivative term uses the stored previous error") {
    PidParams p;
    p.K_p = 1.0;
    p.T_d = 2.0;
    p.inv_T_i = 0.0;
    auto r1 = pid_step(0.1, 0.0, p, 0.0); // error_old was 0
    CHECK(r1.delta_c == doctest::Approx(0.1 + 2.0 * 0.1).epsilon(1e-12));
    auto r2 = pid_step(0.15, 0.0, r1.state, 0.0);
    CHECK(r2.delta_c == doctest::Approx(0.15 + 2.0 * 0.05).epsilon(1e-12));
    CHECK(r2.state.psi_d_old == 0.0);
    CHECK(r2.state.error_old == doctest::Approx(0.15));
}

TEST_CASE("PID wraps the heading error through pi") {
    PidParams p;
    p.K_p = 1.0;
    const auto res = pid_step(3.1, -3.1, p, 0.0);
    CHECK(std::abs(res.delta_c) == doctest::Approx(2.0 * M_PI - 6.2).epsilon(1e-9));
    CHECK(std::abs(res.delta_c) < 0.1); // never ~6.2
}

TEST_CASE("PID output is odd in the error with zero integral state") {
    PidParams p;
    p.K_p = 1.7;
    p.T_d = 3.0;
    p.inv_T_i = 0.0;
    for (double e : {0.05, 0.3, 1.0, 2.5}) {
        const auto pos = pid_step(e, 0.0, p, 0.0);
        const auto neg = pid_step(-e, 0.0, p, 0.0);
        CHECK(pos.delta_c == doctest::Approx(-neg.delta_c).epsilon(1e-14));
    }
}

TEST_CASE("PID saturation and anti-windup clamp") {
    PidParams p;
    p.K_p = 10.0;
    p.inv_T_i = 0.5;
    p.integral_limit = 1.0;
    PidParams state = p;
    for (int i = 0; i < 50; ++i) {
        const auto res = pid_step(1.0, 0.0, state, 0.3);
        CHECK(std::abs(res.delta_c) <= 0.3);
        state = res.state;
        CHECK(std::abs(state.integral_acc) <= 1.0);
    }
}

TEST_CASE("Nomoto prediction: zero rudder keeps heading, constant rudder converges") {
    const MpcParams p = mpc_defaults();

    const auto still = nomoto_predict({0.0, 0.5}, std::vector<double>(10, 0.0), p);
    for (const auto& s : still) {
        CHECK(s.psi == doctest::Approx(0.5));
        CHECK(s.r == 0.0);
    }

    // Constant rudder: r converges to K * delta.
    const double dbar = 0.2;
    const auto pred = nomoto_predict({0.0, 0.0}, std::vector<double>(400, dbar), p);
    CHECK(pred.back().r == doctest::Approx(p.nomoto_K * dbar).epsilon(1e-9));
}

TEST_CASE("Nomoto single Euler step hand value") {
    MpcParams p = mpc_defaults();
    p.T_s = 1.0;
    p.nomoto_K = 0.2;
    p.nomoto_T = 10.0;
    const auto pred = nomoto_predict({0.02, 0.0}, {0.1}, p);
    REQUIRE(pred.size() == 2);
    // r1 = r0 + T_s (K d0 - r0)/T = 0.02 + (0.02 - 0.02)/10 = 0.02
    CHECK(pred[1].r == doctest::Approx(0.02).epsilon(1e-14));
    // psi1 = psi0 + T_s r0
    CHECK(pred[1].psi == doctest::Approx(0.02).epsilon(1e-14));
}

TEST_CASE("nomoto_predict rejects out-of-range rudder sequences") {
    const MpcParams p = mpc_defaults();
    CHECK_THROWS_AS(nomoto_predict({0, 0}, {p.deltaMAX + 0.1}, p), Error);
}

TEST_CASE("mpc_cost literal cases and duplicate-implementation oracle") {
    MpcParams p = mpc_defaults();

    // Prediction equal to the reference with zero rudder: J = 0.
    const ControlRef ref{0.0, 0.3};
    std::vector<ControlState> pred(4, {0.0, 0.3});
    CHECK(mpc_cost(pred, ref, {0, 0, 0}, p) == 0.0);

    // Single step, Q = diag(0, 1), p = 0, psi error 0.1 -> J = 0.01.
    MpcParams q = mpc_defaults();
    q.rateGain = 0.0;
    q.headingGain = 1.0;
    q.rudderGain = 0.0;
    CHECK(mpc_cost({{0, 0}, {0, 0.1}}, {0.0, 0.0}, {0.0}, q) == doctest::Approx(0.01).epsilon(1e-14));

    std::mt19937 rng(5150);
    std::uniform_real_distribution<double> ang(-3.0, 3.0);
    std::uniform_real_distribution<double> rate(-0.2, 0.2);
    std::uniform_real_distribution<double> rud(-0.6, 0.6);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<ControlState> states;
        std::vector<double> deltas;
        for (int i = 0; i <= 6; ++i) states.push_back({rate(rng), ang(rng)});
        for (int i = 0; i < 6; ++i) deltas.push_back(rud(rng));
        const ControlRef rr{rate(rng), ang(rng)};
        const double a = mpc_cost(states, rr, deltas, p);
        const double b = cost_oracle(states, rr, deltas, p);
        CHECK(a == doctest::Approx(b).epsilon(1e-12));
    }
}

TEST_CASE("adjoint gradient matches central finite differences") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> ang(-1.0, 1.0);
    std::uniform_real_distribution<double> rate(-0.1, 0.1);
    std::uniform_real_distribution<double> rud(-0.5, 0.5);

    for (int trial = 0; trial < 100; ++trial) {
        MpcParams p = mpc_defaults();
        p.N = 8;
        p.r_max = 0.05;
        p.r_penalty = trial % 2 ? 50.0 : 0.0;
        const ControlState s0{rate(rng), ang(rng)};
        const ControlRef ref{rate(rng), ang(rng)};
        std::vector<double> d;
        for (int i = 0; i < p.N; ++i) d.push_back(rud(rng));

        const auto grad = mpc_cost_gradient(s0, ref, d, p);
        const double h = 1e-6;
        for (int i = 0; i < p.N; ++i) {
            auto dp = d, dm = d;
            dp[i] += h;
            dm[i] -= h;
            const double jp = mpc_cost(nomoto_predict(s0, dp, p), ref, dp, p);
            const double jm = mpc_cost(nomoto_predict(s0, dm, p), ref, dm, p);
            const double fd = (jp - jm) / (2.0 * h);
            const double scale = std::max(std::abs(fd), 1e-3);
            CHECK(std::abs(grad[i] - fd) / scale < 1e-5);
        }
    }
}

TEST_CASE("mpc_solve zero problem returns zero") {
    const MpcParams p = mpc_defaults();
    const auto sol = mpc_solve({0.0, 0.0}, {0.0, 0.0}, {}, p);
    CHECK(sol.delta_c == 0.0);
    CHECK(sol.cost == 0.0);
}

TEST_CASE("mpc_solve beats the constant-rudder grid oracle") {
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> ang(-1.5, 1.5);
    std::uniform_real_distribution<double> rate(-0.05, 0.05);

    for (int trial = 0; trial < 20; ++trial) {
        MpcParams p = mpc_defaults();
        p.N = 5;
        const ControlState s0{rate(rng), ang(rng)};
        const ControlRef ref{0.0, ang(rng)};

        const auto sol = mpc_solve(s0, ref, {}, p);
        for (double v : sol.delta_seq) CHECK(std::abs(v) <= p.deltaMAX + 1e-12);

        double best_grid = std::numeric_limits<double>::infinity();
        for (int gi = 0; gi <= 40; ++gi) {
            const double d = -p.deltaMAX + 2.0 * p.deltaMAX * gi / 40.0;
            const std::vector<double> seq(std::size_t(p.N), d);
            best_grid = std::min(best_grid, mpc_cost(nomoto_predict(s0, seq, p), ref, seq, p));
        }
        CHECK(sol.cost <= best_grid + 1e-6);
    }
}

TEST_CASE("mpc_solve cost never exceeds warm start or zero sequence") {
    std::mt19937 rng(31337);
    std::uniform_real_distribution<double> ang(-2.0, 2.0);
    std::uniform_real_distribution<double> rud(-0.6, 0.6);
    for (int trial = 0; trial < 50; ++trial) {
        MpcParams p = mpc_defaults();
        p.N = 12;
        const ControlState s0{0.0, ang(rng)};
        const ControlRef ref{0.0, ang(rng)};
        std::vector<double> warm;
        for (int i = 0; i < p.N; ++i) warm.push_back(rud(rng));

        const double j_warm = mpc_cost(nomoto_predict(s0, warm, p), ref, warm, p);
        const std::vector<double> zeros(std::size_t(p.N), 0.0);
        const double j_zero = mpc_cost(nomoto_predict(s0, zeros, p), ref, zeros, p);

        const auto sol = mpc_solve(s0, ref, warm, p);
        CHECK(sol.cost <= j_warm + 1e-12);
        CHECK(sol.cost <= j_zero + 1e-12);
    }
}

namespace {

// Closed loop on the Nomoto plant itself; returns the settling step of
// |psi error| < 0.5 deg (or -1).
template <typename Controller>
int settle_steps(Controller controller, double K, double T, double dt, int max_steps) {
    double r = 0.0, psi = 0.0;
    const double psi_d = 30.0 * M_PI / 180.0;
    int settled = -1;
    for (int k = 0; k < max_steps; ++k) {
        const double delta = controller(psi, r, psi_d);
        // plant: dr = (K delta - r)/T, dpsi = r
        r += dt * (K * delta - r) / T;
        psi += dt * r;
        if (std::abs(wrap_angle(psi - psi_d)) < 0.5 * M_PI / 180.0) {
            if (settled < 0) settled = k;
        } else {
            settled = -1;
        }
    }
    return settled;
}

} // namespace

TEST_CASE("closed loop: PID and MPC settle a 30 deg step within 120 s on the Nomoto plant") {
    // Bundled default plant reduction (sign per the rudder lever convention).
    const double K = -0.0286;
    const double T = 54.3;
    const double dt = 0.5;
    const double dmax = 35.0 * M_PI / 180.0;

    PidParams pid;
    pid.K_p = 4.0;
    pid.T_d = 200.0;
    pid.inv_T_i = 0.0;
    PidParams pid_state = pid;
    const int pid_settled = settle_steps(
        [&](double psi, double, double psi_d) {
            const auto res = pid_step(psi, psi_d, pid_state, dmax);
            pid_state = res.state;
            return res.delta_c;
        },
        K, T, dt, 240);
    INFO("pid settled at step " << pid_settled);
    CHECK(pid_settled >= 0);
    CHECK(pid_settled * dt <= 120.0);

    MpcParams mpc;
    mpc.T_s = dt;
    mpc.N = 40;
    mpc.headingGain = 10.0;
    mpc.rateGain = 0.0;
    mpc.rudderGain = 1.0;
    mpc.max_iter = 80;
    mpc.deltaMAX = dmax;
    mpc.nomoto_K = K;
    mpc.nomoto_T = T;
    std::vector<double> warm;
    const int mpc_settled = settle_steps(
        [&](double psi, double r, double psi_d) {
            const auto sol = mpc_solve({r, psi}, {0.0, psi_d}, warm, mpc);
            warm.assign(sol.delta_seq.begin() + 1, sol.delta_seq.end());
            warm.push_back(sol.delta_seq.back());
            return sol.delta_c;
        },
        K, T, dt, 240);
    INFO("mpc settled at step " << mpc_settled);
    CHECK(mpc_settled >= 0);
    CHECK(mpc_settled * dt <= 120.0);
}

TEST_CASE("fit_nomoto recovers known parameters from simulated data") {
    const double K = -0.05, T = 20.0, dt = 0.25;
    std::vector<double> rs, ds;
    double r = 0.0;
    for (int k = 0; k < 800; ++k) {
        const double delta = 0.3 * std::sin(0.05 * k) + 0.1;
        rs.push_back(r);
        ds.push_back(delta);
        r += dt * (K * delta - r) / T;
    }
    const auto fit = fit_nomoto(rs, ds, dt);
    CHECK(fit.K == doctest::Approx(K).epsilon(1e-3));
    CHECK(fit.T == doctest::Approx(T).epsilon(1e-3));
}
