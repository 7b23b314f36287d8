#pragma once

#include <vector>

#include "absim/geometry.hpp"

namespace absim {

// The six performance indices, left-Riemann discretized on the simulation
// time base. Cumulative heading error is reported both signed (as printed)
// and absolute, since the signed form cancels symmetric oscillation.
struct MetricsReport {
    double D_nominal = 0.0;    // m
    double T_nominal = 0.0;    // s
    double D_actual = 0.0;     // m
    double T_actual = 0.0;     // s
    double psi_e_c_signed = 0.0; // rad s
    double psi_e_c_abs = 0.0;    // rad s
    double CXTE = 0.0;           // m s
};

double nominal_distance(const std::vector<Vec2>& wps);
double nominal_time(double D_nominal, double v_ref);
double actual_distance(const std::vector<Vec2>& positions);
double actual_time(std::size_t iterations, double dt);

struct HeadingErrorTotals {
    double signed_sum = 0.0;
    double abs_sum = 0.0;
};
HeadingErrorTotals cumulative_heading_error(const std::vector<double>& psi,
                                            const std::vector<double>& psi_d, double dt);

double cxte(const std::vector<Vec2>& positions, const Polyline& path, double dt);

} // namespace absim
