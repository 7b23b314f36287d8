#include "absim/metrics.hpp"

#include <cmath>

#include "absim/errors.hpp"

namespace absim {

double nominal_distance(const std::vector<Vec2>& wps) {
    if (wps.size() < 2) throw Error(ErrorCode::TooFewWaypoints, "need at least 2 waypoints");
    double sum = 0.0;
    for (std::size_t i = 1; i < wps.size(); ++i) sum += distance(wps[i - 1], wps[i]);
    return sum;
}

double nominal_time(double D_nominal, double v_ref) {
    if (v_ref <= 0.0) throw Error(ErrorCode::ZeroSpeed, "v_ref must be positive");
    return D_nominal / v_ref;
}

double actual_distance(const std::vector<Vec2>& positions) {
    if (positions.size() < 2) throw Error(ErrorCode::TooFewSamples, "need at least 2 samples");
    double sum = 0.0;
    for (std::size_t i = 1; i < positions.size(); ++i)
        sum += distance(positions[i - 1], positions[i]);
    return sum;
}

double actual_time(std::size_t iterations, double dt) {
    return static_cast<double>(iterations) * dt;
}

HeadingErrorTotals cumulative_heading_error(const std::vector<double>& psi,
                                            const std::vector<double>& psi_d, double dt) {
    if (psi.size() != psi_d.size())
        throw Error(ErrorCode::LengthMismatch, "psi and psi_d series differ in length");
    HeadingErrorTotals tot;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const double e = wrap_angle(psi[i] - psi_d[i]);
        tot.signed_sum += e * dt;
        tot.abs_sum += std::abs(e) * dt;
    }
    return tot;
}

double cxte(const std::vector<Vec2>& positions, const Polyline& path, double dt) {
    if (path.size() < 2) throw Error(ErrorCode::DegeneratePath, "path needs at least 2 points");
    double sum = 0.0;
    for (const auto& pos : positions) {
        sum += closest_point_on_polyline(pos, path).dist * dt;
    }
    return sum;
}

} // namespace absim
