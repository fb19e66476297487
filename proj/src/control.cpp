#include "stressnet/control.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace stressnet {

void ControlParams::validate() const {
    if (K < 0.0 || K > 1.0)
        throw std::invalid_argument("control: K must lie in [0, 1], got " + std::to_string(K));
    if (T0 < 0.0 || !(T1 > T0))
        throw std::invalid_argument("control: need 0 <= T0 < T1, got T0=" + std::to_string(T0) +
                                    ", T1=" + std::to_string(T1));
}

double ramp(double t, double T0, double T1) {
    if (!(T1 > T0))
        throw std::invalid_argument("ramp: need T0 < T1");
    if (t < T0) return 0.0;
    if (t >= T1) return 1.0;
    return 0.5 - 0.5 * std::cos(std::numbers::pi * (t - T0) / (T1 - T0));
}

void departure_control_add(double t, const ControlParams& cp, const Field& p_out,
                           const Field& uP, Field& dP, Field& dN) {
    if (cp.mode != ControlMode::departure) return;
    double rate = cp.K * ramp(t, cp.T0, cp.T1);
    if (rate == 0.0) return;  // keep the inactive path bitwise-free of control
    const double* p = p_out.values.data();
    const double* u = uP.values.data();
    double* oP = dP.values.data();
    double* oN = dN.values.data();
    const std::size_t n = uP.values.size();
    for (std::size_t c = 0; c < n; ++c) {
        double w = rate * p[c] * u[c];
        oP[c] -= w;
        oN[c] += w;
    }
}

void arrival_control_add(double t, const ControlParams& cp, const Field& eps_in,
                         double m, double integral, Field& dP, Field& dN) {
    if (cp.mode != ControlMode::arrival) return;
    double rate = cp.K * ramp(t, cp.T0, cp.T1);
    if (rate == 0.0) return;
    double amount = rate * m * integral;
    if (amount == 0.0) return;
    const double* e = eps_in.values.data();
    double* oP = dP.values.data();
    double* oN = dN.values.data();
    const std::size_t n = eps_in.values.size();
    for (std::size_t c = 0; c < n; ++c) {
        double w = amount * e[c];
        oP[c] -= w;
        oN[c] += w;
    }
}

std::array<Field, 4> control_rhs(double t, const NetworkState& s, const ControlParams& cp1,
                                 const ControlParams& cp2, const MigrationKernel& channel,
                                 U2Integrand integrand) {
    std::array<Field, 4> out = {Field(*s.uP1.grid, 0.0), Field(*s.uN1.grid, 0.0),
                                Field(*s.uP2.grid, 0.0), Field(*s.uN2.grid, 0.0)};
    departure_control_add(t, cp1, channel.p_out, s.uP1, out[0], out[1]);
    if (cp2.mode == ControlMode::arrival) {
        double I = integrand == U2Integrand::inflow
                       ? weighted_integral(channel.p_out, s.uP1)
                       : weighted_integral(channel.eps_in, s.uP2);
        arrival_control_add(t, cp2, channel.eps_in, channel.m, I, out[2], out[3]);
    }
    return out;
}

}  // namespace stressnet
