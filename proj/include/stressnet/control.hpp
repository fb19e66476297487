#pragma once

#include <array>

#include "stressnet/grid.hpp"
#include "stressnet/migration.hpp"
#include "stressnet/state.hpp"

namespace stressnet {

enum class ControlMode { off, departure, arrival };

// Which integral feeds the arrival control u2: the instantaneous stressed
// inflow from the source zone (default), or the local reception-weighted
// stressed mass in the destination zone.
enum class U2Integrand { inflow, local };

// Schedule and strength of one zone's control: intensity K ramped in over
// [T0, T1] by the cosine ease ramp().
struct ControlParams {
    ControlMode mode = ControlMode::off;
    double K = 1.0;
    double T0 = 5.0;
    double T1 = 20.0;

    void validate() const;
};

// Cosine ease-in: 0 before T0, 1/2 - cos(pi*(t-T0)/(T1-T0))/2 on [T0, T1],
// 1 afterwards. Continuous and nondecreasing; exact 0 and 1 at the ends.
double ramp(double t, double T0, double T1);

// Departure-area control: converts K(t)*p_out(x)*uP of the source zone from
// stressed to non-stressed in place. No-op while the ramp is zero.
void departure_control_add(double t, const ControlParams& cp, const Field& p_out,
                           const Field& uP, Field& dP, Field& dN);

// Arrival-area control: converts K(t)*eps_in(x)*m*I from stressed to
// non-stressed across the destination zone, where I is the integral chosen
// by U2Integrand (precomputed by the caller). No-op while the ramp is zero.
void arrival_control_add(double t, const ControlParams& cp, const Field& eps_in,
                         double m, double integral, Field& dP, Field& dN);

// Full control right-hand side for the two-zone network: zone 1 gets the
// departure term when cp1 is active, zone 2 the arrival term when cp2 is
// active. `channel` supplies p_out, eps_in, and m of the 1->2 coupling.
// Returns (dP1, dN1, dP2, dN2).
std::array<Field, 4> control_rhs(double t, const NetworkState& s, const ControlParams& cp1,
                                 const ControlParams& cp2, const MigrationKernel& channel,
                                 U2Integrand integrand = U2Integrand::inflow);

}  // namespace stressnet
