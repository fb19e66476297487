#pragma once

#include "stressnet/grid.hpp"

#include <stdexcept>

namespace stressnet {

// Local reaction constants of one zone: intrinsic transition rates a (non-
// stress -> stress) and b (stress -> non-stress), imitation rates alpha_P /
// alpha_N, and the guard added to denominators of the density ratios.
struct ZoneKineticsParams {
    double a = 0.0;
    double b = 0.0;
    double alpha_P = 0.0;
    double alpha_N = 0.0;
    double eps_guard = 1e-6;

    void validate() const {
        if (a < 0.0 || b < 0.0 || alpha_P < 0.0 || alpha_N < 0.0)
            throw std::invalid_argument("kinetics: rates a, b, alpha_P, alpha_N must be >= 0");
        if (!(eps_guard > 0.0) || eps_guard >= 1.0)
            throw std::invalid_argument("kinetics: eps_guard must lie in (0, 1)");
    }
};

// Saturation profile of the imitation response: s^2 / (1 + s^2).
inline double xi(double s) {
    return s * s / (1.0 + s * s);
}

// Net imitation coefficient f(uP, uN) = alpha_P*xi(uP/(uN+eps)) -
// alpha_N*xi(uN/(uP+eps)). Written with one division per xi by multiplying
// numerator and denominator through by the guard term squared; algebraically
// identical to the ratio form and immune to overflow for tiny denominators.
inline double imitation_coefficient(double uP, double uN, const ZoneKineticsParams& p) {
    double gN = uN + p.eps_guard;  // denominator guard for the P-ratio
    double gP = uP + p.eps_guard;
    double xiP = uP * uP / (gN * gN + uP * uP);
    double xiN = uN * uN / (gP * gP + uN * uN);
    return p.alpha_P * xiP - p.alpha_N * xiN;
}

// Reaction right-hand side: accumulates a*uN - b*uP + f(uP,uN)*uN*uP into
// outP and its exact negation into outN, cell by cell. The two contributions
// cancel pointwise, so the reaction exchanges mass between species only.
void reaction_add(const Field& uP, const Field& uN, const ZoneKineticsParams& p,
                  Field& outP, Field& outN);

// Returning wrapper over reaction_add on zeroed outputs.
std::pair<Field, Field> reaction_rhs(const Field& uP, const Field& uN,
                                     const ZoneKineticsParams& p);

}  // namespace stressnet
