#include "stressnet/kinetics.hpp"

namespace stressnet {

void reaction_add(const Field& uP, const Field& uN, const ZoneKineticsParams& p,
                  Field& outP, Field& outN) {
    if (!uP.grid->same_layout(*uN.grid))
        throw std::invalid_argument("reaction_add: uP and uN live on different grids");
    const double* vP = uP.values.data();
    const double* vN = uN.values.data();
    double* oP = outP.values.data();
    double* oN = outN.values.data();
    const std::size_t n = uP.values.size();
    for (std::size_t c = 0; c < n; ++c) {
        double f = imitation_coefficient(vP[c], vN[c], p);
        double r = p.a * vN[c] - p.b * vP[c] + f * vN[c] * vP[c];
        oP[c] += r;
        oN[c] += -r;
    }
}

std::pair<Field, Field> reaction_rhs(const Field& uP, const Field& uN,
                                     const ZoneKineticsParams& p) {
    Field outP(*uP.grid, 0.0);
    Field outN(*uN.grid, 0.0);
    reaction_add(uP, uN, p, outP, outN);
    return {std::move(outP), std::move(outN)};
}

}  // namespace stressnet
