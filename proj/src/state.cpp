#include "stressnet/state.hpp"

#include <algorithm>

namespace stressnet {

double total_mass(const NetworkState& s) {
    return integrate(s.uP1) + integrate(s.uN1) + integrate(s.uP2) + integrate(s.uN2);
}

double min_cell_value(const NetworkState& s) {
    return std::min(std::min(min_value(s.uP1), min_value(s.uN1)),
                    std::min(min_value(s.uP2), min_value(s.uN2)));
}

ObservableRecord record(const NetworkState& s, double dt_used) {
    ObservableRecord r;
    r.t = s.t;
    r.M_P1 = integrate(s.uP1);
    r.M_N1 = integrate(s.uN1);
    r.M_P2 = integrate(s.uP2);
    r.M_N2 = integrate(s.uN2);
    r.M_P = r.M_P1 + r.M_P2;
    r.M_N = r.M_N1 + r.M_N2;
    r.V = r.M_P + r.M_N;
    r.min_val = min_cell_value(s);
    r.dt_used = dt_used;
    return r;
}

}  // namespace stressnet
