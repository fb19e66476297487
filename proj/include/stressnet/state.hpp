#pragma once

#include "stressnet/grid.hpp"

namespace stressnet {

// The four coupled density fields plus the simulation clock. uP1/uN1 live on
// zone 1's grid, uP2/uN2 on zone 2's.
struct NetworkState {
    double t = 0.0;
    Field uP1, uN1, uP2, uN2;

    NetworkState() = default;
    NetworkState(const Grid& g1, const Grid& g2)
        : uP1(g1), uN1(g1), uP2(g2), uN2(g2) {}
};

// Integral of all four fields: the conserved total population V(t).
double total_mass(const NetworkState& s);

// Smallest cell value across all four fields.
double min_cell_value(const NetworkState& s);

// Time-stamped mass functionals emitted along a run.
struct ObservableRecord {
    double t = 0.0;
    double M_P1 = 0.0, M_N1 = 0.0, M_P2 = 0.0, M_N2 = 0.0;
    double M_P = 0.0, M_N = 0.0, V = 0.0;
    double min_val = 0.0;
    double dt_used = 0.0;
};

// Compute all mass functionals of a state. dt_used is whatever step size
// produced this state (0 for the initial record); it is carried through to
// the CSV for diagnostics.
ObservableRecord record(const NetworkState& s, double dt_used = 0.0);

}  // namespace stressnet
