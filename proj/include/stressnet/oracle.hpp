#pragma once

#include <string>
#include <vector>

#include "stressnet/io.hpp"
#include "stressnet/state.hpp"

namespace stressnet {

// Spatially uniform reference trajectory: zone densities sampled over time.
struct OracleTrajectory {
    std::vector<double> t;
    std::vector<double> P1, N1, P2, N2;
};

struct OracleReport {
    OracleTrajectory ode;
    std::vector<ObservableRecord> pde;
    // max over record times and the four species masses of
    // |M_pde - M_ode| / max(V, tiny)
    double max_rel_deviation = 0.0;
};

// Check that the configuration admits the exact uniform reduction: uniform
// initial layouts, no advection, and constant kernels wherever a kernel
// enters the dynamics. Throws ConfigError naming the offending key.
void validate_oracle_config(const SimulationConfig& cfg);

// Classic fourth-order Runge-Kutta on the four-variable reduction, landing
// exactly on each requested sample time with substeps of size <= dt.
OracleTrajectory integrate_reference(const SimulationConfig& cfg, double P1_0, double N1_0,
                                     double P2_0, double N2_0,
                                     const std::vector<double>& sample_times, double dt);

// Run the full solver and the reference side by side on the same
// configuration and measure their largest relative mass deviation. The
// reference substep is 1/100 of the solver step.
OracleReport run_oracle(const SimulationConfig& cfg);

// CSV with header t,P1,N1,P2,N2 at full precision.
std::string write_oracle_csv(const OracleTrajectory& tr);

}  // namespace stressnet
