#pragma once

#include <vector>

#include "stressnet/io.hpp"

namespace stressnet {

// One refinement level's terminal data, reduced to the base grid.
struct ConvergenceLevel {
    int nx1 = 0, ny1 = 0;            // zone-1 resolution at this level
    double M_P1 = 0.0;               // terminal stressed mass in zone 1
    std::vector<double> restricted;  // terminal u_P1 block-averaged onto the base grid
};

// Self-convergence data: errors of every coarser level against the finest,
// and the observed orders from consecutive error ratios. The mass metric is
// |M_P1 - M_P1_finest|; the field metric is the L1 distance of the
// block-averaged terminal u_P1 on the base grid. Conservative setups keep
// M_P1 constant to round-off at every resolution, which makes the mass
// metric degenerate (orders come out as NaN); the field metric stays
// informative, so it is the one callers should gate on.
struct ConvergenceStudy {
    std::vector<ConvergenceLevel> levels;  // coarsest first
    std::vector<double> mass_errors;       // size levels-1
    std::vector<double> field_errors;      // size levels-1
    std::vector<double> mass_orders;       // size levels-2, log2 of error ratios
    std::vector<double> field_orders;
};

// Run the configured problem at `levels` resolutions, doubling both zones'
// nx and ny per level. levels must be >= 3 so at least one order exists.
ConvergenceStudy run_convergence(const SimulationConfig& cfg, int levels);

// Block-average a fine field (factor x factor cells per block) onto the
// base grid layout; returns base_nx*base_ny values.
std::vector<double> restrict_to_base(const std::vector<double>& fine, int fine_nx, int fine_ny,
                                     int factor);

}  // namespace stressnet
