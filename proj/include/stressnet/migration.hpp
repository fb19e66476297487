#pragma once

#include "stressnet/grid.hpp"

namespace stressnet {

// One directed migration channel: departure probability profile on the
// source grid, normalized reception profile on the destination grid, and the
// maximum migrating proportion m. Kernels are stored per channel so the two
// directions of a bidirectional coupling are independent.
struct MigrationKernel {
    Field p_out;   // on the source grid, values in [0, 1]
    Field eps_in;  // on the destination grid, nonnegative, unit integral
    double m = 0.0;

    MigrationKernel() = default;
    MigrationKernel(Field p_out, Field eps_in, double m);
};

// Pointwise exp(-|x - center|^2 / radius^2) sampled at cell centers.
Field gaussian_kernel(const Grid& g, double center_x, double center_y, double radius);

// Scale a nonnegative profile so its discrete integral is 1.
Field normalize_reception(const Field& raw);

// Accumulate one directed channel for one species: src_out -= m*p_out*u_src,
// dst_out += eps_in*m*I with I = integral of p_out*u_src over the source
// zone. Total mass moved out equals total mass received up to round-off.
// Returns I (the raw departure integral, before scaling by m).
double migration_add(const Field& u_src, const MigrationKernel& k, Field& src_out,
                     Field& dst_out);

// Returning form covering both directions at once: applies out_kernel to
// u_src and, when in_kernel is present, the reverse channel to u_dst. First
// output lives on u_src's grid, second on u_dst's grid.
std::pair<Field, Field> migration_rhs(const Field& u_src, const Field& u_dst,
                                      const MigrationKernel& out_kernel,
                                      const MigrationKernel* in_kernel = nullptr);

}  // namespace stressnet
