#pragma once

#include "stressnet/grid.hpp"

namespace stressnet {

// Per-cell unit direction vectors used by the advection term.
struct DirectionField {
    const Grid* grid = nullptr;
    std::vector<double> fx;
    std::vector<double> fy;

    DirectionField() = default;
    explicit DirectionField(const Grid& g)
        : grid(&g),
          fx(static_cast<std::size_t>(g.cells()), 0.0),
          fy(static_cast<std::size_t>(g.cells()), 0.0) {}
};

// Conservative 5-point diffusion stencil with zero-flux (mirror) boundaries:
// out += d * div(grad f). The accumulating form lets the caller assemble a
// full right-hand side in one buffer without temporaries.
void laplacian_add(const Field& f, double d, Field& out);
Field laplacian(const Field& f, double d);

// Unit vectors pointing from each cell center toward (target_x, target_y).
// Zero in cells touching the boundary (no outflow through walls) and in any
// cell whose center coincides with the target.
DirectionField build_direction_field(const Grid& g, double target_x, double target_y);

// First-order upwind discretization of -div(v(total) * dir * f) with the
// linear speed closure v = v_max * max(1 - total, 0) evaluated on faces from
// arithmetic means of the neighboring cells. Boundary faces carry no flux,
// so the cell sum of the output telescopes to zero exactly (up to the final
// per-cell division). Accumulates into out.
void advective_divergence_add(const Field& f, const Field& total, const DirectionField& dir,
                              double v_max, Field& out);
Field advective_divergence(const Field& f, const Field& total, const DirectionField& dir,
                           double v_max);

// Largest stable advective time step for this grid and speed cap:
// 1 / (2 * v_max * (1/hx + 1/hy)). The factor keeps the upwind update a
// convex combination even when fluxes of both signs touch one cell.
// Returns +inf when v_max == 0.
double advective_dt_bound(const Grid& g, double v_max);

// Largest positivity-preserving diffusive step: hx^2*hy^2 / (2*d*(hx^2+hy^2)).
// Returns +inf when d == 0.
double diffusive_dt_bound(const Grid& g, double d);

}  // namespace stressnet
