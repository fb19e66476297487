#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "stressnet/control.hpp"
#include "stressnet/io.hpp"
#include "stressnet/migration.hpp"
#include "stressnet/operators.hpp"
#include "stressnet/state.hpp"

namespace stressnet {

// Raised when a runtime invariant (positivity or mass conservation) breaks
// during time stepping. The message carries the offending cell and time.
struct InvariantViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Owns the discrete setup for one configured run: grids, direction fields,
// migration kernels, and scratch storage for the two-stage stepper. States
// produced by initial_state() borrow the grids, so the Simulation must
// outlive them; the object is pinned (no copy/move) for the same reason.
class Simulation {
public:
    explicit Simulation(const SimulationConfig& cfg);
    Simulation(const Simulation&) = delete;
    Simulation& operator=(const Simulation&) = delete;

    NetworkState initial_state() const;

    // Stable step size from the diffusive, advective, and rate stiffness
    // bounds. Depends only on the configuration (never on the state or the
    // control mode), so all scenarios of one config share step times.
    double compute_dt() const;

    // Time derivative of every field at state s (uses s.t for the ramp).
    void eval_rhs(const NetworkState& s, NetworkState& rhs) const;

    // One Heun step (midpoint-free SSP form): advances fields and s.t.
    void step(NetworkState& s, double dt);

    // Advances s to t_end, recording observables at t = 0, at each
    // record_interval crossing, and at the end. on_snapshot, when set, is
    // called with the state and the requested snapshot time as each
    // configured snapshot time is reached.
    std::vector<ObservableRecord> run(
        NetworkState& s,
        const std::function<void(const NetworkState&, double)>& on_snapshot = {});

    const SimulationConfig& config() const { return cfg_; }
    const Grid& grid1() const { return g1_; }
    const Grid& grid2() const { return g2_; }
    const Field& departure_1() const { return p_dep1_; }
    const Field& reception_2() const { return eps_rec2_; }
    const MigrationKernel* channel_1to2() const { return k12_ ? &*k12_ : nullptr; }
    const MigrationKernel* channel_2to1() const { return k21_ ? &*k21_ : nullptr; }
    long steps_taken() const { return steps_; }

private:
    void check_positivity(const NetworkState& s) const;
    void check_conservation(const NetworkState& s, double v0, long step_no) const;

    SimulationConfig cfg_;
    Grid g1_;
    Grid g2_;
    DirectionField dir1_;
    DirectionField dir2_;
    Field p_dep1_;    // departure weight in zone 1, also the u1 control shape
    Field eps_rec2_;  // normalized reception in zone 2, also the u2 control shape
    std::optional<MigrationKernel> k12_;
    std::optional<MigrationKernel> k21_;
    long steps_ = 0;

    // scratch reused across steps
    mutable NetworkState k1_;
    mutable NetworkState k2_;
    mutable NetworkState stage_;
    mutable Field tot1_;
    mutable Field tot2_;
};

// Realizes a kernel spec on a grid: gaussian bumps via gaussian_kernel,
// constants as flat fields.
Field kernel_field(const Grid& g, const KernelSpec& spec);

}  // namespace stressnet
