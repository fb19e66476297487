#include "stressnet/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "stressnet/kinetics.hpp"

namespace stressnet {

namespace {

SimulationConfig validated(SimulationConfig cfg) {
    validate_config(cfg);
    return cfg;
}

Grid make_grid(const ZoneConfig& z, int zone_id) {
    return Grid(z.nx, z.ny, z.x0, z.y0, z.Lx / z.nx, z.Ly / z.ny, zone_id);
}

// Fill one zone's fields from its configured initial layout (no scaling).
void fill_initial(const Grid& g, const ZoneConfig& z, Field& uP, Field& uN) {
    switch (z.layout) {
        case InitialLayout::clusters: {
            Field& dst = z.initial_species == Species::stressed ? uP : uN;
            for (const ClusterSpec& c : z.clusters) {
                double inv_r2 = 1.0 / (c.radius * c.radius);
                for (int j = 0; j < g.ny; ++j) {
                    double dy = g.center_y(j) - c.cy;
                    for (int i = 0; i < g.nx; ++i) {
                        double dx = g.center_x(i) - c.cx;
                        dst(i, j) += c.weight * std::exp(-(dx * dx + dy * dy) * inv_r2);
                    }
                }
            }
            break;
        }
        case InitialLayout::uniform:
            uP.fill(z.uniform_P);
            uN.fill(z.uniform_N);
            break;
        case InitialLayout::cosine_x: {
            // half-cosine bump in x, flat in y; zero normal derivative at the
            // x walls, so it is compatible with the zero-flux boundary
            const double pi = 3.14159265358979323846;
            for (int j = 0; j < g.ny; ++j)
                for (int i = 0; i < g.nx; ++i) {
                    double w = 0.5 * (1.0 + std::cos(pi * (g.center_x(i) - z.x0) / z.Lx));
                    uP(i, j) = z.cosine_amp_P * w;
                    uN(i, j) = z.cosine_amp_N * w;
                }
            break;
        }
    }
}

void scale_fields(Field& uP, Field& uN, double factor) {
    for (double& v : uP.values) v *= factor;
    for (double& v : uN.values) v *= factor;
}

struct MinLoc {
    double value = 0.0;
    int zone = 0;
    const char* species = "";
    int i = 0;
    int j = 0;
};

MinLoc locate_min(const NetworkState& s) {
    MinLoc best;
    bool first = true;
    auto scan = [&](const Field& f, int zone, const char* species) {
        const Grid& g = *f.grid;
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                double v = f(i, j);
                if (first || v < best.value) {
                    best = {v, zone, species, i, j};
                    first = false;
                }
            }
    };
    scan(s.uP1, 1, "u_P");
    scan(s.uN1, 1, "u_N");
    scan(s.uP2, 2, "u_P");
    scan(s.uN2, 2, "u_N");
    return best;
}

}  // namespace

Field kernel_field(const Grid& g, const KernelSpec& spec) {
    if (spec.shape == KernelSpec::Shape::gaussian)
        return gaussian_kernel(g, spec.center_x, spec.center_y, spec.radius);
    return Field(g, spec.value);
}

Simulation::Simulation(const SimulationConfig& cfg)
    : cfg_(validated(cfg)),
      g1_(make_grid(cfg_.zone1, 1)),
      g2_(make_grid(cfg_.zone2, 2)),
      dir1_(build_direction_field(g1_, cfg_.zone1.target_x, cfg_.zone1.target_y)),
      dir2_(build_direction_field(g2_, cfg_.zone2.target_x, cfg_.zone2.target_y)),
      p_dep1_(kernel_field(g1_, cfg_.coupling.departure_1)),
      eps_rec2_(normalize_reception(kernel_field(g2_, cfg_.coupling.reception_2))),
      k1_(g1_, g2_),
      k2_(g1_, g2_),
      stage_(g1_, g2_),
      tot1_(g1_),
      tot2_(g2_) {
    const CouplingConfig& cc = cfg_.coupling;
    if (cc.direction == CouplingDirection::one_to_two || cc.direction == CouplingDirection::both)
        k12_.emplace(p_dep1_, eps_rec2_, cc.m_1to2);
    if (cc.direction == CouplingDirection::two_to_one || cc.direction == CouplingDirection::both)
        k21_.emplace(kernel_field(g2_, cc.departure_2),
                     normalize_reception(kernel_field(g1_, cc.reception_1)), cc.m_2to1);
}

NetworkState Simulation::initial_state() const {
    NetworkState s(g1_, g2_);
    fill_initial(g1_, cfg_.zone1, s.uP1, s.uN1);
    fill_initial(g2_, cfg_.zone2, s.uP2, s.uN2);

    if (cfg_.numerics.normalize_mass) {
        double raw1 = integrate(s.uP1) + integrate(s.uN1);
        double raw2 = integrate(s.uP2) + integrate(s.uN2);
        // an entirely empty network stays empty; otherwise rescale each
        // populated zone so the total is 1 with the configured split
        if (raw1 > 0.0 || raw2 > 0.0) {
            double target1 = 0.0;
            double target2 = 0.0;
            if (raw1 > 0.0 && raw2 > 0.0) {
                double den = cfg_.zone1.mass_fraction + cfg_.zone2.mass_fraction;
                target1 = cfg_.zone1.mass_fraction / den;
                target2 = cfg_.zone2.mass_fraction / den;
            } else if (raw1 > 0.0) {
                target1 = 1.0;
            } else {
                target2 = 1.0;
            }
            if (raw1 > 0.0) scale_fields(s.uP1, s.uN1, target1 / raw1);
            if (raw2 > 0.0) scale_fields(s.uP2, s.uN2, target2 / raw2);
        }
    }
    return s;
}

double Simulation::compute_dt() const {
    double dt = cfg_.numerics.dt_max;
    for (int id : {1, 2}) {
        const ZoneConfig& z = cfg_.zone(id);
        const Grid& g = id == 1 ? g1_ : g2_;
        dt = std::min(dt, diffusive_dt_bound(g, z.d_P));
        dt = std::min(dt, diffusive_dt_bound(g, z.d_N));
        dt = std::min(dt, advective_dt_bound(g, z.v_P_max));
        dt = std::min(dt, advective_dt_bound(g, z.v_N_max));
    }
    // rate stiffness per zone: reaction exchange, migration outflow, and the
    // control's potential conversion rate. Uses only configured quantities,
    // never the control mode, so every scenario of a config shares its dt.
    double ctrl1 = cfg_.control.K * max_value(p_dep1_);
    double ctrl2 =
        k12_ ? cfg_.control.K * max_value(eps_rec2_) * cfg_.coupling.m_1to2 : 0.0;
    const ZoneKineticsParams& r1 = cfg_.zone1.kinetics;
    const ZoneKineticsParams& r2 = cfg_.zone2.kinetics;
    double rate1 = r1.a + r1.b + r1.alpha_P + r1.alpha_N +
                   (k12_ ? cfg_.coupling.m_1to2 : 0.0) + ctrl1;
    double rate2 = r2.a + r2.b + r2.alpha_P + r2.alpha_N +
                   (k21_ ? cfg_.coupling.m_2to1 : 0.0) + ctrl2;
    if (rate1 > 0.0) dt = std::min(dt, 1.0 / rate1);
    if (rate2 > 0.0) dt = std::min(dt, 1.0 / rate2);
    return cfg_.numerics.cfl_safety * dt;
}

void Simulation::eval_rhs(const NetworkState& s, NetworkState& rhs) const {
    rhs.uP1.fill(0.0);
    rhs.uN1.fill(0.0);
    rhs.uP2.fill(0.0);
    rhs.uN2.fill(0.0);

    const ZoneConfig& z1 = cfg_.zone1;
    const ZoneConfig& z2 = cfg_.zone2;

    laplacian_add(s.uP1, z1.d_P, rhs.uP1);
    laplacian_add(s.uN1, z1.d_N, rhs.uN1);
    laplacian_add(s.uP2, z2.d_P, rhs.uP2);
    laplacian_add(s.uN2, z2.d_N, rhs.uN2);

    bool total_speed = cfg_.numerics.speed_density == SpeedDensity::total;
    if (z1.v_P_max > 0.0 || z1.v_N_max > 0.0) {
        if (total_speed) {
            for (int c = 0; c < tot1_.size(); ++c) tot1_[c] = s.uP1[c] + s.uN1[c];
            advective_divergence_add(s.uP1, tot1_, dir1_, z1.v_P_max, rhs.uP1);
            advective_divergence_add(s.uN1, tot1_, dir1_, z1.v_N_max, rhs.uN1);
        } else {
            advective_divergence_add(s.uP1, s.uP1, dir1_, z1.v_P_max, rhs.uP1);
            advective_divergence_add(s.uN1, s.uN1, dir1_, z1.v_N_max, rhs.uN1);
        }
    }
    if (z2.v_P_max > 0.0 || z2.v_N_max > 0.0) {
        if (total_speed) {
            for (int c = 0; c < tot2_.size(); ++c) tot2_[c] = s.uP2[c] + s.uN2[c];
            advective_divergence_add(s.uP2, tot2_, dir2_, z2.v_P_max, rhs.uP2);
            advective_divergence_add(s.uN2, tot2_, dir2_, z2.v_N_max, rhs.uN2);
        } else {
            advective_divergence_add(s.uP2, s.uP2, dir2_, z2.v_P_max, rhs.uP2);
            advective_divergence_add(s.uN2, s.uN2, dir2_, z2.v_N_max, rhs.uN2);
        }
    }

    reaction_add(s.uP1, s.uN1, z1.kinetics, rhs.uP1, rhs.uN1);
    reaction_add(s.uP2, s.uN2, z2.kinetics, rhs.uP2, rhs.uN2);

    // keep the stressed departure integral of the 1->2 channel: the arrival
    // control diverts exactly that inflow, so it reuses the same value
    double I12P = 0.0;
    if (k12_) {
        I12P = migration_add(s.uP1, *k12_, rhs.uP1, rhs.uP2);
        migration_add(s.uN1, *k12_, rhs.uN1, rhs.uN2);
    }
    if (k21_) {
        migration_add(s.uP2, *k21_, rhs.uP2, rhs.uP1);
        migration_add(s.uN2, *k21_, rhs.uN2, rhs.uN1);
    }

    const ControlConfig& ct = cfg_.control;
    if (ct.mode != ControlMode::off) {
        ControlParams cp{ct.mode, ct.K, ct.T0, ct.T1};
        if (ct.mode == ControlMode::departure) {
            departure_control_add(s.t, cp, p_dep1_, s.uP1, rhs.uP1, rhs.uN1);
        } else if (k12_) {
            // arrival control diverts part of the 1->2 inflow; without that
            // channel there is nothing to divert
            double I = ct.u2_integrand == U2Integrand::inflow
                           ? (cfg_.coupling.m_1to2 > 0.0 ? I12P
                                                         : weighted_integral(k12_->p_out, s.uP1))
                           : weighted_integral(eps_rec2_, s.uP2);
            arrival_control_add(s.t, cp, eps_rec2_, cfg_.coupling.m_1to2, I, rhs.uP2, rhs.uN2);
        }
    }
}

void Simulation::step(NetworkState& s, double dt) {
    eval_rhs(s, k1_);

    auto euler = [dt](const Field& u, const Field& k, Field& out) {
        const double* pu = u.values.data();
        const double* pk = k.values.data();
        double* po = out.values.data();
        const int n = u.size();
        for (int c = 0; c < n; ++c) po[c] = pu[c] + dt * pk[c];
    };
    euler(s.uP1, k1_.uP1, stage_.uP1);
    euler(s.uN1, k1_.uN1, stage_.uN1);
    euler(s.uP2, k1_.uP2, stage_.uP2);
    euler(s.uN2, k1_.uN2, stage_.uN2);
    stage_.t = s.t + dt;

    eval_rhs(stage_, k2_);

    // average of the current state and an Euler step from the stage: a convex
    // combination of two positivity-preserving updates
    auto combine = [dt](Field& u, const Field& ys, const Field& k) {
        double* pu = u.values.data();
        const double* ps = ys.values.data();
        const double* pk = k.values.data();
        const int n = u.size();
        for (int c = 0; c < n; ++c) pu[c] = 0.5 * (pu[c] + ps[c] + dt * pk[c]);
    };
    combine(s.uP1, stage_.uP1, k2_.uP1);
    combine(s.uN1, stage_.uN1, k2_.uN1);
    combine(s.uP2, stage_.uP2, k2_.uP2);
    combine(s.uN2, stage_.uN2, k2_.uN2);
    s.t += dt;
}

void Simulation::check_positivity(const NetworkState& s) const {
    double lo = min_cell_value(s);
    if (lo >= -cfg_.numerics.positivity_tol) return;
    MinLoc m = locate_min(s);
    const Grid& g = m.zone == 1 ? g1_ : g2_;
    std::ostringstream msg;
    msg << "positivity violated at t = " << s.t << " (step " << steps_ << "): " << m.species
        << " in zone " << m.zone << ", cell (" << m.i << ", " << m.j << ") at ("
        << g.center_x(m.i) << ", " << g.center_y(m.j) << ") holds " << m.value
        << ", below tolerance -" << cfg_.numerics.positivity_tol;
    throw InvariantViolation(msg.str());
}

void Simulation::check_conservation(const NetworkState& s, double v0, long step_no) const {
    double v = total_mass(s);
    double allowed = cfg_.numerics.conservation_tol * std::max(v0, 1.0) *
                     static_cast<double>(1 + step_no);
    if (std::abs(v - v0) <= allowed) return;
    std::ostringstream msg;
    msg << "mass conservation violated at t = " << s.t << " (step " << step_no
        << "): V = " << v << " drifted from V(0) = " << v0 << " by " << (v - v0)
        << ", allowed " << allowed;
    throw InvariantViolation(msg.str());
}

std::vector<ObservableRecord> Simulation::run(
    NetworkState& s, const std::function<void(const NetworkState&, double)>& on_snapshot) {
    const double t_end = cfg_.numerics.t_end;
    const double eps_t = 1e-9 * std::max(1.0, t_end);

    std::vector<double> snap_times = cfg_.output.snapshot_times;
    std::sort(snap_times.begin(), snap_times.end());
    snap_times.erase(std::unique(snap_times.begin(), snap_times.end()), snap_times.end());

    long n_steps = 0;
    double dt = 0.0;
    if (t_end > 0.0) {
        double bound = compute_dt();
        n_steps = static_cast<long>(std::ceil(t_end / bound - 1e-12));
        if (n_steps < 1) n_steps = 1;
        dt = t_end / static_cast<double>(n_steps);
    }

    steps_ = 0;
    const double v0 = total_mass(s);
    check_positivity(s);

    std::vector<ObservableRecord> records;
    records.push_back(record(s, dt));
    std::size_t snap_idx = 0;
    while (snap_idx < snap_times.size() && snap_times[snap_idx] <= s.t + eps_t) {
        if (on_snapshot) on_snapshot(s, snap_times[snap_idx]);
        ++snap_idx;
    }

    double next_record = cfg_.output.record_interval;
    for (long k = 1; k <= n_steps; ++k) {
        step(s, dt);
        // pin the clock to the exact multiple so record and snapshot times
        // match bitwise across scenarios and reruns
        s.t = k == n_steps ? t_end : static_cast<double>(k) * dt;
        steps_ = k;
        check_positivity(s);
        if (k % 64 == 0 || k == n_steps) check_conservation(s, v0, k);

        if (next_record <= s.t + eps_t && s.t < t_end - eps_t) {
            records.push_back(record(s, dt));
            while (next_record <= s.t + eps_t) next_record += cfg_.output.record_interval;
        }
        while (snap_idx < snap_times.size() && snap_times[snap_idx] <= s.t + eps_t) {
            if (on_snapshot) on_snapshot(s, snap_times[snap_idx]);
            ++snap_idx;
        }
    }
    if (n_steps > 0) records.push_back(record(s, dt));
    return records;
}

}  // namespace stressnet
