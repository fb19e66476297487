#include "stressnet/oracle.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "stressnet/kinetics.hpp"
#include "stressnet/stepper.hpp"

namespace stressnet {

namespace {

// Everything the reduced model needs, extracted once from the config.
struct ReducedModel {
    ZoneKineticsParams kin1, kin2;
    double area1 = 0.0, area2 = 0.0;
    bool ch12 = false, ch21 = false;
    double m12 = 0.0, m21 = 0.0;
    double p12 = 0.0;  // constant departure probability, zone 1
    double p21 = 0.0;  // constant departure probability, zone 2
    ControlMode mode = ControlMode::off;
    double K = 0.0, T0 = 0.0, T1 = 1.0;
    U2Integrand integrand = U2Integrand::inflow;
};

ReducedModel extract(const SimulationConfig& cfg) {
    ReducedModel m;
    m.kin1 = cfg.zone1.kinetics;
    m.kin2 = cfg.zone2.kinetics;
    m.area1 = cfg.zone1.Lx * cfg.zone1.Ly;
    m.area2 = cfg.zone2.Lx * cfg.zone2.Ly;
    m.ch12 = cfg.coupling.direction == CouplingDirection::one_to_two ||
             cfg.coupling.direction == CouplingDirection::both;
    m.ch21 = cfg.coupling.direction == CouplingDirection::two_to_one ||
             cfg.coupling.direction == CouplingDirection::both;
    m.m12 = cfg.coupling.m_1to2;
    m.m21 = cfg.coupling.m_2to1;
    m.p12 = cfg.coupling.departure_1.value;
    m.p21 = cfg.coupling.departure_2.value;
    m.mode = cfg.control.mode;
    m.K = cfg.control.K;
    m.T0 = cfg.control.T0;
    m.T1 = cfg.control.T1;
    m.integrand = cfg.control.u2_integrand;
    return m;
}

// Independent copy of the cosine ease-in so the reference does not lean on
// the solver's control code.
double ease(double t, double T0, double T1) {
    if (t < T0) return 0.0;
    if (t >= T1) return 1.0;
    return 0.5 - 0.5 * std::cos(std::numbers::pi * (t - T0) / (T1 - T0));
}

std::array<double, 4> rhs(const ReducedModel& m, double t, const std::array<double, 4>& y) {
    const double P1 = y[0], N1 = y[1], P2 = y[2], N2 = y[3];
    double r1 = m.kin1.a * N1 - m.kin1.b * P1 + imitation_coefficient(P1, N1, m.kin1) * N1 * P1;
    double r2 = m.kin2.a * N2 - m.kin2.b * P2 + imitation_coefficient(P2, N2, m.kin2) * N2 * P2;
    std::array<double, 4> dy = {r1, -r1, r2, -r2};

    if (m.ch12) {
        double upscale = m.area1 / m.area2;  // density gain in the receiving zone
        dy[0] -= m.m12 * m.p12 * P1;
        dy[1] -= m.m12 * m.p12 * N1;
        dy[2] += m.m12 * m.p12 * P1 * upscale;
        dy[3] += m.m12 * m.p12 * N1 * upscale;
    }
    if (m.ch21) {
        double upscale = m.area2 / m.area1;
        dy[2] -= m.m21 * m.p21 * P2;
        dy[3] -= m.m21 * m.p21 * N2;
        dy[0] += m.m21 * m.p21 * P2 * upscale;
        dy[1] += m.m21 * m.p21 * N2 * upscale;
    }

    if (m.mode == ControlMode::departure) {
        double w = m.K * ease(t, m.T0, m.T1) * m.p12 * P1;
        dy[0] -= w;
        dy[1] += w;
    } else if (m.mode == ControlMode::arrival && m.ch12) {
        // the reception profile integrates to one, so as a constant it equals
        // 1/area2; the local integrand reduces to the plain P2 mass integral
        double I = m.integrand == U2Integrand::inflow ? m.p12 * P1 * m.area1 : P2 * m.area2;
        double w = m.K * ease(t, m.T0, m.T1) * m.m12 * I / m.area2;
        dy[2] -= w;
        dy[3] += w;
    }
    return dy;
}

void require(bool ok, const std::string& key, const std::string& need) {
    if (!ok) throw ConfigError(key + ": reference reduction requires " + need);
}

}  // namespace

void validate_oracle_config(const SimulationConfig& cfg) {
    require(cfg.zone1.layout == InitialLayout::uniform, "zone1.initial_layout",
            "uniform initial data");
    require(cfg.zone2.layout == InitialLayout::uniform, "zone2.initial_layout",
            "uniform initial data");
    require(cfg.zone1.v_P_max == 0.0, "zone1.v_P_max", "no advection");
    require(cfg.zone1.v_N_max == 0.0, "zone1.v_N_max", "no advection");
    require(cfg.zone2.v_P_max == 0.0, "zone2.v_P_max", "no advection");
    require(cfg.zone2.v_N_max == 0.0, "zone2.v_N_max", "no advection");

    bool ch12 = cfg.coupling.direction == CouplingDirection::one_to_two ||
                cfg.coupling.direction == CouplingDirection::both;
    bool ch21 = cfg.coupling.direction == CouplingDirection::two_to_one ||
                cfg.coupling.direction == CouplingDirection::both;
    bool dep1_used = ch12 || cfg.control.mode != ControlMode::off;
    bool rec2_used = ch12;
    if (dep1_used)
        require(cfg.coupling.departure_1.shape == KernelSpec::Shape::constant,
                "coupling.departure_1", "a constant kernel");
    if (rec2_used)
        require(cfg.coupling.reception_2.shape == KernelSpec::Shape::constant,
                "coupling.reception_2", "a constant kernel");
    if (ch21) {
        require(cfg.coupling.departure_2.shape == KernelSpec::Shape::constant,
                "coupling.departure_2", "a constant kernel");
        require(cfg.coupling.reception_1.shape == KernelSpec::Shape::constant,
                "coupling.reception_1", "a constant kernel");
    }
}

OracleTrajectory integrate_reference(const SimulationConfig& cfg, double P1_0, double N1_0,
                                     double P2_0, double N2_0,
                                     const std::vector<double>& sample_times, double dt) {
    if (sample_times.empty())
        throw std::invalid_argument("integrate_reference: no sample times");
    if (dt <= 0.0) throw std::invalid_argument("integrate_reference: dt must be > 0");

    ReducedModel m = extract(cfg);
    std::array<double, 4> y = {P1_0, N1_0, P2_0, N2_0};
    double t = sample_times.front();

    OracleTrajectory tr;
    auto emit = [&](double at) {
        tr.t.push_back(at);
        tr.P1.push_back(y[0]);
        tr.N1.push_back(y[1]);
        tr.P2.push_back(y[2]);
        tr.N2.push_back(y[3]);
    };
    emit(t);

    for (std::size_t s = 1; s < sample_times.size(); ++s) {
        double span = sample_times[s] - t;
        if (span < 0.0)
            throw std::invalid_argument("integrate_reference: sample times must increase");
        long n = span > 0.0 ? static_cast<long>(std::ceil(span / dt - 1e-12)) : 0;
        if (span > 0.0 && n < 1) n = 1;
        double h = n > 0 ? span / static_cast<double>(n) : 0.0;
        for (long k = 0; k < n; ++k) {
            double tk = t + static_cast<double>(k) * h;
            auto k1 = rhs(m, tk, y);
            std::array<double, 4> y2, y3, y4;
            for (int i = 0; i < 4; ++i) y2[i] = y[i] + 0.5 * h * k1[i];
            auto k2 = rhs(m, tk + 0.5 * h, y2);
            for (int i = 0; i < 4; ++i) y3[i] = y[i] + 0.5 * h * k2[i];
            auto k3 = rhs(m, tk + 0.5 * h, y3);
            for (int i = 0; i < 4; ++i) y4[i] = y[i] + h * k3[i];
            auto k4 = rhs(m, tk + h, y4);
            for (int i = 0; i < 4; ++i)
                y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        t = sample_times[s];
        emit(t);
    }
    return tr;
}

OracleReport run_oracle(const SimulationConfig& cfg) {
    validate_oracle_config(cfg);

    Simulation sim(cfg);
    NetworkState s = sim.initial_state();
    // uniform layout: every cell carries the zone density, so cell 0 does
    double P1_0 = s.uP1[0], N1_0 = s.uN1[0], P2_0 = s.uP2[0], N2_0 = s.uN2[0];

    OracleReport rep;
    rep.pde = sim.run(s);

    std::vector<double> times;
    times.reserve(rep.pde.size());
    for (const ObservableRecord& r : rep.pde) times.push_back(r.t);
    double dt_pde = rep.pde.back().dt_used;
    double dt_ode = dt_pde > 0.0 ? dt_pde / 100.0 : 1.0;
    rep.ode = integrate_reference(cfg, P1_0, N1_0, P2_0, N2_0, times, dt_ode);

    double area1 = cfg.zone1.Lx * cfg.zone1.Ly;
    double area2 = cfg.zone2.Lx * cfg.zone2.Ly;
    for (std::size_t i = 0; i < rep.pde.size(); ++i) {
        double denom = std::max(rep.pde[i].V, 1e-30);
        double d = std::abs(rep.pde[i].M_P1 - rep.ode.P1[i] * area1);
        d = std::max(d, std::abs(rep.pde[i].M_N1 - rep.ode.N1[i] * area1));
        d = std::max(d, std::abs(rep.pde[i].M_P2 - rep.ode.P2[i] * area2));
        d = std::max(d, std::abs(rep.pde[i].M_N2 - rep.ode.N2[i] * area2));
        rep.max_rel_deviation = std::max(rep.max_rel_deviation, d / denom);
    }
    return rep;
}

std::string write_oracle_csv(const OracleTrajectory& tr) {
    auto fmt = [](double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    std::ostringstream out;
    out << "t,P1,N1,P2,N2\n";
    for (std::size_t i = 0; i < tr.t.size(); ++i)
        out << fmt(tr.t[i]) << ',' << fmt(tr.P1[i]) << ',' << fmt(tr.N1[i]) << ','
            << fmt(tr.P2[i]) << ',' << fmt(tr.N2[i]) << "\n";
    return out.str();
}

}  // namespace stressnet
