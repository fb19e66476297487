#include "stressnet/convergence.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "stressnet/stepper.hpp"

namespace stressnet {

std::vector<double> restrict_to_base(const std::vector<double>& fine, int fine_nx, int fine_ny,
                                     int factor) {
    if (factor < 1 || fine_nx % factor != 0 || fine_ny % factor != 0)
        throw std::invalid_argument("restrict_to_base: factor must divide both extents");
    int bnx = fine_nx / factor;
    int bny = fine_ny / factor;
    std::vector<double> base(static_cast<std::size_t>(bnx) * bny, 0.0);
    double inv = 1.0 / (static_cast<double>(factor) * factor);
    for (int J = 0; J < bny; ++J)
        for (int I = 0; I < bnx; ++I) {
            double sum = 0.0;
            for (int j = J * factor; j < (J + 1) * factor; ++j)
                for (int i = I * factor; i < (I + 1) * factor; ++i)
                    sum += fine[static_cast<std::size_t>(j) * fine_nx + i];
            base[static_cast<std::size_t>(J) * bnx + I] = sum * inv;
        }
    return base;
}

ConvergenceStudy run_convergence(const SimulationConfig& cfg, int levels) {
    if (levels < 3)
        throw std::invalid_argument("convergence study needs at least 3 levels");

    ConvergenceStudy study;
    int factor = 1;
    for (int l = 0; l < levels; ++l, factor *= 2) {
        SimulationConfig c = cfg;
        c.zone1.nx = cfg.zone1.nx * factor;
        c.zone1.ny = cfg.zone1.ny * factor;
        c.zone2.nx = cfg.zone2.nx * factor;
        c.zone2.ny = cfg.zone2.ny * factor;

        Simulation sim(c);
        NetworkState s = sim.initial_state();
        std::vector<ObservableRecord> records = sim.run(s);

        ConvergenceLevel lvl;
        lvl.nx1 = c.zone1.nx;
        lvl.ny1 = c.zone1.ny;
        lvl.M_P1 = records.back().M_P1;
        lvl.restricted = restrict_to_base(s.uP1.values, c.zone1.nx, c.zone1.ny, factor);
        study.levels.push_back(std::move(lvl));
    }

    const ConvergenceLevel& fin = study.levels.back();
    double base_area = (cfg.zone1.Lx / cfg.zone1.nx) * (cfg.zone1.Ly / cfg.zone1.ny);
    for (int l = 0; l + 1 < levels; ++l) {
        const ConvergenceLevel& lvl = study.levels[static_cast<std::size_t>(l)];
        study.mass_errors.push_back(std::abs(lvl.M_P1 - fin.M_P1));
        std::vector<double> diff(lvl.restricted.size());
        for (std::size_t c = 0; c < diff.size(); ++c)
            diff[c] = std::abs(lvl.restricted[c] - fin.restricted[c]);
        study.field_errors.push_back(compensated_sum(diff.data(), diff.size()) * base_area);
    }

    auto orders = [](const std::vector<double>& e) {
        std::vector<double> out;
        for (std::size_t l = 0; l + 1 < e.size(); ++l) {
            if (e[l] > 0.0 && e[l + 1] > 0.0)
                out.push_back(std::log2(e[l] / e[l + 1]));
            else
                out.push_back(std::numeric_limits<double>::quiet_NaN());
        }
        return out;
    };
    study.mass_orders = orders(study.mass_errors);
    study.field_orders = orders(study.field_errors);
    return study;
}

}  // namespace stressnet
