#pragma once

#include "stressnet/control.hpp"
#include "stressnet/kinetics.hpp"
#include "stressnet/state.hpp"

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace stressnet {

// Config or validation failure; the message carries the line number for
// syntax problems and the section.key name for constraint violations.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class InitialLayout { clusters, uniform, cosine_x };
enum class Species { stressed, non_stressed };
enum class CouplingDirection { none, one_to_two, two_to_one, both };
enum class SpeedDensity { total, species };

// One Gaussian bump of the initial data: center, radius, peak weight.
struct ClusterSpec {
    double cx = 0.0, cy = 0.0, radius = 0.0, weight = 0.0;
};

// Departure/reception profile description; realized on a grid at setup.
struct KernelSpec {
    enum class Shape { gaussian, constant };
    Shape shape = Shape::gaussian;
    double center_x = 0.5, center_y = 0.5, radius = 0.1;
    double value = 0.5;  // constant shape only
};

struct ZoneConfig {
    int nx = 64, ny = 64;
    double x0 = 0.0, y0 = 0.0, Lx = 1.0, Ly = 1.0;
    double d_P = 0.0, d_N = 0.0;
    double v_P_max = 0.0, v_N_max = 0.0;
    ZoneKineticsParams kinetics;
    double target_x = 0.5, target_y = 0.5;
    InitialLayout layout = InitialLayout::clusters;
    Species initial_species = Species::stressed;
    std::vector<ClusterSpec> clusters;
    double uniform_P = 0.0, uniform_N = 0.0;
    double cosine_amp_P = 0.0, cosine_amp_N = 0.0;
    double mass_fraction = 0.5;
};

struct CouplingConfig {
    CouplingDirection direction = CouplingDirection::one_to_two;
    double m_1to2 = 0.2, m_2to1 = 0.8;
    KernelSpec departure_1, reception_2;  // 1 -> 2 channel
    KernelSpec departure_2, reception_1;  // 2 -> 1 channel
};

struct ControlConfig {
    ControlMode mode = ControlMode::off;
    double K = 1.0;
    double T0 = 5.0, T1 = 20.0;
    U2Integrand u2_integrand = U2Integrand::inflow;
};

struct NumericsConfig {
    double dt_max = 0.01;
    double cfl_safety = 0.9;
    double t_end = 400.0;
    double conservation_tol = 1e-12;  // allowed per-step mass drift factor
    double positivity_tol = 1e-10;    // allowed negative undershoot
    SpeedDensity speed_density = SpeedDensity::total;
    bool normalize_mass = true;
};

struct OutputConfig {
    double record_interval = 1.0;
    std::vector<double> snapshot_times;  // filled by defaults if absent
    std::string out_dir = "out";
};

struct SimulationConfig {
    ZoneConfig zone1, zone2;
    CouplingConfig coupling;
    ControlConfig control;
    NumericsConfig numerics;
    OutputConfig output;
    // "section.key" entries that were present in the parsed text; consulted
    // when a scenario override must respect explicitly chosen values.
    std::set<std::string> explicit_keys;

    bool is_explicit(const std::string& key) const { return explicit_keys.count(key) > 0; }
    const ZoneConfig& zone(int id) const { return id == 1 ? zone1 : zone2; }
    ZoneConfig& zone(int id) { return id == 1 ? zone1 : zone2; }
};

// The full default parameter set (the appendix table values, unit-square
// zones, three-cluster initial data, Fig.-7 snapshot times).
SimulationConfig default_config();

// Parse sectioned key = value text; missing keys fall back to the defaults,
// unknown keys and sections are rejected, every constraint is checked.
SimulationConfig parse_config(const std::string& text);
SimulationConfig load_config_file(const std::string& path);

// Re-validate a config after programmatic edits (throws ConfigError).
void validate_config(const SimulationConfig& cfg);

// Force the control block into one of the named scenarios: "wc" turns
// control off, "sc1" selects departure control (T0=5, T1=20 unless the
// config set them explicitly), "sc2" arrival control (T0=10, T1=20 likewise).
void apply_scenario(SimulationConfig& cfg, const std::string& scenario);

// Canonical full dump; parse_config(write_config(c)) reproduces c.
std::string write_config(const SimulationConfig& cfg);

// Shortest decimal form that round-trips a double exactly.
std::string format_full(double v);

// Compact time label for snapshot file names ("10", "2.5").
std::string format_time_label(double t);

// CSV with header t,M_P1,M_N1,M_P2,M_N2,M_P,M_N,V,min_val,dt_used; one row
// per record at full precision; rejects an empty sequence.
std::string write_observables(const std::vector<ObservableRecord>& records);

// Side-by-side stressed-mass table of the three scenarios; all three record
// sequences must share their time grid.
std::string write_comparison(const std::vector<ObservableRecord>& wc,
                             const std::vector<ObservableRecord>& sc1,
                             const std::vector<ObservableRecord>& sc2);

// VTK legacy structured-points snapshot of one zone's two fields, cell
// values placed at cell centers. Byte-deterministic.
std::string snapshot_text(const Field& uP, const Field& uN, int zone_id);
void write_snapshot(const NetworkState& s, int zone_id, const std::string& path);
void write_snapshot_fields(const Field& uP, const Field& uN, int zone_id,
                           const std::string& path);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace stressnet
