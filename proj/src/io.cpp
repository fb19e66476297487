#include "stressnet/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace stressnet {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    parts.push_back(cur);
    return parts;
}

double parse_real(const std::string& raw, const std::string& where) {
    std::string s = trim(raw);
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size())
            throw ConfigError(where + ": trailing characters after number in '" + s + "'");
        if (!std::isfinite(v))
            throw ConfigError(where + ": value must be finite, got '" + s + "'");
        return v;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        throw ConfigError(where + ": expected a number, got '" + s + "'");
    }
}

int parse_int(const std::string& raw, const std::string& where) {
    double v = parse_real(raw, where);
    double r = std::round(v);
    if (v != r || std::abs(v) > 1e9)
        throw ConfigError(where + ": expected an integer, got '" + trim(raw) + "'");
    return static_cast<int>(r);
}

bool parse_bool(const std::string& raw, const std::string& where) {
    std::string s = trim(raw);
    if (s == "true") return true;
    if (s == "false") return false;
    throw ConfigError(where + ": expected true or false, got '" + s + "'");
}

// Comma-separated numbers inside the given delimiters, e.g. "(0.5, 0.5)".
std::vector<double> parse_tuple(const std::string& raw, std::size_t arity,
                                const std::string& where) {
    std::string s = trim(raw);
    if (s.size() < 2 || s.front() != '(' || s.back() != ')')
        throw ConfigError(where + ": expected a parenthesized tuple, got '" + s + "'");
    std::vector<std::string> parts = split(s.substr(1, s.size() - 2), ',');
    if (parts.size() != arity)
        throw ConfigError(where + ": expected " + std::to_string(arity) + " components, got " +
                          std::to_string(parts.size()));
    std::vector<double> out;
    out.reserve(arity);
    for (const std::string& p : parts) out.push_back(parse_real(p, where));
    return out;
}

std::vector<ClusterSpec> parse_clusters(const std::string& raw, const std::string& where) {
    std::string s = trim(raw);
    if (s.empty() || s == "none") return {};
    std::vector<ClusterSpec> out;
    for (const std::string& item : split(s, ';')) {
        if (trim(item).empty())
            throw ConfigError(where + ": empty cluster entry");
        std::vector<double> v = parse_tuple(item, 4, where);
        out.push_back({v[0], v[1], v[2], v[3]});
    }
    return out;
}

KernelSpec parse_kernel(const std::string& raw, const std::string& where) {
    std::string s = trim(raw);
    KernelSpec k;
    if (s.rfind("gaussian", 0) == 0) {
        std::vector<double> v = parse_tuple(s.substr(8), 3, where);
        k.shape = KernelSpec::Shape::gaussian;
        k.center_x = v[0];
        k.center_y = v[1];
        k.radius = v[2];
    } else if (s.rfind("constant", 0) == 0) {
        std::vector<double> v = parse_tuple(s.substr(8), 1, where);
        k.shape = KernelSpec::Shape::constant;
        k.value = v[0];
    } else {
        throw ConfigError(where + ": expected gaussian(cx, cy, r) or constant(v), got '" + s +
                          "'");
    }
    return k;
}

std::vector<double> parse_real_list(const std::string& raw, const std::string& where) {
    std::string s = trim(raw);
    if (s.empty() || s == "none") return {};
    std::vector<double> out;
    for (const std::string& item : split(s, ','))
        out.push_back(parse_real(item, where));
    return out;
}

struct Entry {
    std::string value;
    int line = 0;
    bool used = false;
};

const char* const kSections[] = {"zone1", "zone2", "coupling", "control", "numerics", "output"};

// Raw key/value store plus typed extraction helpers. Keys are addressed as
// "section.key"; anything left unconsumed after building is unknown.
struct Ctx {
    std::map<std::string, Entry> entries;
    std::set<std::string> touched;

    std::optional<std::string> take(const std::string& key) {
        auto it = entries.find(key);
        if (it == entries.end()) return std::nullopt;
        it->second.used = true;
        touched.insert(key);
        return it->second.value;
    }
    void real(const std::string& key, double& dst) {
        if (auto v = take(key)) dst = parse_real(*v, key);
    }
    void integer(const std::string& key, int& dst) {
        if (auto v = take(key)) dst = parse_int(*v, key);
    }
    void boolean(const std::string& key, bool& dst) {
        if (auto v = take(key)) dst = parse_bool(*v, key);
    }
    void point(const std::string& key, double& x, double& y) {
        if (auto v = take(key)) {
            std::vector<double> p = parse_tuple(*v, 2, key);
            x = p[0];
            y = p[1];
        }
    }
    void kernel(const std::string& key, KernelSpec& dst) {
        if (auto v = take(key)) dst = parse_kernel(*v, key);
    }
    void clusters(const std::string& key, std::vector<ClusterSpec>& dst) {
        if (auto v = take(key)) dst = parse_clusters(*v, key);
    }
    void real_list(const std::string& key, std::vector<double>& dst) {
        if (auto v = take(key)) dst = parse_real_list(*v, key);
    }
    template <typename T>
    void choice(const std::string& key, T& dst,
                std::initializer_list<std::pair<const char*, T>> options) {
        auto v = take(key);
        if (!v) return;
        std::string s = trim(*v);
        std::string valid;
        for (const auto& [name, val] : options) {
            if (s == name) {
                dst = val;
                return;
            }
            if (!valid.empty()) valid += ", ";
            valid += name;
        }
        throw ConfigError(key + ": expected one of {" + valid + "}, got '" + s + "'");
    }
};

void scan(const std::string& text, Ctx& ctx) {
    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (std::size_t hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::string s = trim(line);
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']')
                throw ConfigError("line " + std::to_string(line_no) + ": unterminated section header");
            std::string name = trim(s.substr(1, s.size() - 2));
            bool known = std::any_of(std::begin(kSections), std::end(kSections),
                                     [&](const char* k) { return name == k; });
            if (!known)
                throw ConfigError("line " + std::to_string(line_no) + ": unknown section [" +
                                  name + "]");
            section = name;
            continue;
        }
        std::size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value, got '" +
                              s + "'");
        if (section.empty())
            throw ConfigError("line " + std::to_string(line_no) + ": key outside any [section]");
        std::string key = trim(s.substr(0, eq));
        if (key.empty())
            throw ConfigError("line " + std::to_string(line_no) + ": empty key");
        std::string full = section + "." + key;
        auto [it, inserted] = ctx.entries.try_emplace(full, Entry{trim(s.substr(eq + 1)), line_no});
        if (!inserted)
            throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + full +
                              "' (first set at line " + std::to_string(it->second.line) + ")");
    }
}

void build_zone(Ctx& ctx, const std::string& sec, ZoneConfig& z) {
    ctx.integer(sec + ".nx", z.nx);
    ctx.integer(sec + ".ny", z.ny);
    ctx.point(sec + ".origin", z.x0, z.y0);
    double Lx = z.Lx, Ly = z.Ly;
    ctx.point(sec + ".size", Lx, Ly);
    z.Lx = Lx;
    z.Ly = Ly;
    ctx.real(sec + ".d_P", z.d_P);
    ctx.real(sec + ".d_N", z.d_N);
    ctx.real(sec + ".v_P_max", z.v_P_max);
    ctx.real(sec + ".v_N_max", z.v_N_max);
    ctx.real(sec + ".a", z.kinetics.a);
    ctx.real(sec + ".b", z.kinetics.b);
    ctx.real(sec + ".alpha_P", z.kinetics.alpha_P);
    ctx.real(sec + ".alpha_N", z.kinetics.alpha_N);
    ctx.real(sec + ".eps_guard", z.kinetics.eps_guard);
    ctx.point(sec + ".target", z.target_x, z.target_y);
    ctx.choice(sec + ".initial_layout", z.layout,
               {{"clusters", InitialLayout::clusters},
                {"uniform", InitialLayout::uniform},
                {"cosine_x", InitialLayout::cosine_x}});
    ctx.choice(sec + ".initial_species", z.initial_species,
               {{"stressed", Species::stressed}, {"non_stressed", Species::non_stressed}});
    ctx.clusters(sec + ".clusters", z.clusters);
    ctx.real(sec + ".uniform_P", z.uniform_P);
    ctx.real(sec + ".uniform_N", z.uniform_N);
    ctx.real(sec + ".cosine_amp_P", z.cosine_amp_P);
    ctx.real(sec + ".cosine_amp_N", z.cosine_amp_N);
    ctx.real(sec + ".mass_fraction", z.mass_fraction);
}

void check(bool ok, const std::string& message) {
    if (!ok) throw ConfigError(message);
}

void validate_zone(const std::string& sec, const ZoneConfig& z) {
    check(z.nx >= 4, sec + ".nx: must be >= 4");
    check(z.ny >= 4, sec + ".ny: must be >= 4");
    check(z.Lx > 0.0 && z.Ly > 0.0, sec + ".size: extents must be > 0");
    check(z.d_P >= 0.0, sec + ".d_P: must be >= 0");
    check(z.d_N >= 0.0, sec + ".d_N: must be >= 0");
    check(z.v_P_max >= 0.0, sec + ".v_P_max: must be >= 0");
    check(z.v_N_max >= 0.0, sec + ".v_N_max: must be >= 0");
    check(z.kinetics.a >= 0.0, sec + ".a: must be >= 0");
    check(z.kinetics.b >= 0.0, sec + ".b: must be >= 0");
    check(z.kinetics.alpha_P >= 0.0, sec + ".alpha_P: must be >= 0");
    check(z.kinetics.alpha_N >= 0.0, sec + ".alpha_N: must be >= 0");
    check(z.kinetics.eps_guard > 0.0 && z.kinetics.eps_guard < 1.0,
          sec + ".eps_guard: must lie in (0, 1)");
    check(z.target_x >= z.x0 && z.target_x <= z.x0 + z.Lx && z.target_y >= z.y0 &&
              z.target_y <= z.y0 + z.Ly,
          sec + ".target: must lie inside the zone rectangle");
    for (const ClusterSpec& c : z.clusters) {
        check(c.radius > 0.0, sec + ".clusters: cluster radius must be > 0");
        check(c.weight >= 0.0, sec + ".clusters: cluster weight must be >= 0");
    }
    check(z.uniform_P >= 0.0 && z.uniform_N >= 0.0,
          sec + ".uniform_P/uniform_N: must be >= 0");
    check(z.cosine_amp_P >= 0.0 && z.cosine_amp_N >= 0.0,
          sec + ".cosine_amp_P/cosine_amp_N: must be >= 0");
    check(z.mass_fraction >= 0.0 && z.mass_fraction <= 1.0,
          sec + ".mass_fraction: must lie in [0, 1]");
}

void validate_kernel(const std::string& key, const KernelSpec& k, bool is_departure) {
    if (k.shape == KernelSpec::Shape::gaussian) {
        check(k.radius > 0.0, key + ": gaussian radius must be > 0");
    } else if (is_departure) {
        check(k.value >= 0.0 && k.value <= 1.0, key + ": departure value must lie in [0, 1]");
    } else {
        check(k.value > 0.0, key + ": reception value must be > 0");
    }
}

}  // namespace

SimulationConfig default_config() {
    SimulationConfig cfg;
    cfg.zone1.d_P = 0.2;
    cfg.zone1.d_N = 0.1;
    cfg.zone1.v_P_max = 0.025;
    cfg.zone1.v_N_max = 0.015;
    cfg.zone1.kinetics = {0.01, 0.005, 0.7, 0.4, 1e-6};
    cfg.zone1.initial_species = Species::stressed;
    cfg.zone1.clusters = {{0.25, 0.25, 0.08, 1.0}, {0.5, 0.6, 0.1, 0.8}, {0.75, 0.3, 0.06, 0.9}};

    cfg.zone2.d_P = 0.15;
    cfg.zone2.d_N = 0.05;
    cfg.zone2.v_P_max = 0.0;
    cfg.zone2.v_N_max = 0.0;
    cfg.zone2.kinetics = {0.005, 0.0005, 0.5, 0.4, 1e-6};
    cfg.zone2.initial_species = Species::non_stressed;
    cfg.zone2.clusters = {{0.3, 0.7, 0.09, 1.0}, {0.6, 0.4, 0.1, 0.7}, {0.75, 0.75, 0.07, 0.8}};

    cfg.output.snapshot_times = {0.0, 10.0, 20.0, 100.0, 250.0, 400.0};
    return cfg;
}

SimulationConfig parse_config(const std::string& text) {
    Ctx ctx;
    scan(text, ctx);
    SimulationConfig cfg = default_config();

    build_zone(ctx, "zone1", cfg.zone1);
    build_zone(ctx, "zone2", cfg.zone2);

    ctx.choice("coupling.direction", cfg.coupling.direction,
               {{"none", CouplingDirection::none},
                {"one_to_two", CouplingDirection::one_to_two},
                {"two_to_one", CouplingDirection::two_to_one},
                {"both", CouplingDirection::both}});
    ctx.real("coupling.m_1to2", cfg.coupling.m_1to2);
    ctx.real("coupling.m_2to1", cfg.coupling.m_2to1);
    ctx.kernel("coupling.departure_1", cfg.coupling.departure_1);
    ctx.kernel("coupling.reception_2", cfg.coupling.reception_2);
    ctx.kernel("coupling.departure_2", cfg.coupling.departure_2);
    ctx.kernel("coupling.reception_1", cfg.coupling.reception_1);

    ctx.choice("control.mode", cfg.control.mode,
               {{"off", ControlMode::off},
                {"departure", ControlMode::departure},
                {"arrival", ControlMode::arrival}});
    ctx.real("control.K", cfg.control.K);
    ctx.real("control.T0", cfg.control.T0);
    ctx.real("control.T1", cfg.control.T1);
    ctx.choice("control.u2_integrand", cfg.control.u2_integrand,
               {{"inflow", U2Integrand::inflow}, {"local", U2Integrand::local}});

    ctx.real("numerics.dt_max", cfg.numerics.dt_max);
    ctx.real("numerics.cfl_safety", cfg.numerics.cfl_safety);
    ctx.real("numerics.t_end", cfg.numerics.t_end);
    ctx.real("numerics.conservation_tol", cfg.numerics.conservation_tol);
    ctx.real("numerics.positivity_tol", cfg.numerics.positivity_tol);
    ctx.choice("numerics.speed_density", cfg.numerics.speed_density,
               {{"total", SpeedDensity::total}, {"species", SpeedDensity::species}});
    ctx.boolean("numerics.normalize_mass", cfg.numerics.normalize_mass);

    ctx.real("output.record_interval", cfg.output.record_interval);
    ctx.real_list("output.snapshot_times", cfg.output.snapshot_times);
    if (auto v = ctx.take("output.out_dir")) {
        if (v->empty()) throw ConfigError("output.out_dir: must not be empty");
        cfg.output.out_dir = *v;
    }

    // Anything not consumed above is an unknown key; report the earliest.
    const Entry* bad = nullptr;
    std::string bad_key;
    for (const auto& [key, entry] : ctx.entries) {
        if (!entry.used && (!bad || entry.line < bad->line)) {
            bad = &entry;
            bad_key = key;
        }
    }
    if (bad)
        throw ConfigError("line " + std::to_string(bad->line) + ": unknown key '" + bad_key + "'");

    cfg.explicit_keys = std::move(ctx.touched);

    // Defaults that depend on other keys: the ramp start tracks the control
    // mode, and the stock snapshot times are clipped to the horizon.
    if (!cfg.is_explicit("control.T0"))
        cfg.control.T0 = cfg.control.mode == ControlMode::arrival ? 10.0 : 5.0;
    if (!cfg.is_explicit("output.snapshot_times")) {
        std::vector<double> kept;
        for (double t : cfg.output.snapshot_times)
            if (t <= cfg.numerics.t_end) kept.push_back(t);
        cfg.output.snapshot_times = kept;
    }
    std::sort(cfg.output.snapshot_times.begin(), cfg.output.snapshot_times.end());

    validate_config(cfg);
    return cfg;
}

SimulationConfig load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_config(buf.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

void validate_config(const SimulationConfig& cfg) {
    validate_zone("zone1", cfg.zone1);
    validate_zone("zone2", cfg.zone2);

    check(cfg.coupling.m_1to2 >= 0.0 && cfg.coupling.m_1to2 <= 1.0,
          "coupling.m_1to2: must lie in [0, 1]");
    check(cfg.coupling.m_2to1 >= 0.0 && cfg.coupling.m_2to1 <= 1.0,
          "coupling.m_2to1: must lie in [0, 1]");
    validate_kernel("coupling.departure_1", cfg.coupling.departure_1, true);
    validate_kernel("coupling.reception_2", cfg.coupling.reception_2, false);
    validate_kernel("coupling.departure_2", cfg.coupling.departure_2, true);
    validate_kernel("coupling.reception_1", cfg.coupling.reception_1, false);

    check(cfg.control.K >= 0.0 && cfg.control.K <= 1.0, "control.K: must lie in [0, 1]");
    check(cfg.control.T0 >= 0.0, "control.T0: must be >= 0");
    check(cfg.control.T1 > cfg.control.T0, "control.T1: must be > control.T0");

    check(cfg.numerics.dt_max > 0.0, "numerics.dt_max: must be > 0");
    check(cfg.numerics.cfl_safety > 0.0 && cfg.numerics.cfl_safety <= 1.0,
          "numerics.cfl_safety: must lie in (0, 1]");
    check(cfg.numerics.t_end >= 0.0, "numerics.t_end: must be >= 0");
    check(cfg.numerics.conservation_tol > 0.0, "numerics.conservation_tol: must be > 0");
    check(cfg.numerics.positivity_tol > 0.0, "numerics.positivity_tol: must be > 0");
    if (cfg.numerics.normalize_mass)
        check(cfg.zone1.mass_fraction + cfg.zone2.mass_fraction > 0.0,
              "zone1.mass_fraction: zone fractions must not both be zero");

    check(cfg.output.record_interval > 0.0, "output.record_interval: must be > 0");
    for (double t : cfg.output.snapshot_times)
        check(t >= 0.0 && t <= cfg.numerics.t_end,
              "output.snapshot_times: " + format_full(t) + " outside [0, t_end]");
}

void apply_scenario(SimulationConfig& cfg, const std::string& scenario) {
    if (scenario == "wc") {
        cfg.control.mode = ControlMode::off;
    } else if (scenario == "sc1") {
        cfg.control.mode = ControlMode::departure;
        if (!cfg.is_explicit("control.T0")) cfg.control.T0 = 5.0;
        if (!cfg.is_explicit("control.T1")) cfg.control.T1 = 20.0;
    } else if (scenario == "sc2") {
        cfg.control.mode = ControlMode::arrival;
        if (!cfg.is_explicit("control.T0")) cfg.control.T0 = 10.0;
        if (!cfg.is_explicit("control.T1")) cfg.control.T1 = 20.0;
    } else {
        throw ConfigError("unknown scenario '" + scenario + "' (expected wc, sc1, or sc2)");
    }
    validate_config(cfg);
}

std::string format_full(double v) {
    char buf[40];
    for (int prec : {15, 16, 17}) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) return buf;
    }
    return buf;
}

std::string format_time_label(double t) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", t);
    return buf;
}

namespace {

std::string format_csv(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string kernel_to_string(const KernelSpec& k) {
    if (k.shape == KernelSpec::Shape::gaussian)
        return "gaussian(" + format_full(k.center_x) + ", " + format_full(k.center_y) + ", " +
               format_full(k.radius) + ")";
    return "constant(" + format_full(k.value) + ")";
}

void write_zone(std::ostringstream& out, const std::string& sec, const ZoneConfig& z) {
    out << "[" << sec << "]\n";
    out << "nx = " << z.nx << "\n";
    out << "ny = " << z.ny << "\n";
    out << "origin = (" << format_full(z.x0) << ", " << format_full(z.y0) << ")\n";
    out << "size = (" << format_full(z.Lx) << ", " << format_full(z.Ly) << ")\n";
    out << "d_P = " << format_full(z.d_P) << "\n";
    out << "d_N = " << format_full(z.d_N) << "\n";
    out << "v_P_max = " << format_full(z.v_P_max) << "\n";
    out << "v_N_max = " << format_full(z.v_N_max) << "\n";
    out << "a = " << format_full(z.kinetics.a) << "\n";
    out << "b = " << format_full(z.kinetics.b) << "\n";
    out << "alpha_P = " << format_full(z.kinetics.alpha_P) << "\n";
    out << "alpha_N = " << format_full(z.kinetics.alpha_N) << "\n";
    out << "eps_guard = " << format_full(z.kinetics.eps_guard) << "\n";
    out << "target = (" << format_full(z.target_x) << ", " << format_full(z.target_y) << ")\n";
    const char* layout = z.layout == InitialLayout::clusters  ? "clusters"
                         : z.layout == InitialLayout::uniform ? "uniform"
                                                              : "cosine_x";
    out << "initial_layout = " << layout << "\n";
    out << "initial_species = "
        << (z.initial_species == Species::stressed ? "stressed" : "non_stressed") << "\n";
    out << "clusters = ";
    if (z.clusters.empty()) {
        out << "none";
    } else {
        for (std::size_t i = 0; i < z.clusters.size(); ++i) {
            const ClusterSpec& c = z.clusters[i];
            if (i) out << "; ";
            out << "(" << format_full(c.cx) << ", " << format_full(c.cy) << ", "
                << format_full(c.radius) << ", " << format_full(c.weight) << ")";
        }
    }
    out << "\n";
    out << "uniform_P = " << format_full(z.uniform_P) << "\n";
    out << "uniform_N = " << format_full(z.uniform_N) << "\n";
    out << "cosine_amp_P = " << format_full(z.cosine_amp_P) << "\n";
    out << "cosine_amp_N = " << format_full(z.cosine_amp_N) << "\n";
    out << "mass_fraction = " << format_full(z.mass_fraction) << "\n";
}

}  // namespace

std::string write_config(const SimulationConfig& cfg) {
    std::ostringstream out;
    write_zone(out, "zone1", cfg.zone1);
    out << "\n";
    write_zone(out, "zone2", cfg.zone2);

    out << "\n[coupling]\n";
    const char* dir = cfg.coupling.direction == CouplingDirection::none         ? "none"
                      : cfg.coupling.direction == CouplingDirection::one_to_two ? "one_to_two"
                      : cfg.coupling.direction == CouplingDirection::two_to_one ? "two_to_one"
                                                                                : "both";
    out << "direction = " << dir << "\n";
    out << "m_1to2 = " << format_full(cfg.coupling.m_1to2) << "\n";
    out << "m_2to1 = " << format_full(cfg.coupling.m_2to1) << "\n";
    out << "departure_1 = " << kernel_to_string(cfg.coupling.departure_1) << "\n";
    out << "reception_2 = " << kernel_to_string(cfg.coupling.reception_2) << "\n";
    out << "departure_2 = " << kernel_to_string(cfg.coupling.departure_2) << "\n";
    out << "reception_1 = " << kernel_to_string(cfg.coupling.reception_1) << "\n";

    out << "\n[control]\n";
    const char* mode = cfg.control.mode == ControlMode::off         ? "off"
                       : cfg.control.mode == ControlMode::departure ? "departure"
                                                                    : "arrival";
    out << "mode = " << mode << "\n";
    out << "K = " << format_full(cfg.control.K) << "\n";
    out << "T0 = " << format_full(cfg.control.T0) << "\n";
    out << "T1 = " << format_full(cfg.control.T1) << "\n";
    out << "u2_integrand = "
        << (cfg.control.u2_integrand == U2Integrand::inflow ? "inflow" : "local") << "\n";

    out << "\n[numerics]\n";
    out << "dt_max = " << format_full(cfg.numerics.dt_max) << "\n";
    out << "cfl_safety = " << format_full(cfg.numerics.cfl_safety) << "\n";
    out << "t_end = " << format_full(cfg.numerics.t_end) << "\n";
    out << "conservation_tol = " << format_full(cfg.numerics.conservation_tol) << "\n";
    out << "positivity_tol = " << format_full(cfg.numerics.positivity_tol) << "\n";
    out << "speed_density = "
        << (cfg.numerics.speed_density == SpeedDensity::total ? "total" : "species") << "\n";
    out << "normalize_mass = " << (cfg.numerics.normalize_mass ? "true" : "false") << "\n";

    out << "\n[output]\n";
    out << "record_interval = " << format_full(cfg.output.record_interval) << "\n";
    out << "snapshot_times = ";
    if (cfg.output.snapshot_times.empty()) {
        out << "none";
    } else {
        for (std::size_t i = 0; i < cfg.output.snapshot_times.size(); ++i) {
            if (i) out << ", ";
            out << format_full(cfg.output.snapshot_times[i]);
        }
    }
    out << "\n";
    out << "out_dir = " << cfg.output.out_dir << "\n";
    return out.str();
}

std::string write_observables(const std::vector<ObservableRecord>& records) {
    if (records.empty())
        throw std::invalid_argument("write_observables: record sequence must not be empty");
    std::ostringstream out;
    out << "t,M_P1,M_N1,M_P2,M_N2,M_P,M_N,V,min_val,dt_used\n";
    for (const ObservableRecord& r : records) {
        out << format_csv(r.t) << ',' << format_csv(r.M_P1) << ',' << format_csv(r.M_N1) << ','
            << format_csv(r.M_P2) << ',' << format_csv(r.M_N2) << ',' << format_csv(r.M_P) << ','
            << format_csv(r.M_N) << ',' << format_csv(r.V) << ',' << format_csv(r.min_val) << ','
            << format_csv(r.dt_used) << "\n";
    }
    return out.str();
}

std::string write_comparison(const std::vector<ObservableRecord>& wc,
                             const std::vector<ObservableRecord>& sc1,
                             const std::vector<ObservableRecord>& sc2) {
    if (wc.size() != sc1.size() || wc.size() != sc2.size())
        throw std::invalid_argument("write_comparison: record sequences differ in length");
    std::ostringstream out;
    out << "t,M_P_wc,M_P_sc1,M_P_sc2,M_P2_wc,M_P2_sc1,M_P2_sc2\n";
    for (std::size_t i = 0; i < wc.size(); ++i) {
        if (wc[i].t != sc1[i].t || wc[i].t != sc2[i].t)
            throw std::invalid_argument("write_comparison: record times are not aligned");
        out << format_csv(wc[i].t) << ',' << format_csv(wc[i].M_P) << ','
            << format_csv(sc1[i].M_P) << ',' << format_csv(sc2[i].M_P) << ','
            << format_csv(wc[i].M_P2) << ',' << format_csv(sc1[i].M_P2) << ','
            << format_csv(sc2[i].M_P2) << "\n";
    }
    return out.str();
}

std::string snapshot_text(const Field& uP, const Field& uN, int zone_id) {
    const Grid& g = *uP.grid;
    if (!g.same_layout(*uN.grid))
        throw std::invalid_argument("snapshot: uP and uN live on different grids");
    std::ostringstream out;
    out << "# vtk DataFile Version 3.0\n";
    out << "zone " << zone_id << " densities\n";
    out << "ASCII\n";
    out << "DATASET STRUCTURED_POINTS\n";
    out << "DIMENSIONS " << g.nx << " " << g.ny << " 1\n";
    out << "ORIGIN " << format_full(g.x0 + 0.5 * g.hx) << " " << format_full(g.y0 + 0.5 * g.hy)
        << " 0\n";
    out << "SPACING " << format_full(g.hx) << " " << format_full(g.hy) << " 1\n";
    out << "POINT_DATA " << g.cells() << "\n";
    for (const auto& [name, field] : {std::pair<const char*, const Field*>{"u_P", &uP},
                                      std::pair<const char*, const Field*>{"u_N", &uN}}) {
        out << "SCALARS " << name << " double 1\n";
        out << "LOOKUP_TABLE default\n";
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                out << format_csv((*field)(i, j)) << "\n";
    }
    return out.str();
}

void write_snapshot(const NetworkState& s, int zone_id, const std::string& path) {
    if (zone_id == 1)
        write_snapshot_fields(s.uP1, s.uN1, 1, path);
    else if (zone_id == 2)
        write_snapshot_fields(s.uP2, s.uN2, 2, path);
    else
        throw std::invalid_argument("snapshot: zone_id must be 1 or 2");
}

void write_snapshot_fields(const Field& uP, const Field& uN, int zone_id,
                           const std::string& path) {
    write_text_file(path, snapshot_text(uP, uN, zone_id));
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace stressnet
