#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "stressnet/io.hpp"

using namespace stressnet;

namespace {

bool mentions(const std::exception& e, const std::string& needle) {
    return std::string(e.what()).find(needle) != std::string::npos;
}

template <typename Fn>
std::string error_of(Fn&& fn) {
    try {
        fn();
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("default config carries the stock parameter set") {
    SimulationConfig cfg = default_config();
    CHECK(cfg.zone1.nx == 64);
    CHECK(cfg.zone1.d_P == 0.2);
    CHECK(cfg.zone1.d_N == 0.1);
    CHECK(cfg.zone1.v_P_max == 0.025);
    CHECK(cfg.zone1.v_N_max == 0.015);
    CHECK(cfg.zone1.kinetics.a == 0.01);
    CHECK(cfg.zone1.kinetics.b == 0.005);
    CHECK(cfg.zone1.kinetics.alpha_P == 0.7);
    CHECK(cfg.zone1.kinetics.alpha_N == 0.4);
    CHECK(cfg.zone1.clusters.size() == 3);
    CHECK(cfg.zone1.initial_species == Species::stressed);
    CHECK(cfg.zone2.d_P == 0.15);
    CHECK(cfg.zone2.v_P_max == 0.0);
    CHECK(cfg.zone2.kinetics.a == 0.005);
    CHECK(cfg.zone2.initial_species == Species::non_stressed);
    CHECK(cfg.coupling.direction == CouplingDirection::one_to_two);
    CHECK(cfg.coupling.m_1to2 == 0.2);
    CHECK(cfg.coupling.m_2to1 == 0.8);
    CHECK(cfg.control.mode == ControlMode::off);
    CHECK(cfg.numerics.t_end == 400.0);
    CHECK(cfg.numerics.normalize_mass == true);
    CHECK(cfg.output.snapshot_times == std::vector<double>{0, 10, 20, 100, 250, 400});
    CHECK_NOTHROW(validate_config(cfg));
}

TEST_CASE("empty text parses to the defaults") {
    SimulationConfig parsed = parse_config("");
    CHECK(write_config(parsed) == write_config(default_config()));
    CHECK(parsed.explicit_keys.empty());
}

TEST_CASE("write/parse round trip is canonical") {
    SimulationConfig cfg = default_config();
    cfg.zone1.nx = 48;
    cfg.zone1.ny = 40;
    cfg.zone1.layout = InitialLayout::cosine_x;
    cfg.zone1.cosine_amp_P = 0.75;
    cfg.zone2.layout = InitialLayout::uniform;
    cfg.zone2.uniform_N = 0.125;
    cfg.zone2.clusters.clear();
    cfg.coupling.direction = CouplingDirection::both;
    cfg.coupling.departure_1.shape = KernelSpec::Shape::constant;
    cfg.coupling.departure_1.value = 0.33;
    cfg.control.mode = ControlMode::arrival;
    cfg.control.K = 0.8;
    cfg.control.u2_integrand = U2Integrand::local;
    cfg.numerics.t_end = 12.5;
    cfg.numerics.speed_density = SpeedDensity::species;
    cfg.numerics.normalize_mass = false;
    cfg.output.snapshot_times = {0.0, 1.0 / 3.0, 12.5};
    cfg.output.record_interval = 0.25;

    std::string text = write_config(cfg);
    SimulationConfig back = parse_config(text);
    CHECK(write_config(back) == text);
    CHECK(back.zone1.nx == 48);
    CHECK(back.zone1.layout == InitialLayout::cosine_x);
    CHECK(back.zone2.uniform_N == 0.125);
    CHECK(back.coupling.departure_1.value == 0.33);
    CHECK(back.control.u2_integrand == U2Integrand::local);
    CHECK(back.numerics.speed_density == SpeedDensity::species);
    CHECK(back.output.snapshot_times[1] == 1.0 / 3.0);  // exact round trip
}

TEST_CASE("typed overrides are applied") {
    std::string text =
        "[zone1]\n"
        "nx = 32\n"
        "d_P = 0.05\n"
        "v_P_max = 0.01\n"
        "v_N_max = 0.02\n"
        "target = (0.25, 0.75)\n"
        "clusters = (0.2, 0.2, 0.05, 1.0); (0.8, 0.8, 0.1, 0.5)\n"
        "[coupling]\n"
        "direction = two_to_one\n"
        "departure_2 = constant(0.4)\n"
        "reception_1 = gaussian(0.1, 0.9, 0.2)\n"
        "[numerics]\n"
        "normalize_mass = false\n"
        "t_end = 50\n"
        "[output]\n"
        "snapshot_times = 0, 25, 50\n";
    SimulationConfig cfg = parse_config(text);
    CHECK(cfg.zone1.nx == 32);
    CHECK(cfg.zone1.ny == 64);  // untouched default
    CHECK(cfg.zone1.d_P == 0.05);
    CHECK(cfg.zone1.v_P_max == 0.01);
    CHECK(cfg.zone1.v_N_max == 0.02);
    CHECK(cfg.zone1.target_x == 0.25);
    CHECK(cfg.zone1.target_y == 0.75);
    REQUIRE(cfg.zone1.clusters.size() == 2);
    CHECK(cfg.zone1.clusters[1].cx == 0.8);
    CHECK(cfg.zone1.clusters[1].weight == 0.5);
    CHECK(cfg.coupling.direction == CouplingDirection::two_to_one);
    CHECK(cfg.coupling.departure_2.shape == KernelSpec::Shape::constant);
    CHECK(cfg.coupling.departure_2.value == 0.4);
    CHECK(cfg.coupling.reception_1.shape == KernelSpec::Shape::gaussian);
    CHECK(cfg.coupling.reception_1.center_y == 0.9);
    CHECK(cfg.numerics.normalize_mass == false);
    CHECK(cfg.is_explicit("zone1.nx"));
    CHECK(cfg.is_explicit("numerics.t_end"));
    CHECK_FALSE(cfg.is_explicit("zone1.ny"));
    // Explicit snapshot list is kept verbatim (sorted), no default filtering.
    CHECK(cfg.output.snapshot_times == std::vector<double>{0, 25, 50});
}

TEST_CASE("comments and whitespace are tolerated") {
    std::string text =
        "# leading comment\n"
        "\n"
        "  [zone1]   # section comment\n"
        "  nx = 16   # trailing comment\n"
        "\tny=16\n";
    SimulationConfig cfg = parse_config(text);
    CHECK(cfg.zone1.nx == 16);
    CHECK(cfg.zone1.ny == 16);
}

TEST_CASE("parser rejects malformed input with line numbers") {
    // Unknown section.
    std::string e1 = error_of([] { parse_config("[zonex]\n"); });
    CHECK(e1.find("line 1") != std::string::npos);
    CHECK(e1.find("unknown section") != std::string::npos);

    // Unknown key inside a valid section.
    std::string e2 = error_of([] { parse_config("[zone1]\nfoo = 1\n"); });
    CHECK(e2.find("line 2") != std::string::npos);
    CHECK(e2.find("unknown key 'zone1.foo'") != std::string::npos);

    // Key before any section header.
    std::string e3 = error_of([] { parse_config("nx = 4\n"); });
    CHECK(e3.find("line 1") != std::string::npos);
    CHECK(e3.find("outside any [section]") != std::string::npos);

    // Duplicate key reports both occurrences.
    std::string e4 = error_of([] { parse_config("[zone1]\nnx = 8\n# gap\nnx = 16\n"); });
    CHECK(e4.find("line 4") != std::string::npos);
    CHECK(e4.find("duplicate key 'zone1.nx'") != std::string::npos);
    CHECK(e4.find("line 2") != std::string::npos);

    // Missing '='.
    std::string e5 = error_of([] { parse_config("[zone1]\nnx 8\n"); });
    CHECK(e5.find("expected key = value") != std::string::npos);

    // Bad number, bad integer, bad bool, bad tuple, bad kernel.
    CHECK_THROWS_AS(parse_config("[zone1]\nd_P = fast\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[zone1]\nnx = 8.5\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[numerics]\nnormalize_mass = maybe\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[zone1]\ntarget = 0.01\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[zone1]\ntarget = (0.1, 0.2, 0.3)\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[coupling]\ndeparture_1 = triangle(0.5)\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[coupling]\ndirection = sideways\n"), ConfigError);
    std::string e6 = error_of([] { parse_config("[coupling]\ndirection = sideways\n"); });
    CHECK(e6.find("one_to_two") != std::string::npos);  // lists the choices
}

TEST_CASE("validation names the offending key") {
    std::string e1 = error_of([] { parse_config("[zone1]\nd_P = -1\n"); });
    CHECK(e1.find("zone1.d_P") != std::string::npos);

    std::string e2 = error_of([] { parse_config("[zone1]\nnx = 2\n"); });
    CHECK(e2.find("zone1.nx") != std::string::npos);

    std::string e3 = error_of([] { parse_config("[control]\nT0 = 30\nT1 = 20\n"); });
    CHECK(e3.find("control.T1") != std::string::npos);

    std::string e4 = error_of([] { parse_config("[coupling]\nm_1to2 = 1.5\n"); });
    CHECK(e4.find("coupling.m_1to2") != std::string::npos);

    std::string e5 =
        error_of([] { parse_config("[coupling]\ndeparture_1 = constant(1.5)\n"); });
    CHECK(e5.find("coupling.departure_1") != std::string::npos);

    std::string e6 = error_of([] { parse_config("[numerics]\nt_end = -2\n"); });
    CHECK(e6.find("numerics.t_end") != std::string::npos);

    std::string e7 = error_of([] { parse_config("[zone1]\ntarget = (2.0, 0.5)\n"); });
    CHECK(e7.find("zone1.target") != std::string::npos);
}

TEST_CASE("scenario overrides") {
    SimulationConfig cfg = parse_config("");

    apply_scenario(cfg, "sc1");
    CHECK(cfg.control.mode == ControlMode::departure);
    CHECK(cfg.control.T0 == 5.0);
    CHECK(cfg.control.T1 == 20.0);

    apply_scenario(cfg, "sc2");
    CHECK(cfg.control.mode == ControlMode::arrival);
    CHECK(cfg.control.T0 == 10.0);

    apply_scenario(cfg, "wc");
    CHECK(cfg.control.mode == ControlMode::off);

    // Explicitly configured schedule survives the scenario switch.
    SimulationConfig pinned = parse_config("[control]\nT0 = 7\nT1 = 30\n");
    apply_scenario(pinned, "sc2");
    CHECK(pinned.control.mode == ControlMode::arrival);
    CHECK(pinned.control.T0 == 7.0);
    CHECK(pinned.control.T1 == 30.0);

    CHECK_THROWS_AS(apply_scenario(cfg, "sc3"), ConfigError);
}

TEST_CASE("dependent defaults follow the control mode and horizon") {
    // Arrival control moves the default ramp start to t = 10.
    SimulationConfig arr = parse_config("[control]\nmode = arrival\n");
    CHECK(arr.control.T0 == 10.0);
    SimulationConfig dep = parse_config("[control]\nmode = departure\n");
    CHECK(dep.control.T0 == 5.0);

    // Default snapshot times are clipped to the simulated horizon.
    SimulationConfig cfg = parse_config("[numerics]\nt_end = 50\n");
    CHECK(cfg.output.snapshot_times == std::vector<double>{0, 10, 20});
}

TEST_CASE("format_full round trips exactly") {
    for (double v : {0.1, 1.0 / 3.0, 1e-17, 123456.789, 3.141592653589793,
                     2.2250738585072014e-308, -0.0, 42.0}) {
        std::string s = format_full(v);
        double back = std::strtod(s.c_str(), nullptr);
        CHECK(back == v);
    }
    CHECK(format_full(42.0) == "42");
}

TEST_CASE("time labels are compact") {
    CHECK(format_time_label(10.0) == "10");
    CHECK(format_time_label(2.5) == "2.5");
    CHECK(format_time_label(0.0) == "0");
}

TEST_CASE("observables CSV shape") {
    ObservableRecord r0;
    r0.t = 0.0;
    r0.M_P1 = 0.25;
    r0.V = 1.0;
    ObservableRecord r1 = r0;
    r1.t = 0.5;
    r1.dt_used = 0.003;
    std::string csv = write_observables({r0, r1});
    std::istringstream in(csv);
    std::string header;
    std::getline(in, header);
    CHECK(header == "t,M_P1,M_N1,M_P2,M_N2,M_P,M_N,V,min_val,dt_used");
    int rows = 0;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 2);
    CHECK_THROWS_AS(write_observables({}), std::invalid_argument);
}

TEST_CASE("comparison CSV requires aligned time grids") {
    ObservableRecord a, b;
    a.t = 0.0;
    b.t = 1.0;
    std::vector<ObservableRecord> wc = {a, b}, sc1 = {a, b}, sc2 = {a, b};
    std::string csv = write_comparison(wc, sc1, sc2);
    std::istringstream in(csv);
    std::string header;
    std::getline(in, header);
    CHECK(header == "t,M_P_wc,M_P_sc1,M_P_sc2,M_P2_wc,M_P2_sc1,M_P2_sc2");

    std::vector<ObservableRecord> shifted = {a};
    CHECK_THROWS_AS(write_comparison(wc, shifted, sc2), std::invalid_argument);
    shifted = {a, a};  // same length, different times
    CHECK_THROWS_AS(write_comparison(wc, shifted, sc2), std::invalid_argument);
}

TEST_CASE("snapshot text is valid legacy VTK") {
    Grid g(4, 4, 0.0, 0.0, 0.25, 0.25, 1);
    Field uP(g), uN(g);
    for (int c = 0; c < g.cells(); ++c) {
        uP[c] = 0.01 * c + 1.0 / 3.0;
        uN[c] = 0.5 - 0.002 * c;
    }
    std::string text = snapshot_text(uP, uN, 1);
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    CHECK(line == "# vtk DataFile Version 3.0");
    std::getline(in, line);
    CHECK(line == "zone 1 densities");
    std::getline(in, line);
    CHECK(line == "ASCII");
    std::getline(in, line);
    CHECK(line == "DATASET STRUCTURED_POINTS");
    std::getline(in, line);
    CHECK(line == "DIMENSIONS 4 4 1");
    std::getline(in, line);
    CHECK(line.rfind("ORIGIN 0.125 0.125", 0) == 0);
    std::getline(in, line);
    CHECK(line.rfind("SPACING 0.25 0.25", 0) == 0);
    std::getline(in, line);
    CHECK(line == "POINT_DATA 16");
    std::getline(in, line);
    CHECK(line == "SCALARS u_P double 1");
    std::getline(in, line);
    CHECK(line == "LOOKUP_TABLE default");
    // 16 u_P values, x fastest, re-read bitwise.
    for (int c = 0; c < 16; ++c) {
        std::getline(in, line);
        CHECK(std::strtod(line.c_str(), nullptr) == uP[c]);
    }
    std::getline(in, line);
    CHECK(line == "SCALARS u_N double 1");
    std::getline(in, line);
    CHECK(line == "LOOKUP_TABLE default");
    for (int c = 0; c < 16; ++c) {
        std::getline(in, line);
        CHECK(std::strtod(line.c_str(), nullptr) == uN[c]);
    }
}

TEST_CASE("config file loading") {
    namespace fs = std::filesystem;
    fs::path path = fs::temp_directory_path() / "stressnet_io_test.cfg";
    write_text_file(path.string(), "[zone1]\nnx = 20\nny = 24\n");
    SimulationConfig cfg = load_config_file(path.string());
    CHECK(cfg.zone1.nx == 20);
    CHECK(cfg.zone1.ny == 24);
    fs::remove(path);

    CHECK_THROWS_AS(load_config_file("/nonexistent/path/to.cfg"), ConfigError);
    // Errors inside a file are prefixed with its path.
    fs::path bad = fs::temp_directory_path() / "stressnet_io_bad.cfg";
    write_text_file(bad.string(), "[zone1]\nwhat = 1\n");
    std::string msg = error_of([&] { (void)load_config_file(bad.string()); });
    CHECK(msg.find("stressnet_io_bad.cfg") != std::string::npos);
    CHECK(msg.find("unknown key") != std::string::npos);
    fs::remove(bad);
}
