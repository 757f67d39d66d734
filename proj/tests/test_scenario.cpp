#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rbo/io.hpp"
#include "rbo/scenario.hpp"
#include "rbo/states.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace rbo;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
    const auto dir = fs::temp_directory_path() / ("rbo_test_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

ScenarioConfig quick(const std::string& id, double tau_end) {
    auto cfg = preset(id);
    cfg.run.tau_end = tau_end;
    return cfg;
}

}  // namespace

TEST_CASE("preset table") {
    SUBCASE("d: both drives on, normal incidence") {
        const auto c = preset("d");
        CHECK(c.drive.omega_B == 3.9e-3);
        CHECK(c.drive.omega_R == 2.5e-2);
        CHECK(c.drive.K == 0.0);
        CHECK(c.chain.t_a == Complex(3.5e-2, 0.0));
        CHECK(c.chain.t_b == c.chain.t_a);
    }

    SUBCASE("b: pure ac") {
        CHECK(preset("b").drive.omega_B == 0.0);
        CHECK(preset("b").drive.omega_R == 2.5e-2);
    }

    SUBCASE("iii: trapped packet with both drives") {
        const auto c = preset("iii");
        CHECK(c.initial.kind == InitialKind::Trapped);
        CHECK(c.drive.omega_B == 3.9e-3);
        CHECK(c.drive.omega_R == 2.5e-2);
        CHECK(c.drive.K == 0.0);
        CHECK(c.run.variant == ModelVariant::Rwa);
        CHECK(c.chain.t_b == Complex(3.5e-3, 0.0));
        CHECK(std::abs(c.initial.momentum - 0.9707) < 1e-4);
    }

    SUBCASE("shared numerics") {
        for (const auto& id : preset_ids()) {
            const auto c = preset(id);
            CHECK(c.chain.n_sites == 128);
            CHECK(c.chain.delta_eps == 0.5);
            CHECK(c.initial.center == 80.0);
            CHECK(c.initial.width == 20.0);
            CHECK(c.drive.nu == 1.0);
            CHECK(c.run.probes == std::vector<int>{40, 60, 80});
            CHECK_NOTHROW(c.validate());
        }
    }

    SUBCASE("table rows are encoded literally") {
        CHECK(preset("a").drive.omega_R == 0.0);
        CHECK(preset("c").drive.omega_B == 0.0);
        CHECK(preset("c").drive.K == -0.624);
        CHECK(preset("e").drive.K == -0.624);
        CHECK(preset("e").chain.t_a == preset("e").chain.t_b);
        CHECK(preset("f").chain.t_b == Complex(0.0, 0.0));
        CHECK(preset("f").drive.K == 0.0);
        CHECK(preset("f-oblique").drive.K == -0.624);
    }

    SUBCASE("unknown id") {
        CHECK_THROWS_AS(preset("z"), ConfigError);
    }
}

TEST_CASE("config text parsing") {
    SUBCASE("a bare preset line reproduces the preset") {
        const auto parsed = parse_config("preset = d\n");
        CHECK(serialize_config(parsed) == serialize_config(preset("d")));
    }

    SUBCASE("overrides after the preset line, bare leaf keys allowed") {
        const auto parsed = parse_config("preset = d\nomega_R = 0.05\n");
        CHECK(parsed.drive.omega_R == 0.05);
        CHECK(parsed.drive.omega_B == 3.9e-3);
    }

    SUBCASE("dotted paths, comments, blank lines") {
        const auto parsed = parse_config(
            "# a comment\n"
            "preset = b\n"
            "\n"
            "drive.nu = 0.9   # resonance detuned\n"
            "chain.t_a = 0.02+0.003i\n"
            "run.probes = 10,20,30\n"
            "initial.band = ground\n"
            "run.tau_end = 12.5\n");
        CHECK(parsed.drive.nu == 0.9);
        CHECK(parsed.chain.t_a == Complex(0.02, 0.003));
        CHECK(parsed.run.probes == std::vector<int>{10, 20, 30});
        CHECK(parsed.initial.band == Band::Ground);
        CHECK(parsed.run.tau_end == 12.5);
    }

    SUBCASE("invalid values are rejected with a line number") {
        CHECK_THROWS_WITH_AS(parse_config("d_tau = -1\n"),
                             doctest::Contains("d_tau"), ConfigError);
        try {
            parse_config("preset = d\nno_such_key = 1\n");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("line 2") != std::string::npos);
        }
        CHECK_THROWS_AS(parse_config("omega_R == 0.05\n"), ConfigError);
        CHECK_THROWS_AS(parse_config("omega_R\n"), ConfigError);
        CHECK_THROWS_AS(parse_config("omega_R = 0.05\npreset = d\n"),
                        ConfigError);
        CHECK_THROWS_AS(parse_config("preset = nope\n"), ConfigError);
        CHECK_THROWS_AS(parse_config("chain.t_a = 1+2j\n"), ConfigError);
        CHECK_THROWS_AS(parse_config("record_every = 0\n"), ConfigError);
        CHECK_THROWS_AS(parse_config("run.probes = 500\n"), ConfigError);
    }

    SUBCASE("serialization round-trips") {
        auto cfg = preset("e");
        cfg.drive.phi = 0.25;
        cfg.run.tau_end = 77.0;
        cfg.chain.t_b = Complex(1e-3, -2e-4);
        const auto again = parse_config(serialize_config(cfg));
        // Drop the leading name comment; only the key = value body matters.
        auto body = [](std::string text) {
            return text.substr(text.find('\n') + 1);
        };
        CHECK(body(serialize_config(again)) == body(serialize_config(cfg)));
    }

    SUBCASE("the dipole Nyquist guard rejects coarse recording") {
        CHECK_THROWS_AS(parse_config("preset = d\nrecord_every = 500\n"),
                        ConfigError);
        // No interband drive: the guard does not apply.
        CHECK_NOTHROW(parse_config("preset = a\nrecord_every = 500\n"));
    }
}

TEST_CASE("initial_state dispatches on the configured kind") {
    auto cfg = preset("d");
    const auto gauss = initial_state(cfg);
    CHECK(gauss.b.cwiseAbs().maxCoeff() == 0.0);

    cfg = preset("ii");
    const auto trapped = initial_state(cfg);
    CHECK(trapped.a.cwiseAbs().maxCoeff() > 0.0);
    CHECK(trapped.b.cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("run_scenario writes the documented tree and is deterministic") {
    auto cfg = quick("d", 50.0);
    const auto dir1 = fresh_dir("run1");
    const auto res1 = run_scenario(cfg, dir1);

    SUBCASE("file inventory") {
        for (const char* name :
             {"inversion_grid.f64", "inversion_grid.json", "tunnel_grid.f64",
              "dipole_grid.f64", "series_inversion_site80.txt",
              "series_tunnel_sum.txt", "series_dipole_site40.txt",
              "spectrum_inversion_site80.txt", "peaks_dipole_site80.txt",
              "manifest.json"})
            CHECK(fs::exists(dir1 / name));
        // 3 kinds x 4 probes
        CHECK(res1.series.size() == 12);
        CHECK(res1.spectra.size() == 12);
        const int expected_records = 50.0 / 0.01 / 5 + 1;
        CHECK(res1.series.at("inversion_site80").size() == expected_records);
    }

    SUBCASE("manifest checksums match the files on disk") {
        for (const auto& [name, rec] : res1.manifest.outputs) {
            CHECK(fs::file_size(dir1 / name) == rec.bytes);
            CHECK(to_hex(fnv1a64_file(dir1 / name)) == rec.fnv1a64);
        }
    }

    SUBCASE("rerunning the identical config is byte-identical") {
        const auto dir2 = fresh_dir("run2");
        const auto res2 = run_scenario(cfg, dir2);
        REQUIRE(res2.manifest.outputs.size() == res1.manifest.outputs.size());
        for (const auto& [name, rec] : res1.manifest.outputs)
            CHECK(res2.manifest.outputs.at(name).fnv1a64 == rec.fnv1a64);
        fs::remove_all(dir2);
    }

    fs::remove_all(dir1);
}

TEST_CASE("run_scenario with tau_end = 0 produces the manifest only") {
    auto cfg = quick("a", 0.0);
    const auto dir = fresh_dir("empty");
    const auto res = run_scenario(cfg, dir);
    CHECK(res.manifest.n_steps == 0);
    CHECK(res.series.at("inversion_site80").size() == 1);
    CHECK(res.spectra.empty());
    CHECK(fs::exists(dir / "manifest.json"));
    fs::remove_all(dir);
}

TEST_CASE("compare_rwa") {
    SUBCASE("without interband drive the variants coincide") {
        auto cfg = quick("a", 50.0);
        const auto dir = fresh_dir("rwa_a");
        const auto cmp = compare_rwa(cfg, dir);
        REQUIRE(cmp.probes.size() == 3);
        for (const auto& m : cmp.probes) CHECK(m.rms_difference <= 1e-12);
        fs::remove_all(dir);
    }

    SUBCASE("preset-d dominant lines agree within two bins") {
        auto cfg = quick("d", 1006.0);
        const auto dir = fresh_dir("rwa_d");
        const auto cmp = compare_rwa(cfg, dir);
        CHECK(fs::exists(dir / "rwa_compare_site40.txt"));
        CHECK(fs::exists(dir / "rwa_compare_site60.txt"));
        CHECK(fs::exists(dir / "rwa_compare_site80.txt"));
        CHECK(fs::exists(dir / "rwa_metrics.json"));
        for (const auto& m : cmp.probes) {
            CHECK(m.site >= 40);
            CHECK(std::abs(m.peak_freq_full - m.peak_freq_rwa) <=
                  2.0 * cmp.bin_width);
        }
        fs::remove_all(dir);
    }
}

TEST_CASE("sweep fans out into per-point directories") {
    auto base = quick("b", 30.0);
    base.run.grid_every = 1;
    const auto root = fresh_dir("sweep");
    sweep(base, "drive.omega_R", 0.02, 0.03, 3, root, 2);

    int found = 0;
    for (const auto& entry : fs::directory_iterator(root)) {
        CHECK(fs::exists(entry.path() / "manifest.json"));
        ++found;
    }
    CHECK(found == 3);
    CHECK(fs::exists(root / "drive_omega_R_0.02" / "manifest.json"));
    CHECK(fs::exists(root / "drive_omega_R_0.025" / "manifest.json"));
    CHECK(fs::exists(root / "drive_omega_R_0.03" / "manifest.json"));

    SUBCASE("a bad key fails before any run") {
        CHECK_THROWS_AS(sweep(base, "drive.no_such", 0.0, 1.0, 2, root, 1),
                        ConfigError);
    }
    fs::remove_all(root);
}

TEST_CASE("grid sidecar carries the shape and stride") {
    auto cfg = quick("a", 10.0);
    cfg.run.grid_every = 4;
    const auto dir = fresh_dir("sidecar");
    run_scenario(cfg, dir);
    std::ifstream in(dir / "inversion_grid.json");
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    CHECK(text.find("\"shape\"") != std::string::npos);
    CHECK(text.find("128") != std::string::npos);
    // 10/0.01 steps, every 5th recorded, every 4th record gridded: 51 rows.
    CHECK(text.find("51") != std::string::npos);
    fs::remove_all(dir);
}
