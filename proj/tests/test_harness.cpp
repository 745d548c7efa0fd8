// test_harness.cpp — config parsing, sweeps, presets, runner outputs and
// exit codes

#include "optoment/config.hpp"
#include "optoment/presets.hpp"
#include "optoment/runner.hpp"

#include <doctest.h>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <unistd.h>
#include <set>
#include <sstream>

using namespace optoment;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

fs::path scratch_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("optoment_test_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

RunOptions opts_in(const fs::path& dir, int parallel = 1) {
    RunOptions o;
    o.out_dir = dir;
    o.parallel = parallel;
    return o;
}

const char* small_series =
    "[experiment]\nkind = time_series\noutput = ts\n"
    "[model]\ng0 = 1\nr = 0.5\nkappa1 = 0.1\nkappa2 = 0.1\ngamma_m = 0.01\nn_th = 1\n"
    "[schedule]\ntype = constant\nperiods = 2\n"
    "[grid]\npoints = 50\npeaks = 1 2\n";

std::string expect_config_error(const std::string& text) {
    try {
        resolve_all(parse_config(text));
    } catch (const ConfigError& e) {
        return e.key();
    }
    return "<no error>";
}

}  // namespace

TEST_CASE("number formatting round-trips") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 1000; ++i) {
        const double x = u(rng) * std::pow(10.0, int(rng() % 40) - 20);
        const std::string s = format_number(x);
        double back = 0.0;
        std::from_chars(s.data(), s.data() + s.size(), back);
        CHECK(back == x);
        CHECK(s.size() <= 24);
    }
    CHECK(format_number(0.0) == "0");
    CHECK(format_number(-0.0) == "0");
    CHECK(format_number(std::nan("")) == "nan");
    CHECK(format_number(0.1) == "0.1");
}

TEST_CASE("csv rendering") {
    Table t;
    t.columns = {"a", "b"};
    t.rows = {{1.0, 0.5}, {2.0, -3.0}};
    CHECK(render_csv({"hello = 1"}, t) == "# hello = 1\na,b\n1,0.5\n2,-3\n");
}

TEST_CASE("sha256 known answer") {
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("atomic write leaves no temp files") {
    const auto dir = scratch_dir("atomic");
    write_file_atomic(dir / "x.txt", "one");
    write_file_atomic(dir / "x.txt", "two");
    CHECK(slurp(dir / "x.txt") == "two");
    int files = 0;
    for (const auto& e : fs::directory_iterator(dir)) {
        (void)e;
        ++files;
    }
    CHECK(files == 1);
    fs::remove_all(dir);
}

TEST_CASE("strict parsing names the offending key") {
    CHECK(expect_config_error(std::string(small_series) + "[model]\n") != "<no error>");
    CHECK(expect_config_error("[experiment]\nkind = time_series\noutput = x\nbogus = 1\n") == "experiment.bogus");
    CHECK(expect_config_error("[experiment]\nkind = warp\noutput = x\n") == "experiment.kind");
    CHECK(expect_config_error("[experiment]\nkind = time_series\noutput = x\n[nowhere]\na = 1\n") == "nowhere");
    std::string bad_r = small_series;
    bad_r.replace(bad_r.find("r = 0.5"), 7, "r = -1");
    CHECK(expect_config_error(bad_r) == "model.r");
    std::string bad_pts = small_series;
    bad_pts.replace(bad_pts.find("points = 50"), 11, "points = x");
    CHECK(expect_config_error(bad_pts) == "grid.points");
    // Sections that do not belong to the kind are rejected.
    CHECK(expect_config_error(std::string(small_series) + "[filter]\ndelta_omega = 0.05\n") == "filter");
}

TEST_CASE("sweep resolution") {
    const std::string text = std::string(small_series) + "[sweep]\nparameter = model.n_th, model.kappa1\n"
                                                          "values = 0, 0.1; 10, 0.2; 100, 0.3\n";
    const auto cfg = parse_config(text);
    const auto sweep = sweep_of(cfg);
    CHECK(sweep.entries() == 3);
    const auto entries = resolve_all(cfg);
    REQUIRE(entries.size() == 3);
    CHECK(entries[1].model.n_th == 10.0);
    CHECK(entries[2].model.kappa1 == doctest::Approx(0.3));
    CHECK(entries[1].sweep_values.front() == std::pair<std::string, std::string>{"model.n_th", "10"});
    CHECK(sweep_of(parse_config(small_series)).entries() == 1);
    CHECK(expect_config_error(std::string(small_series) + "[sweep]\nparameter = model.n_th\nvalues = 1, 2\n") ==
          "sweep.values");
}

TEST_CASE("presets") {
    const std::set<std::string> want{"fig2a", "fig2b",     "fig2c",     "fig2d",      "fig3a",      "fig3b",
                                     "fig3c", "fig3d",     "eq8_check", "eq9_check", "eq12_check", "parseval_check"};
    std::set<std::string> got;
    for (const auto& p : presets()) {
        got.insert(p.name);
        CHECK_NOTHROW(resolve_all(parse_config(p.config, p.name)));
        CHECK_FALSE(p.description.empty());
    }
    CHECK(got == want);
    CHECK(presets().size() == 12);
    try {
        find_preset("nope");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("fig2a") != std::string::npos);
    }
    const auto fig2a = resolve_all(parse_config(find_preset("fig2a").config));
    REQUIRE(fig2a.size() == 4);
    CHECK(fig2a[0].g0 == 3.0);
    CHECK(fig2a[0].model.kappa1 == 0.3);
    CHECK(fig2a[0].model.kappa2 == 0.2);
    CHECK(fig2a[0].model.gamma_m == 0.001);
    CHECK(fig2a[0].model.squeezing() == doctest::Approx(1.0));
    CHECK(fig2a[3].model.n_th == 1000.0);
    CHECK(fig2a[3].model.n_0 == 1000.0);
}

TEST_CASE("dump is canonical") {
    const auto a = parse_config(small_series);
    const auto b = parse_config(dump_config(a));
    CHECK(dump_config(a) == dump_config(b));
}

TEST_CASE("run writes csv, summary and manifest") {
    const auto dir = scratch_dir("run");
    const auto rep = run_config(parse_config(small_series), opts_in(dir));
    CHECK(rep.exit_code == exit_ok);
    REQUIRE(rep.outputs.size() == 1);
    CHECK(rep.outputs[0].filename() == "ts.csv");
    const std::string csv = slurp(rep.outputs[0]);
    CHECK(csv.find("# model.r = 0.5") != std::string::npos);
    CHECK(csv.find("\nt,g1,g2,E_N,n_cav1,n_mech,n_cav2\n") != std::string::npos);
    const auto manifest = nlohmann::json::parse(slurp(rep.manifest));
    CHECK(manifest["config_sha256"] == sha256_hex(dump_config(parse_config(small_series))));
    CHECK(manifest["entries"][0]["sha256"] == sha256_hex(csv));
    CHECK(manifest["exit_code"] == 0);
    fs::remove_all(dir);
}

TEST_CASE("runs are deterministic, parallel or not") {
    const std::string text =
        std::string(small_series) + "[sweep]\nparameter = model.n_th\nvalues = 0; 10; 100; 1000\n";
    const auto d1 = scratch_dir("det1");
    const auto d2 = scratch_dir("det2");
    const auto r1 = run_config(parse_config(text), opts_in(d1, 1));
    const auto r2 = run_config(parse_config(text), opts_in(d2, 3));
    REQUIRE(r1.outputs.size() == 4);
    REQUIRE(r2.outputs.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(r1.outputs[i].filename() == r2.outputs[i].filename());
        CHECK(slurp(r1.outputs[i]) == slurp(r2.outputs[i]));
    }
    CHECK(slurp(r1.manifest) == slurp(r2.manifest));
    CHECK(slurp(r1.summary) == slurp(r2.summary));
    fs::remove_all(d1);
    fs::remove_all(d2);
}

TEST_CASE("preset round-trip through a dumped file") {
    const auto dir = scratch_dir("roundtrip");
    const fs::path file = dir / "fig3d.ini";
    {
        std::ofstream os(file);
        os << find_preset("fig3d").config;
    }
    const auto a = run_preset("fig3d", opts_in(dir / "a"));
    const auto b = run_config_file(file.string(), opts_in(dir / "b"));
    CHECK(a.exit_code == exit_ok);
    CHECK(slurp(a.manifest) == slurp(b.manifest));
    fs::remove_all(dir);
}

TEST_CASE("exit codes") {
    const auto dir = scratch_dir("codes");
    CHECK(run_config_file((dir / "missing.ini").string(), opts_in(dir)).exit_code == exit_config);
    CHECK(run_preset("nope", opts_in(dir)).exit_code == exit_config);

    const std::string unstable =
        "[experiment]\nkind = stationary\noutput = st\n"
        "[model]\ng1 = 1\ng2 = 1.5\nkappa1 = 0.1\nkappa2 = 0.1\ngamma_m = 0.01\n";
    const auto u = run_config(parse_config(unstable), opts_in(dir));
    CHECK(u.exit_code == exit_instability);
    CHECK(u.outputs.empty());

    const std::string leaky =
        "[experiment]\nkind = discrete\noutput = dq\n"
        "[model]\nvariant = double_beamsplitter\ng0 = 1\nkappa1 = 0.1\nkappa2 = 0.1\ngamma_m = 0.01\n"
        "n_th = 1\nn_0 = 1\n"
        "[discrete]\nswap_n = 1\ndims = 2 3 2\n"
        "[sweep]\nparameter = discrete.dims\nvalues = 2 3 2; 2 3 2\n";
    const auto l = run_config(parse_config(leaky), opts_in(dir, 1));
    CHECK(l.exit_code == exit_truncation);
    CHECK(l.outputs.size() == 2);  // partial outputs kept
    CHECK(l.flagged_entries.size() == 2);
    CHECK(slurp(l.outputs[0]).find("truncation_unreliable") != std::string::npos);

    RunOptions strict = opts_in(dir / "strict", 1);
    strict.strict_truncation = true;
    const auto s = run_config(parse_config(leaky), strict);
    CHECK(s.exit_code == exit_truncation);
    CHECK(s.outputs.size() < 2);
    fs::remove_all(dir);
}
