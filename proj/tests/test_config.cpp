#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "uwb/config.hpp"

using namespace uwb;

namespace {
struct TempFile {
    std::filesystem::path path;
    explicit TempFile(const std::string& content) {
        path = std::filesystem::temp_directory_path() /
               ("uwbshape_test_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)) + ".cfg");
        std::ofstream(path) << content;
    }
    ~TempFile() { std::filesystem::remove(path); }
};
}  // namespace

TEST_CASE("ini parsing") {
    const auto ini = IniFile::parse("# comment\n[a]\nx = 1\ny = two words\n[b]\nx=3\nx=4\n");
    CHECK(ini.get("a", "x") == "1");
    CHECK(ini.get("a", "y") == "two words");
    CHECK(ini.get_all("b", "x") == std::vector<std::string>{"3", "4"});
    CHECK(!ini.get("a", "missing"));
    CHECK_THROWS_AS(IniFile::parse("[a]\nnot a pair\n"), ConfigError);
}

TEST_CASE("mask file loading") {
    TempFile f(
        "[mask]\n"
        "reference = 1.0\n"
        "segment = 0 3.1e9 -40\n"
        "segment = 3.1e9 10.6e9 0\n"
        "segment = 10.6e9 14e9 -15\n");
    const auto mask = load_mask(f.path.string());
    CHECK(mask.eval(5e9) == doctest::Approx(1.0));
    CHECK(mask.eval(1e9) == doctest::Approx(1e-4));

    TempFile gap(
        "[mask]\n"
        "segment = 0 1e9 0\n"
        "segment = 2e9 14e9 0\n");
    CHECK_THROWS_AS(load_mask(gap.path.string()), ConfigError);
}

TEST_CASE("channel profile file matches the built-in table") {
    const char* data_dir = std::getenv("UWBSHAPE_DATA");
    if (!data_dir) return;  // only run where the data dir is wired in
    const auto profiles =
        load_channel_profiles(std::string(data_dir) + "/channel_profiles.cfg");
    REQUIRE(profiles.size() == 4);
    for (const auto& cm : {"CM1", "CM2", "CM3", "CM4"}) {
        const auto& loaded = profiles.at(cm);
        const auto builtin = ChannelProfile::standard(cm);
        CHECK(loaded.cluster_rate == builtin.cluster_rate);
        CHECK(loaded.ray_rate == builtin.ray_rate);
        CHECK(loaded.cluster_decay == builtin.cluster_decay);
        CHECK(loaded.ray_decay == builtin.ray_decay);
    }
}

TEST_CASE("run config defaults reproduce the stock setup") {
    const RunConfig cfg;
    CHECK(cfg.taps == 30);
    CHECK(cfg.fs == 28e9);
    CHECK(cfg.pulse.order == 1);
    CHECK(cfg.pulse.shape_factor == 0.1e-9);
    CHECK(cfg.rf_kind == "differentiator");
    CHECK(cfg.mask == "tight");
}

TEST_CASE("run config parsing and hashing") {
    TempFile f(
        "[design]\ntaps = 12\nfs = 20e9\ngrid = 128\n"
        "[pulse]\norder = 2\nshape_factor = 2e-10\n"
        "[channel]\ncm = CM2\nseeds = 4, 5, 6\n"
        "[output]\ndir = results\n");
    const auto cfg = RunConfig::from_file(f.path.string());
    CHECK(cfg.taps == 12);
    CHECK(cfg.fs == 20e9);
    CHECK(cfg.grid_points == 128);
    CHECK(cfg.pulse.order == 2);
    CHECK(cfg.channel_cm == "CM2");
    CHECK(cfg.seeds == std::vector<std::uint64_t>{4, 5, 6});
    CHECK(cfg.output_dir == "results");

    const auto h1 = cfg.hash();
    CHECK(h1 == RunConfig::from_file(f.path.string()).hash());
    CHECK(h1 != RunConfig{}.hash());

    TempFile bad("[design]\ntaps = few\n");
    CHECK_THROWS_AS(RunConfig::from_file(bad.path.string()), ConfigError);
}
