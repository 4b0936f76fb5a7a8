#include <doctest.h>

#include <cmath>

#include "test_util.hpp"
#include "uwb/metrics.hpp"

using namespace uwb;

namespace {
DesignParams small_params() {
    DesignParams p;
    p.taps = 10;
    p.grid = FrequencyGrid(28e9, 256);
    return p;
}
}  // namespace

TEST_CASE("nesp") {
    const FrequencyGrid grid(28e9, 256);
    const auto mask = SpectralMask::tight();
    std::vector<double> m(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) m[i] = mask.eval(grid.frequency(i));

    SUBCASE("mask-shaped spectrum scores 1") {
        CHECK(nesp(m, mask, grid) == doctest::Approx(1.0));
    }
    SUBCASE("zero spectrum scores 0") {
        CHECK(nesp(std::vector<double>(grid.size(), 0.0), mask, grid) == 0.0);
    }
    SUBCASE("half the mask scores one half") {
        auto half = m;
        for (auto& v : half) v /= 2.0;
        CHECK(nesp(half, mask, grid) == doctest::Approx(0.5));
    }
}

TEST_CASE("eta") {
    const FrequencyGrid grid(28e9, 1001);
    const std::vector<double> flat(grid.size(), 0.7);

    SUBCASE("flat unity channel passes everything") {
        CHECK(eta(flat, std::vector<double>(grid.size(), 1.0), grid) == doctest::Approx(100.0));
    }
    SUBCASE("uniform half-power channel halves it") {
        CHECK(eta(flat, std::vector<double>(grid.size(), 0.5), grid) == doctest::Approx(50.0));
    }
    SUBCASE("indicator of half the passband with a flat spectrum") {
        // s_h = 1 on [3.1, 6.85) GHz, 0 elsewhere: half the passband measure.
        const double mid = (3.1e9 + 10.6e9) / 2.0;
        std::vector<double> sh(grid.size(), 0.0);
        for (std::size_t i = 0; i < grid.size(); ++i)
            if (grid.in_passband(grid.frequency(i)) && grid.frequency(i) < mid) sh[i] = 1.0;
        CHECK(eta(flat, sh, grid) == doctest::Approx(50.0).epsilon(0.02));
    }
    SUBCASE("zero transmitted power is undefined") {
        CHECK_THROWS_AS(eta(std::vector<double>(grid.size(), 0.0),
                            std::vector<double>(grid.size(), 1.0), grid),
                        std::domain_error);
    }
    SUBCASE("eta is scale-invariant in s_tr") {
        auto eng = testutil::rng(3);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        std::vector<double> s_tr(grid.size()), s_h(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            s_tr[i] = u(eng) + 0.01;
            s_h[i] = u(eng);
        }
        const double e1 = eta(s_tr, s_h, grid);
        for (auto& v : s_tr) v *= 37.5;
        CHECK(eta(s_tr, s_h, grid) == doctest::Approx(e1).epsilon(1e-12));
    }
}

TEST_CASE("run_campaign with a flat-channel stub") {
    const auto params = small_params();
    const std::vector<std::uint64_t> seeds{1};
    const auto result = run_campaign(
        "stub", seeds, params,
        [&](std::uint64_t) { return std::vector<double>(params.grid.size(), 1.0); });
    CHECK(result.n_realizations == 1);
    CHECK(result.eta_ave1_pct == doctest::Approx(100.0));
    CHECK(result.eta_ave2_pct == doctest::Approx(100.0));
    CHECK(result.beta_pct == doctest::Approx(0.0));
}

TEST_CASE("run_campaign is deterministic in the seed list") {
    auto params = small_params();
    params.grid = FrequencyGrid(28e9, 512);
    const std::vector<std::uint64_t> seeds{3, 7, 11};
    const auto profile = ChannelProfile::standard("CM1");
    const auto a = run_campaign(profile, seeds, params);
    const auto b = run_campaign(profile, seeds, params);
    CHECK(a.eta_ave1_pct == b.eta_ave1_pct);
    CHECK(a.eta_ave2_pct == b.eta_ave2_pct);
    CHECK(a.beta_pct == b.beta_pct);
    REQUIRE(a.samples.size() == b.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        CHECK(a.samples[i].seed == b.samples[i].seed);
        CHECK(a.samples[i].eta1_pct == b.samples[i].eta1_pct);
        CHECK(a.samples[i].eta2_pct == b.samples[i].eta2_pct);
    }
    CHECK(a.beta_pct ==
          doctest::Approx((a.eta_ave2_pct - a.eta_ave1_pct) / a.eta_ave1_pct * 100.0));
}

TEST_CASE("campaign JSON carries full seed provenance") {
    const auto params = small_params();
    const std::vector<std::uint64_t> seeds{5, 9};
    const auto result = run_campaign(
        "stub", seeds, params,
        [&](std::uint64_t) { return std::vector<double>(params.grid.size(), 1.0); });
    const auto json = result.to_json();
    CHECK(json.find("\"seed\": 5") != std::string::npos);
    CHECK(json.find("\"seed\": 9") != std::string::npos);
    CHECK(json.find("eta_ave1_pct") != std::string::npos);
}
