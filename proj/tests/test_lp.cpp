#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "test_util.hpp"
#include "uwb/factorize.hpp"
#include "uwb/lp.hpp"

using namespace uwb;

namespace {

// Exhaustive vertex enumeration for L=3 problems: every triple of active
// planes from {w_i^T x = 0, w_i^T x = ub_i}, feasibility-checked.
double vertex_enumeration_max(const LpProblem& p) {
    REQUIRE(p.taps == 3);
    const std::size_t n = p.frequencies.size();
    std::vector<Eigen::Vector3d> rows(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto w = cosine_vector(p.frequencies[i], 3, p.t0);
        rows[i] << w[0], w[1], w[2];
    }
    Eigen::Vector3d c(p.objective[0], p.objective[1], p.objective[2]);

    auto feasible = [&](const Eigen::Vector3d& x) {
        for (std::size_t i = 0; i < n; ++i) {
            const double wx = rows[i].dot(x);
            const double scale = std::isfinite(p.upper_bound[i]) ? p.upper_bound[i] : 1.0;
            if (wx < -1e-9 * std::max(1.0, scale)) return false;
            if (std::isfinite(p.upper_bound[i]) && wx > p.upper_bound[i] * (1.0 + 1e-9) + 1e-12)
                return false;
        }
        return true;
    };

    double best = 0.0;  // x = 0 is always feasible
    const std::size_t planes = 2 * n;
    for (std::size_t a = 0; a < planes; ++a)
        for (std::size_t b = a + 1; b < planes; ++b)
            for (std::size_t d = b + 1; d < planes; ++d) {
                Eigen::Matrix3d M;
                Eigen::Vector3d rhs;
                const std::size_t idx[3] = {a, b, d};
                bool ok = true;
                for (int k = 0; k < 3; ++k) {
                    const std::size_t row = idx[k] / 2;
                    const bool upper = idx[k] % 2 == 1;
                    if (upper && !std::isfinite(p.upper_bound[row])) {
                        ok = false;
                        break;
                    }
                    M.row(k) = rows[row].transpose();
                    rhs(k) = upper ? p.upper_bound[row] : 0.0;
                }
                if (!ok) continue;
                Eigen::FullPivLU<Eigen::Matrix3d> lu(M);
                if (!lu.isInvertible()) continue;
                const Eigen::Vector3d x = lu.solve(rhs);
                if (feasible(x)) best = std::max(best, c.dot(x));
            }
    return best;
}

LpProblem random_problem(std::mt19937_64& eng, std::size_t n_grid) {
    const FrequencyGrid grid(28e9, n_grid, 0.0, 14e9);
    LpProblem p = assemble_problem(grid, SpectralMask::tight(), PulseModel::delta(),
                                   RfResponse::unity(), 3);
    std::uniform_real_distribution<double> bound(0.1, 10.0);
    for (auto& u : p.upper_bound) u = bound(eng);
    return p;
}

}  // namespace

TEST_CASE("assemble_problem closed-form objective") {
    // Delta pulse, unity RF, flat mask: A[0] = passband width,
    // A[m] = [sin(2 pi m T0 b) - sin(2 pi m T0 a)] / (pi m T0).
    const FrequencyGrid grid(28e9, 4097);
    const SpectralMask flat({{0.0, 14e9, 0.0}}, 2.5);
    const auto p = assemble_problem(grid, flat, PulseModel::delta(), RfResponse::unity(), 5);

    const auto pb = grid.passband_indices();
    const double a = grid.frequency(pb.front());
    const double b = grid.frequency(pb.back());
    CHECK(p.objective[0] == doctest::Approx(b - a).epsilon(1e-12));
    for (std::size_t m = 1; m < 5; ++m) {
        const double mm = static_cast<double>(m);
        const double exact = (std::sin(2.0 * std::numbers::pi * mm * p.t0 * b) -
                              std::sin(2.0 * std::numbers::pi * mm * p.t0 * a)) /
                             (std::numbers::pi * mm * p.t0);
        CHECK(std::abs(p.objective[m] - exact) < 1e-4 * p.objective[0]);
    }

    SUBCASE("every upper bound equals the flat level") {
        for (double u : p.upper_bound) CHECK(u == doctest::Approx(2.5));
    }
}

TEST_CASE("channel weight of one leaves the problem unchanged") {
    const FrequencyGrid grid(28e9, 256);
    const PulseModel pulse{1, 0.1e-9};
    const std::vector<double> ones(grid.size(), 1.0);
    const auto base = assemble_problem(grid, SpectralMask::tight(), pulse,
                                       RfResponse::differentiator(), 8);
    const auto weighted = assemble_problem(grid, SpectralMask::tight(), pulse,
                                           RfResponse::differentiator(), 8, &ones);
    for (std::size_t m = 0; m < 8; ++m)
        CHECK(base.objective[m] == doctest::Approx(weighted.objective[m]));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (std::isinf(base.upper_bound[i]))
            CHECK(std::isinf(weighted.upper_bound[i]));
        else
            CHECK(base.upper_bound[i] == doctest::Approx(weighted.upper_bound[i]));
    }
}

TEST_CASE("zero-denominator rows keep only the nonnegativity side") {
    const FrequencyGrid grid(28e9, 256);
    const auto p = assemble_problem(grid, SpectralMask::tight(), PulseModel{1, 0.1e-9},
                                    RfResponse::differentiator(), 8);
    CHECK(std::isinf(p.upper_bound[0]));  // f = 0: |R|^2 S_q = 0
    bool any_finite = false;
    for (double u : p.upper_bound) any_finite |= std::isfinite(u);
    CHECK(any_finite);
}

TEST_CASE("solver recovers the flat-bound closed form") {
    const FrequencyGrid grid(28e9, 257, 0.0, 14e9);  // passband = full band
    const double c = 3.7;
    const SpectralMask flat({{0.0, 14e9, 0.0}}, c);
    const auto p = assemble_problem(grid, flat, PulseModel::delta(), RfResponse::unity(), 6);
    const auto rep = solve(p);
    REQUIRE(rep.status == SolveStatus::optimal);
    CHECK(rep.objective_value == doctest::Approx(c * 14e9).epsilon(1e-6));
    CHECK(rep.r_opt[0] == doctest::Approx(c).epsilon(1e-6));
    for (std::size_t m = 1; m < 6; ++m)
        CHECK(std::abs(rep.r_opt[m]) < c * 1e-5);
}

TEST_CASE("solver matches vertex enumeration at L=3") {
    auto eng = testutil::rng(19);
    for (int trial = 0; trial < 20; ++trial) {
        const auto p = random_problem(eng, 64);
        const auto rep = solve(p);
        REQUIRE(rep.status == SolveStatus::optimal);
        const double oracle = vertex_enumeration_max(p);
        CHECK(rep.objective_value == doctest::Approx(oracle).epsilon(1e-4));
    }
}

TEST_CASE("all-zero bounds force the zero solution") {
    auto eng = testutil::rng(23);
    auto p = random_problem(eng, 32);
    for (auto& u : p.upper_bound) u = 0.0;
    const auto rep = solve(p);
    REQUIRE(rep.status == SolveStatus::optimal);
    CHECK(rep.objective_value == 0.0);
    for (std::size_t m = 0; m < p.taps; ++m) CHECK(rep.r_opt[m] == 0.0);
}

TEST_CASE("objective is monotone in the bounds") {
    auto eng = testutil::rng(31);
    std::uniform_real_distribution<double> extra(0.0, 2.0);
    for (int trial = 0; trial < 5; ++trial) {
        const auto p = random_problem(eng, 48);
        auto larger = p;
        for (auto& u : larger.upper_bound) u += extra(eng);
        const auto r1 = solve(p);
        const auto r2 = solve(larger);
        REQUIRE(r1.status == SolveStatus::optimal);
        REQUIRE(r2.status == SolveStatus::optimal);
        CHECK(r2.objective_value >= r1.objective_value * (1.0 - 1e-7));
    }
}

TEST_CASE("objective scales linearly with the bounds") {
    auto eng = testutil::rng(37);
    const auto p = random_problem(eng, 48);
    auto scaled = p;
    for (auto& u : scaled.upper_bound) u *= 4.0;
    const auto r1 = solve(p);
    const auto r2 = solve(scaled);
    REQUIRE(r1.status == SolveStatus::optimal);
    REQUIRE(r2.status == SolveStatus::optimal);
    CHECK(r2.objective_value == doctest::Approx(4.0 * r1.objective_value).epsilon(1e-8));
}

TEST_CASE("optimal spectra stay nonnegative on the verification grid") {
    const FrequencyGrid grid(28e9, 512);
    const auto p = assemble_problem(grid, SpectralMask::tight(), PulseModel{1, 0.1e-9},
                                    RfResponse::differentiator(), 12);
    const auto rep = solve(p);
    REQUIRE(rep.status == SolveStatus::optimal);
    const auto fine = grid.refined(8).frequencies();
    for (double f : fine) {
        const auto w = cosine_vector(f, p.taps, p.t0);
        double wr = 0.0;
        for (std::size_t m = 0; m < p.taps; ++m) wr += w[m] * rep.r_opt[m];
        CHECK(wr >= -1e-9 * rep.r_opt[0]);
    }
}

TEST_CASE("verify_feasibility") {
    const FrequencyGrid grid(28e9, 64);
    const auto p = assemble_problem(grid, SpectralMask::tight(), PulseModel{1, 0.1e-9},
                                    RfResponse::differentiator(), 8);

    SUBCASE("zero vector is feasible") {
        AutocorrVector zero{std::vector<double>(8, 0.0)};
        CHECK(verify_feasibility(zero, p.t0, p.frequencies, p.upper_bound) == 0.0);
    }

    SUBCASE("coarse-grid optimum stays nearly feasible on the refined grid") {
        const auto rep = solve(p);
        REQUIRE(rep.status == SolveStatus::optimal);
        const auto refined = grid.refined(8);
        const auto rf = refined.frequencies();
        const auto rub = constraint_bounds(rf, SpectralMask::tight(), PulseModel{1, 0.1e-9},
                                           RfResponse::differentiator());
        const double viol = verify_feasibility(rep.r_opt, p.t0, rf, rub);
        // Overshoot below a 0.5 dB equivalent of the smallest active bound.
        double ub_min = std::numeric_limits<double>::infinity();
        for (double u : p.upper_bound)
            if (std::isfinite(u)) ub_min = std::min(ub_min, u);
        CHECK(viol <= ub_min * (std::pow(10.0, 0.05) - 1.0));
    }

    SUBCASE("scaling a tight solution breaks feasibility") {
        const auto rep = solve(p);
        REQUIRE(rep.status == SolveStatus::optimal);
        AutocorrVector doubled = rep.r_opt;
        for (auto& v : doubled.r) v *= 2.0;
        CHECK(verify_feasibility(doubled, p.t0, p.frequencies, p.upper_bound) > 0.0);
    }
}

TEST_CASE("channel-aware optimum dominates the rescaled plain optimum") {
    const FrequencyGrid grid(28e9, 512);
    const PulseModel pulse{1, 0.1e-9};
    const auto rf = RfResponse::differentiator();

    // Synthetic two-notch weight standing in for a faded channel.
    std::vector<double> weight(grid.size(), 1.0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double f = grid.frequency(i);
        const double n1 = std::exp(-std::pow((f - 5e9) / 0.4e9, 2));
        const double n2 = std::exp(-std::pow((f - 8e9) / 0.6e9, 2));
        weight[i] = std::max(1e-3, 1.0 - 0.999 * n1 - 0.95 * n2);
    }

    const auto plain_p = assemble_problem(grid, SpectralMask::tight(), pulse, rf, 16);
    const auto aware_p = assemble_problem(grid, SpectralMask::tight(), pulse, rf, 16, &weight);
    const auto plain = solve(plain_p);
    const auto aware = solve(aware_p);
    REQUIRE(plain.status == SolveStatus::optimal);
    REQUIRE(aware.status == SolveStatus::optimal);

    // Largest scale keeping the plain optimum inside the channel-aware set.
    double scale = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < aware_p.frequencies.size(); ++i) {
        if (!std::isfinite(aware_p.upper_bound[i])) continue;
        const auto w = cosine_vector(aware_p.frequencies[i], 16, aware_p.t0);
        double wr = 0.0;
        for (std::size_t m = 0; m < 16; ++m) wr += w[m] * plain.r_opt[m];
        if (wr > 0.0) scale = std::min(scale, aware_p.upper_bound[i] / wr);
    }
    scale = std::min(scale, 1.0);

    double b_aware = 0.0, b_plain_scaled = 0.0;
    for (std::size_t m = 0; m < 16; ++m) {
        b_aware += aware_p.objective[m] * aware.r_opt[m];
        b_plain_scaled += aware_p.objective[m] * scale * plain.r_opt[m];
    }
    CHECK(b_aware >= b_plain_scaled * (1.0 - 1e-7));
}

TEST_CASE("LpProblem JSON round trip") {
    const FrequencyGrid grid(28e9, 32);
    const auto p = assemble_problem(grid, SpectralMask::tight(), PulseModel{1, 0.1e-9},
                                    RfResponse::differentiator(), 4);
    const auto q = LpProblem::load_json(p.dump_json());
    CHECK(q.taps == p.taps);
    CHECK(q.objective == p.objective);
    CHECK(q.frequencies == p.frequencies);
    for (std::size_t i = 0; i < p.upper_bound.size(); ++i) {
        if (std::isinf(p.upper_bound[i]))
            CHECK(std::isinf(q.upper_bound[i]));
        else
            CHECK(q.upper_bound[i] == p.upper_bound[i]);
    }
}
