#pragma once

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "uwb/channel.hpp"
#include "uwb/grid.hpp"
#include "uwb/spectra.hpp"

namespace uwb {

// Autocorrelation of the tap vector: r[m] = sum_k g[k] g[k+m].
struct AutocorrVector {
    std::vector<double> r;

    std::size_t size() const { return r.size(); }
    double operator[](std::size_t m) const { return r[m]; }
};

// Discretized program: maximize objective^T r subject to
// 0 <= w(f_i)^T r <= upper_bound[i] at every constraint frequency.
// A row with upper_bound = +inf carries only the nonnegativity side.
struct LpProblem {
    std::size_t taps = 0;            // L
    double t0 = 0.0;                 // sampling interval, seconds
    std::vector<double> objective;   // length L
    std::vector<double> frequencies; // constraint grid
    std::vector<double> upper_bound; // same length; may be +inf
    // Per-row quadrature weight of the objective (zero off the passband), so
    // objective = sum_i row_weight[i] * w(f_i). Kept alongside the collapsed
    // coefficient vector because evaluating the objective row-by-row avoids
    // the catastrophic cancellation the collapsed form suffers when the
    // spectral weights span many orders of magnitude. May be empty for
    // hand-built problems; reporting then falls back to objective . r.
    std::vector<double> row_weight;

    static constexpr double kNoUpperBound = std::numeric_limits<double>::infinity();

    std::string dump_json() const;
    static LpProblem load_json(const std::string& text);
};

enum class SolveStatus { optimal, iteration_limit, numerical_failure };

struct SolveReport {
    AutocorrVector r_opt;
    double objective_value = 0.0;
    int iterations = 0;
    double max_constraint_violation = 0.0;
    SolveStatus status = SolveStatus::numerical_failure;
};

struct SolveOptions {
    int max_iterations = 200;
    double gap_tolerance = 1e-8;         // relative duality gap
    double feasibility_tolerance = 1e-9; // relative primal/dual residual
    double regularization = 1e-10;       // diagonal shift on the KKT system
};

// Builds Eq-style problem data on the grid. When channel_weight is supplied
// (sampled M_h on the same grid) the bounds are multiplied by it and the
// objective integrand picks up the same weight.
LpProblem assemble_problem(const FrequencyGrid& grid, const SpectralMask& mask,
                           const PulseModel& pulse, const RfResponse& rf, std::size_t taps,
                           const std::vector<double>* channel_weight = nullptr);

SolveReport solve(const LpProblem& problem, const SolveOptions& options = {});

// Max over the refined grid of max(w^T r - ub, -w^T r, 0).
double verify_feasibility(const AutocorrVector& r, double t0,
                          std::span<const double> refined_frequencies,
                          std::span<const double> refined_bounds);

// S_tr(f) = max(w(f)^T r, 0) S_q(f) |R(f)|^2 sampled on the grid: the
// spectrum of the optimized autocorrelation itself, before factorization.
// Accumulates w^T r in extended precision because in-band values near the
// pulse's spectral null sit many orders below r[0]; negative excursions
// between constraint frequencies clamp to zero.
std::vector<double> transmitted_spectrum(const AutocorrVector& r, double t0,
                                         const PulseModel& pulse, const RfResponse& rf,
                                         const FrequencyGrid& grid);

// Constraint bounds for an arbitrary grid (used to build refined-grid checks).
std::vector<double> constraint_bounds(std::span<const double> frequencies,
                                      const SpectralMask& mask, const PulseModel& pulse,
                                      const RfResponse& rf,
                                      const std::vector<double>* channel_weight = nullptr);

}  // namespace uwb
