#include "uwb/lp.hpp"
#include <cstdint>
#include <limits>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <cstdio>
#include <cstdlib>
#include <nlohmann/json.hpp>

namespace uwb {

namespace {
// Rows where |R|^2 S_q vanishes (f=0 for derivative pulses/antennas, or
// underflow) keep only the nonnegativity side; the bound there divides by 0.
// The threshold must stay far below any physical in-band value: a looser
// relative cut would unconstrain the band edges, where the pulse spectrum
// has decayed by many orders of magnitude but the mask still applies.
constexpr double kDenominatorCutoff = 1e-250;
}  // namespace

std::vector<double> constraint_bounds(std::span<const double> frequencies,
                                      const SpectralMask& mask, const PulseModel& pulse,
                                      const RfResponse& rf,
                                      const std::vector<double>* channel_weight) {
    if (channel_weight && channel_weight->size() != frequencies.size())
        throw std::invalid_argument("constraint_bounds: channel weight grid mismatch");

    std::vector<double> denom(frequencies.size());
    double dmax = 0.0;
    for (std::size_t i = 0; i < frequencies.size(); ++i) {
        denom[i] = pulse_spectrum(pulse, frequencies[i]) * rf.gain(frequencies[i]);
        dmax = std::max(dmax, denom[i]);
    }

    std::vector<double> ub(frequencies.size());
    for (std::size_t i = 0; i < frequencies.size(); ++i) {
        if (denom[i] < kDenominatorCutoff * dmax || denom[i] <= 0.0) {
            ub[i] = LpProblem::kNoUpperBound;
        } else {
            ub[i] = mask.eval(frequencies[i]) / denom[i];
            if (channel_weight) ub[i] *= (*channel_weight)[i];
        }
    }
    return ub;
}

LpProblem assemble_problem(const FrequencyGrid& grid, const SpectralMask& mask,
                           const PulseModel& pulse, const RfResponse& rf, std::size_t taps,
                           const std::vector<double>* channel_weight) {
    if (taps < 2) throw std::invalid_argument("assemble_problem: need at least 2 taps");
    const auto pb = grid.passband_indices();
    if (pb.empty()) throw std::invalid_argument("assemble_problem: passband contains no grid points");
    if (channel_weight && channel_weight->size() != grid.size())
        throw std::invalid_argument("assemble_problem: channel weight grid mismatch");

    LpProblem p;
    p.taps = taps;
    p.t0 = grid.sample_interval();
    p.frequencies = grid.frequencies();
    p.upper_bound = constraint_bounds(p.frequencies, mask, pulse, rf, channel_weight);

    // Outside the passband the spectral denominator can underflow to the
    // point where the mask permits astronomically large |W(f)|^2 that no
    // physical emission corresponds to. Such rows carry no objective weight,
    // but leaving them loose lets the optimum park large out-of-band filter
    // mass there, which later swamps the spectral factorization with fifteen
    // extra orders of dynamic range. Clamp every finite bound to the largest
    // bound the passband itself uses; this only removes objective-free slack.
    double cap = 0.0;
    for (std::size_t i : pb)
        if (std::isfinite(p.upper_bound[i])) cap = std::max(cap, p.upper_bound[i]);
    if (cap > 0.0)
        for (double& u : p.upper_bound)
            if (std::isfinite(u)) u = std::min(u, cap);

    // Symmetrically, bounds more than ~15 orders below the cap demand more
    // cancellation from w^T r than a double-stored r can deliver (component
    // rounding alone injects L * eps * r[0]); they are unenforceable as
    // written and only stretch the solver's cost range. Raise them to the
    // representable floor.
    if (cap > 0.0) {
        const double floor_ub = 1e-16 * cap;
        for (double& u : p.upper_bound)
            if (std::isfinite(u) && u < floor_ub) u = floor_ub;
    }

    // Objective: trapezoid over the passband grid points of the weighted kernel.
    p.objective.assign(taps, 0.0);
    p.row_weight.assign(grid.size(), 0.0);
    const double h = grid.spacing();
    for (std::size_t j = 0; j < pb.size(); ++j) {
        const double f = grid.frequency(pb[j]);
        double weight = pulse_spectrum(pulse, f) * rf.gain(f);
        if (channel_weight) weight *= (*channel_weight)[pb[j]];
        const double quad = (j == 0 || j + 1 == pb.size()) ? h / 2.0 : h;
        p.row_weight[pb[j]] = quad * weight;
        const auto w = cosine_vector(f, taps, p.t0);
        for (std::size_t m = 0; m < taps; ++m) p.objective[m] += quad * weight * w[m];
    }
    return p;
}

std::string LpProblem::dump_json() const {
    nlohmann::json j;
    j["taps"] = taps;
    j["t0"] = t0;
    j["objective"] = objective;
    j["frequencies"] = frequencies;
    nlohmann::json ub = nlohmann::json::array();
    for (double u : upper_bound)
        ub.push_back(std::isinf(u) ? nlohmann::json(nullptr) : nlohmann::json(u));
    j["upper_bound"] = ub;
    if (!row_weight.empty()) j["row_weight"] = row_weight;
    return j.dump(2);
}

LpProblem LpProblem::load_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    LpProblem p;
    p.taps = j.at("taps").get<std::size_t>();
    p.t0 = j.at("t0").get<double>();
    p.objective = j.at("objective").get<std::vector<double>>();
    p.frequencies = j.at("frequencies").get<std::vector<double>>();
    for (const auto& u : j.at("upper_bound"))
        p.upper_bound.push_back(u.is_null() ? kNoUpperBound : u.get<double>());
    if (j.contains("row_weight")) p.row_weight = j.at("row_weight").get<std::vector<double>>();
    return p;
}

namespace {

double constraint_violation(const LpProblem& p, const std::vector<double>& r) {
    double v = 0.0;
    for (std::size_t i = 0; i < p.frequencies.size(); ++i) {
        const auto w = cosine_vector(p.frequencies[i], p.taps, p.t0);
        double wr = 0.0;
        for (std::size_t m = 0; m < p.taps; ++m) wr += w[m] * r[m];
        v = std::max(v, -wr);
        if (std::isfinite(p.upper_bound[i])) v = std::max(v, wr - p.upper_bound[i]);
    }
    return v;
}

}  // namespace

// The problem is tiny in the variables (L taps) but the bounds span fifteen
// orders of magnitude, which defeats interior-point scaling. Solve the dual
//     min q^T lam  s.t.  A lam = c,  lam >= 0
// with a revised simplex instead: its columns are -w_i (cost 0, the
// nonnegativity side of row i) and +w_i (cost ub_i, the mask side of the
// finite rows), the basis is only L x L, and the wild bound range enters the
// costs alone, where it is harmless. The simplex multipliers pi of the
// equalities are exactly the optimal primal autocorrelation vector.
SolveReport solve(const LpProblem& problem, const SolveOptions& options) {
    // The simplex runs in long double: the bounds legitimately span sixteen
    // orders of magnitude, so double-precision reduced costs cannot even
    // resolve whether the tightest constraints hold. The 64-bit mantissa
    // buys the ~3.5 extra decimal digits that make the pricing decisive.
    using Real = long double;
    using Vec = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
    using Mat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
    using Idx = Eigen::Index;
    const auto n = static_cast<Idx>(problem.frequencies.size());
    const auto L = static_cast<Idx>(problem.taps);
    if (n == 0 || L == 0) throw std::invalid_argument("solve: empty problem");
    if (problem.objective.size() != problem.taps ||
        problem.upper_bound.size() != problem.frequencies.size())
        throw std::invalid_argument("solve: inconsistent problem dimensions");

    SolveReport rep;
    rep.r_opt.r.assign(problem.taps, 0.0);

    // Degenerate cases: zero objective, or every bound zero -> r = 0 is optimal.
    double ub_max = 0.0;
    bool any_finite = false;
    for (double u : problem.upper_bound) {
        if (std::isfinite(u)) {
            any_finite = true;
            ub_max = std::max(ub_max, u);
        }
    }
    double c_max = 0.0;
    for (double v : problem.objective) c_max = std::max(c_max, std::abs(v));
    if (c_max == 0.0 || (any_finite && ub_max == 0.0)) {
        rep.status = SolveStatus::optimal;
        return rep;
    }
    if (!any_finite) throw std::invalid_argument("solve: no upper bounds, problem is unbounded");

    // Scale x so the tightest finite bound is 1; the costs stay huge but the
    // multipliers (the solution) stay near unit scale.
    double ub_min = std::numeric_limits<double>::infinity();
    for (double u : problem.upper_bound)
        if (std::isfinite(u) && u > 0.0) ub_min = std::min(ub_min, u);
    const double ub_scale = std::isfinite(ub_min) ? ub_min : 1.0;

    Mat W(L, n);  // column i holds w(f_i), evaluated in extended precision
    for (Idx i = 0; i < n; ++i) {
        const Real f = problem.frequencies[static_cast<std::size_t>(i)];
        const Real step = 2.0L * std::numbers::pi_v<Real> * f * static_cast<Real>(problem.t0);
        W(0, i) = 1.0L;
        for (Idx m = 1; m < L; ++m) W(m, i) = 2.0L * std::cos(step * static_cast<Real>(m));
    }
    std::vector<Idx> fin;         // rows with a finite upper bound
    std::vector<Real> ucost_base; // their scaled bounds = phase-2 costs
    for (Idx i = 0; i < n; ++i) {
        const double u = problem.upper_bound[static_cast<std::size_t>(i)];
        if (std::isfinite(u)) {
            fin.push_back(i);
            ucost_base.push_back(static_cast<Real>(u) / static_cast<Real>(ub_scale));
        }
    }
    std::vector<Real> ucost = ucost_base;
    const auto nf = static_cast<Idx>(fin.size());
    const Idx ncol = n + nf;  // lower columns then upper columns

    Vec rhs(L);
    for (Idx m = 0; m < L; ++m)
        rhs(m) = static_cast<Real>(problem.objective[static_cast<std::size_t>(m)]) /
                 static_cast<Real>(c_max);

    auto column = [&](Idx j, Vec& out) {
        if (j < n)
            out = -W.col(j);
        else
            out = W.col(fin[static_cast<std::size_t>(j - n)]);
    };
    auto phase2_cost = [&](Idx j) { return j < n ? 0.0L : ucost[static_cast<std::size_t>(j - n)]; };

    // Basis entries >= ncol encode the artificial column sign(rhs_k) * e_k.
    std::vector<Idx> basis(static_cast<std::size_t>(L));
    std::vector<char> in_basis(static_cast<std::size_t>(ncol), 0);
    for (Idx k = 0; k < L; ++k) basis[static_cast<std::size_t>(k)] = ncol + k;

    Mat B(L, L);
    Vec a(L), xB(L), qB(L), pi(L), dir(L);
    auto build_basis = [&]() {
        for (Idx k = 0; k < L; ++k) {
            const Idx j = basis[static_cast<std::size_t>(k)];
            if (j >= ncol) {
                B.col(k).setZero();
                B(j - ncol, k) = rhs(j - ncol) >= 0.0L ? 1.0L : -1.0L;
            } else {
                column(j, a);
                B.col(k) = a;
            }
        }
    };
    auto basis_cost = [&](int phase, Idx j) {
        if (j >= ncol) return phase == 1 ? 1.0L : 0.0L;
        return phase == 1 ? 0.0L : phase2_cost(j);
    };

    int iters = 0;        // pivots within the current attempt
    int total_iters = 0;  // pivots across all attempts, reported
    // A simplex pivot is far cheaper than the interior-point iterations the
    // option was sized for; scale the budget so default options still cover
    // the heavily degenerate production problems.
    const int budget = options.max_iterations * 200;
    // Returns 0 on optimal, 1 on pivot budget exhausted, 2 on unbounded dual.
    auto run_phase = [&](int phase) {
        int since_improve = 0;
        Real last_obj = std::numeric_limits<Real>::infinity();
        // Columns whose negative reduced cost found no leaving row: the basis
        // arithmetic cannot repair them (a numerically unbounded dual ray).
        // They are dropped from pricing for the rest of the phase and the
        // final feasibility check reports whatever violation they carry.
        std::vector<char> dropped(static_cast<std::size_t>(ncol), 0);
        // Best vertex seen in this phase. The objective is non-increasing in
        // exact arithmetic, so a measurable rise means the basis has drifted
        // numerically singular; restoring the snapshot and banning the column
        // that led into the bad region recovers instead of grinding on junk.
        Real best_obj = std::numeric_limits<Real>::infinity();
        std::vector<Idx> best_basis;
        Idx prev_enter = -1;
        while (iters < budget) {
            ++iters;
            build_basis();
            Eigen::PartialPivLU<Mat> lu(B);
            xB = lu.solve(rhs);
            for (Idx k = 0; k < L; ++k) qB(k) = basis_cost(phase, basis[static_cast<std::size_t>(k)]);
            Eigen::PartialPivLU<Mat> lut(B.transpose());
            pi = lut.solve(qB);

            // Basis trust test: qB.xB and rhs.pi are the same scalar computed
            // through B and B^T; on a numerically singular basis the two LU
            // solves return garbage that no longer agrees. An untrusted or
            // objective-raising basis (the phase objective is non-increasing
            // in exact arithmetic) means the last pivot wrecked the basis:
            // restore the best snapshot and ban the column that led there.
            const Real obj = qB.dot(xB);
            const bool trusted =
                std::abs(obj - rhs.dot(pi)) <= 1e-6L * (1.0L + std::abs(obj));
            if (trusted && (!std::isfinite(best_obj) ||
                            obj < best_obj - 1e-15L * (1.0L + std::abs(best_obj)))) {
                best_obj = obj;
                best_basis = basis;
            } else if (!best_basis.empty() &&
                       (!trusted || obj > best_obj + 1e-3L * (1.0L + std::abs(best_obj)))) {
                basis = best_basis;
                std::fill(in_basis.begin(), in_basis.end(), 0);
                for (Idx k = 0; k < L; ++k)
                    if (basis[static_cast<std::size_t>(k)] < ncol)
                        in_basis[static_cast<std::size_t>(basis[static_cast<std::size_t>(k)])] = 1;
                if (prev_enter >= 0) dropped[static_cast<std::size_t>(prev_enter)] = 1;
                if (std::getenv("UWB_LP_DEBUG"))
                    std::fprintf(stderr,
                                 "restore it %d: obj=%.6e best=%.6e trusted=%d dropped=%ld\n",
                                 iters, static_cast<double>(obj), static_cast<double>(best_obj),
                                 trusted ? 1 : 0, (long)prev_enter);
                prev_enter = -1;
                continue;
            }

            // Reduced costs in bulk: g = W^T pi, lower column i has d = g_i,
            // upper column has d = ub - g_i.
            const Vec g = W.transpose() * pi;
            // Reduced costs carry rounding noise of order eps * L * |pi|_inf;
            // price just above that floor so bounds that are many orders
            // smaller than |pi|_inf are still honored to working precision.
            const Real dtol = 1e-16L * std::max(1.0L, pi.template lpNorm<Eigen::Infinity>());
            const bool bland = since_improve > 2 * static_cast<int>(L) + 50;
            Idx enter = -1;
            Real best = -dtol;
            Real worst = 0.0L;          // most negative reduced cost among live columns
            Real worst_dropped = 0.0L;  // same, over the dropped columns
            for (Idx j = 0; j < ncol; ++j) {
                if (in_basis[static_cast<std::size_t>(j)]) continue;
                const Real cj = phase == 1 ? 0.0L : phase2_cost(j);
                const Real d = j < n ? g(j) : cj - g(fin[static_cast<std::size_t>(j - n)]);
                if (dropped[static_cast<std::size_t>(j)]) {
                    worst_dropped = std::min(worst_dropped, d);
                    continue;
                }
                worst = std::min(worst, d);
                if (bland) {
                    if (enter < 0 && d < -dtol) enter = j;
                } else if (d < best) {
                    enter = j;
                    best = d;
                }
            }
            // Accepting a basis (converged or stalled) is only sound when the
            // remaining dual infeasibility is at rounding level; otherwise the
            // recovered primal point would violate real constraints.
            const Real accept_tol = 1e-12L * std::max(1.0L, pi.template lpNorm<Eigen::Infinity>());
            // Cleanup rounds: breakdown recovery bans columns, but those
            // columns are real constraints. Once the live columns price out,
            // re-admit the banned ones and keep pivoting from the (now much
            // better) basis; bounded rounds keep a repeating trap finite.
            if (enter < 0) {
                if (cleanup_rounds > 0 && worst_dropped < -dtol) {
                    --cleanup_rounds;
                    std::fill(dropped.begin(), dropped.end(), 0);
                    continue;
                }
                return 0;
            }

            column(enter, a);
            dir = lu.solve(a);
            const Real ptol = 1e-14L * std::max(1.0L, dir.template lpNorm<Eigen::Infinity>());
            // Harris-style two-pass ratio test: pass 1 finds the limiting
            // ratio under a tiny feasibility relaxation, pass 2 takes the
            // numerically largest pivot among the candidates inside that
            // limit. Pivoting on the largest eligible element is what keeps
            // the basis from drifting singular during long degenerate runs.
            Idx leave = -1;
            Real best_ratio = std::numeric_limits<Real>::infinity();
            const Real delta =
                1e-12L * std::max(1.0L, xB.template lpNorm<Eigen::Infinity>());
            Real limit = std::numeric_limits<Real>::infinity();
            for (Idx k = 0; k < L; ++k)
                if (dir(k) > ptol)
                    limit = std::min(limit, (std::max(xB(k), 0.0L) + delta) / dir(k));
            if (std::isfinite(limit)) {
                Real best_piv = 0.0L;
                for (Idx k = 0; k < L; ++k) {
                    if (dir(k) <= ptol) continue;
                    const Real ratio = std::max(xB(k), 0.0L) / dir(k);
                    if (ratio <= limit && dir(k) > best_piv) {
                        best_piv = dir(k);
                        leave = k;
                        best_ratio = ratio;
                    }
                }
            }
            if (leave < 0) {
                dropped[static_cast<std::size_t>(enter)] = 1;
                continue;
            }

            const Idx out = basis[static_cast<std::size_t>(leave)];
            if (out < ncol) in_basis[static_cast<std::size_t>(out)] = 0;
            basis[static_cast<std::size_t>(leave)] = enter;
            in_basis[static_cast<std::size_t>(enter)] = 1;
            prev_enter = enter;

            if (std::getenv("UWB_LP_DEBUG") && iters % 200 == 0)
                std::fprintf(stderr, "phase %d it %d obj=%.9e enter=%ld leave=%ld ratio=%.3e\n",
                             phase, iters, static_cast<double>(obj), (long)enter, (long)leave,
                             static_cast<double>(best_ratio));
            if (!std::isfinite(last_obj) ||
                obj < last_obj - 1e-15L * (1.0L + std::abs(last_obj))) {
                last_obj = obj;
                since_improve = 0;
            } else if (++since_improve > 4 * static_cast<int>(L) + 2000) {
                // Thousands of pivots without measurable progress. If the
                // remaining dual infeasibility is rounding-level the basis is
                // as optimal as the arithmetic allows; otherwise the pivoting
                // is cycling on a column it cannot actually improve, so drop
                // that column like a failed ratio test and report its
                // violation at the end.
                if (worst >= -accept_tol) return 0;
                dropped[static_cast<std::size_t>(enter)] = 1;
                since_improve = 2 * static_cast<int>(L) + 51;
            }
        }
        return 1;
    };

    // The duals are massively degenerate: long runs of near-identical bounds
    // mean the pivot path hangs on how the cost perturbation breaks ties, and
    // an unlucky path can wedge in zero-step cycling on a near-singular basis
    // (clusters of adjacent active frequencies make B ill-conditioned). A
    // fresh perturbation takes a different path, so retry a few times and
    // accept the first vertex whose recovered primal actually satisfies the
    // constraints to working precision.
    constexpr int kAttempts = 4;
    bool accepted = false;
    std::vector<double> rcand(problem.taps, 0.0);
    double best_score = std::numeric_limits<double>::infinity();
    std::vector<double> best_r;
    SolveStatus fail_status = SolveStatus::iteration_limit;
    for (int attempt = 0; attempt < kAttempts && !accepted; ++attempt) {
        // Deterministic cost perturbation, re-drawn per attempt: a relative
        // O(1e-9..1e-6) spread breaks the ties while moving each bound far
        // less than the discretization already does.
        {
            std::uint64_t state =
                0x9e3779b97f4a7c15ull + 0x6a09e667f3bcc909ull * static_cast<std::uint64_t>(attempt);
            Real scale = 1e-9L;
            for (int a1 = 0; a1 < attempt; ++a1) scale *= 10.0L;
            for (std::size_t idx = 0; idx < ucost.size(); ++idx) {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                const Real xi = static_cast<Real>(state >> 11) * 0x1.0p-53L;
                ucost[idx] = ucost_base[idx] * (1.0L + scale * xi);
            }
        }
        iters = 0;
        for (Idx k = 0; k < L; ++k) basis[static_cast<std::size_t>(k)] = ncol + k;
        std::fill(in_basis.begin(), in_basis.end(), 0);

        const int r1 = run_phase(1);
        if (r1 != 0) {
            total_iters += iters;
            continue;
        }
        build_basis();
        {
            Eigen::PartialPivLU<Mat> lu(B);
            xB = lu.solve(rhs);
            Real art = 0.0L;
            for (Idx k = 0; k < L; ++k)
                if (basis[static_cast<std::size_t>(k)] >= ncol) art += std::abs(xB(k));
            if (art > 1e-7L * (1.0L + rhs.template lpNorm<Eigen::Infinity>()))
                throw std::invalid_argument("solve: problem is unbounded");

            // Pivot lingering zero-valued artificials out where possible; a row
            // with no eligible column is redundant and the artificial stays at
            // zero with zero phase-2 cost.
            for (Idx k = 0; k < L; ++k) {
                if (basis[static_cast<std::size_t>(k)] < ncol) continue;
                for (Idx j = 0; j < ncol; ++j) {
                    if (in_basis[static_cast<std::size_t>(j)]) continue;
                    column(j, a);
                    dir = lu.solve(a);
                    if (std::abs(dir(k)) > 1e-7L) {
                        basis[static_cast<std::size_t>(k)] = j;
                        in_basis[static_cast<std::size_t>(j)] = 1;
                        build_basis();
                        lu.compute(B);
                        break;
                    }
                }
            }
        }

        const int r2 = run_phase(2);
        total_iters += iters;
        if (r2 != 0) continue;

        build_basis();
        for (Idx k = 0; k < L; ++k) qB(k) = basis_cost(2, basis[static_cast<std::size_t>(k)]);
        {
            // The final multipliers are the solution itself, so solve B^T pi = qB
            // carefully: the costs span the bounds' full dynamic range and an
            // unrefined LU solve can violate the tightest bounds by many orders.
            Eigen::PartialPivLU<Mat> lut(B.transpose());
            pi = lut.solve(qB);
            Vec res(L);
            for (int pass = 0; pass < 3; ++pass) {
                res = qB - B.transpose() * pi;
                pi += lut.solve(res);
            }
        }
        for (std::size_t m = 0; m < problem.taps; ++m)
            rcand[m] = static_cast<double>(pi(static_cast<Idx>(m)) * static_cast<Real>(ub_scale));

        // Accept only a vertex whose recovered primal is genuinely feasible
        // relative to its own scale; a wedged pivot path can terminate on a
        // numerically inconsistent basis whose "solution" violates the
        // constraints by orders of magnitude.
        const double viol = constraint_violation(problem, rcand);
        const double score = rcand[0] > 0.0 ? viol / rcand[0]
                                            : std::numeric_limits<double>::infinity();
        if (std::getenv("UWB_LP_DEBUG"))
            std::fprintf(stderr, "attempt %d: iters=%d viol=%.3e r0=%.3e score=%.3e\n", attempt,
                         iters, viol, rcand[0], score);
        if (score < best_score) {
            best_score = score;
            best_r = rcand;
        }
        if (score <= 1e-6) {
            accepted = true;
        } else {
            fail_status = SolveStatus::numerical_failure;
        }
    }

    rep.iterations = total_iters;
    if (!best_r.empty()) rep.r_opt.r = best_r;
    if (!accepted) {
        rep.max_constraint_violation =
            best_r.empty() ? 0.0 : constraint_violation(problem, rep.r_opt.r);
        rep.status = fail_status;
        return rep;
    }

    // Row-by-row objective: each passband term weight_i * (w^T r) is a
    // nonnegative spectrum sample, so the sum accumulates without the
    // cancellation the collapsed coefficient form suffers when the weights
    // span many orders of magnitude.
    rep.objective_value = 0.0;
    if (problem.row_weight.size() == problem.frequencies.size()) {
        for (std::size_t i = 0; i < problem.frequencies.size(); ++i) {
            if (problem.row_weight[i] == 0.0) continue;
            const auto w = cosine_vector(problem.frequencies[i], problem.taps, problem.t0);
            long double wr = 0.0;
            for (std::size_t m = 0; m < problem.taps; ++m)
                wr += static_cast<long double>(w[m]) * static_cast<long double>(rep.r_opt.r[m]);
            // Each term is a spectrum sample; sub-rounding negatives clamp.
            rep.objective_value += problem.row_weight[i] * std::max(static_cast<double>(wr), 0.0);
        }
    } else {
        for (std::size_t m = 0; m < problem.taps; ++m)
            rep.objective_value += problem.objective[m] * rep.r_opt.r[m];
    }
    rep.max_constraint_violation = constraint_violation(problem, rep.r_opt.r);
    rep.status = SolveStatus::optimal;
    return rep;
}

double verify_feasibility(const AutocorrVector& r, double t0,
                          std::span<const double> refined_frequencies,
                          std::span<const double> refined_bounds) {
    if (refined_frequencies.size() != refined_bounds.size())
        throw std::invalid_argument("verify_feasibility: grid/bound size mismatch");
    double v = 0.0;
    for (std::size_t i = 0; i < refined_frequencies.size(); ++i) {
        const auto w = cosine_vector(refined_frequencies[i], r.size(), t0);
        double wr = 0.0;
        for (std::size_t m = 0; m < r.size(); ++m) wr += w[m] * r[m];
        v = std::max(v, -wr);
        if (std::isfinite(refined_bounds[i])) v = std::max(v, wr - refined_bounds[i]);
    }
    return v;
}

}  // namespace uwb
