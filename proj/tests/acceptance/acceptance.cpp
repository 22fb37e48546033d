// Acceptance checks. Prints one PASS/FAIL line per criterion; exits nonzero
// if any selected criterion fails.
//
//   acceptance                 run all criteria
//   acceptance --criterion 4   run one (repeatable)

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <algorithm>
#include <chrono>
#include <functional>
#include <iterator>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "chainbar/barrier.hpp"
#include "chainbar/baseline.hpp"
#include "chainbar/coverage.hpp"
#include "chainbar/harness.hpp"
#include "chainbar/physics.hpp"
#include "oracles.hpp"
#include "random_world.hpp"

using namespace chainbar;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

constexpr double kRs = 0.5;
constexpr double kSweepSlack = 0.05;
const std::vector<std::size_t> kSweepN{60, 65, 70, 75};
constexpr std::size_t kSweepTrials = 30;
constexpr std::uint64_t kSweepSeed = 20240601;

harness::ExperimentSpec sweep_spec() {
    harness::ExperimentSpec s;
    s.belt = {50.0, 8.0};
    s.rs = kRs;
    s.n_values = kSweepN;
    s.trials = kSweepTrials;
    s.seed_base = kSweepSeed;
    s.objective = baseline::Objective::MinAvg;
    s.record_wall_time = false;
    return s;
}

const harness::ExperimentResult& sweep() {
    static std::optional<harness::ExperimentResult> cached;
    if (!cached) cached = harness::run_experiment(sweep_spec());
    return *cached;
}

const harness::Aggregate& find(const std::vector<harness::Aggregate>& summary, harness::Algorithm a, std::size_t n) {
    for (const auto& g : summary)
        if (g.algorithm == a && g.n == n) return g;
    throw std::runtime_error("missing aggregate");
}

// 1. Every run at or above the minimum sensor count forms a verified barrier.
//
// A formed barrier is taut: its joints sit at 2Rs within the constraint
// tolerance, where a point-sampled raster sees through the cusp between
// nearly tangent disks. The grid oracle is therefore also evaluated with the
// radius grown by cell^2 / (2 Rs) + tol, the least growth that makes the
// covered lens at every joint at least one cell tall on each side.
Outcome termination() {
    const BeltRegion belt{20.0, 4.0};
    const double cell = kRs / 8;
    const auto t0 = std::chrono::steady_clock::now();
    int ok = 0, total = 0, raw_grid = 0;
    std::uint64_t worst_iterations = 0;
    std::string failures;
    for (std::size_t n : {20u, 24u, 30u}) {
        for (std::uint64_t seed = 1; seed <= 50; ++seed) {
            ++total;
            auto cfg = AlgoConfig::defaults_for(kRs);
            cfg.rng_seed = seed;
            const auto d = uniform_random_deployment(seed, n, belt, kRs);
            try {
                const auto r = barrier::run(d, cfg);
                const double grown = kRs + cell * cell / (2 * kRs) + cfg.constraint_tol;
                const bool uf = coverage::strong_barrier_covered(r.final_positions, kRs, belt, cfg.constraint_tol).covered;
                const bool grid = coverage::grid_gap_oracle(r.final_positions, grown, belt, cell);
                raw_grid += coverage::grid_gap_oracle(r.final_positions, kRs, belt, cell);
                worst_iterations = std::max(worst_iterations, r.iterations_used);
                if (r.barrier_formed && uf && grid && r.iterations_used <= cfg.max_iterations) {
                    ++ok;
                } else {
                    failures += fmt(" n=%zu/seed=%llu(uf=%d,grid=%d)", n, (unsigned long long)seed, uf, grid);
                }
            } catch (const std::exception& e) {
                failures += fmt(" n=%zu/seed=%llu(%s)", n, (unsigned long long)seed, e.what());
            }
        }
    }
    return {ok == total, fmt("%d/%d runs formed and verified (checker, tolerance-aware grid oracle); raw grid oracle "
                             "at Rs confirms %d/%d; worst iterations %llu; %.1f s",
                             ok, total, raw_grid, total, (unsigned long long)worst_iterations, seconds_since(t0)) +
                             failures};
}

// 2. Nonlinear beats the linear baseline on mean avg and mean max displacement.
Outcome displacement_ordering() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto& result = sweep();
    bool pass = true;
    std::string detail;
    for (std::size_t n : kSweepN) {
        const auto& nl = find(result.summary, harness::Algorithm::Nonlinear, n);
        const auto& bl = find(result.summary, harness::Algorithm::LinearBaseline, n);
        const bool avg_ok = nl.mean_avg_displacement < bl.mean_avg_displacement;
        const bool max_ok = nl.mean_max_displacement < bl.mean_max_displacement;
        const bool complete = nl.failures == 0 && bl.failures == 0;
        pass = pass && avg_ok && max_ok && complete;
        detail += fmt(" | N=%zu avg %.4f vs %.4f [%s]  max %.4f vs %.4f [%s]  failures %zu/%zu", n,
                      nl.mean_avg_displacement, bl.mean_avg_displacement, avg_ok ? "ok" : "no",
                      nl.mean_max_displacement, bl.mean_max_displacement, max_ok ? "ok" : "no", nl.failures,
                      bl.failures);
    }
    return {pass, fmt("%zu paired seeds per N, nonlinear vs linear baseline (min_avg), %.1f s", kSweepTrials,
                      seconds_since(t0)) +
                      detail};
}

// 3. More sensors, less movement: mean avg at N=75 below N=60 (5% slack).
Outcome redundancy_trend() {
    const auto& result = sweep();
    const double a60 = find(result.summary, harness::Algorithm::Nonlinear, 60).mean_avg_displacement;
    const double a75 = find(result.summary, harness::Algorithm::Nonlinear, 75).mean_avg_displacement;
    return {a75 < a60 * (1.0 + kSweepSlack), fmt("nonlinear mean avg N=60 %.4f, N=75 %.4f (ratio %.3f, limit %.2f)",
                                                 a60, a75, a75 / a60, 1.0 + kSweepSlack)};
}

// 4. The 50-disk line covers the 50 m belt; every 49-disk deletion does not.
Outcome minimal_barrier() {
    const BeltRegion belt{50.0, 8.0};
    std::vector<Vec2> line;
    for (int i = 1; i <= 50; ++i) line.push_back({(2.0 * i - 1.0) * kRs, 4.0});
    const double tol = AlgoConfig::defaults_for(kRs).constraint_tol;
    const bool full = coverage::strong_barrier_covered(line, kRs, belt, tol).covered;
    int rejected = 0, grid_rejected = 0;
    for (int k = 0; k < 50; ++k) {
        auto p = line;
        p.erase(p.begin() + k);
        rejected += !coverage::strong_barrier_covered(p, kRs, belt, tol).covered;
        grid_rejected += !coverage::grid_gap_oracle(p, kRs, belt, kRs / 4);
    }
    return {full && rejected == 50,
            fmt("50-disk line covered=%s; %d/50 deletions rejected (grid oracle %d/50)", full ? "true" : "false",
                rejected, grid_rejected)};
}

// 5. Union-find checker agrees with the raster oracle away from tolerance edges.
struct EquivalenceTally {
    int instances = 0, covered = 0, literal = 0, literal_dis = 0, robust = 0, robust_dis = 0, all_dis = 0;
};

EquivalenceTally equivalence_sweep(std::size_t n, int count, std::uint64_t seed) {
    const BeltRegion belt{10.0, 3.0};
    const double cell = kRs / 8, tol = AlgoConfig::defaults_for(kRs).constraint_tol;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(0.0, belt.length), uy(0.0, belt.width);
    EquivalenceTally t;
    for (int trial = 0; trial < count; ++trial) {
        std::vector<Vec2> p(n);
        for (auto& q : p) q = {ux(rng), uy(rng)};
        const bool uf = coverage::strong_barrier_covered(p, kRs, belt, tol).covered;
        const bool grid = coverage::grid_gap_oracle(p, kRs, belt, cell);
        ++t.instances;
        t.covered += uf;
        t.all_dis += uf != grid;
        if (oracle::coverage_slack(p, kRs, belt.length) > 2 * cell) {
            ++t.literal;
            t.literal_dis += uf != grid;
        }
        const bool shrunk = coverage::strong_barrier_covered(p, kRs - cell, belt, 0.0).covered;
        const bool grown = coverage::strong_barrier_covered(p, kRs + cell, belt, 0.0).covered;
        if (shrunk == grown) {
            ++t.robust;
            t.robust_dis += uf != grid;
        }
    }
    return t;
}

Outcome oracle_equivalence() {
    // The pinned 30-sensor sweep is never covered, so denser sweeps are added
    // to exercise covered verdicts too.
    bool pass = true;
    std::string detail;
    for (const auto& [n, seed] : std::vector<std::pair<std::size_t, std::uint64_t>>{{30, 55}, {60, 56}, {90, 57}}) {
        const auto t = equivalence_sweep(n, 500, seed);
        pass = pass && t.literal_dis == 0 && t.robust_dis == 0;
        detail += fmt(" | %zu sensors: %d/%d covered; all-pairs slack guard admits %d, disagreements %d; "
                      "decision guard (verdict stable under radius +-cell) admits %d, disagreements %d; "
                      "unguarded disagreements %d",
                      n, t.covered, t.instances, t.literal, t.literal_dis, t.robust, t.robust_dis, t.all_dis);
    }
    return {pass, "500 instances per density on 10x3, cell Rs/8" + detail};
}

// 6. Constraint invariants after every step of 10^4 random worlds.
Outcome physics_invariants() {
    const auto settings = physics::WorldSettings::from(AlgoConfig::defaults_for(kRs));
    std::mt19937_64 rng(66);
    double worst_cap = 0.0, worst_anchor = 0.0;
    int steps = 0, fixed_point_failures = 0;
    for (int k = 0; k < 10000; ++k) {
        auto rw = testing_support::random_world(rng, settings, kRs);
        for (int s = 0; s < 3; ++s) {
            testing_support::random_forces(rng, rw.world);
            rw.world.step(0.1);
            ++steps;
            for (const auto& c : rw.world.distance_caps()) {
                worst_cap = std::max(worst_cap, distance(rw.world.position(c.a), rw.world.position(c.b)) - c.max_length);
            }
            for (const auto& a : rw.world.line_anchors()) {
                worst_anchor = std::max(worst_anchor, std::abs(rw.world.position(a.body).x - a.line_x));
            }
        }
        const auto before = rw.world;
        rw.world.step(0.1);
        fixed_point_failures += !(rw.world == before);
    }
    const bool pass = worst_cap <= settings.constraint_tol && worst_anchor <= settings.constraint_tol &&
                      fixed_point_failures == 0;
    return {pass, fmt("%d steps: worst cap excess %.3g, worst anchor offset %.3g (tol %.3g); zero-force fixed-point "
                      "failures %d",
                      steps, worst_cap, worst_anchor, settings.constraint_tol, fixed_point_failures)};
}

// 7. Forest structure after every iteration of 20 seeded runs.
using MemberSets = std::set<std::vector<NodeId>>;

// Empty when `now` follows from `before` by zero merges (rewires keep member
// sets) or by exactly one merge of two graphs.
std::string forest_transition(const MemberSets& before, const MemberSets& now) {
    if (now.size() > before.size()) return "graph count increased";
    if (before.size() - now.size() > 1) return "more than one merge in an iteration";
    if (now.size() == before.size()) return now == before ? "" : "member sets changed without a merge";
    std::vector<std::vector<NodeId>> gone, added;
    std::set_difference(before.begin(), before.end(), now.begin(), now.end(), std::back_inserter(gone));
    std::set_difference(now.begin(), now.end(), before.begin(), before.end(), std::back_inserter(added));
    if (gone.size() != 2 || added.size() != 1) return "merge did not join exactly two graphs";
    std::vector<NodeId> joined;
    std::merge(gone[0].begin(), gone[0].end(), gone[1].begin(), gone[1].end(), std::back_inserter(joined));
    return joined == added[0] ? "" : "merged graph is not the union of its parts";
}

Outcome structural_invariants() {
    const BeltRegion belt{20.0, 4.0};
    int ok_runs = 0;
    std::uint64_t iterations = 0, merges = 0, rewires = 0;
    std::string failures;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto cfg = AlgoConfig::defaults_for(kRs);
        cfg.rng_seed = seed;
        const auto d = uniform_random_deployment(seed + 1000, 24, belt, kRs);
        std::optional<MemberSets> previous;
        std::uint64_t run_merges = 0, run_rewires = 0;
        std::string problem;
        barrier::RunOptions opts;
        opts.check_invariants = true;
        opts.observer = [&](const barrier::FormationState& s) {
            MemberSets now;
            for (const auto& [g, graph] : s.forest.graphs()) now.insert(graph.members);
            if (previous && problem.empty()) problem = forest_transition(*previous, now);
            previous = std::move(now);
            ++iterations;
            run_merges = s.merges;
            run_rewires = s.rewires;
        };
        try {
            barrier::run(d, cfg, opts);
        } catch (const std::exception& e) {
            problem = e.what();
        }
        merges += run_merges;
        rewires += run_rewires;
        if (problem.empty()) {
            ++ok_runs;
        } else {
            failures += fmt(" seed=%llu(%s)", (unsigned long long)seed, problem.c_str());
        }
    }
    return {ok_runs == 20, fmt("%d/20 runs clean over %llu checked iterations (%llu merges, %llu rewires)", ok_runs,
                               (unsigned long long)iterations, (unsigned long long)merges,
                               (unsigned long long)rewires) +
                               failures};
}

// 8. Baseline assignment equals exhaustive search at every candidate height.
Outcome baseline_optimality() {
    std::mt19937_64 rng(88);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int instances = 0, heights = 0, mismatches = 0, plan_mismatches = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t m = 1 + trial % 5;  // 1..5 slots
        const std::size_t n = m + static_cast<std::size_t>(unit(rng) * static_cast<double>(9 - m));  // m..8
        const BeltRegion belt{2.0 * kRs * static_cast<double>(m), 3.0};
        std::vector<Vec2> p(n);
        for (auto& q : p) q = {unit(rng) * belt.length, unit(rng) * belt.width};
        const auto d = make_deployment(belt, kRs, p);
        const auto slots = baseline::barrier_slots(belt, kRs);
        for (bool min_max : {false, true}) {
            const auto obj = min_max ? baseline::Objective::MinMax : baseline::Objective::MinAvg;
            oracle::BruteCost best;
            for (double y : baseline::candidate_heights(d)) {
                ++heights;
                const auto got = baseline::optimal_assignment(p, slots, y, obj).second;
                const auto want = oracle::brute_assignment(p, slots, y, min_max);
                const bool same = std::abs(got.total - want.total) <= 1e-9 * (1.0 + want.total) &&
                                  (!min_max || std::abs(got.worst - want.worst) <= 1e-12 * (1.0 + want.worst));
                mismatches += !same;
                const bool wins = min_max ? (want.worst < best.worst || (want.worst == best.worst && want.total < best.total))
                                          : want.total < best.total;
                if (wins) best = want;
            }
            const auto plan = baseline::plan_linear_barrier(d, obj).first;
            plan_mismatches += std::abs(plan.cost.total - best.total) > 1e-9 * (1.0 + best.total) ||
                               (min_max && std::abs(plan.cost.worst - best.worst) > 1e-12 * (1.0 + best.worst));
        }
        ++instances;
    }
    return {mismatches == 0 && plan_mismatches == 0,
            fmt("%d instances, %d (height, objective) comparisons: %d mismatches; best-plan mismatches %d", instances,
                heights, mismatches, plan_mismatches)};
}

// 9. The full sweep is byte-reproducible.
Outcome determinism() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto a = harness::rows_to_csv(sweep().rows);
    const auto b = harness::rows_to_csv(harness::run_experiment(sweep_spec()).rows);
    std::size_t rows = 0;
    for (char c : a) rows += c == '\n';
    return {a == b, fmt("two sweeps, %zu CSV lines, %zu bytes: %s, %.1f s", rows, a.size(),
                        a == b ? "identical" : "DIFFERENT", seconds_since(t0))};
}

}  // namespace

int main(int argc, char** argv) {
    const std::map<int, std::pair<const char*, std::function<Outcome()>>> criteria{
        {1, {"termination at the minimum sensor count", termination}},
        {2, {"displacement ordering vs the linear baseline", displacement_ordering}},
        {3, {"displacement falls as sensors are added", redundancy_trend}},
        {4, {"minimal 50-disk barrier", minimal_barrier}},
        {5, {"checker / grid oracle equivalence", oracle_equivalence}},
        {6, {"physics invariants", physics_invariants}},
        {7, {"forest structural invariants", structural_invariants}},
        {8, {"baseline optimality at small scale", baseline_optimality}},
        {9, {"experiment determinism", determinism}},
    };
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
            const int c = std::atoi(argv[++i]);
            if (!criteria.count(c)) {
                std::fprintf(stderr, "unknown criterion %d\n", c);
                return 2;
            }
            selected.push_back(c);
        } else {
            std::fprintf(stderr, "usage: %s [--criterion N]...\n", argv[0]);
            return 2;
        }
    }
    if (selected.empty())
        for (const auto& [c, _] : criteria) selected.push_back(c);

    bool all = true;
    for (int c : selected) {
        const auto& [title, fn] = criteria.at(c);
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        all = all && o.pass;
        std::printf("criterion %d %s - %s: %s\n", c, o.pass ? "PASS" : "FAIL", title, o.detail.c_str());
        std::fflush(stdout);
    }
    return all ? 0 : 1;
}
