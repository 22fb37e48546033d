#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <random>

#include "chainbar/chain.hpp"
#include "chainbar/model.hpp"
#include "chainbar/physics.hpp"

namespace chainbar::barrier {

enum class Phase { Init, LeftAttach, RightAttach, Formation, Done };

const char* to_string(Phase phase);

struct RunOptions {
    // Record a frame every `frame_every` formation iterations (0 = never),
    // plus one final frame.
    std::uint64_t frame_every = 0;
    // Re-check forest/world invariants after every iteration (throws
    // std::logic_error on violation). Meant for tests.
    bool check_invariants = false;
    // Called after every formation iteration; may inspect the state.
    std::function<void(const struct FormationState&)> observer;
};

/// Everything one formation run owns. The world's distance caps mirror the
/// forest's tree edges one to one; the only other constraints are the (at
/// most two) boundary anchors.
struct FormationState {
    Deployment deployment;
    AlgoConfig config;
    double rs = 0.0;
    chain::ChainForest forest;
    physics::World world;
    Phase phase = Phase::Init;
    std::uint64_t iteration = 0;
    std::uint64_t attach_steps = 0;
    std::mt19937_64 rng;
    std::map<chain::GraphId, chain::DominantPair> pairs;
    std::uint64_t merges = 0;
    std::uint64_t rewires = 0;
    std::uint64_t refreshes = 0;  // stall-triggered dominant pair recomputations
};

/// Builds the forest from initial positions, one distance cap of 2Rs per
/// tree edge. No anchors yet.
FormationState initialize_phase(const Deployment& deployment, const AlgoConfig& config);

/// Pulls the left chain link horizontally (magnitude alpha / 2Rs) until its
/// center reaches x = Rs, then anchors it to that line.
void left_attach_phase(FormationState& state);
/// Mirror of left_attach_phase(): the right link is anchored at x = L - Rs.
void right_attach_phase(FormationState& state);

/// One iteration of barrier formation: pull a randomly chosen graph's
/// dominant toward its co-dominant, flatten every graph, step the world,
/// merge on touch. With a single graph left only the constraint projection
/// runs.
void formation_step(FormationState& state);

/// Coverage of the current positions, judged by the coverage checker with
/// tolerance constraint_tol.
bool is_barrier_formed(const FormationState& state);

/// Checks that world constraints equal tree edges plus anchors and that each
/// tree is valid. Throws std::logic_error otherwise.
void check_state_invariants(const FormationState& state);

/// Whole algorithm. Throws InsufficientSensors when N < ceil(L / 2Rs) and
/// NoConvergence when max_iterations formation steps do not form a barrier.
RunResult run(const Deployment& deployment, const AlgoConfig& config, const RunOptions& options = {});

/// Snapshot of the current state as a frame (positions, tree edges, dominant
/// points, flatten-path nodes).
Frame capture_frame(const FormationState& state);

}  // namespace chainbar::barrier
