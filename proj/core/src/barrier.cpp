#include "chainbar/barrier.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "chainbar/coverage.hpp"
#include "chainbar/rng.hpp"
#include "chainbar/errors.hpp"

namespace chainbar::barrier {

namespace {

void clamp_to_belt(FormationState& s) {
    const auto& belt = s.deployment.belt;
    for (NodeId i = 0; i < s.world.body_count(); ++i) {
        const Vec2 p = s.world.position(i);
        const Vec2 c{std::clamp(p.x, 0.0, belt.length), std::clamp(p.y, 0.0, belt.width)};
        if (!(c == p)) s.world.set_position(i, c);
    }
}

std::string describe(const FormationState& s) {
    std::ostringstream out;
    out << "phase=" << to_string(s.phase) << " iteration=" << s.iteration << " attach_steps=" << s.attach_steps
        << " graphs=" << s.forest.graph_count() << " merges=" << s.merges << " rewires=" << s.rewires
        << " refreshes=" << s.refreshes << " max_violation=" << s.world.max_constraint_violation() << '\n';
    for (const auto& [id, g] : s.forest.graphs()) {
        out << "  graph " << id << " size=" << g.members.size();
        if (auto it = s.pairs.find(id); it != s.pairs.end()) {
            out << " dominant=" << it->second.dominant << " codominant=" << it->second.codominant
                << " dist=" << distance(s.world.position(it->second.dominant), s.world.position(it->second.codominant));
        }
        out << '\n';
    }
    return out.str();
}

void attach(FormationState& s, bool left_side) {
    const double rs = s.rs;
    const NodeId link = left_side ? s.forest.left_link() : s.forest.right_link();
    const double line = left_side ? rs : s.deployment.belt.length - rs;
    if (s.world.line_anchor(link)) return;  // single-sensor belt: already anchored on the left

    const auto& cfg = s.config;
    const std::uint64_t budget = std::max<std::uint64_t>(1, cfg.max_iterations / 10);
    const double pull = cfg.alpha / (2.0 * rs);
    std::uint64_t steps = 0;
    auto remaining = [&] {
        const double x = s.world.position(link).x;
        return left_side ? x - line : line - x;
    };
    while (remaining() > cfg.touch_tol) {
        if (steps >= budget) {
            throw NoConvergence(std::string(left_side ? "left" : "right") + " attach did not reach the boundary",
                                describe(s));
        }
        const double magnitude = std::min(pull, remaining() / (cfg.mobility * cfg.tau));
        s.world.apply_pull(link, {line, s.world.position(link).y}, magnitude);
        s.world.step(cfg.tau);
        clamp_to_belt(s);
        ++steps;
    }
    s.world.add_line_anchor(link, line);
    s.world.step(cfg.tau);  // no forces: snaps the link onto its line
    s.attach_steps += steps + 1;
}

void apply_flattening(FormationState& s, const std::vector<Vec2>& pos) {
    const double default_force = s.config.alpha / (2.0 * s.rs);
    for (chain::GraphId g : s.forest.graph_ids()) {
        const auto& graph = s.forest.graph(g);
        if (graph.members.size() < 3 || !graph.root) continue;
        double f = default_force;
        if (auto it = s.pairs.find(g); it != s.pairs.end()) {
            f = chain::pairwise_force(pos[it->second.dominant], pos[it->second.codominant], s.config.alpha,
                                      s.config.min_dist_clamp);
        }
        const auto path = chain::flatten_path(s.forest, g, chain::path_kind_for(s.forest, g));
        const auto action = chain::flatten_step(s.forest, path, pos, f, s.rs, s.config);
        for (const auto& pull : action.pulls) s.world.apply_pull(pull.node, pos[pull.target], pull.magnitude);
        if (action.rewire) {
            const auto& r = *action.rewire;
            chain::apply_rewire(s.forest, r);
            s.world.remove_distance_cap(r.current, r.path_node);
            s.world.add_distance_cap(r.branch, r.path_node, 2.0 * s.rs);
            ++s.rewires;
        }
    }
}

// Joining the two anchored graphs closes an anchor-to-anchor chain whose only
// slack is this joint. Requiring the joint to be within the projection target
// keeps the merged system feasible without a long settling tail.
double merge_slack(const FormationState& s, const chain::DominantPair& pair) {
    const chain::GraphId left = s.forest.left_graph();
    const chain::GraphId right = s.forest.right_graph();
    const chain::GraphId a = s.forest.graph_of(pair.dominant);
    const chain::GraphId b = s.forest.graph_of(pair.codominant);
    const bool closes_barrier = left != right && ((a == left && b == right) || (a == right && b == left));
    return closes_barrier ? 0.5 * s.config.constraint_tol : s.config.touch_tol;
}

}  // namespace

const char* to_string(Phase phase) {
    switch (phase) {
        case Phase::Init: return "Init";
        case Phase::LeftAttach: return "LeftAttach";
        case Phase::RightAttach: return "RightAttach";
        case Phase::Formation: return "Formation";
        case Phase::Done: return "Done";
    }
    return "?";
}

FormationState initialize_phase(const Deployment& deployment, const AlgoConfig& config) {
    deployment.validate();
    const double rs = deployment.rs();
    config.validate(rs);

    FormationState s;
    s.deployment = deployment;
    s.config = config;
    s.rs = rs;
    const auto positions = deployment.initial_positions();
    s.forest = chain::build_chain_forest(positions, rs);
    s.world = physics::World(positions, physics::WorldSettings::from(config));
    for (const auto& [a, b] : s.forest.edges()) s.world.add_distance_cap(a, b, 2.0 * rs);
    s.rng.seed(config.rng_seed);
    s.phase = Phase::Init;
    return s;
}

void left_attach_phase(FormationState& s) {
    if (s.phase != Phase::Init) throw ParameterError("left attach must follow initialization");
    s.phase = Phase::LeftAttach;
    attach(s, true);
}

void right_attach_phase(FormationState& s) {
    if (s.phase != Phase::LeftAttach) throw ParameterError("right attach must follow left attach");
    s.phase = Phase::RightAttach;
    attach(s, false);
}

void formation_step(FormationState& s) {
    if (s.phase == Phase::RightAttach) s.phase = Phase::Formation;
    if (s.phase != Phase::Formation) throw ParameterError("formation step outside the formation phase");
    const auto& cfg = s.config;

    if (s.forest.graph_count() < 2) {
        // Everything is one chain already; let the projection settle it.
        s.world.step(cfg.tau);
        clamp_to_belt(s);
        ++s.iteration;
        return;
    }

    auto pos = s.world.positions();
    if (s.pairs.empty()) s.pairs = chain::all_dominant_pairs(s.forest, pos, cfg);

    const auto ids = s.forest.graph_ids();
    const chain::GraphId selected = ids[uniform_index(s.rng, ids.size())];
    const chain::DominantPair pair = s.pairs.at(selected);

    const double d = distance(pos[pair.dominant], pos[pair.codominant]);
    if (d > 2.0 * s.rs) {
        // Full force f; the free motion may not carry the dominant past the
        // co-dominant's center.
        const double f = chain::pairwise_force(pos[pair.dominant], pos[pair.codominant], cfg.alpha, cfg.min_dist_clamp);
        s.world.apply_pull(pair.dominant, pos[pair.codominant], std::min(f, d / (cfg.mobility * cfg.tau)));
    }
    apply_flattening(s, pos);

    s.world.step(cfg.tau);
    clamp_to_belt(s);
    pos = s.world.positions();

    const double after = distance(pos[pair.dominant], pos[pair.codominant]);
    if (after <= 2.0 * s.rs + merge_slack(s, pair)) {
        chain::merge_graphs(s.forest, pair, pos, s.rs, cfg);
        s.world.add_distance_cap(pair.dominant, pair.codominant, 2.0 * s.rs);
        ++s.merges;
        s.world.step(cfg.tau);  // no forces: bring the new joint within tolerance
        clamp_to_belt(s);
        pos = s.world.positions();
        s.pairs.clear();
        if (s.forest.graph_count() >= 2) s.pairs = chain::all_dominant_pairs(s.forest, pos, cfg);
    } else if (after >= d) {
        // No headway (e.g. an anchored dominant facing a taut chain): the
        // pairs chosen at the last merge are stale, so choose again.
        s.pairs = chain::all_dominant_pairs(s.forest, pos, cfg);
        ++s.refreshes;
    } else {
        auto& p = s.pairs.at(selected);
        p.distance = after;
        p.force = cfg.alpha / std::max(after, cfg.min_dist_clamp);
    }
    ++s.iteration;
}

bool is_barrier_formed(const FormationState& s) {
    const auto pos = s.world.positions();
    const double rs = s.rs;
    const double tol = s.config.constraint_tol;
    const double length = s.deployment.belt.length;

    // Cheap necessary condition: the disks' x-shadows must cover [0, L].
    std::vector<std::pair<double, double>> spans;
    spans.reserve(pos.size());
    for (Vec2 p : pos) spans.emplace_back(p.x - rs - tol, p.x + rs + tol);
    std::sort(spans.begin(), spans.end());
    double reach = 0.0;
    for (const auto& [lo, hi] : spans) {
        if (lo > reach) return false;
        reach = std::max(reach, hi);
    }
    if (reach < length) return false;

    return coverage::strong_barrier_covered(pos, rs, s.deployment.belt, tol).covered;
}

void check_state_invariants(const FormationState& s) {
    const auto pos = s.world.positions();
    s.forest.check_invariants(pos, 2.0 * s.rs + s.config.constraint_tol);
    const auto edges = s.forest.edges();
    const auto& caps = s.world.distance_caps();
    if (edges.size() != caps.size()) throw std::logic_error("world caps do not mirror tree edges");
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (edges[i].first != caps[i].a || edges[i].second != caps[i].b) {
            throw std::logic_error("world caps do not mirror tree edges");
        }
    }
    if (s.world.line_anchors().size() > 2) throw std::logic_error("more than two line anchors");
    for (const auto& a : s.world.line_anchors()) {
        if (std::abs(pos[a.body].x - a.line_x) > s.config.constraint_tol) throw std::logic_error("anchor drifted");
    }
}

Frame capture_frame(const FormationState& s) {
    Frame f;
    f.iteration = s.iteration;
    f.positions = s.world.positions();
    f.edges = s.forest.edges();
    for (const auto& [g, p] : s.pairs) f.dominant_nodes.push_back(p.dominant);
    for (chain::GraphId g : s.forest.graph_ids()) {
        const auto& graph = s.forest.graph(g);
        if (!graph.root) continue;
        const auto path = chain::flatten_path(s.forest, g, chain::path_kind_for(s.forest, g));
        if (path.nodes.size() > 1) f.flatten_nodes.insert(f.flatten_nodes.end(), path.nodes.begin(), path.nodes.end());
    }
    std::sort(f.flatten_nodes.begin(), f.flatten_nodes.end());
    return f;
}

RunResult run(const Deployment& deployment, const AlgoConfig& config, const RunOptions& options) {
    deployment.validate();
    const std::size_t need = min_barrier_size(deployment.belt, deployment.rs());
    if (deployment.size() < need) throw InsufficientSensors(deployment.size(), need);

    FormationState s = initialize_phase(deployment, config);
    left_attach_phase(s);
    right_attach_phase(s);
    s.phase = Phase::Formation;
    if (s.forest.graph_count() >= 2) s.pairs = chain::all_dominant_pairs(s.forest, s.world.positions(), config);
    if (options.check_invariants) check_state_invariants(s);

    std::vector<Frame> frames;
    while (!is_barrier_formed(s)) {
        if (s.iteration >= config.max_iterations) {
            throw NoConvergence("no barrier after " + std::to_string(s.iteration) + " iterations", describe(s));
        }
        if (options.frame_every > 0 && s.iteration % options.frame_every == 0) frames.push_back(capture_frame(s));
        formation_step(s);
        if (options.check_invariants) check_state_invariants(s);
        if (options.observer) options.observer(s);
    }
    s.phase = Phase::Done;
    if (options.frame_every > 0) frames.push_back(capture_frame(s));

    RunResult result = make_run_result(deployment, s.world.positions());
    result.iterations_used = s.iteration;
    result.barrier_formed = true;
    result.frames = std::move(frames);
    return result;
}

}  // namespace chainbar::barrier
