#include "chainbar/io.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "chainbar/errors.hpp"

namespace chainbar::io {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

json parse(std::string_view text, const char* what) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ParameterError(std::string(what) + ": " + e.what());
    }
}

double number(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key) || !j.at(key).is_number()) {
        throw ParameterError(std::string("expected numeric field '") + key + "'");
    }
    return j.at(key).get<double>();
}

ordered_json point(Vec2 p) { return ordered_json{{"x", p.x}, {"y", p.y}}; }

ordered_json result_body(const Deployment& d, const RunResult& r) {
    ordered_json out;
    out["barrier_formed"] = r.barrier_formed;
    out["iterations"] = r.iterations_used;
    out["avg_displacement"] = r.avg_displacement;
    out["max_displacement"] = r.max_displacement;
    ordered_json sensors = ordered_json::array();
    for (std::size_t i = 0; i < d.sensors.size(); ++i) {
        ordered_json s;
        s["id"] = d.sensors[i].id;
        s["initial"] = point(d.sensors[i].initial_pos);
        s["final"] = point(r.final_positions.at(i));
        s["displacement"] = r.displacements.at(i);
        sensors.push_back(std::move(s));
    }
    out["sensors"] = std::move(sensors);
    return out;
}

}  // namespace

std::string deployment_to_json(const Deployment& deployment) {
    ordered_json j;
    j["belt"] = {{"L", deployment.belt.length}, {"W", deployment.belt.width}};
    j["rs"] = deployment.rs();
    ordered_json sensors = ordered_json::array();
    for (const auto& s : deployment.sensors) {
        ordered_json e;
        e["id"] = s.id;
        e["x"] = s.initial_pos.x;
        e["y"] = s.initial_pos.y;
        if (s.current_pos != s.initial_pos) e["current"] = point(s.current_pos);
        sensors.push_back(std::move(e));
    }
    j["sensors"] = std::move(sensors);
    return j.dump(2) + "\n";
}

Deployment deployment_from_json(std::string_view text) {
    const json j = parse(text, "deployment");
    if (!j.is_object()) throw ParameterError("deployment must be a JSON object");
    if (!j.contains("belt")) throw ParameterError("deployment is missing 'belt'");
    Deployment d;
    d.belt.length = number(j.at("belt"), "L");
    d.belt.width = number(j.at("belt"), "W");
    const double rs = number(j, "rs");
    if (!j.contains("sensors") || !j.at("sensors").is_array()) {
        throw ParameterError("deployment is missing the 'sensors' array");
    }
    for (const auto& e : j.at("sensors")) {
        if (!e.contains("id") || !e.at("id").is_number_unsigned()) {
            throw ParameterError("sensor id must be a non-negative integer");
        }
        const auto id = e.at("id").get<std::uint64_t>();
        if (id > std::numeric_limits<SensorId>::max()) throw ParameterError("sensor id out of range");
        SensorRecord s;
        s.id = static_cast<SensorId>(id);
        s.initial_pos = {number(e, "x"), number(e, "y")};
        s.current_pos = e.contains("current") ? Vec2{number(e.at("current"), "x"), number(e.at("current"), "y")}
                                              : s.initial_pos;
        s.sensing_radius = rs;
        d.sensors.push_back(s);
    }
    std::sort(d.sensors.begin(), d.sensors.end(),
              [](const SensorRecord& a, const SensorRecord& b) { return a.id < b.id; });
    d.validate();
    return d;
}

void save_deployment(const std::filesystem::path& path, const Deployment& deployment) {
    write_text(path, deployment_to_json(deployment));
}

Deployment load_deployment(const std::filesystem::path& path) { return deployment_from_json(read_text(path)); }

std::string run_result_to_json(const Deployment& deployment, const RunResult& result) {
    return result_body(deployment, result).dump(2) + "\n";
}

std::string linear_plan_to_json(const Deployment& deployment, const baseline::LinearPlan& plan,
                                const RunResult& result) {
    ordered_json p;
    p["objective"] = baseline::to_string(plan.objective);
    p["barrier_y"] = plan.barrier_y;
    p["slots"] = plan.slots;
    ordered_json assignment = ordered_json::array();
    for (std::size_t i = 0; i < plan.assignment.size(); ++i) {
        if (plan.assignment[i]) assignment.push_back({{"id", deployment.sensors[i].id}, {"slot", *plan.assignment[i]}});
    }
    p["assignment"] = std::move(assignment);
    p["total_cost"] = plan.cost.total;
    p["worst_cost"] = plan.cost.worst;
    ordered_json out;
    out["surrogate_baseline"] = true;
    out["plan"] = std::move(p);
    out.update(result_body(deployment, result));
    return out.dump(2) + "\n";
}

void apply_config_json(std::string_view text, AlgoConfig& config) {
    const json j = parse(text, "config");
    if (!j.is_object()) throw ParameterError("config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        auto real = [&](double& field) {
            if (!value.is_number()) throw ParameterError("config '" + key + "' must be a number");
            field = value.get<double>();
        };
        auto integer = [&](auto& field) {
            if (!value.is_number_unsigned()) throw ParameterError("config '" + key + "' must be a non-negative integer");
            field = value.get<std::remove_reference_t<decltype(field)>>();
        };
        if (key == "alpha") real(config.alpha);
        else if (key == "beta") real(config.beta);
        else if (key == "tau") real(config.tau);
        else if (key == "mobility") real(config.mobility);
        else if (key == "constraint_tol") real(config.constraint_tol);
        else if (key == "touch_tol") real(config.touch_tol);
        else if (key == "min_dist_clamp") real(config.min_dist_clamp);
        else if (key == "max_iterations") integer(config.max_iterations);
        else if (key == "projection_iters") integer(config.projection_iters);
        else if (key == "rng_seed") integer(config.rng_seed);
        else throw ParameterError("unknown config key '" + key + "'");
    }
}

std::string config_to_json(const AlgoConfig& c) {
    ordered_json j;
    j["alpha"] = c.alpha;
    j["beta"] = c.beta;
    j["tau"] = c.tau;
    j["mobility"] = c.mobility;
    j["constraint_tol"] = c.constraint_tol;
    j["touch_tol"] = c.touch_tol;
    j["max_iterations"] = c.max_iterations;
    j["projection_iters"] = c.projection_iters;
    j["min_dist_clamp"] = c.min_dist_clamp;
    j["rng_seed"] = c.rng_seed;
    return j.dump(2) + "\n";
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("failed reading '" + path.string() + "'");
    return ss.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace chainbar::io
