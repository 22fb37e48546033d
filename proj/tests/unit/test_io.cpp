#include <doctest.h>

#include <filesystem>
#include <regex>

#include <unistd.h>

#include <json.hpp>

#include "chainbar/barrier.hpp"
#include "chainbar/errors.hpp"
#include "chainbar/io.hpp"
#include "chainbar/svg.hpp"

using namespace chainbar;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("chainbar_test_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

struct Circle {
    double cx, cy, r;
    std::string fill;
};

std::vector<Circle> circles(const std::string& svg) {
    static const std::regex re(R"re(<circle data-id="\d+" cx="([^"]+)" cy="([^"]+)" r="([^"]+)" fill="([a-z]+)")re");
    std::vector<Circle> out;
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), re); it != std::sregex_iterator(); ++it) {
        out.push_back({std::stod((*it)[1]), std::stod((*it)[2]), std::stod((*it)[3]), (*it)[4]});
    }
    return out;
}

}  // namespace

TEST_CASE("deployment round trip is lossless") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto d = uniform_random_deployment(seed, 40, {50.0, 8.0}, 0.5);
        CHECK(io::deployment_from_json(io::deployment_to_json(d)) == d);
    }
    auto moved = uniform_random_deployment(4, 5, {10.0, 2.0}, 0.25);
    moved.sensors[2].current_pos = {1.0 / 3.0, 0.1};
    CHECK(io::deployment_from_json(io::deployment_to_json(moved)) == moved);
}

TEST_CASE("deployment file round trip") {
    const auto dir = scratch_dir("io");
    const auto d = uniform_random_deployment(9, 12, {20.0, 4.0}, 0.5);
    io::save_deployment(dir / "d.json", d);
    CHECK(io::load_deployment(dir / "d.json") == d);
    CHECK_THROWS_AS(io::load_deployment(dir / "missing.json"), IoError);
    fs::remove_all(dir);
}

TEST_CASE("deployment parsing: sparse ids, any order") {
    const auto d = io::deployment_from_json(R"({"belt":{"L":10,"W":2},"rs":0.5,
        "sensors":[{"id":42,"x":3,"y":1},{"id":7,"x":1,"y":0.5}]})");
    REQUIRE(d.size() == 2);
    CHECK(d.sensors[0].id == 7);
    CHECK(d.sensors[1].id == 42);
    CHECK(d.sensors[1].initial_pos == Vec2{3, 1});
    CHECK(d.rs() == 0.5);
}

TEST_CASE("deployment parsing errors") {
    const char* bad[] = {
        "not json",
        R"([1,2])",
        R"({"rs":0.5,"sensors":[]})",
        R"({"belt":{"L":10,"W":2},"rs":0.5,"sensors":[]})",
        R"({"belt":{"L":10,"W":2},"rs":0.5,"sensors":[{"id":1,"x":11,"y":1}]})",
        R"({"belt":{"L":10,"W":2},"rs":0.5,"sensors":[{"id":1,"x":1,"y":1},{"id":1,"x":2,"y":1}]})",
        R"({"belt":{"L":10,"W":2},"rs":0.5,"sensors":[{"id":-1,"x":1,"y":1}]})",
        R"({"belt":{"L":10,"W":2},"rs":"big","sensors":[{"id":1,"x":1,"y":1}]})",
        R"({"belt":{"L":10,"W":2},"rs":0,"sensors":[{"id":1,"x":1,"y":1}]})",
    };
    for (const char* text : bad) {
        CAPTURE(text);
        CHECK_THROWS_AS(io::deployment_from_json(text), ParameterError);
    }
}

TEST_CASE("config json") {
    auto c = AlgoConfig::defaults_for(0.5);
    io::apply_config_json(R"({"alpha":2.5,"max_iterations":1000,"rng_seed":77})", c);
    CHECK(c.alpha == 2.5);
    CHECK(c.max_iterations == 1000);
    CHECK(c.rng_seed == 77);
    CHECK_THROWS_AS(io::apply_config_json(R"({"gamma":1})", c), ParameterError);
    CHECK_THROWS_AS(io::apply_config_json(R"({"max_iterations":-3})", c), ParameterError);
    AlgoConfig back;
    io::apply_config_json(io::config_to_json(c), back);
    CHECK(back.alpha == c.alpha);
    CHECK(back.touch_tol == c.touch_tol);
    CHECK(back.rng_seed == c.rng_seed);
}

TEST_CASE("run result json carries every sensor") {
    const auto d = uniform_random_deployment(5, 22, {20.0, 4.0}, 0.5);
    auto cfg = AlgoConfig::defaults_for(0.5);
    const auto r = barrier::run(d, cfg);
    const auto j = nlohmann::json::parse(io::run_result_to_json(d, r));
    CHECK(j["barrier_formed"] == true);
    CHECK(j["iterations"] == r.iterations_used);
    REQUIRE(j["sensors"].size() == 22);
    CHECK(j["sensors"][3]["final"]["x"].get<double>() == r.final_positions[3].x);
    CHECK(j["avg_displacement"].get<double>() == r.avg_displacement);
}

TEST_CASE("svg: zero frames give no files") {
    const auto d = uniform_random_deployment(5, 3, {20.0, 4.0}, 0.5);
    RunResult r;
    CHECK(svg::emit_svg_frames(r, d, fs::temp_directory_path() / "chainbar_never_created").empty());
    CHECK_FALSE(fs::exists(fs::temp_directory_path() / "chainbar_never_created"));
}

TEST_CASE("svg: final frame of a covered run spans the belt") {
    const BeltRegion belt{20.0, 4.0};
    const auto d = uniform_random_deployment(6, 24, belt, 0.5);
    barrier::RunOptions opts;
    opts.frame_every = 200;
    const auto r = barrier::run(d, AlgoConfig::defaults_for(0.5), opts);
    const auto dir = scratch_dir("svg");
    const auto files = svg::emit_svg_frames(r, d, dir);
    REQUIRE(files.size() == r.frames.size());
    CHECK(files.size() == (r.iterations_used + 199) / 200 + 1);
    CHECK(files.front().filename() == "frame_00000.svg");

    const std::string text = io::read_text(files.back());
    CHECK(text.find("viewBox=\"-0.5 -0.5 21 5\"") != std::string::npos);
    const auto cs = circles(text);
    REQUIRE(cs.size() == 24);
    double lo = 1e9, hi = -1e9;
    for (const auto& c : cs) {
        CHECK(c.r == 0.5);
        lo = std::min(lo, c.cx - c.r);
        hi = std::max(hi, c.cx + c.r);
        CHECK((c.fill == "green" || c.fill == "blue" || c.fill == "yellow"));
    }
    CHECK(lo <= 1e-5);
    CHECK(hi >= belt.length - 1e-5);
    std::size_t lines = 0;
    for (std::size_t at = text.find("<line "); at != std::string::npos; at = text.find("<line ", at + 1)) ++lines;
    CHECK(lines == 23);

    // The first frame marks dominant points in green.
    const auto first = circles(io::read_text(files.front()));
    CHECK(std::any_of(first.begin(), first.end(), [](const Circle& c) { return c.fill == "green"; }));
    fs::remove_all(dir);
}

TEST_CASE("svg: frame colors follow roles") {
    const auto d = make_deployment({4.0, 2.0}, 0.5, std::vector<Vec2>{{0.5, 1}, {1.5, 1}, {3.0, 1}});
    Frame f;
    f.positions = d.initial_positions();
    f.edges = {{0, 1}};
    f.dominant_nodes = {1};
    f.flatten_nodes = {0, 1};
    const auto cs = circles(svg::render_frame(f, d));
    REQUIRE(cs.size() == 3);
    CHECK(cs[0].fill == "blue");
    CHECK(cs[1].fill == "green");
    CHECK(cs[2].fill == "yellow");
    CHECK(cs[0].cy == doctest::Approx(1.0));  // y grows upward: W - y
}

TEST_CASE("svg: unwritable directory") {
    const auto dir = scratch_dir("svg_blocked");
    io::write_text(dir / "file", "x");
    RunResult r;
    r.frames.push_back({});
    CHECK_THROWS_AS(svg::emit_svg_frames(r, uniform_random_deployment(1, 1, {4.0, 2.0}, 0.5), dir / "file" / "sub"),
                    IoError);
    fs::remove_all(dir);
}
