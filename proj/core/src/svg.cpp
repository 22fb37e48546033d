#include "chainbar/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <system_error>

#include "chainbar/errors.hpp"
#include "chainbar/io.hpp"

namespace chainbar::svg {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

std::string render_frame(const Frame& frame, const Deployment& deployment) {
    const double rs = deployment.rs();
    const double L = deployment.belt.length;
    const double W = deployment.belt.width;
    auto sy = [W](double y) { return W - y; };

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" + num(-rs) + " " + num(-rs) + " " +
           num(L + 2 * rs) + " " + num(W + 2 * rs) + "\" data-iteration=\"" + std::to_string(frame.iteration) +
           "\">\n";
    out += "  <rect class=\"belt\" x=\"0\" y=\"0\" width=\"" + num(L) + "\" height=\"" + num(W) +
           "\" fill=\"none\" stroke=\"black\" stroke-width=\"" + num(rs / 25) + "\"/>\n";

    std::vector<char> role(frame.positions.size(), 'o');
    for (NodeId n : frame.flatten_nodes) role.at(n) = 'f';
    for (NodeId n : frame.dominant_nodes) role.at(n) = 'd';

    for (std::size_t i = 0; i < frame.positions.size(); ++i) {
        const Vec2 p = frame.positions[i];
        const char* fill = role[i] == 'd' ? kDominantFill : role[i] == 'f' ? kFlattenFill : kOtherFill;
        out += "  <circle data-id=\"" + std::to_string(deployment.sensors.at(i).id) + "\" cx=\"" + num(p.x) +
               "\" cy=\"" + num(sy(p.y)) + "\" r=\"" + num(rs) + "\" fill=\"" + fill +
               "\" fill-opacity=\"0.5\" stroke=\"black\" stroke-width=\"" + num(rs / 50) + "\"/>\n";
    }
    for (const auto& [a, b] : frame.edges) {
        const Vec2 p = frame.positions.at(a);
        const Vec2 q = frame.positions.at(b);
        out += "  <line x1=\"" + num(p.x) + "\" y1=\"" + num(sy(p.y)) + "\" x2=\"" + num(q.x) + "\" y2=\"" +
               num(sy(q.y)) + "\" stroke=\"black\" stroke-width=\"" + num(rs / 20) + "\"/>\n";
    }
    out += "</svg>\n";
    return out;
}

std::vector<std::filesystem::path> emit_svg_frames(const RunResult& result, const Deployment& deployment,
                                                   const std::filesystem::path& out_dir) {
    std::vector<std::filesystem::path> files;
    if (result.frames.empty()) return files;
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec || !std::filesystem::is_directory(out_dir)) {
        throw IoError("cannot create frame directory '" + out_dir.string() + "'");
    }
    for (std::size_t k = 0; k < result.frames.size(); ++k) {
        char name[32];
        std::snprintf(name, sizeof name, "frame_%05zu.svg", k);
        files.push_back(out_dir / name);
        io::write_text(files.back(), render_frame(result.frames[k], deployment));
    }
    return files;
}

}  // namespace chainbar::svg
