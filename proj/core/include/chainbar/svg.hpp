#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "chainbar/model.hpp"

namespace chainbar::svg {

/// Fill colors by role.
inline constexpr const char* kDominantFill = "green";
inline constexpr const char* kFlattenFill = "blue";
inline constexpr const char* kOtherFill = "yellow";

/// One frame as an SVG document. The viewBox is the belt grown by Rs on every
/// side; belt y grows upward in the picture. Each sensor is a circle of radius
/// Rs carrying data-id; tree edges are lines.
std::string render_frame(const Frame& frame, const Deployment& deployment);

/// Writes frame_NNNNN.svg per recorded frame into out_dir (created if
/// missing) and returns the paths in frame order. Throws IoError when the
/// directory cannot be written.
std::vector<std::filesystem::path> emit_svg_frames(const RunResult& result, const Deployment& deployment,
                                                   const std::filesystem::path& out_dir);

}  // namespace chainbar::svg
