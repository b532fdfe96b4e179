#pragma once

/// \file
/// \brief Deterministic SVG scenes: frame, erased sectors as filled pie
/// slices, sample points as dots. No timestamps, no generated ids.

#include <string>

#include "conehull/eraser.hpp"
#include "conehull/shapes.hpp"

namespace conehull {

std::string render_svg(const ErasedRegion& region, const Sample& sample);

void write_svg(const ErasedRegion& region, const Sample& sample, const std::string& path);

}  // namespace conehull
