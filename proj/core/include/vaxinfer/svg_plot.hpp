#pragma once

#include <string>

#include "vaxinfer/exact.hpp"
#include "vaxinfer/trial_data.hpp"

namespace vaxinfer::svg {

/// Self-contained SVG of one posterior density curve with a solid
/// vertical marker at the mean and a dashed one at the mode.
std::string density_svg(const exact::EfficacyPosterior& post,
                        const model::MomentSummary& summary,
                        const std::string& title);

}  // namespace vaxinfer::svg
