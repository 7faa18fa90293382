#pragma once

#include <string>

#include "ringbif/continuation.hpp"
#include "ringbif/sweep.hpp"

namespace ringbif::cli {

/// Branches in the (r, coordinate) plane: stable runs solid, unstable runs
/// dashed, BP/LP markers labelled. `coordinate` indexes the state vector.
[[nodiscard]] std::string diagram_svg(const Diagram& diagram, std::size_t coordinate, const std::string& label);

/// Heat map of stable-state counts over (r, p) with a label per count.
[[nodiscard]] std::string phase_svg(const PhaseDiagram& diagram);

}  // namespace ringbif::cli
