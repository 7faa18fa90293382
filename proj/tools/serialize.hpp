#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "ringbif/analytic.hpp"
#include "ringbif/continuation.hpp"
#include "ringbif/patterns.hpp"
#include "ringbif/steady_states.hpp"
#include "ringbif/sweep.hpp"

namespace ringbif::cli {

using nlohmann::json;

/// %.17g; round-trips every double.
[[nodiscard]] std::string format_double(double v);

/// RFC 4180 quoting when the field holds a comma, quote or newline.
[[nodiscard]] std::string csv_field(const std::string& s);

[[nodiscard]] json model_json(const ModelSpec& model);

[[nodiscard]] json states_json(const ModelSpec& model, const std::vector<SteadyState>& states);
[[nodiscard]] std::string states_csv(const ModelSpec& model, const std::vector<SteadyState>& states);

[[nodiscard]] json diagram_json(const Diagram& diagram);

[[nodiscard]] json phase_json(const PhaseDiagram& diagram);
[[nodiscard]] std::string phase_csv(const PhaseDiagram& diagram);

[[nodiscard]] json patterns_json(const PatternDistribution& dist);
[[nodiscard]] std::string patterns_csv(const PatternDistribution& dist);

[[nodiscard]] json prediction_json(int n, double p, const std::vector<double>& r_values);

/// Pretty-printed with a trailing newline.
[[nodiscard]] std::string dump(const json& j);

}  // namespace ringbif::cli
