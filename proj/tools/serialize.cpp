#include "serialize.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace ringbif::cli {

namespace {

json complex_pair(std::complex<double> v) { return json::array({v.real(), v.imag()}); }

json vector_json(std::span<const double> v) { return json(std::vector<double>(v.begin(), v.end())); }

std::vector<std::string> coordinate_names(const ModelSpec& model) {
    std::vector<std::string> names;
    for (int i = 1; i <= model.n; ++i) names.push_back("x" + std::to_string(i));
    if (model.kind == ModelKind::MutualRepressorRing)
        for (int i = 1; i <= model.n; ++i) names.push_back("y" + std::to_string(i));
    return names;
}

json special_json(const SpecialPoint& sp) {
    json j;
    j["type"] = to_string(sp.kind);
    j["r"] = sp.r;
    j["state"] = vector_json(sp.state);
    j["critical_eigenvalue"] = complex_pair(sp.critical);
    j["kernel_dimension"] = sp.kernel.size();
    j["null_direction"] = vector_json(sp.null_direction);
    j["test_value"] = sp.test_value;
    j["note"] = sp.diagnostic;
    return j;
}

void write(std::ostringstream& os, const json& j, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) {
                os << "{}";
                return;
            }
            os << "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) os << ",\n";
                first = false;
                os << inner << json(it.key()).dump() << ": ";
                write(os, it.value(), indent + 1);
            }
            os << "\n" << pad << "}";
            return;
        }
        case json::value_t::array: {
            if (j.empty()) {
                os << "[]";
                return;
            }
            // numeric arrays stay on one line
            const bool flat = std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_primitive(); });
            if (flat) {
                os << "[";
                for (std::size_t i = 0; i < j.size(); ++i) {
                    if (i) os << ", ";
                    write(os, j[i], indent + 1);
                }
                os << "]";
                return;
            }
            os << "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) os << ",\n";
                os << inner;
                write(os, j[i], indent + 1);
            }
            os << "\n" << pad << "]";
            return;
        }
        case json::value_t::number_float: {
            const double v = j.get<double>();
            if (std::isfinite(v)) {
                os << format_double(v);
            } else {
                os << "null";
            }
            return;
        }
        default:
            os << j.dump();
    }
}

}  // namespace

std::string format_double(double v) {
    if (v == 0.0) return "0";  // also folds -0
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string dump(const json& j) {
    std::ostringstream os;
    write(os, j, 0);
    os << "\n";
    return os.str();
}

json model_json(const ModelSpec& model) {
    return json{{"kind", to_string(model.kind)}, {"n", model.n}, {"r", model.r}, {"p", model.p}};
}

json states_json(const ModelSpec& model, const std::vector<SteadyState>& states) {
    json list = json::array();
    for (std::size_t i = 0; i < states.size(); ++i) {
        const auto& s = states[i];
        json eig = json::array();
        for (const auto& v : s.spectrum.values) eig.push_back(complex_pair(v));
        list.push_back({{"index", i},
                        {"state", vector_json(s.state)},
                        {"residual", s.residual},
                        {"eigenvalues", eig},
                        {"leading_real", s.spectrum.leading_real()},
                        {"stability", to_string(s.stability)},
                        {"synchrony", to_string(s.synchrony)},
                        {"orbit_id", s.orbit_id}});
    }
    return json{{"model", model_json(model)},
                {"coordinates", coordinate_names(model)},
                {"total", states.size()},
                {"stable", count_stable(states)},
                {"states", list}};
}

std::string states_csv(const ModelSpec& model, const std::vector<SteadyState>& states) {
    std::ostringstream os;
    os << "index,stability,synchrony,orbit_id,residual,leading_real";
    for (const auto& name : coordinate_names(model)) os << ',' << name;
    os << '\n';
    for (std::size_t i = 0; i < states.size(); ++i) {
        const auto& s = states[i];
        os << i << ',' << to_string(s.stability) << ',' << to_string(s.synchrony) << ',' << s.orbit_id << ','
           << format_double(s.residual) << ',' << format_double(s.spectrum.leading_real());
        for (double v : s.state) os << ',' << format_double(v);
        os << '\n';
    }
    return os.str();
}

json diagram_json(const Diagram& d) {
    const ModelSpec model = ModelSpec::make(d.kind, d.n, d.r_lo, d.p);
    json branches = json::array();
    for (std::size_t b = 0; b < d.branches.size(); ++b) {
        const auto& br = d.branches[b];
        json pts = json::array();
        for (const auto& e : br.points) {
            pts.push_back({{"r", e.r},
                           {"state", vector_json(e.state)},
                           {"stability", to_string(e.stability)},
                           {"leading_real", e.leading_real},
                           {"unstable_count", e.unstable_count}});
        }
        json sps = json::array();
        for (const auto& sp : br.special_points) sps.push_back(special_json(sp));
        branches.push_back({{"index", b},
                            {"origin", br.origin},
                            {"truncated", br.truncated},
                            {"diagnostic", br.diagnostic},
                            {"accepted_steps", br.accepted_steps},
                            {"rejected_steps", br.rejected_steps},
                            {"points", pts},
                            {"special_points", sps}});
    }
    json distinct = json::array();
    for (auto kind : {SpecialKind::BranchPoint, SpecialKind::LimitPoint, SpecialKind::Unclassified})
        for (const auto& sp : d.special_points(kind)) distinct.push_back(special_json(sp));

    return json{{"model", json{{"kind", to_string(d.kind)}, {"n", d.n}, {"p", d.p}}},
                {"coordinates", coordinate_names(model)},
                {"r_range", json::array({d.r_lo, d.r_hi})},
                {"truncated", d.truncated},
                {"special_points", distinct},
                {"branches", branches}};
}

json phase_json(const PhaseDiagram& d) {
    json boundaries = json::array();
    for (const auto& zb : d.zone_boundaries()) {
        json pts = json::array();
        for (const auto& [r, p] : zb.points) pts.push_back(json::array({r, p}));
        boundaries.push_back({{"from_count", zb.from_count}, {"to_count", zb.to_count}, {"points", pts}});
    }
    json flags = json::array();
    for (const auto& row : d.boundary) {
        json jr = json::array();
        for (bool f : row) jr.push_back(f);
        flags.push_back(jr);
    }
    json j{{"model", json{{"kind", to_string(d.kind)}, {"n", d.n}}},
           {"seed", d.rng_seed},
           {"r_axis", d.r_axis},
           {"p_axis", d.p_axis},
           {"counts", d.counts},
           {"boundary", flags},
           {"zone_boundaries", boundaries}};
    if (d.kind == ModelKind::NormalFormRing) {
        json cols = json::array();
        for (const auto& c : compare_zones(d).columns) {
            json col{{"p", c.p},
                     {"predicted_r", c.predicted_r},
                     {"observed_r", c.observed_r},
                     {"deviation", c.deviation},
                     {"within_one_cell", c.within_one_cell},
                     {"ok", c.ok()}};
            if (c.checks_two_zone) {
                col["secondary_r"] = c.secondary_r;
                col["two_zone_end_r"] = c.two_zone_end_r;
                col["two_zone_ok"] = c.two_zone_ok;
            }
            cols.push_back(col);
        }
        j["zone_comparison"] = cols;
    }
    return j;
}

std::string phase_csv(const PhaseDiagram& d) {
    std::ostringstream os;
    os << "r,p,stable_count,boundary_flag\n";
    for (std::size_t j = 0; j < d.p_axis.size(); ++j) {
        for (std::size_t i = 0; i < d.r_axis.size(); ++i) {
            os << format_double(d.r_axis[i]) << ',' << format_double(d.p_axis[j]) << ',' << d.counts[i][j] << ','
               << (d.boundary[i][j] ? 1 : 0) << '\n';
        }
    }
    return os.str();
}

json patterns_json(const PatternDistribution& dist) {
    json entries = json::array();
    for (const auto& e : dist.entries) {
        entries.push_back({{"signature", e.signature.text()},
                           {"symbols", e.signature.symbols},
                           {"homogeneous", e.signature.homogeneous()},
                           {"count", e.count},
                           {"percentage", e.percentage},
                           {"marginal", e.marginal},
                           {"representative", vector_json(e.signature.representative)}});
    }
    return json{{"model", model_json(dist.model)},
                {"total_samples", dist.total_samples},
                {"unconverged_count", dist.unconverged_count},
                {"flagged", dist.flagged()},
                {"seed", dist.rng_seed},
                {"ic_box", dist.ic_box},
                {"mirrored", dist.mirrored},
                {"homogeneous_percentage", dist.homogeneous_percentage()},
                {"entries", entries}};
}

std::string patterns_csv(const PatternDistribution& dist) {
    std::ostringstream os;
    os << "signature,count,percentage\n";
    for (const auto& e : dist.entries) {
        os << csv_field(e.signature.text()) << ',' << e.count << ',' << format_double(e.percentage) << '\n';
    }
    return os.str();
}

json prediction_json(int n, double p, const std::vector<double>& r_values) {
    const auto pred = predict_bifurcations(n, p);
    json sync = json::array();
    for (double r : r_values) {
        json states = json::array();
        for (const auto& s : synchronous_states(ModelKind::NormalFormRing, n, r, p)) {
            const Spectrum spec = circulant_spectrum(s.x, n, r, p);
            json eig = json::array();
            for (const auto& v : spec.values) eig.push_back(v.real());
            states.push_back({{"alpha", s.x}, {"eigenvalues", eig}, {"stability", to_string(classify_stability(spec))}});
        }
        sync.push_back({{"r", r}, {"states", states}});
    }
    return json{{"model", json{{"kind", "normal"}, {"n", n}, {"p", p}}},
                {"thresholds",
                 json{{"primary_branch_point_r", pred.primary_branch_point_r},
                      {"secondary_branch_point_r", pred.secondary_branch_point_r},
                      {"zero_state_destabilization_r", pred.zero_state_destabilization_r},
                      {"nonzero_branch_stabilization_r", pred.nonzero_branch_stabilization_r}}},
                {"synchronous_states", sync}};
}

}  // namespace ringbif::cli
