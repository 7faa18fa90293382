#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>

#include "oracles.hpp"
#include "ringbif/analytic.hpp"
#include "ringbif/steady_states.hpp"

using namespace ringbif;
using Catch::Approx;

namespace {

SearchConfig light(int starts = 2000) {
    SearchConfig c;
    c.random_starts = starts;
    return c;
}

std::size_t count_if(const std::vector<SteadyState>& states, Stability st, Synchrony sy) {
    return static_cast<std::size_t>(std::count_if(states.begin(), states.end(), [&](const SteadyState& s) {
        return s.stability == st && s.synchrony == sy;
    }));
}

}  // namespace

TEST_CASE("stability and synchrony classification", "[steady_states]") {
    Spectrum s;
    s.values = {{-1e-8, 0}, {-1, 0}};
    CHECK(classify_stability(s) == Stability::Marginal);
    s.values = {{-2e-7, 0}, {-1, 0}};
    CHECK(classify_stability(s) == Stability::Stable);
    s.values = {{2e-7, 0}, {-1, 0}};
    CHECK(classify_stability(s) == Stability::Unstable);

    const auto m = ModelSpec::normal_form(3, 0, 0);
    CHECK(classify_synchrony(m, Vector{1, 1 + 5e-9, 1}) == Synchrony::Synchronous);
    CHECK(classify_synchrony(m, Vector{1, 1 + 5e-8, 1}) == Synchrony::Nonsynchronous);
    const auto rep = ModelSpec::repressor(3, 1, 0);
    CHECK(classify_synchrony(rep, Vector{1, 1, 1, 2, 2, 2}) == Synchrony::Synchronous);
    CHECK(classify_synchrony(rep, Vector{1, 1, 1, 2, 2, 2.1}) == Synchrony::Nonsynchronous);
}

TEST_CASE("three-cell ring with positive coupling", "[steady_states]") {
    const auto at1 = find_all(ModelSpec::normal_form(3, 1.0, 0.5), light());
    CHECK(count_stable(at1) == 2);
    for (const auto& s : at1) {
        if (s.stability != Stability::Stable) continue;
        CHECK(s.synchrony == Synchrony::Synchronous);
        CHECK(std::abs(s.state[0]) == Approx(std::sqrt(1.5)).margin(1e-10));
    }
    CHECK(count_stable(ModelSpec::normal_form(3, 2.0, 0.5), light()) == 8);
    CHECK(count_stable(ModelSpec::normal_form(3, -1.0, 0.5), light()) == 1);
}

TEST_CASE("three-cell ring with negative coupling", "[steady_states]") {
    // six stable nonsynchronous states of form (a, b, a) between the zero
    // state's loss of stability and the synchronous branches' gain of it
    const auto at02 = find_all(ModelSpec::normal_form(3, 0.2, -0.5), light());
    CHECK(count_if(at02, Stability::Stable, Synchrony::Nonsynchronous) == 6);
    CHECK(count_stable(at02) == 6);
    for (const auto& s : at02) {
        if (s.stability != Stability::Stable) continue;
        const auto& x = s.state;
        const bool pair = std::abs(x[0] - x[1]) < 1e-8 || std::abs(x[1] - x[2]) < 1e-8 || std::abs(x[0] - x[2]) < 1e-8;
        CHECK(pair);
    }
    const auto at1 = find_all(ModelSpec::normal_form(3, 1.0, -0.5), light());
    CHECK(count_stable(at1) == 8);
    CHECK(count_if(at1, Stability::Stable, Synchrony::Synchronous) == 2);
}

TEST_CASE("four-cell ring with negative coupling", "[steady_states]") {
    const auto at02 = find_all(ModelSpec::normal_form(4, 0.2, -1.0), light());
    REQUIRE(count_stable(at02) == 2);
    for (const auto& s : at02) {
        if (s.stability != Stability::Stable) continue;
        const auto& x = s.state;
        CHECK(x[0] == Approx(-x[1]).margin(1e-9));
        CHECK(x[0] == Approx(x[2]).margin(1e-9));
        CHECK(x[1] == Approx(x[3]).margin(1e-9));
    }
    const auto at15 = find_all(ModelSpec::normal_form(4, 1.5, -1.0), light());
    CHECK(count_stable(at15) == 6);
    CHECK(count_if(at15, Stability::Stable, Synchrony::Synchronous) == 0);
    const auto at22 = find_all(ModelSpec::normal_form(4, 2.2, -1.0), light());
    CHECK(count_stable(at22) == 8);
    CHECK(count_if(at22, Stability::Stable, Synchrony::Synchronous) == 2);
}

TEST_CASE("uncoupled rings have 3^n states and 2^n stable ones", "[steady_states]") {
    for (int n : {3, 4}) {
        const auto states = find_all(ModelSpec::normal_form(n, 1.0, 0.0), light());
        CHECK(states.size() == static_cast<std::size_t>(std::pow(3, n)));
        CHECK(count_stable(states) == static_cast<int>(std::pow(2, n)));
    }
}

TEST_CASE("twelve nonsynchronous states just past the secondary branch point", "[steady_states]") {
    const auto states = find_all(ModelSpec::normal_form(3, 0.30, 0.5), light());
    CHECK(count_if(states, Stability::Unstable, Synchrony::Nonsynchronous) == 12);
    CHECK(count_if(states, Stability::Stable, Synchrony::Nonsynchronous) == 0);
}

TEST_CASE("no nonsynchronous states below the secondary threshold", "[steady_states]") {
    for (int n : {3, 4, 6}) {
        const double p = 0.5;
        const double r = -p * std::cos(2 * std::numbers::pi / n) - 0.05;
        for (const auto& s : find_all(ModelSpec::normal_form(n, r, p), light(1000)))
            CHECK(s.synchrony == Synchrony::Synchronous);
    }
}

TEST_CASE("found states are polished equilibria and classified consistently", "[steady_states]") {
    const auto m = ModelSpec::normal_form(4, 4.0, 1.0);
    const auto states = find_all(m, light());
    for (const auto& s : states) {
        CHECK(s.residual <= 1e-9);
        CHECK(max_abs(rhs(m, s.state)) == s.residual);
        CHECK(s.stability == classify_stability(eigenvalues(jacobian(m, s.state))));
        if (s.synchrony == Synchrony::Nonsynchronous) CHECK(nonsync_bound_check(s.state, m.r, m.p).satisfied);
    }
    CHECK(std::is_sorted(states.begin(), states.end(),
                         [](const SteadyState& a, const SteadyState& b) { return a.state < b.state; }));
}

TEST_CASE("orbit sizes divide the group order", "[steady_states]") {
    for (const auto& m : {ModelSpec::normal_form(4, 4.0, 1.0), ModelSpec::normal_form(3, 2.0, 0.5),
                          ModelSpec::repressor(3, 8.0, -0.5)}) {
        std::map<int, int> sizes;
        for (const auto& s : find_all(m, light())) ++sizes[s.orbit_id];
        for (const auto& [id, size] : sizes) CHECK((4 * m.n) % size == 0);
    }
}

TEST_CASE("symmetry closure of search output", "[steady_states]") {
    for (const auto& m : {ModelSpec::normal_form(3, 2.0, 0.5), ModelSpec::normal_form(4, 4.0, 1.0),
                          ModelSpec::repressor(3, 5.0, -0.5)}) {
        const auto states = find_all(m, light());
        const auto report = verify_symmetry_closure(m, states);
        CHECK(report.closed());
        CHECK(report.checked > 0);
    }
    const auto zero = describe_state(ModelSpec::normal_form(3, -1, 0.5), Vector{0, 0, 0});
    CHECK(verify_symmetry_closure(ModelSpec::normal_form(3, -1, 0.5), {zero}).closed());

    // dropping one orbit member breaks closure
    const auto m = ModelSpec::normal_form(3, 2.0, 0.5);
    auto states = find_all(m, light());
    states.erase(std::find_if(states.begin(), states.end(),
                              [](const SteadyState& s) { return s.synchrony == Synchrony::Nonsynchronous; }));
    CHECK_FALSE(verify_symmetry_closure(m, states).closed());
}

TEST_CASE("denser search finds the same states", "[steady_states]") {
    for (double r : {0.3, 1.0, 2.0}) {
        const auto m = ModelSpec::normal_form(3, r, 0.5);
        SearchConfig dense = light(4000);
        dense.grid_points_per_axis = 2 * light().resolved_grid(m);
        dense.rng_seed = 99;
        CHECK(find_all(m, light()).size() == find_all(m, dense).size());
    }
}

TEST_CASE("search output does not depend on thread count", "[steady_states]") {
    const auto m = ModelSpec::normal_form(5, 1.5, -0.4);
    SearchConfig one = light();
    one.rng_seed = 7;
    SearchConfig four = one;
    four.threads = 4;
    const auto a = find_all(m, one);
    const auto b = find_all(m, four);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].state == b[i].state);
        CHECK(a[i].orbit_id == b[i].orbit_id);
    }
}

TEST_CASE("repressor search stays near the positive box", "[steady_states]") {
    const auto m = ModelSpec::repressor(3, 1.0, 0.5);
    const auto box = search_box(m, light());
    for (double lo : box.lo) CHECK(lo == Approx(-1.0));
    for (double hi : box.hi) CHECK(hi == Approx(1.0 / 0.5 + 1.0));
}

TEST_CASE("state index finds nearby vectors", "[steady_states]") {
    StateIndex index(1e-6);
    index.insert(Vector{1.0, 2.0});
    index.insert(Vector{1.0 + 5e-7, 3.0});
    CHECK(index.find(Vector{1.0 + 1e-7, 2.0}) == std::optional<std::size_t>(0));
    CHECK(index.find(Vector{1.0 + 1e-7, 3.0 - 1e-7}) == std::optional<std::size_t>(1));
    CHECK_FALSE(index.find(Vector{1.0, 2.1}).has_value());
}
