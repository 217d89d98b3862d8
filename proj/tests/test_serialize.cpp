#include <cmath>
#include <string>

#include <nlohmann/json.hpp>

#include "construct.hpp"
#include "doctest.h"
#include "instance.hpp"
#include "oracles.hpp"
#include "serialize.hpp"
#include "solution.hpp"
#include "svg.hpp"
#include "tabu.hpp"

using namespace hqts;

namespace {

std::string data_path(const char* name) {
    return std::string(HQTS_DATA_DIR) + "/cmt/" + name;
}

Solution from_routes(const CvrpInstance& inst, std::vector<std::vector<int>> routes, int fleet) {
    Solution s = make_empty_solution(inst, fleet);
    for (size_t r = 0; r < routes.size(); ++r) s.routes[r].stops = std::move(routes[r]);
    refresh_caches(s, inst);
    return s;
}

size_t count_of(const std::string& text, const std::string& needle) {
    size_t n = 0;
    for (size_t at = text.find(needle); at != std::string::npos; at = text.find(needle, at + 1))
        ++n;
    return n;
}

// depot at origin, two single-stop routes of cost 10 each
struct JsonFixture {
    CvrpInstance inst = oracle::make_instance({{0, 0}, {3, 4}, {0, 5}}, {2, 3}, 10, 2);
    Solution sol = from_routes(inst, {{1}, {2}}, 2);
};

}  // namespace

TEST_SUITE("serialize") {

TEST_CASE("solution json carries the run summary verbatim") {
    JsonFixture f;
    const std::string text = solution_to_json(f.sol, f.inst, 42, 3.6);

    CHECK(text.back() == '\n');
    CHECK(text.find("\n  \"instance_name\"") != std::string::npos);   // two-space indent

    nlohmann::json j = nlohmann::json::parse(text);
    CHECK(j.at("instance_name").get<std::string>() == f.inst.name);
    CHECK(j.at("total_cost").get<double>() == doctest::Approx(20.0));
    CHECK(j.at("vehicles_used").get<int>() == 2);
    CHECK(j.at("feasible").get<bool>() == true);
    CHECK(j.at("seed").get<uint64_t>() == 42);
    CHECK(j.at("wallclock_seconds").get<int64_t>() == 4);   // whole seconds

    // stops are written with the ids from the source file
    const auto& routes = j.at("routes");
    REQUIRE(routes.size() == 2);
    CHECK(routes[0] == nlohmann::json::array({f.inst.file_ids[1]}));
    CHECK(routes[1] == nlohmann::json::array({f.inst.file_ids[2]}));
}

TEST_CASE("empty routes are dropped from the json") {
    JsonFixture f;
    Solution padded = from_routes(f.inst, {{1, 2}}, 2);   // second vehicle idle
    nlohmann::json j = nlohmann::json::parse(solution_to_json(padded, f.inst, 1, 0.0));
    CHECK(j.at("routes").size() == 1);
    CHECK(j.at("vehicles_used").get<int>() == 1);
}

TEST_CASE("identical runs serialize byte-identically") {
    JsonFixture f;
    CHECK(solution_to_json(f.sol, f.inst, 7, 12.4) == solution_to_json(f.sol, f.inst, 7, 12.4));
}

TEST_CASE("solution json round-trips through the loader") {
    JsonFixture f;
    const std::string text = solution_to_json(f.sol, f.inst, 99, 1.0);
    LoadedSolution back = solution_from_json(text, f.inst);
    CHECK(back.instance_name == f.inst.name);
    CHECK(back.seed == 99);
    CHECK(back.stated_feasible);
    CHECK(back.stated_cost == doctest::Approx(20.0));
    REQUIRE(back.solution.routes.size() >= 2);
    CHECK(back.solution.routes[0].stops == std::vector<int>{1});
    CHECK(back.solution.routes[1].stops == std::vector<int>{2});
    CHECK(back.solution.total_cost == doctest::Approx(f.sol.total_cost));
}

TEST_CASE("the loader rejects what it cannot trust") {
    JsonFixture f;
    const std::string good = solution_to_json(f.sol, f.inst, 1, 0.0);

    SUBCASE("syntactic garbage") {
        CHECK_THROWS_AS(solution_from_json("{nope", f.inst), ParseError);
        CHECK_THROWS_AS(solution_from_json("[1,2,3]", f.inst), ParseError);
    }
    SUBCASE("missing fields") {
        CHECK_THROWS_AS(solution_from_json("{}", f.inst), ParseError);
    }
    SUBCASE("a stop id the instance does not know") {
        nlohmann::json j = nlohmann::json::parse(good);
        j["routes"][0][0] = 77;
        CHECK_THROWS_AS(solution_from_json(j.dump(), f.inst), ValidationError);
    }
    SUBCASE("stated cost drifts beyond a cent") {
        nlohmann::json j = nlohmann::json::parse(good);
        j["total_cost"] = 20.5;
        CHECK_THROWS_AS(solution_from_json(j.dump(), f.inst), ValidationError);
        j["total_cost"] = 20.005;   // within tolerance
        CHECK_NOTHROW(solution_from_json(j.dump(), f.inst));
    }
}

TEST_CASE("trajectory csv is well formed and accepted by the checker") {
    SearchStats stats;
    stats.trajectory = {{0, 120.0, 120.0, true, true},
                        {1, 125.5, 120.0, false, false},
                        {2, 118.25, 118.25, true, false}};
    const std::string csv = stats_to_csv(stats);
    CHECK(csv == "iteration,current_cost,best_cost,feasible,phase\n"
                 "0,120.000000,120.000000,1,feasible\n"
                 "1,125.500000,120.000000,0,infeasible\n"
                 "2,118.250000,118.250000,1,infeasible\n");
    CHECK(oracle::check_stats_csv(csv).empty());
}

TEST_CASE("the csv checker flags regressions the writer cannot produce") {
    const std::string bad_best =
        "iteration,current_cost,best_cost,feasible,phase\n"
        "0,10.000000,10.000000,1,feasible\n"
        "1,12.000000,11.000000,1,feasible\n";   // best went up
    CHECK_FALSE(oracle::check_stats_csv(bad_best).empty());

    const std::string bad_header = "iter,cost\n0,1\n";
    CHECK_FALSE(oracle::check_stats_csv(bad_header).empty());

    const std::string bad_order =
        "iteration,current_cost,best_cost,feasible,phase\n"
        "0,10.000000,10.000000,1,feasible\n"
        "2,10.000000,10.000000,1,feasible\n";   // skipped an iteration
    CHECK_FALSE(oracle::check_stats_csv(bad_order).empty());
}

TEST_CASE("a real search produces a checker-clean csv") {
    CvrpInstance inst = oracle::random_instance(501, 12);
    SearchParams params;
    params.non_improve_stop = 150;
    params.oscillation = true;
    RouteSolver solver;
    SearchResult r = run_search(inst, params, solver);
    CHECK(oracle::check_stats_csv(stats_to_csv(r.stats)).empty());
}

TEST_CASE("svg wraps the instance with a five percent margin") {
    CvrpInstance inst = oracle::make_instance({{0, 0}, {10, 0}, {0, 20}}, {1, 1}, 10, 2);
    Solution s = from_routes(inst, {{1}, {2}}, 2);
    const std::string svg = render_routes_svg(s, inst);
    CHECK(svg.find("viewBox=\"0 0 11.00 22.00\"") != std::string::npos);
    CHECK(count_of(svg, "<polyline") == 2);
    CHECK(count_of(svg, "<circle") == 2);
    CHECK(count_of(svg, "<rect x=") == 1);   // depot marker, beyond the backdrop
    CHECK(render_routes_svg(s, inst) == svg); // deterministic
}

TEST_CASE("svg draws one loop per busy vehicle") {
    CvrpInstance inst = load_instance(data_path("CMT1.vrp"));
    NeighborLists nb = nearest_neighbors(inst, 5);
    Solution s = build_seeded_solution(inst, nb, inst.fleet_size);
    const std::string svg = render_routes_svg(s, inst);
    CHECK(count_of(svg, "<polyline") == static_cast<size_t>(s.vehicles_used()));
    CHECK(count_of(svg, "<circle") == static_cast<size_t>(inst.num_customers()));
}

TEST_CASE("an empty plan still shows the map") {
    CvrpInstance inst = oracle::make_instance({{0, 0}, {5, 5}}, {1}, 10, 1);
    Solution s = make_empty_solution(inst, 1);
    refresh_caches(s, inst);
    const std::string svg = render_routes_svg(s, inst);
    CHECK(count_of(svg, "<polyline") == 0);
    CHECK(count_of(svg, "<circle") == 1);
    CHECK(count_of(svg, "<rect x=") == 1);
}

TEST_CASE("drawing requires coordinates") {
    CvrpInstance inst = parse_instance(
        "NAME : m2\n"
        "TYPE : CVRP\n"
        "DIMENSION : 2\n"
        "EDGE_WEIGHT_TYPE : EXPLICIT\n"
        "EDGE_WEIGHT_FORMAT : FULL_MATRIX\n"
        "CAPACITY : 10\n"
        "EDGE_WEIGHT_SECTION\n"
        "0 7\n"
        "7 0\n"
        "DEMAND_SECTION\n"
        "1 0\n"
        "2 4\n"
        "DEPOT_SECTION\n"
        "1\n"
        "-1\n"
        "EOF\n");
    REQUIRE_FALSE(inst.has_coords());
    Solution s = from_routes(inst, {{1}}, 1);
    CHECK_THROWS_AS(render_routes_svg(s, inst), ValidationError);
}

}  // TEST_SUITE
