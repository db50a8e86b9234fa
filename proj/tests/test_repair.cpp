#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "doctest.h"
#include "gridforge/env.hpp"
#include "gridforge/errors.hpp"
#include "gridforge/nca.hpp"
#include "gridforge/repair.hpp"
#include "gridforge/rng.hpp"

using namespace gridforge;

namespace {

// Validity checked from scratch: own flood fill, own adjacency scan,
// nothing shared with the library's validate().

bool oracle_all_connected(const Environment& e, bool (*open)(TileType)) {
    int first = -1, open_count = 0;
    for (int i = 0; i < e.size(); ++i)
        if (open(e.tiles[static_cast<size_t>(i)])) {
            if (first < 0) first = i;
            ++open_count;
        }
    if (open_count == 0) return true;
    std::vector<std::uint8_t> seen(e.tiles.size(), 0);
    std::vector<int> frontier{first};
    seen[static_cast<size_t>(first)] = 1;
    int reached = 1;
    while (!frontier.empty()) {
        int cur = frontier.back();
        frontier.pop_back();
        int cx = cur % e.width, cy = cur / e.width;
        const int dx[4] = {1, -1, 0, 0}, dy[4] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
            int nx = cx + dx[k], ny = cy + dy[k];
            if (nx < 0 || ny < 0 || nx >= e.width || ny >= e.height) continue;
            int ni = ny * e.width + nx;
            if (seen[static_cast<size_t>(ni)] ||
                !open(e.tiles[static_cast<size_t>(ni)]))
                continue;
            seen[static_cast<size_t>(ni)] = 1;
            ++reached;
            frontier.push_back(ni);
        }
    }
    return reached == open_count;
}

bool oracle_has_neighbor(const Environment& e, int x, int y,
                         bool (*pred)(TileType)) {
    const int dx[4] = {1, -1, 0, 0}, dy[4] = {0, 0, 1, -1};
    for (int k = 0; k < 4; ++k) {
        int nx = x + dx[k], ny = y + dy[k];
        if (nx >= 0 && ny >= 0 && nx < e.width && ny < e.height &&
            pred(e.at(nx, ny)))
            return true;
    }
    return false;
}

bool warehouse_oracle(const Environment& e, std::optional<int> shelf_target) {
    Environment frame = warehouse_template(e.domain, e.width, e.height);
    int shelves = 0;
    for (int y = 0; y < e.height; ++y)
        for (int x = 0; x < e.width; ++x) {
            TileType t = e.at(x, y);
            if (e.is_frozen(x, y)) {
                if (t != frame.at(x, y)) return false;
                continue;
            }
            if (t != TileType::Empty && t != TileType::Shelf &&
                t != TileType::Endpoint)
                return false;
            if (t == TileType::Shelf) {
                ++shelves;
                if (!oracle_has_neighbor(e, x, y, [](TileType n) {
                        return n == TileType::Endpoint;
                    }))
                    return false;
            }
            if (t == TileType::Endpoint &&
                !oracle_has_neighbor(
                    e, x, y, [](TileType n) { return n == TileType::Shelf; }))
                return false;
        }
    if (shelf_target && shelves != *shelf_target) return false;
    return oracle_all_connected(e, [](TileType t) { return t != TileType::Shelf; });
}

bool manufacturing_oracle(const Environment& e) {
    int r = 0, g = 0, y_count = 0;
    for (int y = 0; y < e.height; ++y)
        for (int x = 0; x < e.width; ++x) {
            TileType t = e.at(x, y);
            switch (t) {
                case TileType::StationR: ++r; break;
                case TileType::StationG: ++g; break;
                case TileType::StationY: ++y_count; break;
                case TileType::Empty:
                case TileType::Endpoint: break;
                default: return false;
            }
            if (is_station(t) &&
                !oracle_has_neighbor(e, x, y, [](TileType n) {
                    return n == TileType::Endpoint;
                }))
                return false;
            if (t == TileType::Endpoint &&
                !oracle_has_neighbor(e, x, y,
                                     [](TileType n) { return is_station(n); }))
                return false;
        }
    if (r == 0 || g == 0 || y_count == 0) return false;
    return oracle_all_connected(e, [](TileType t) {
        return t == TileType::Empty || t == TileType::Endpoint;
    });
}

bool oracle_valid(const Environment& e, std::optional<int> shelf_target) {
    if (is_warehouse(e.domain)) return warehouse_oracle(e, shelf_target);
    if (e.domain == Domain::Manufacturing) return manufacturing_oracle(e);
    return true;
}

double oracle_weight(const Environment& x_in, int i) {
    return is_station(x_in.tiles[static_cast<size_t>(i)]) ? 5.0 : 1.0;
}

double oracle_distance(const Environment& x_in, const Environment& out) {
    double d = 0.0;
    for (int i = 0; i < x_in.size(); ++i)
        if (x_in.tiles[static_cast<size_t>(i)] != out.tiles[static_cast<size_t>(i)])
            d += oracle_weight(x_in, i);
    return d;
}

double oracle_similarity(const Environment& x_in, const Environment& out) {
    double matched = 0.0, max_p = 1.0;
    for (int i = 0; i < x_in.size(); ++i) {
        double p = oracle_weight(x_in, i);
        max_p = std::max(max_p, p);
        if (x_in.tiles[static_cast<size_t>(i)] == out.tiles[static_cast<size_t>(i)])
            matched += p;
    }
    return matched / (static_cast<double>(x_in.size()) * max_p);
}

// exhaustive minimum over every assignment of the mutable cells
std::optional<double> brute_force_min(const Environment& x_in,
                                      std::optional<int> shelf_target) {
    std::vector<int> cells;
    for (int i = 0; i < x_in.size(); ++i)
        if (!x_in.frozen[static_cast<size_t>(i)]) cells.push_back(i);
    const auto& palette = generatable_tiles(x_in.domain);
    int k = static_cast<int>(palette.size());
    int f = static_cast<int>(cells.size());

    Environment probe = x_in;
    std::vector<int> digit(static_cast<size_t>(f), 0);
    for (int c : cells) probe.tiles[static_cast<size_t>(c)] = palette[0];
    std::optional<double> best;
    while (true) {
        if (oracle_valid(probe, shelf_target)) {
            double d = oracle_distance(x_in, probe);
            if (!best || d < *best) best = d;
        }
        int pos = f - 1;
        while (pos >= 0) {
            int& dg = digit[static_cast<size_t>(pos)];
            if (++dg < k) {
                probe.tiles[static_cast<size_t>(cells[static_cast<size_t>(pos)])] =
                    palette[static_cast<size_t>(dg)];
                break;
            }
            dg = 0;
            probe.tiles[static_cast<size_t>(cells[static_cast<size_t>(pos)])] =
                palette[0];
            --pos;
        }
        if (pos < 0) break;
    }
    return best;
}

int diff_count(const Environment& a, const Environment& b) {
    int n = 0;
    for (size_t i = 0; i < a.tiles.size(); ++i)
        if (a.tiles[i] != b.tiles[i]) ++n;
    return n;
}

Environment random_warehouse_3x3(Rng& rng) {
    Environment env = warehouse_template(Domain::WarehouseEven, 7, 3);
    const TileType picks[3] = {TileType::Empty, TileType::Shelf,
                               TileType::Endpoint};
    auto [lo, hi] = storage_span(env);
    for (int y = 0; y < env.height; ++y)
        for (int x = lo; x < hi; ++x) env.at(x, y) = picks[rng.below(3)];
    return env;
}

}  // namespace

TEST_CASE("exact warehouse repair matches exhaustive search") {
    Rng rng(2024);
    RepairBudget budget;
    int feasible_seen = 0, infeasible_seen = 0;
    for (int trial = 0; trial < 40; ++trial) {
        Environment x_in = random_warehouse_3x3(rng);
        auto target = std::optional<int>(static_cast<int>(rng.below(8)));
        std::optional<double> best = brute_force_min(x_in, target);
        if (!best) {
            ++infeasible_seen;
            Rng repair_rng(99);
            CHECK_THROWS_AS(repair(x_in, budget, repair_rng, target), Error);
            continue;
        }
        ++feasible_seen;
        Rng repair_rng(99);
        RepairResult r = repair(x_in, budget, repair_rng, target);
        CHECK(oracle_valid(r.env, target));
        CHECK(oracle_distance(x_in, r.env) == doctest::Approx(*best));
        CHECK(r.similarity == doctest::Approx(oracle_similarity(x_in, r.env)));
        if (*best > 0.0) {
            CHECK(r.mode == RepairMode::Exact);
            CHECK(r.work_used == 19683);  // 3^9 candidate evaluations
        }

        Rng again(1234);
        RepairResult r2 = repair(x_in, budget, again, target);
        CHECK(r2.env == r.env);
    }
    CHECK(feasible_seen > 0);
    CHECK(infeasible_seen > 0);
}

TEST_CASE("exact manufacturing repair matches exhaustive search") {
    Rng rng(77);
    RepairBudget budget;
    const TileType palette[5] = {TileType::Empty, TileType::Endpoint,
                                 TileType::StationR, TileType::StationG,
                                 TileType::StationY};
    int feasible_seen = 0;
    for (int trial = 0; trial < 6; ++trial) {
        Environment x_in = make_environment(Domain::Manufacturing, 4, 2);
        for (auto& t : x_in.tiles) t = palette[rng.below(5)];
        std::optional<double> best = brute_force_min(x_in, std::nullopt);
        Rng repair_rng(5);
        if (!best) {
            CHECK_THROWS_AS(repair(x_in, budget, repair_rng), Error);
            continue;
        }
        ++feasible_seen;
        RepairResult r = repair(x_in, budget, repair_rng);
        CHECK(oracle_valid(r.env, std::nullopt));
        CHECK(oracle_distance(x_in, r.env) == doctest::Approx(*best));
        CHECK(r.similarity == doctest::Approx(oracle_similarity(x_in, r.env)));
        if (*best > 0.0) CHECK(r.mode == RepairMode::Exact);
    }
    CHECK(feasible_seen > 0);
}

TEST_CASE("exact repair breaks ties toward the lexicographically first fix") {
    Environment x_in = warehouse_template(Domain::WarehouseEven, 7, 3);
    RepairBudget budget;
    Rng rng(1);
    RepairResult r = repair(x_in, budget, rng, 1);
    CHECK(r.mode == RepairMode::Exact);
    CHECK(diff_count(x_in, r.env) == 2);
    // cells enumerate row-major with Empty < Shelf < Endpoint, so the
    // first minimal fix keeps every early cell empty
    CHECK(r.env.at(3, 2) == TileType::Shelf);
    CHECK(r.env.at(4, 2) == TileType::Endpoint);
}

TEST_CASE("surplus shelf is removed with a single flip") {
    Environment x_in = canonical_layout(Domain::WarehouseEven, 10, 5, 6);
    x_in.at(5, 4) = TileType::Shelf;
    REQUIRE_FALSE(oracle_valid(x_in, 6));

    RepairBudget budget;
    Rng rng(3);
    RepairResult r = repair(x_in, budget, rng, 6);
    CHECK(r.mode == RepairMode::Heuristic);
    CHECK(oracle_valid(r.env, 6));
    CHECK(diff_count(x_in, r.env) == 1);
    CHECK(r.env.at(5, 4) == TileType::Empty);
    CHECK(r.similarity == doctest::Approx(49.0 / 50.0));
}

TEST_CASE("sealed pocket is opened by the cheapest carve") {
    Environment x_in = warehouse_template(Domain::WarehouseEven, 10, 5);
    x_in.at(4, 1) = TileType::Shelf;
    x_in.at(3, 2) = TileType::Shelf;
    x_in.at(5, 2) = TileType::Shelf;
    x_in.at(4, 3) = TileType::Shelf;
    x_in.at(3, 1) = TileType::Endpoint;
    x_in.at(5, 1) = TileType::Endpoint;
    x_in.at(3, 3) = TileType::Endpoint;
    x_in.at(5, 3) = TileType::Endpoint;
    REQUIRE_FALSE(oracle_valid(x_in, std::nullopt));  // (4,2) is sealed off

    RepairBudget budget;
    Rng rng(3);
    RepairResult r = repair(x_in, budget, rng);
    CHECK(r.mode == RepairMode::Heuristic);
    CHECK(oracle_valid(r.env, std::nullopt));
    CHECK(diff_count(x_in, r.env) == 1);
    int flipped = -1;
    for (int i = 0; i < x_in.size(); ++i)
        if (x_in.tiles[static_cast<size_t>(i)] != r.env.tiles[static_cast<size_t>(i)])
            flipped = i;
    REQUIRE(flipped >= 0);
    CHECK(x_in.tiles[static_cast<size_t>(flipped)] == TileType::Shelf);
    CHECK(r.env.tiles[static_cast<size_t>(flipped)] == TileType::Empty);
    CHECK(r.similarity == doctest::Approx(49.0 / 50.0));
}

TEST_CASE("missing station type is added at the cheapest cell") {
    Environment x_in = parse_environment_string(
        "manufacturing 5 4\n"
        "r.r.g\n"
        "e.e.e\n"
        ".....\n"
        ".....\n");
    REQUIRE_FALSE(oracle_valid(x_in, std::nullopt));  // no StationY anywhere

    RepairBudget budget;
    Rng rng(11);
    RepairResult r = repair(x_in, budget, rng);
    CHECK(oracle_valid(r.env, std::nullopt));
    CHECK(diff_count(x_in, r.env) == 1);
    // stations carry weight 5, so the fix converts a weight-1 empty
    // cell instead of cannibalizing the surplus StationR
    CHECK(r.env.at(0, 0) == TileType::StationR);
    CHECK(r.env.at(2, 0) == TileType::StationR);
    CHECK(r.env.at(4, 0) == TileType::StationG);
    CHECK(r.similarity == doctest::Approx(31.0 / 100.0));
}

TEST_CASE("empty manufacturing floor gains a working station set") {
    Environment x_in = make_environment(Domain::Manufacturing, 8, 6);
    RepairBudget budget;
    Rng rng(8);
    RepairResult r = repair(x_in, budget, rng);
    CHECK(r.mode == RepairMode::Heuristic);
    CHECK(oracle_valid(r.env, std::nullopt));
    CHECK(r.similarity > 0.8);
}

TEST_CASE("repairing a repaired grid changes nothing") {
    Rng rng(42);
    Environment x_in = random_warehouse_3x3(rng);
    RepairBudget budget;
    Rng r1_rng(1);
    RepairResult r1 = [&] {
        for (;;) {
            try {
                return repair(x_in, budget, r1_rng, 2);
            } catch (const Error&) {
                x_in = random_warehouse_3x3(rng);
            }
        }
    }();
    Rng r2_rng(2);
    RepairResult r2 = repair(r1.env, budget, r2_rng, 2);
    CHECK(r2.env == r1.env);
    CHECK(r2.work_used == 0);
    CHECK(r2.mode == RepairMode::Exact);
    CHECK(r2.similarity == doctest::Approx(1.0));
}

TEST_CASE("a larger work budget never reduces similarity") {
    Rng rng(500);
    Environment x_in = warehouse_template(Domain::WarehouseEven, 16, 12);
    const TileType picks[3] = {TileType::Empty, TileType::Shelf,
                               TileType::Endpoint};
    auto [lo, hi] = storage_span(x_in);
    for (int y = 0; y < x_in.height; ++y)
        for (int x = lo; x < hi; ++x) x_in.at(x, y) = picks[rng.below(3)];

    std::vector<double> sims;
    for (long long limit : {3000LL, 10000LL, 30000LL, 100000LL, 1000000LL}) {
        RepairBudget budget;
        budget.work_limit = limit;
        Rng repair_rng(7);
        try {
            RepairResult r = repair(x_in, budget, repair_rng, 24);
            CHECK(oracle_valid(r.env, 24));
            CHECK(r.work_used <= limit);
            sims.push_back(r.similarity);
        } catch (const Error& err) {
            CHECK(err.code() == ErrorCode::BudgetExhausted);
            CHECK(sims.empty());  // failures only below the viable budget
        }
    }
    REQUIRE(sims.size() >= 2);
    for (size_t i = 1; i < sims.size(); ++i)
        CHECK(sims[i] >= sims[i - 1] - 1e-9);
}

TEST_CASE("budget knobs are validated") {
    Environment x_in = warehouse_template(Domain::WarehouseEven, 10, 5);
    Rng rng(1);
    RepairBudget bad;
    bad.work_limit = 0;
    CHECK_THROWS_AS(repair(x_in, bad, rng, 1), Error);
    bad = RepairBudget{};
    bad.wall_clock_seconds = 0.0;
    CHECK_THROWS_AS(repair(x_in, bad, rng, 1), Error);
    bad = RepairBudget{};
    bad.exact_threshold = -1;
    CHECK_THROWS_AS(repair(x_in, bad, rng, 1), Error);
}

TEST_CASE("impossible demands raise infeasible errors") {
    Rng rng(1);
    RepairBudget budget;

    // exhaustive proof on a small grid: 10 shelves cannot fit 9 cells
    Environment small = warehouse_template(Domain::WarehouseEven, 7, 3);
    try {
        repair(small, budget, rng, 10);
        FAIL("expected an error");
    } catch (const Error& err) {
        CHECK(err.code() == ErrorCode::InfeasibleConstraints);
    }

    // capacity bound on a grid too large to enumerate
    Environment big = warehouse_template(Domain::WarehouseEven, 16, 12);
    big.at(4, 4) = TileType::Shelf;  // invalidate so repair must run
    try {
        repair(big, budget, rng, 10000);
        FAIL("expected an error");
    } catch (const Error& err) {
        CHECK(err.code() == ErrorCode::InfeasibleConstraints);
    }

    // frozen cells are off limits, so a corrupted border is unfixable
    Environment frozen_bad = warehouse_template(Domain::WarehouseEven, 16, 12);
    frozen_bad.at(0, 0) = TileType::Shelf;
    try {
        repair(frozen_bad, budget, rng, 4);
        FAIL("expected an error");
    } catch (const Error& err) {
        CHECK(err.code() == ErrorCode::InfeasibleConstraints);
    }
}

TEST_CASE("exhausted work budget is reported, not silently truncated") {
    Rng rng(9);
    Environment x_in = random_warehouse_3x3(rng);
    while (oracle_valid(x_in, 2)) x_in = random_warehouse_3x3(rng);
    RepairBudget budget;
    budget.work_limit = 3;
    try {
        repair(x_in, budget, rng, 2);
        FAIL("expected an error");
    } catch (const Error& err) {
        CHECK(err.code() == ErrorCode::BudgetExhausted);
    }
}

TEST_CASE("wall clock cap aborts instead of returning partial work") {
    Rng rng(9);
    Environment x_in = random_warehouse_3x3(rng);
    while (oracle_valid(x_in, 2)) x_in = random_warehouse_3x3(rng);
    RepairBudget budget;
    budget.wall_clock_seconds = 1e-9;
    try {
        repair(x_in, budget, rng, 2);
        FAIL("expected an error");
    } catch (const Error& err) {
        CHECK(err.code() == ErrorCode::BudgetExhausted);
    }
}

TEST_CASE("random generator outputs always repair to valid grids") {
    Rng rng(31337);
    RepairBudget budget;
    Environment seed = make_seed(Domain::WarehouseEven, 16, 12);
    NcaArchitecture arch = architecture_for(Domain::WarehouseEven, 8);
    int n = param_count(arch);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<float> theta(static_cast<size_t>(n));
        for (auto& v : theta)
            v = static_cast<float>(rng.normal(0.0, 0.2));
        NcaGenerator gen(Domain::WarehouseEven, arch, std::move(theta));
        Environment raw = generate(gen, seed, 30);
        Rng repair_rng(rng.next_u64());
        RepairResult r = repair(raw, budget, repair_rng, 24);
        CHECK(oracle_valid(r.env, 24));
        CHECK(r.similarity >= 0.0);
        CHECK(r.similarity <= 1.0);
        CHECK(r.work_used <= budget.work_limit);
    }
}

TEST_CASE("canonical layouts are valid for every domain") {
    CHECK(oracle_valid(canonical_layout(Domain::WarehouseEven, 10, 5, 0), 0));
    CHECK(oracle_valid(canonical_layout(Domain::WarehouseEven, 10, 5, 10), 10));
    CHECK(oracle_valid(canonical_layout(Domain::WarehouseUneven, 16, 12, 24), 24));
    CHECK(oracle_valid(canonical_layout(Domain::WarehouseEven, 36, 33, 240), 240));
    CHECK(oracle_valid(canonical_layout(Domain::Manufacturing, 5, 4, std::nullopt),
                       std::nullopt));
    CHECK(oracle_valid(canonical_layout(Domain::Manufacturing, 3, 2, std::nullopt),
                       std::nullopt));
    CHECK(oracle_valid(canonical_layout(Domain::Maze, 18, 18, std::nullopt),
                       std::nullopt));
    CHECK_THROWS_AS(canonical_layout(Domain::WarehouseEven, 10, 5, 11), Error);
    CHECK_THROWS_AS(canonical_layout(Domain::Manufacturing, 2, 2, std::nullopt),
                    Error);
}

TEST_CASE("maze grids pass through untouched") {
    Rng rng(4);
    Environment x_in = make_environment(Domain::Maze, 18, 18);
    for (auto& t : x_in.tiles)
        t = rng.below(2) ? TileType::Wall : TileType::Empty;
    RepairBudget budget;
    RepairResult r = repair(x_in, budget, rng);
    CHECK(r.env == x_in);
    CHECK(r.mode == RepairMode::Exact);
    CHECK(r.work_used == 0);
    CHECK(r.similarity == doctest::Approx(1.0));
}

TEST_CASE("direct heuristic entry points enforce their domain") {
    RepairBudget budget;
    Rng rng(2);
    Environment maze = make_environment(Domain::Maze, 5, 5);
    CHECK_THROWS_AS(heuristic_repair_warehouse(maze, 1, budget, rng), Error);
    CHECK_THROWS_AS(heuristic_repair_manufacturing(maze, budget, rng), Error);

    Environment wh = warehouse_template(Domain::WarehouseEven, 16, 12);
    wh.at(5, 5) = TileType::Shelf;
    Environment fixed = heuristic_repair_warehouse(wh, 24, budget, rng);
    CHECK(oracle_valid(fixed, 24));

    Environment mfg = make_environment(Domain::Manufacturing, 6, 5);
    Environment fixed_mfg = heuristic_repair_manufacturing(mfg, budget, rng);
    CHECK(oracle_valid(fixed_mfg, std::nullopt));
}
