#include "gridforge/env.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "gridforge/errors.hpp"
#include "gridforge/rng.hpp"

namespace gridforge {

bool is_warehouse(Domain d) {
    return d == Domain::WarehouseEven || d == Domain::WarehouseUneven;
}

const char* domain_name(Domain d) {
    switch (d) {
        case Domain::WarehouseEven: return "warehouse-even";
        case Domain::WarehouseUneven: return "warehouse-uneven";
        case Domain::Manufacturing: return "manufacturing";
        case Domain::Maze: return "maze";
    }
    return "?";
}

Domain domain_from_name(const std::string& name) {
    if (name == "warehouse-even") return Domain::WarehouseEven;
    if (name == "warehouse-uneven") return Domain::WarehouseUneven;
    if (name == "manufacturing") return Domain::Manufacturing;
    if (name == "maze") return Domain::Maze;
    throw Error(ErrorCode::ConfigInvalid, "unknown domain '" + name + "'");
}

int tile_type_count(Domain d) {
    switch (d) {
        case Domain::WarehouseEven:
        case Domain::WarehouseUneven: return 4;
        case Domain::Manufacturing: return 5;
        case Domain::Maze: return 2;
    }
    return 0;
}

const std::vector<TileType>& generatable_tiles(Domain d) {
    static const std::vector<TileType> warehouse = {
        TileType::Empty, TileType::Shelf, TileType::Endpoint};
    static const std::vector<TileType> manufacturing = {
        TileType::Empty, TileType::Endpoint, TileType::StationR,
        TileType::StationG, TileType::StationY};
    static const std::vector<TileType> maze = {TileType::Empty,
                                               TileType::Wall};
    switch (d) {
        case Domain::WarehouseEven:
        case Domain::WarehouseUneven: return warehouse;
        case Domain::Manufacturing: return manufacturing;
        case Domain::Maze: return maze;
    }
    return maze;
}

char tile_to_char(Domain d, TileType t) {
    (void)d;
    switch (t) {
        case TileType::Empty: return '.';
        case TileType::Shelf: return '@';
        case TileType::Endpoint: return 'e';
        case TileType::Workstation: return 'w';
        case TileType::StationR: return 'r';
        case TileType::StationG: return 'g';
        case TileType::StationY: return 'y';
        case TileType::Wall: return '#';
    }
    return '?';
}

TileType tile_from_char(Domain d, char c) {
    switch (c) {
        case '.': return TileType::Empty;
        case '@': return TileType::Shelf;
        case 'e': return TileType::Endpoint;
        case 'w': return TileType::Workstation;
        case 'r': return TileType::StationR;
        case 'g': return TileType::StationG;
        case 'y': return TileType::StationY;
        case '#': return TileType::Wall;
    }
    throw Error(ErrorCode::Io, std::string("unknown tile character '") + c +
                                   "' in " + domain_name(d) + " environment");
}

Environment make_environment(Domain d, int width, int height, TileType fill) {
    if (width < 1 || height < 1)
        throw Error(ErrorCode::DimensionTooSmall,
                    "environment dimensions must be positive");
    Environment env;
    env.width = width;
    env.height = height;
    env.domain = d;
    env.tiles.assign(static_cast<size_t>(width) * height, fill);
    env.frozen.assign(static_cast<size_t>(width) * height, 0);
    return env;
}

Environment warehouse_template(Domain d, int width, int height) {
    if (!is_warehouse(d))
        throw Error(ErrorCode::WrongDomain, "warehouse template needs a warehouse domain");
    if (width < 2 * kWarehouseMargin + 1 || height < 3)
        throw Error(ErrorCode::DimensionTooSmall,
                    "warehouse grid too small for its fixed border");
    Environment env = make_environment(d, width, height);
    for (int y = 1; y < height - 1; y += 2) {
        env.at(0, y) = TileType::Workstation;
        env.at(width - 1, y) = TileType::Workstation;
    }
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            if (x < kWarehouseMargin || x >= width - kWarehouseMargin)
                env.frozen[env.index(x, y)] = 1;
    return env;
}

std::pair<int, int> storage_span(const Environment& env) {
    if (is_warehouse(env.domain))
        return {kWarehouseMargin, env.width - kWarehouseMargin};
    return {0, env.width};
}

int storage_cell_count(const Environment& env) {
    auto [lo, hi] = storage_span(env);
    return (hi - lo) * env.height;
}

bool is_traversable(Domain d, TileType t) {
    switch (d) {
        case Domain::WarehouseEven:
        case Domain::WarehouseUneven:
            return t != TileType::Shelf;
        case Domain::Manufacturing:
            return t == TileType::Empty || t == TileType::Endpoint;
        case Domain::Maze:
            return t != TileType::Wall;
    }
    return false;
}

bool is_station(TileType t) {
    return t == TileType::StationR || t == TileType::StationG ||
           t == TileType::StationY;
}

std::uint64_t env_hash(const Environment& env) {
    std::uint64_t h = fnv1a64(&env.domain, 1);
    std::uint32_t dims[2] = {static_cast<std::uint32_t>(env.width),
                             static_cast<std::uint32_t>(env.height)};
    h = fnv1a64(dims, sizeof dims, h);
    return fnv1a64(env.tiles.data(), env.tiles.size(), h);
}

std::string format_environment(const Environment& env) {
    std::string out = domain_name(env.domain);
    out += ' ';
    out += std::to_string(env.width);
    out += ' ';
    out += std::to_string(env.height);
    out += '\n';
    for (int y = 0; y < env.height; ++y) {
        for (int x = 0; x < env.width; ++x)
            out += tile_to_char(env.domain, env.at(x, y));
        out += '\n';
    }
    return out;
}

Environment parse_environment(std::istream& in) {
    std::string tag;
    int width = 0, height = 0;
    if (!(in >> tag >> width >> height))
        throw Error(ErrorCode::Io, "malformed environment header");
    Domain d = domain_from_name(tag);
    if (width < 1 || height < 1)
        throw Error(ErrorCode::Io, "non-positive environment dimensions");
    std::string line;
    std::getline(in, line);  // rest of header line
    Environment env = make_environment(d, width, height);
    for (int y = 0; y < height; ++y) {
        if (!std::getline(in, line))
            throw Error(ErrorCode::Io, "environment truncated at row " +
                                           std::to_string(y));
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (static_cast<int>(line.size()) != width)
            throw Error(ErrorCode::Io,
                        "row " + std::to_string(y) + " has " +
                            std::to_string(line.size()) + " tiles, expected " +
                            std::to_string(width));
        for (int x = 0; x < width; ++x)
            env.at(x, y) = tile_from_char(d, line[static_cast<size_t>(x)]);
    }
    if (is_warehouse(d)) {
        Environment tpl = warehouse_template(d, width, height);
        env.frozen = tpl.frozen;
    }
    return env;
}

Environment parse_environment_string(const std::string& text) {
    std::istringstream in(text);
    return parse_environment(in);
}

Environment load_environment(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
    return parse_environment(in);
}

void save_environment(const Environment& env, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
    out << format_environment(env);
    if (!out) throw Error(ErrorCode::Io, "write failed for " + path);
}

SimilarityWeights SimilarityWeights::for_input(const Environment& x_in) {
    SimilarityWeights w;
    w.weights.assign(x_in.tiles.size(), 1.0);
    if (x_in.domain == Domain::Manufacturing) {
        for (size_t i = 0; i < x_in.tiles.size(); ++i)
            if (is_station(x_in.tiles[i])) w.weights[i] = 5.0;
    }
    return w;
}

double SimilarityWeights::normalizer() const {
    double max_p = 0.0;
    for (double p : weights) max_p = std::max(max_p, p);
    return static_cast<double>(weights.size()) * max_p;
}

double environment_entropy(const Environment& env) {
    if (env.width < 2 || env.height < 2)
        throw Error(ErrorCode::DimensionTooSmall,
                    "entropy needs at least a 2x2 grid");
    // Pack each 2x2 window into one integer key.
    std::map<std::uint32_t, int> counts;
    int total = 0;
    for (int y = 0; y + 1 < env.height; ++y) {
        for (int x = 0; x + 1 < env.width; ++x) {
            std::uint32_t key = 0;
            key = key << 8 | static_cast<std::uint32_t>(env.at(x, y));
            key = key << 8 | static_cast<std::uint32_t>(env.at(x + 1, y));
            key = key << 8 | static_cast<std::uint32_t>(env.at(x, y + 1));
            key = key << 8 | static_cast<std::uint32_t>(env.at(x + 1, y + 1));
            ++counts[key];
            ++total;
        }
    }
    double h = 0.0;
    for (const auto& [key, c] : counts) {
        double p = static_cast<double>(c) / total;
        h -= p * std::log(p);
    }
    double norm = 4.0 * std::log(static_cast<double>(tile_type_count(env.domain)));
    return std::clamp(h / norm, 0.0, 1.0);
}

double similarity(const Environment& x_in, const Environment& x_out,
                  const SimilarityWeights& w) {
    if (x_in.width != x_out.width || x_in.height != x_out.height ||
        x_in.domain != x_out.domain)
        throw Error(ErrorCode::DimensionMismatch,
                    "similarity inputs must share dimensions and domain");
    if (w.weights.size() != x_in.tiles.size())
        throw Error(ErrorCode::DimensionMismatch,
                    "similarity weights size mismatch");
    double sum = 0.0;
    for (size_t i = 0; i < x_in.tiles.size(); ++i)
        if (x_in.tiles[i] == x_out.tiles[i]) sum += w.weights[i];
    return sum / w.normalizer();
}

double similarity(const Environment& x_in, const Environment& x_out) {
    return similarity(x_in, x_out, SimilarityWeights::for_input(x_in));
}

namespace {

constexpr int kDx[4] = {1, -1, 0, 0};
constexpr int kDy[4] = {0, 0, 1, -1};

// Flood fill from every tile accepted by pred; returns component count.
template <typename Pred>
int count_components(const Environment& env, Pred pred) {
    std::vector<std::uint8_t> seen(env.tiles.size(), 0);
    std::vector<int> stack;
    int components = 0;
    for (int start = 0; start < env.size(); ++start) {
        if (seen[start] || !pred(env.tiles[static_cast<size_t>(start)]))
            continue;
        ++components;
        seen[start] = 1;
        stack.assign(1, start);
        while (!stack.empty()) {
            int cur = stack.back();
            stack.pop_back();
            int cx = cur % env.width, cy = cur / env.width;
            for (int k = 0; k < 4; ++k) {
                int nx = cx + kDx[k], ny = cy + kDy[k];
                if (!env.in_bounds(nx, ny)) continue;
                int ni = env.index(nx, ny);
                if (seen[ni] || !pred(env.tiles[static_cast<size_t>(ni)]))
                    continue;
                seen[ni] = 1;
                stack.push_back(ni);
            }
        }
    }
    return components;
}

bool has_neighbor(const Environment& env, int x, int y,
                  bool (*accept)(TileType)) {
    for (int k = 0; k < 4; ++k) {
        int nx = x + kDx[k], ny = y + kDy[k];
        if (env.in_bounds(nx, ny) && accept(env.at(nx, ny))) return true;
    }
    return false;
}

void add_violation(ValidityReport& report, std::string constraint,
                   std::string detail, std::vector<Coord> tiles = {}) {
    report.is_valid = false;
    report.violations.push_back(
        {std::move(constraint), std::move(detail), std::move(tiles)});
}

// Non-frozen cells may only hold tiles the domain generates.
void check_tile_domain(const Environment& env, ValidityReport& report) {
    const auto& allowed = generatable_tiles(env.domain);
    std::vector<Coord> bad;
    for (int y = 0; y < env.height; ++y)
        for (int x = 0; x < env.width; ++x) {
            if (env.is_frozen(x, y)) continue;
            TileType t = env.at(x, y);
            if (std::find(allowed.begin(), allowed.end(), t) == allowed.end())
                bad.push_back({x, y});
        }
    if (!bad.empty())
        add_violation(report, "tile-domain",
                      std::to_string(bad.size()) +
                          " tiles outside the domain tile set",
                      std::move(bad));
}

void validate_warehouse(const Environment& env, std::optional<int> shelf_target,
                        ValidityReport& report) {
    int component_count =
        count_components(env, [&](TileType t) { return t != TileType::Shelf; });
    if (component_count != 1)
        add_violation(report, "connectivity",
                      std::to_string(component_count) +
                          " disconnected non-shelf regions");

    std::vector<Coord> bad;
    for (int y = 0; y < env.height; ++y)
        for (int x = 0; x < env.width; ++x) {
            TileType t = env.at(x, y);
            if (t == TileType::Shelf &&
                !has_neighbor(env, x, y,
                              [](TileType n) { return n == TileType::Endpoint; }))
                bad.push_back({x, y});
            else if (t == TileType::Endpoint &&
                     !has_neighbor(env, x, y,
                                   [](TileType n) { return n == TileType::Shelf; }))
                bad.push_back({x, y});
        }
    if (!bad.empty())
        add_violation(report, "shelf-endpoint-adjacency",
                      std::to_string(bad.size()) +
                          " shelves or endpoints without the required neighbor",
                      std::move(bad));

    if (shelf_target) {
        int shelves = 0;
        for (TileType t : env.tiles)
            if (t == TileType::Shelf) ++shelves;
        if (shelves != *shelf_target)
            add_violation(report, "shelf-count",
                          std::to_string(shelves) + " shelves, expected " +
                              std::to_string(*shelf_target));
    }

    Environment tpl = warehouse_template(env.domain, env.width, env.height);
    std::vector<Coord> changed;
    for (int y = 0; y < env.height; ++y)
        for (int x = 0; x < env.width; ++x)
            if (tpl.is_frozen(x, y) && env.at(x, y) != tpl.at(x, y))
                changed.push_back({x, y});
    if (!changed.empty())
        add_violation(report, "fixed-border",
                      std::to_string(changed.size()) +
                          " tiles differ from the fixed non-storage border",
                      std::move(changed));
}

void validate_manufacturing(const Environment& env, ValidityReport& report) {
    int component_count = count_components(env, [](TileType t) {
        return t == TileType::Empty || t == TileType::Endpoint;
    });
    if (component_count != 1)
        add_violation(report, "connectivity",
                      std::to_string(component_count) +
                          " disconnected open regions");

    std::vector<Coord> bad;
    for (int y = 0; y < env.height; ++y)
        for (int x = 0; x < env.width; ++x) {
            TileType t = env.at(x, y);
            if (t == TileType::Endpoint &&
                !has_neighbor(env, x, y, [](TileType n) { return is_station(n); }))
                bad.push_back({x, y});
            else if (is_station(t) &&
                     !has_neighbor(env, x, y, [](TileType n) {
                         return n == TileType::Endpoint;
                     }))
                bad.push_back({x, y});
        }
    if (!bad.empty())
        add_violation(report, "station-endpoint-adjacency",
                      std::to_string(bad.size()) +
                          " stations or endpoints without the required neighbor",
                      std::move(bad));

    int reds = 0, greens = 0, yellows = 0;
    for (TileType t : env.tiles) {
        if (t == TileType::StationR) ++reds;
        if (t == TileType::StationG) ++greens;
        if (t == TileType::StationY) ++yellows;
    }
    if (reds == 0 || greens == 0 || yellows == 0)
        add_violation(report, "station-presence",
                      "station counts r=" + std::to_string(reds) +
                          " g=" + std::to_string(greens) +
                          " y=" + std::to_string(yellows) +
                          ", need at least one of each");
}

}  // namespace

int connected_shelf_components(const Environment& env) {
    if (!is_warehouse(env.domain))
        throw Error(ErrorCode::WrongDomain,
                    "shelf components only defined for warehouse grids");
    return count_components(env,
                            [](TileType t) { return t == TileType::Shelf; });
}

int workstation_count(const Environment& env) {
    if (env.domain != Domain::Manufacturing)
        throw Error(ErrorCode::WrongDomain,
                    "workstation count only defined for manufacturing grids");
    int n = 0;
    for (TileType t : env.tiles)
        if (is_station(t)) ++n;
    return n;
}

ValidityReport validate(const Environment& env, std::optional<int> shelf_target) {
    ValidityReport report;
    switch (env.domain) {
        case Domain::WarehouseEven:
        case Domain::WarehouseUneven:
            check_tile_domain(env, report);
            validate_warehouse(env, shelf_target, report);
            break;
        case Domain::Manufacturing:
            check_tile_domain(env, report);
            validate_manufacturing(env, report);
            break;
        case Domain::Maze:
            break;  // unconstrained
    }
    return report;
}

}  // namespace gridforge
