#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace gridforge {

enum class TileType : std::uint8_t {
    Empty = 0,
    Shelf,
    Endpoint,
    Workstation,
    StationR,
    StationG,
    StationY,
    Wall,
};

enum class Domain : std::uint8_t {
    WarehouseEven = 0,
    WarehouseUneven,
    Manufacturing,
    Maze,
};

struct Coord {
    int x = 0;
    int y = 0;

    bool operator==(const Coord&) const = default;
    // Row-major order: y first, then x.
    bool operator<(const Coord& o) const {
        return y != o.y ? y < o.y : x < o.x;
    }
};

bool is_warehouse(Domain d);
const char* domain_name(Domain d);
Domain domain_from_name(const std::string& name);

// Number of tile types for entropy normalization: warehouse 4,
// manufacturing 5, maze 2.
int tile_type_count(Domain d);

// Tile types the NCA is allowed to emit, in channel order. Warehouse
// excludes Workstation (the non-storage border is fixed).
const std::vector<TileType>& generatable_tiles(Domain d);

char tile_to_char(Domain d, TileType t);
TileType tile_from_char(Domain d, char c);

// Rectangular tile grid plus a per-tile frozen mask marking cells that
// generation and repair must leave untouched (the warehouse non-storage
// border). Manufacturing and maze grids have an all-false mask.
struct Environment {
    int width = 0;
    int height = 0;
    Domain domain = Domain::Maze;
    std::vector<TileType> tiles;
    std::vector<std::uint8_t> frozen;

    int size() const { return width * height; }
    int index(int x, int y) const { return y * width + x; }
    bool in_bounds(int x, int y) const {
        return x >= 0 && x < width && y >= 0 && y < height;
    }
    TileType at(int x, int y) const { return tiles[index(x, y)]; }
    TileType& at(int x, int y) { return tiles[index(x, y)]; }
    bool is_frozen(int x, int y) const { return frozen[index(x, y)] != 0; }

    bool operator==(const Environment&) const = default;
};

Environment make_environment(Domain d, int width, int height,
                             TileType fill = TileType::Empty);

// Width of the fixed non-storage strip on each side of a warehouse grid.
inline constexpr int kWarehouseMargin = 2;

// Canonical warehouse frame: empty storage area, workstations on the
// outer border columns at odd rows, margin columns frozen.
Environment warehouse_template(Domain d, int width, int height);

// x-range [lo, hi) of the generatable storage area. Full grid for
// manufacturing and maze.
std::pair<int, int> storage_span(const Environment& env);
int storage_cell_count(const Environment& env);

bool is_traversable(Domain d, TileType t);
bool is_station(TileType t);

std::uint64_t env_hash(const Environment& env);

// --- Text format -----------------------------------------------------
//
// One header line "<domain> <width> <height>", then height rows of
// width characters: '.'=Empty '@'=Shelf 'e'=Endpoint 'w'=Workstation
// 'r'/'g'/'y'=stations '#'=Wall.

std::string format_environment(const Environment& env);
Environment parse_environment(std::istream& in);
Environment parse_environment_string(const std::string& text);
Environment load_environment(const std::string& path);
void save_environment(const Environment& env, const std::string& path);

// --- Analytic metrics -------------------------------------------------

// Per-tile weights for the similarity score, derived from the unrepaired
// environment: all 1 except manufacturing, where tiles holding a
// workstation get weight 5.
struct SimilarityWeights {
    std::vector<double> weights;

    static SimilarityWeights for_input(const Environment& x_in);
    double normalizer() const;  // P = n * max_i p_i
};

// Normalized Shannon entropy of the distribution of 2x2 tile windows,
// in [0, 1]. Windows slide with stride 1 and stay fully inside the grid.
double environment_entropy(const Environment& env);

// Weighted fraction of tiles unchanged between x_in and x_out.
double similarity(const Environment& x_in, const Environment& x_out,
                  const SimilarityWeights& w);
double similarity(const Environment& x_in, const Environment& x_out);

// 4-neighbor connected components over Shelf tiles. Warehouse only.
int connected_shelf_components(const Environment& env);

// Tiles in {StationR, StationG, StationY}. Manufacturing only.
int workstation_count(const Environment& env);

// --- Validity ----------------------------------------------------------

struct Violation {
    std::string constraint;
    std::string detail;
    std::vector<Coord> tiles;
};

struct ValidityReport {
    bool is_valid = true;
    std::vector<Violation> violations;
};

// Domain-specific constraint check. shelf_target enables the warehouse
// shelf-count constraint; when unset only the structural constraints are
// checked.
ValidityReport validate(const Environment& env,
                        std::optional<int> shelf_target = std::nullopt);

}  // namespace gridforge
