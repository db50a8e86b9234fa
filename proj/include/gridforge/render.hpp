#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "gridforge/archive.hpp"
#include "gridforge/env.hpp"

namespace gridforge {

struct Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;  // RGB, row-major

    const std::uint8_t* at(int x, int y) const {
        return pixels.data() + 3 * (static_cast<size_t>(y) * width + x);
    }
    std::uint8_t* at(int x, int y) {
        return pixels.data() + 3 * (static_cast<size_t>(y) * width + x);
    }
};

using Rgb = std::array<std::uint8_t, 3>;

// Fixed palette: white empty, black shelves, blue endpoints, pink
// workstations, red/green/yellow stations, gray walls.
Rgb tile_color(TileType t);

// Sequential colormap over t in [0, 1] (viridis-style anchors); never
// produces the white background color.
Rgb heat_color(double t);

// One scale x scale pixel block per tile.
Image render_environment(const Environment& env, int scale = 1);

// 2-D archives only: one block per cell, objective mapped through
// heat_color using the occupied min/max; empty cells stay white.
Image render_archive(const ResultArchive& archive, int scale = 1);

// Traversable tiles ramp with usage / max usage; obstacles keep their
// tile color so the layout stays readable.
Image render_tile_usage(const Environment& env,
                        const std::vector<std::int64_t>& usage,
                        int scale = 1);

// Binary PPM (P6).
void save_ppm(const Image& img, const std::string& path);
Image load_ppm(const std::string& path);

}  // namespace gridforge
