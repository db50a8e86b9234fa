#include "gridforge/render.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>

#include "gridforge/errors.hpp"

namespace gridforge {

namespace {

void check_scale(int scale) {
    if (scale < 1)
        throw Error(ErrorCode::ConfigInvalid, "pixel scale must be positive");
}

Image blank(int width, int height, Rgb fill) {
    Image img;
    img.width = width;
    img.height = height;
    img.pixels.resize(3 * static_cast<size_t>(width) * height);
    for (size_t i = 0; i < img.pixels.size(); i += 3) {
        img.pixels[i] = fill[0];
        img.pixels[i + 1] = fill[1];
        img.pixels[i + 2] = fill[2];
    }
    return img;
}

void fill_block(Image& img, int bx, int by, int scale, Rgb c) {
    for (int dy = 0; dy < scale; ++dy)
        for (int dx = 0; dx < scale; ++dx) {
            std::uint8_t* p = img.at(bx * scale + dx, by * scale + dy);
            p[0] = c[0];
            p[1] = c[1];
            p[2] = c[2];
        }
}

}  // namespace

Rgb tile_color(TileType t) {
    switch (t) {
        case TileType::Empty: return {255, 255, 255};
        case TileType::Shelf: return {0, 0, 0};
        case TileType::Endpoint: return {66, 135, 245};
        case TileType::Workstation: return {240, 130, 200};
        case TileType::StationR: return {220, 60, 50};
        case TileType::StationG: return {70, 180, 90};
        case TileType::StationY: return {240, 200, 60};
        case TileType::Wall: return {128, 128, 128};
    }
    return {255, 0, 255};
}

Rgb heat_color(double t) {
    static constexpr double kAnchors[5][3] = {{68, 1, 84},
                                              {59, 82, 139},
                                              {33, 145, 140},
                                              {94, 201, 98},
                                              {253, 231, 37}};
    t = std::clamp(t, 0.0, 1.0);
    double pos = t * 4.0;
    int lo = std::min(static_cast<int>(pos), 3);
    double frac = pos - lo;
    Rgb out;
    for (int k = 0; k < 3; ++k)
        out[static_cast<size_t>(k)] = static_cast<std::uint8_t>(std::lround(
            kAnchors[lo][k] + frac * (kAnchors[lo + 1][k] - kAnchors[lo][k])));
    return out;
}

Image render_environment(const Environment& env, int scale) {
    check_scale(scale);
    Image img = blank(env.width * scale, env.height * scale, {255, 255, 255});
    for (int y = 0; y < env.height; ++y)
        for (int x = 0; x < env.width; ++x)
            fill_block(img, x, y, scale, tile_color(env.at(x, y)));
    return img;
}

Image render_archive(const ResultArchive& archive, int scale) {
    check_scale(scale);
    if (archive.spec.dims.size() != 2)
        throw Error(ErrorCode::ConfigInvalid,
                    "heatmap rendering needs a 2-D archive");
    int w = archive.spec.dims[0], h = archive.spec.dims[1];
    Image img = blank(w * scale, h * scale, {255, 255, 255});
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& [cell, elite] : archive.cells) {
        lo = std::min(lo, elite.objective);
        hi = std::max(hi, elite.objective);
    }
    for (const auto& [cell, elite] : archive.cells) {
        double t = hi > lo ? (elite.objective - lo) / (hi - lo) : 1.0;
        fill_block(img, cell / h, cell % h, scale, heat_color(t));
    }
    return img;
}

Image render_tile_usage(const Environment& env,
                        const std::vector<std::int64_t>& usage, int scale) {
    check_scale(scale);
    if (static_cast<int>(usage.size()) != env.size())
        throw Error(ErrorCode::DimensionMismatch,
                    "usage grid does not match the environment");
    std::int64_t peak = 1;
    for (std::int64_t u : usage) peak = std::max(peak, u);
    Image img = blank(env.width * scale, env.height * scale, {255, 255, 255});
    for (int y = 0; y < env.height; ++y)
        for (int x = 0; x < env.width; ++x) {
            TileType t = env.at(x, y);
            Rgb c = is_traversable(env.domain, t)
                        ? heat_color(static_cast<double>(
                                         usage[static_cast<size_t>(
                                             env.index(x, y))]) /
                                     static_cast<double>(peak))
                        : tile_color(t);
            fill_block(img, x, y, scale, c);
        }
    return img;
}

void save_ppm(const Image& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot open " + path);
    out << "P6\n" << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.pixels.data()),
              static_cast<std::streamsize>(img.pixels.size()));
    if (!out) throw Error(ErrorCode::Io, "short write to " + path);
}

Image load_ppm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
    std::string magic;
    in >> magic;
    if (magic != "P6") throw Error(ErrorCode::Io, path + " is not binary PPM");
    auto next_int = [&]() {
        // PPM headers allow '#' comments between tokens
        for (;;) {
            int c = in.peek();
            if (c == '#') {
                std::string line;
                std::getline(in, line);
            } else if (std::isspace(c)) {
                in.get();
            } else {
                break;
            }
        }
        int v = -1;
        in >> v;
        if (!in || v < 0) throw Error(ErrorCode::Io, "bad PPM header in " + path);
        return v;
    };
    Image img;
    img.width = next_int();
    img.height = next_int();
    int maxval = next_int();
    if (maxval != 255)
        throw Error(ErrorCode::Io, path + " must use 8-bit channels");
    in.get();  // single whitespace byte before the raster
    img.pixels.resize(3 * static_cast<size_t>(img.width) * img.height);
    in.read(reinterpret_cast<char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
    if (in.gcount() != static_cast<std::streamsize>(img.pixels.size()))
        throw Error(ErrorCode::Io, "truncated PPM raster in " + path);
    return img;
}

}  // namespace gridforge
