#include "gridforge/nca.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "gridforge/errors.hpp"
#include "json.hpp"

namespace gridforge {

int param_count(const NcaArchitecture& arch) {
    if (arch.in_channels < 1 || arch.hidden_channels < 1)
        throw Error(ErrorCode::ConfigInvalid, "channel counts must be positive");
    int c_in = arch.in_channels, c_h = arch.hidden_channels;
    return (c_in * c_h * 9 + c_h) + (c_h * c_h * 9 + c_h) + (c_h * c_in * 9 + c_in);
}

NcaArchitecture architecture_for(Domain d, int hidden_channels) {
    NcaArchitecture arch;
    arch.in_channels = static_cast<int>(generatable_tiles(d).size());
    arch.hidden_channels = hidden_channels;
    return arch;
}

NcaGenerator::NcaGenerator(Domain d, NcaArchitecture a, std::vector<float> th)
    : domain(d), arch(a), theta(std::move(th)) {
    if (static_cast<int>(theta.size()) != param_count(arch))
        throw Error(ErrorCode::ConfigInvalid,
                    "theta holds " + std::to_string(theta.size()) +
                        " parameters, architecture needs " +
                        std::to_string(param_count(arch)));
}

namespace {

// Channel index of a tile under the domain's encoding; warehouse
// Workstation folds into Empty.
int channel_of(Domain d, TileType t) {
    if (is_warehouse(d) && t == TileType::Workstation) t = TileType::Empty;
    const auto& tiles = generatable_tiles(d);
    for (size_t c = 0; c < tiles.size(); ++c)
        if (tiles[c] == t) return static_cast<int>(c);
    throw Error(ErrorCode::ChannelMismatch,
                std::string("tile not encodable in ") + domain_name(d));
}

Eigen::MatrixXf pad_plane(const Eigen::MatrixXf& plane, PaddingMode mode) {
    const int h = static_cast<int>(plane.rows());
    const int w = static_cast<int>(plane.cols());
    Eigen::MatrixXf padded = Eigen::MatrixXf::Zero(h + 2, w + 2);
    padded.block(1, 1, h, w) = plane;
    if (mode == PaddingMode::Toroidal) {
        padded.block(0, 1, 1, w) = plane.row(h - 1);
        padded.block(h + 1, 1, 1, w) = plane.row(0);
        padded.block(1, 0, h, 1) = plane.col(w - 1);
        padded.block(1, w + 1, h, 1) = plane.col(0);
        padded(0, 0) = plane(h - 1, w - 1);
        padded(0, w + 1) = plane(h - 1, 0);
        padded(h + 1, 0) = plane(0, w - 1);
        padded(h + 1, w + 1) = plane(0, 0);
    }
    return padded;
}

// One 3x3 conv layer. Weights ordered [out][in][ky][kx], then biases.
std::vector<Eigen::MatrixXf> conv3x3(const std::vector<Eigen::MatrixXf>& in,
                                     const float* weights, const float* biases,
                                     int out_channels, PaddingMode mode) {
    const int in_channels = static_cast<int>(in.size());
    const int h = static_cast<int>(in[0].rows());
    const int w = static_cast<int>(in[0].cols());
    std::vector<Eigen::MatrixXf> padded;
    padded.reserve(in.size());
    for (const auto& plane : in) padded.push_back(pad_plane(plane, mode));

    std::vector<Eigen::MatrixXf> out(static_cast<size_t>(out_channels));
    for (int o = 0; o < out_channels; ++o) {
        Eigen::MatrixXf acc = Eigen::MatrixXf::Constant(h, w, biases[o]);
        const float* wo = weights + static_cast<size_t>(o) * in_channels * 9;
        for (int i = 0; i < in_channels; ++i)
            for (int ky = 0; ky < 3; ++ky)
                for (int kx = 0; kx < 3; ++kx)
                    acc += wo[i * 9 + ky * 3 + kx] *
                           padded[static_cast<size_t>(i)].block(ky, kx, h, w);
        out[static_cast<size_t>(o)] = std::move(acc);
    }
    return out;
}

void relu_inplace(std::vector<Eigen::MatrixXf>& planes) {
    for (auto& p : planes) p = p.cwiseMax(0.0f);
}

void sigmoid_inplace(std::vector<Eigen::MatrixXf>& planes) {
    for (auto& p : planes)
        p = (1.0f + (-p.array()).exp()).inverse().matrix();
}

}  // namespace

OneHotGrid encode(const Environment& env) {
    const auto& tiles = generatable_tiles(env.domain);
    OneHotGrid grid;
    grid.width = env.width;
    grid.height = env.height;
    grid.planes.assign(tiles.size(),
                       Eigen::MatrixXf::Zero(env.height, env.width));
    for (int y = 0; y < env.height; ++y)
        for (int x = 0; x < env.width; ++x)
            grid.planes[static_cast<size_t>(channel_of(env.domain, env.at(x, y)))](
                y, x) = 1.0f;
    return grid;
}

Environment decode(const OneHotGrid& grid, const Environment& frame) {
    if (grid.width != frame.width || grid.height != frame.height)
        throw Error(ErrorCode::DimensionMismatch,
                    "grid and frame dimensions differ");
    const auto& tiles = generatable_tiles(frame.domain);
    if (grid.channels() != static_cast<int>(tiles.size()))
        throw Error(ErrorCode::ChannelMismatch,
                    "grid channel count does not match the frame domain");
    Environment env = frame;
    for (int y = 0; y < frame.height; ++y)
        for (int x = 0; x < frame.width; ++x) {
            if (frame.is_frozen(x, y)) continue;
            int best = 0;
            float best_val = grid.planes[0](y, x);
            for (int c = 1; c < grid.channels(); ++c) {
                float v = grid.planes[static_cast<size_t>(c)](y, x);
                if (v > best_val) {
                    best_val = v;
                    best = c;
                }
            }
            env.at(x, y) = tiles[static_cast<size_t>(best)];
        }
    return env;
}

OneHotGrid forward_step(const NcaGenerator& gen, const OneHotGrid& grid,
                        const Environment& frame, PaddingMode mode) {
    if (grid.channels() != gen.arch.in_channels)
        throw Error(ErrorCode::ChannelMismatch,
                    "grid holds " + std::to_string(grid.channels()) +
                        " channels, generator expects " +
                        std::to_string(gen.arch.in_channels));
    if (grid.width != frame.width || grid.height != frame.height)
        throw Error(ErrorCode::DimensionMismatch,
                    "grid and frame dimensions differ");
    const int c_in = gen.arch.in_channels;
    const int c_h = gen.arch.hidden_channels;
    const float* theta = gen.theta.data();
    const float* w1 = theta;
    const float* b1 = w1 + c_in * c_h * 9;
    const float* w2 = b1 + c_h;
    const float* b2 = w2 + c_h * c_h * 9;
    const float* w3 = b2 + c_h;
    const float* b3 = w3 + c_h * c_in * 9;

    auto a1 = conv3x3(grid.planes, w1, b1, c_h, mode);
    relu_inplace(a1);
    auto a2 = conv3x3(a1, w2, b2, c_h, mode);
    relu_inplace(a2);
    auto a3 = conv3x3(a2, w3, b3, c_in, mode);
    sigmoid_inplace(a3);

    OneHotGrid out;
    out.width = grid.width;
    out.height = grid.height;
    out.planes.assign(static_cast<size_t>(c_in),
                      Eigen::MatrixXf::Zero(grid.height, grid.width));
    for (int y = 0; y < grid.height; ++y)
        for (int x = 0; x < grid.width; ++x) {
            int best = 0;
            if (frame.is_frozen(x, y)) {
                best = channel_of(frame.domain, frame.at(x, y));
            } else {
                float best_val = a3[0](y, x);
                for (int c = 1; c < c_in; ++c) {
                    float v = a3[static_cast<size_t>(c)](y, x);
                    if (v > best_val) {
                        best_val = v;
                        best = c;
                    }
                }
            }
            out.planes[static_cast<size_t>(best)](y, x) = 1.0f;
        }
    return out;
}

Environment generate(const NcaGenerator& gen, const Environment& seed,
                     int iterations, PaddingMode mode) {
    if (iterations < 0)
        throw Error(ErrorCode::ConfigInvalid, "iterations must be >= 0");
    OneHotGrid grid = encode(seed);
    for (int it = 0; it < iterations; ++it)
        grid = forward_step(gen, grid, seed, mode);
    return decode(grid, seed);
}

Environment make_seed(Domain d, int width, int height) {
    Environment env;
    if (is_warehouse(d)) {
        env = warehouse_template(d, width, height);
    } else {
        if (width < 2 || height < 2)
            throw Error(ErrorCode::SizeTooSmall,
                        "seed needs room for its central 2x2 block");
        env = make_environment(d, width, height);
    }
    TileType block;
    switch (d) {
        case Domain::WarehouseEven:
        case Domain::WarehouseUneven: block = TileType::Shelf; break;
        case Domain::Manufacturing: block = TileType::Endpoint; break;
        case Domain::Maze: block = TileType::Wall; break;
        default: block = TileType::Wall; break;
    }
    int x0 = (width - 2) / 2;
    int y0 = (height - 2) / 2;
    for (int dy = 0; dy < 2; ++dy)
        for (int dx = 0; dx < 2; ++dx) {
            int x = x0 + dx, y = y0 + dy;
            if (!env.in_bounds(x, y) || env.is_frozen(x, y))
                throw Error(ErrorCode::SizeTooSmall,
                            "central seed block does not fit the grid");
            env.at(x, y) = block;
        }
    return env;
}

std::string generator_to_json(const NcaGenerator& gen) {
    nlohmann::json j;
    j["format"] = "nca-generator";
    j["version"] = 1;
    j["domain"] = domain_name(gen.domain);
    j["in_channels"] = gen.arch.in_channels;
    j["hidden_channels"] = gen.arch.hidden_channels;
    j["theta"] = gen.theta;
    return j.dump();
}

NcaGenerator generator_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Io, std::string("bad generator JSON: ") + e.what());
    }
    if (j.value("format", "") != "nca-generator")
        throw Error(ErrorCode::Io, "not a generator record");
    if (j.value("version", 0) != 1)
        throw Error(ErrorCode::Io, "unsupported generator record version");
    NcaArchitecture arch;
    arch.in_channels = j.at("in_channels").get<int>();
    arch.hidden_channels = j.at("hidden_channels").get<int>();
    return NcaGenerator(domain_from_name(j.at("domain").get<std::string>()),
                        arch, j.at("theta").get<std::vector<float>>());
}

void save_generator(const NcaGenerator& gen, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
    out << generator_to_json(gen) << '\n';
    if (!out) throw Error(ErrorCode::Io, "write failed for " + path);
}

NcaGenerator load_generator(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return generator_from_json(buf.str());
}

}  // namespace gridforge
