#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "gridforge/env.hpp"

namespace gridforge {

// Border handling for the convolutions. Zero is the real contract;
// Toroidal exists so tests can check translation equivariance without
// border effects.
enum class PaddingMode { Zero, Toroidal };

struct NcaArchitecture {
    int in_channels = 0;
    int hidden_channels = 32;

    static constexpr int kKernel = 3;
    static constexpr int kStride = 1;
    static constexpr int kPadding = 1;

    bool operator==(const NcaArchitecture&) const = default;
};

// Total scalar count of the three conv layers: in->hidden->hidden->in,
// each contributing in*out*9 weights plus out biases.
int param_count(const NcaArchitecture& arch);

NcaArchitecture architecture_for(Domain d, int hidden_channels = 32);

// One-hot tile grid as per-channel float planes, planes[c] is
// height x width.
struct OneHotGrid {
    int width = 0;
    int height = 0;
    std::vector<Eigen::MatrixXf> planes;

    int channels() const { return static_cast<int>(planes.size()); }
};

// Immutable generator: a flat parameter vector over a fixed 3-layer
// conv stack (kernel 3, stride 1, padding 1, ReLU/ReLU/Sigmoid).
//
// theta layout, frozen for serialization: layer-major; within a layer
// all weights ordered [out][in][ky][kx], then the layer's biases [out].
struct NcaGenerator {
    Domain domain = Domain::Maze;
    NcaArchitecture arch;
    std::vector<float> theta;

    NcaGenerator() = default;
    NcaGenerator(Domain d, NcaArchitecture a, std::vector<float> th);
};

// Channel c holds 1 where the tile equals generatable_tiles(domain)[c].
// Warehouse Workstation tiles (never generatable) encode as Empty.
OneHotGrid encode(const Environment& env);

// Map the hot channel of each cell back to its tile; frozen cells take
// the frame's tile instead. The result inherits the frame's domain,
// dimensions and frozen mask.
Environment decode(const OneHotGrid& grid, const Environment& frame);

// One NCA iteration: conv->ReLU->conv->ReLU->conv->Sigmoid, argmax
// discretization (ties to the lowest channel), one-hot re-encode, then
// frozen cells restored from the frame. Pure and deterministic; all
// arithmetic float32 in a fixed accumulation order.
OneHotGrid forward_step(const NcaGenerator& gen, const OneHotGrid& grid,
                        const Environment& frame,
                        PaddingMode mode = PaddingMode::Zero);

// Run `iterations` forward steps from one-hot(seed) and decode.
// iterations=0 returns the seed unchanged.
Environment generate(const NcaGenerator& gen, const Environment& seed,
                     int iterations, PaddingMode mode = PaddingMode::Zero);

// Deterministic per-domain seed: a central 2x2 block of the domain's
// canonical non-empty tile (warehouse Shelf, manufacturing Endpoint,
// maze Wall) on an otherwise empty grid; warehouse grids carry the
// fixed border from the template.
Environment make_seed(Domain d, int width, int height);

// Versioned JSON record of (domain, architecture, theta); round-trips
// bit-exactly.
std::string generator_to_json(const NcaGenerator& gen);
NcaGenerator generator_from_json(const std::string& text);
void save_generator(const NcaGenerator& gen, const std::string& path);
NcaGenerator load_generator(const std::string& path);

}  // namespace gridforge
