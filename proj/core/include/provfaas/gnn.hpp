#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "provfaas/featurize.hpp"
#include "provfaas/graph.hpp"
#include "provfaas/partition.hpp"

namespace provfaas {

enum class Activation : std::uint8_t { Relu = 0, Tanh = 1 };

// One message-passing layer: h' = act(W . [h_self || mean(h_neighbors)] + b)
// with W stored row-major, shape out_dim x (2 * in_dim).
struct GnnLayer {
    std::size_t in_dim = 0;
    std::size_t out_dim = 0;
    std::vector<float> weight;
    std::vector<float> bias;
};

struct GnnModel {
    std::vector<GnnLayer> layers;
    Activation activation = Activation::Relu;

    std::size_t layer_count() const { return layers.size(); }
    std::size_t input_dim() const { return layers.empty() ? 0 : layers.front().in_dim; }
    std::size_t output_dim() const { return layers.empty() ? 0 : layers.back().out_dim; }

    // Empty when consistent; otherwise one message per violated constraint.
    std::vector<std::string> validate() const;
};

// Deterministic model synthesis. dims has layer_count+1 entries
// (input, hidden..., output). Same seed, same model, bit for bit.
GnnModel synth_model(std::uint64_t seed, const std::vector<std::size_t>& dims, Activation act);

// Binary model file, little-endian: 16-byte header ("PFGNN", pad, u16
// version, u32 layer count, u8 activation, 3 pad bytes), per-layer u32
// in/out dims, then per layer the row-major f32 weights and f32 biases.
// Round-trips are bitwise stable. Truncated or inconsistent files throw
// without producing a partial model.
void save_model(const GnnModel& model, const std::string& path);
GnnModel load_model(const std::string& path);

// Full message-passing forward pass over one graph. Neighbor means aggregate
// over the undirected view with duplicates removed, accumulated in ascending
// node id (fixed summation order makes partitioned runs bitwise equal to
// monolithic ones). The mean over an empty neighbor set is the zero vector.
// Throws on a missing init vector (naming the node) or dimension mismatch
// (naming the layer and dims).
std::map<EntityId, FeatureVector> forward(const ProvenanceGraph& g,
                                          const std::map<EntityId, FeatureVector>& init,
                                          const GnnModel& model);

// Runs forward on every packed bin and keeps outputs only for that bin's
// seeds. With seed coverage (each seed's K-hop ball inside its bin) the
// merged map is bitwise equal to a monolithic forward restricted to seeds.
// init is keyed by parent-graph ids.
std::map<EntityId, FeatureVector> run_inference_stage(const std::vector<PackedBin>& bins,
                                                      const std::map<EntityId, FeatureVector>& init,
                                                      const GnnModel& model);

}  // namespace provfaas
