#include "provfaas/gnn.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "provfaas/binio.hpp"
#include "provfaas/rng.hpp"

namespace provfaas {

namespace {

constexpr char kModelMagic[5] = {'P', 'F', 'G', 'N', 'N'};
constexpr std::uint16_t kModelVersion = 1;

float activate(float x, Activation a) {
    switch (a) {
        case Activation::Relu: return x > 0.0f ? x : 0.0f;
        case Activation::Tanh: return std::tanh(x);
    }
    return x;
}

// Sorted unique undirected neighbor lists, ascending by node id. Node ids in
// any (sub)graph preserve the relative order of the original entity ids, so
// this fixes one global accumulation order across all packings.
std::vector<std::vector<EntityId>> neighbor_index(const ProvenanceGraph& g) {
    std::vector<std::vector<EntityId>> nbrs(g.node_count());
    for (EntityId v = 0; v < g.node_count(); ++v) {
        auto& list = nbrs[v];
        g.for_each_incident(v, [&](std::uint64_t, EntityId u) { list.push_back(u); });
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
    }
    return nbrs;
}

}  // namespace

std::vector<std::string> GnnModel::validate() const {
    std::vector<std::string> errors;
    if (layers.empty()) errors.push_back("model has no layers");
    for (std::size_t l = 0; l < layers.size(); ++l) {
        const GnnLayer& layer = layers[l];
        if (layer.in_dim == 0 || layer.out_dim == 0)
            errors.push_back("layer " + std::to_string(l) + " has a zero dimension");
        if (layer.weight.size() != layer.out_dim * 2 * layer.in_dim)
            errors.push_back("layer " + std::to_string(l) + " weight size " +
                             std::to_string(layer.weight.size()) + " != " +
                             std::to_string(layer.out_dim * 2 * layer.in_dim));
        if (layer.bias.size() != layer.out_dim)
            errors.push_back("layer " + std::to_string(l) + " bias size mismatch");
        if (l > 0 && layer.in_dim != layers[l - 1].out_dim)
            errors.push_back("layer " + std::to_string(l) + " input dim " + std::to_string(layer.in_dim) +
                             " != previous output dim " + std::to_string(layers[l - 1].out_dim));
        for (float w : layer.weight)
            if (!std::isfinite(w)) {
                errors.push_back("layer " + std::to_string(l) + " has non-finite weights");
                break;
            }
    }
    return errors;
}

GnnModel synth_model(std::uint64_t seed, const std::vector<std::size_t>& dims, Activation act) {
    if (dims.size() < 2) throw std::invalid_argument("synth_model: need at least input and output dims");
    GnnModel m;
    m.activation = act;
    SplitMix64 rng(seed);
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
        GnnLayer layer;
        layer.in_dim = dims[l];
        layer.out_dim = dims[l + 1];
        const float scale = 1.0f / std::sqrt(static_cast<float>(2 * layer.in_dim));
        layer.weight.resize(layer.out_dim * 2 * layer.in_dim);
        for (float& w : layer.weight) w = (rng.next_float() * 2.0f - 1.0f) * scale;
        layer.bias.resize(layer.out_dim);
        for (float& b : layer.bias) b = (rng.next_float() * 2.0f - 1.0f) * 0.1f;
        m.layers.push_back(std::move(layer));
    }
    return m;
}

void save_model(const GnnModel& model, const std::string& path) {
    if (auto errors = model.validate(); !errors.empty())
        throw std::runtime_error("save_model: invalid model: " + errors.front());
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open model file for writing: " + path);
    os.write(kModelMagic, 5);
    os.put('\0');
    binio::put_u16(os, kModelVersion);
    binio::put_u32(os, static_cast<std::uint32_t>(model.layers.size()));
    os.put(static_cast<char>(model.activation));
    os.put('\0');
    os.put('\0');
    os.put('\0');
    for (const GnnLayer& layer : model.layers) {
        binio::put_u32(os, static_cast<std::uint32_t>(layer.in_dim));
        binio::put_u32(os, static_cast<std::uint32_t>(layer.out_dim));
    }
    for (const GnnLayer& layer : model.layers) {
        for (float w : layer.weight) binio::put_f32(os, w);
        for (float b : layer.bias) binio::put_f32(os, b);
    }
}

GnnModel load_model(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open model file: " + path);
    char magic[5];
    if (!is.read(magic, 5) || std::memcmp(magic, kModelMagic, 5) != 0)
        throw std::runtime_error("model file: bad magic in " + path);
    is.get();
    const std::uint16_t version = binio::get_u16(is);
    if (version != kModelVersion)
        throw std::runtime_error("model file: unsupported version " + std::to_string(version));
    const std::uint32_t layer_count = binio::get_u32(is);
    const int act = is.get();
    if (act != 0 && act != 1) throw std::runtime_error("model file: unknown activation code");
    is.get();
    is.get();
    is.get();
    if (!is) throw std::runtime_error("model file: truncated header in " + path);

    GnnModel m;
    m.activation = static_cast<Activation>(act);
    for (std::uint32_t l = 0; l < layer_count; ++l) {
        GnnLayer layer;
        layer.in_dim = binio::get_u32(is);
        layer.out_dim = binio::get_u32(is);
        m.layers.push_back(std::move(layer));
    }
    for (GnnLayer& layer : m.layers) {
        layer.weight.resize(layer.out_dim * 2 * layer.in_dim);
        for (float& w : layer.weight) w = binio::get_f32(is);
        layer.bias.resize(layer.out_dim);
        for (float& b : layer.bias) b = binio::get_f32(is);
    }
    if (auto errors = m.validate(); !errors.empty())
        throw std::runtime_error("model file " + path + ": " + errors.front());
    return m;
}

std::map<EntityId, FeatureVector> forward(const ProvenanceGraph& g,
                                          const std::map<EntityId, FeatureVector>& init,
                                          const GnnModel& model) {
    if (auto errors = model.validate(); !errors.empty())
        throw std::invalid_argument("forward: invalid model: " + errors.front());

    const std::size_t n = g.node_count();
    const std::size_t d0 = model.input_dim();

    // Flatten h^0 in node-id order.
    std::vector<float> h(n * d0);
    for (EntityId v = 0; v < n; ++v) {
        auto it = init.find(v);
        if (it == init.end())
            throw std::invalid_argument("forward: missing init vector for node " + std::to_string(v));
        if (it->second.size() != d0)
            throw std::invalid_argument("forward: layer 0 expects dim " + std::to_string(d0) + ", node " +
                                        std::to_string(v) + " has dim " + std::to_string(it->second.size()));
        std::copy(it->second.begin(), it->second.end(), h.begin() + v * d0);
    }

    const auto nbrs = neighbor_index(g);

    std::vector<float> mean, concat, next;
    for (std::size_t l = 0; l < model.layers.size(); ++l) {
        const GnnLayer& layer = model.layers[l];
        const std::size_t din = layer.in_dim;
        const std::size_t dout = layer.out_dim;
        if (h.size() != n * din)
            throw std::invalid_argument("forward: layer " + std::to_string(l) + " expects dim " +
                                        std::to_string(din) + ", got " + std::to_string(n ? h.size() / n : 0));

        next.assign(n * dout, 0.0f);
        mean.assign(din, 0.0f);
        concat.assign(2 * din, 0.0f);
        for (EntityId v = 0; v < n; ++v) {
            std::fill(mean.begin(), mean.end(), 0.0f);
            const auto& neigh = nbrs[v];
            for (EntityId u : neigh) {
                const float* hu = h.data() + u * din;
                for (std::size_t j = 0; j < din; ++j) mean[j] += hu[j];
            }
            if (!neigh.empty()) {
                const float inv = 1.0f / static_cast<float>(neigh.size());
                for (std::size_t j = 0; j < din; ++j) mean[j] *= inv;
            }
            std::copy(h.begin() + v * din, h.begin() + (v + 1) * din, concat.begin());
            std::copy(mean.begin(), mean.end(), concat.begin() + din);

            float* out = next.data() + v * dout;
            for (std::size_t i = 0; i < dout; ++i) {
                float z = layer.bias[i];
                const float* row = layer.weight.data() + i * 2 * din;
                for (std::size_t j = 0; j < 2 * din; ++j) z += row[j] * concat[j];
                out[i] = activate(z, model.activation);
            }
        }
        h.swap(next);
    }

    const std::size_t dk = model.output_dim();
    std::map<EntityId, FeatureVector> out;
    for (EntityId v = 0; v < n; ++v)
        out.emplace(v, FeatureVector(h.begin() + v * dk, h.begin() + (v + 1) * dk));
    return out;
}

std::map<EntityId, FeatureVector> run_inference_stage(const std::vector<PackedBin>& bins,
                                                      const std::map<EntityId, FeatureVector>& init,
                                                      const GnnModel& model) {
    std::map<EntityId, FeatureVector> merged;
    for (const PackedBin& bin : bins) {
        std::map<EntityId, FeatureVector> local_init;
        for (EntityId local = 0; local < bin.sub.graph.node_count(); ++local) {
            const EntityId parent = bin.sub.to_parent[local];
            auto it = init.find(parent);
            if (it == init.end())
                throw std::invalid_argument("run_inference_stage: missing init vector for node " +
                                            std::to_string(parent));
            local_init.emplace(local, it->second);
        }
        auto local_out = forward(bin.sub.graph, local_init, model);
        for (EntityId seed : bin.seeds) {
            const EntityId local = bin.sub.to_local.at(seed);
            merged[seed] = std::move(local_out.at(local));
        }
    }
    return merged;
}

}  // namespace provfaas
