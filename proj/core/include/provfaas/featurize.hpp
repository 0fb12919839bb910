#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "provfaas/types.hpp"

namespace provfaas {

using FeatureVector = std::vector<float>;

// Deterministic text featurizer: character-trigram feature hashing with
// signed buckets (64-bit FNV-1a per trigram; bucket = hash mod d; sign =
// top bit), then L2 normalization. Empty string maps to the zero vector;
// attributes shorter than 3 bytes hash the whole attribute as one token.
// Pure: identical (attr, d) gives bitwise-identical output.
FeatureVector embed_attr(std::string_view attr, std::size_t dim);

double l2_norm(const FeatureVector& v);

// Estimated execution cost of embedding one attribute. Linear in string
// length, which is what length-aware batching relies on.
struct CostModel {
    double base = 1.0;
    double per_char = 0.01;
    double operator()(std::size_t len) const { return base + per_char * static_cast<double>(len); }
};

struct EmbedWorkItem {
    EntityId node = 0;
    std::string attr;
    double est_cost = 0;
};

// A batch of independent work items dispatched as one serverless invocation.
// Either total_cost fits the budget, or the unit holds exactly one item whose
// own cost exceeds it (solo oversize unit; triggers vertical scaling).
struct ExecutionUnit {
    std::vector<EmbedWorkItem> items;
    double total_cost = 0;
    std::uint64_t unit_id = 0;
    bool oversize = false;
};

// First-fit decreasing by estimated cost. Ties broken by ascending node id.
std::vector<ExecutionUnit> pack_embedding_units(std::vector<EmbedWorkItem> items, double unit_budget);

struct EmbeddingStageResult {
    std::map<EntityId, FeatureVector> vectors;
    std::vector<ExecutionUnit> units;  // scheduling artifact; does not affect vectors
};

// Embeds every (node, attr) pair and groups the work into execution units.
// The vector map depends only on the inputs, never on the unit partition.
EmbeddingStageResult run_embedding_stage(const std::vector<std::pair<EntityId, std::string>>& nodes,
                                         double unit_budget, std::size_t dim, const CostModel& cost = {});

// Binary embedding dump: 16-byte header ("PFEMB\0", u16 version, u32 dim,
// 4 reserved bytes), then (u64 node id, dim x f32) records, little-endian.
void write_embedding_dump(const std::string& path, const std::map<EntityId, FeatureVector>& vectors,
                          std::size_t dim);
std::map<EntityId, FeatureVector> read_embedding_dump(const std::string& path, std::size_t* dim_out = nullptr);

}  // namespace provfaas
