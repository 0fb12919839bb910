#include "provfaas/featurize.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "provfaas/binio.hpp"

namespace provfaas {

namespace {

constexpr char kEmbedMagic[6] = {'P', 'F', 'E', 'M', 'B', '\0'};
constexpr std::uint16_t kEmbedVersion = 1;

std::uint64_t fnv1a64(const char* data, std::size_t n) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= static_cast<unsigned char>(data[i]);
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

FeatureVector embed_attr(std::string_view attr, std::size_t dim) {
    FeatureVector v(dim, 0.0f);
    if (attr.empty()) return v;

    auto bump = [&](std::uint64_t h) {
        const std::size_t bucket = h % dim;
        v[bucket] += (h >> 63) ? -1.0f : 1.0f;
    };
    if (attr.size() < 3) {
        bump(fnv1a64(attr.data(), attr.size()));
    } else {
        for (std::size_t i = 0; i + 3 <= attr.size(); ++i) bump(fnv1a64(attr.data() + i, 3));
    }

    float sq = 0.0f;
    for (float x : v) sq += x * x;
    if (sq > 0.0f) {
        const float inv = 1.0f / std::sqrt(sq);
        for (float& x : v) x *= inv;
    }
    return v;
}

double l2_norm(const FeatureVector& v) {
    double sq = 0;
    for (float x : v) sq += static_cast<double>(x) * x;
    return std::sqrt(sq);
}

std::vector<ExecutionUnit> pack_embedding_units(std::vector<EmbedWorkItem> items, double unit_budget) {
    if (unit_budget <= 0) throw std::invalid_argument("pack_embedding_units: unit_budget must be positive");
    std::sort(items.begin(), items.end(), [](const EmbedWorkItem& a, const EmbedWorkItem& b) {
        if (a.est_cost != b.est_cost) return a.est_cost > b.est_cost;
        return a.node < b.node;
    });

    std::vector<ExecutionUnit> units;
    for (auto& item : items) {
        if (item.est_cost > unit_budget) {
            ExecutionUnit solo;
            solo.unit_id = units.size();
            solo.total_cost = item.est_cost;
            solo.oversize = true;
            solo.items.push_back(std::move(item));
            units.push_back(std::move(solo));
            continue;
        }
        bool placed = false;
        for (auto& u : units) {
            if (!u.oversize && u.total_cost + item.est_cost <= unit_budget) {
                u.total_cost += item.est_cost;
                u.items.push_back(std::move(item));
                placed = true;
                break;
            }
        }
        if (!placed) {
            ExecutionUnit u;
            u.unit_id = units.size();
            u.total_cost = item.est_cost;
            u.items.push_back(std::move(item));
            units.push_back(std::move(u));
        }
    }
    return units;
}

EmbeddingStageResult run_embedding_stage(const std::vector<std::pair<EntityId, std::string>>& nodes,
                                         double unit_budget, std::size_t dim, const CostModel& cost) {
    EmbeddingStageResult r;
    std::vector<EmbedWorkItem> items;
    items.reserve(nodes.size());
    for (const auto& [id, attr] : nodes) {
        r.vectors[id] = embed_attr(attr, dim);
        items.push_back(EmbedWorkItem{id, attr, cost(attr.size())});
    }
    r.units = pack_embedding_units(std::move(items), unit_budget);
    return r;
}

void write_embedding_dump(const std::string& path, const std::map<EntityId, FeatureVector>& vectors,
                          std::size_t dim) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open embedding dump for writing: " + path);
    os.write(kEmbedMagic, 6);
    binio::put_u16(os, kEmbedVersion);
    binio::put_u32(os, static_cast<std::uint32_t>(dim));
    binio::put_u32(os, 0);  // reserved
    for (const auto& [id, vec] : vectors) {
        if (vec.size() != dim)
            throw std::runtime_error("embedding dump: vector dimension mismatch for node " + std::to_string(id));
        binio::put_u64(os, id);
        for (float x : vec) binio::put_f32(os, x);
    }
}

std::map<EntityId, FeatureVector> read_embedding_dump(const std::string& path, std::size_t* dim_out) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open embedding dump: " + path);
    char magic[6];
    if (!is.read(magic, 6) || std::memcmp(magic, kEmbedMagic, 6) != 0)
        throw std::runtime_error("embedding dump: bad magic in " + path);
    const std::uint16_t version = binio::get_u16(is);
    if (version != kEmbedVersion)
        throw std::runtime_error("embedding dump: unsupported version " + std::to_string(version));
    const std::uint32_t dim = binio::get_u32(is);
    binio::get_u32(is);  // reserved
    if (dim_out) *dim_out = dim;

    std::map<EntityId, FeatureVector> out;
    while (true) {
        is.peek();
        if (is.eof()) break;
        const EntityId id = binio::get_u64(is);
        FeatureVector v(dim);
        for (std::uint32_t i = 0; i < dim; ++i) v[i] = binio::get_f32(is);
        out.emplace(id, std::move(v));
    }
    return out;
}

}  // namespace provfaas
