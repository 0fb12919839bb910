#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "provfaas/featurize.hpp"
#include "provfaas/types.hpp"

namespace provfaas {

// Benign behavior profile: centroid of benign final embeddings plus a radius
// taken at a high quantile of the benign distance distribution.
struct BenignProfile {
    FeatureVector centroid;
    double radius = 0;
    double quantile = 0.999;
};

// Throws on an empty input. radius is the q-quantile of distances from the
// centroid, clamped below by 1e-9 so a degenerate all-identical benign set
// still yields a usable profile.
BenignProfile fit_profile(const std::vector<FeatureVector>& benign_embeddings, double quantile = 0.999);

struct NodeScore {
    EntityId node = 0;
    double score = 0;
};

struct ScoreResult {
    std::vector<NodeScore> scores;  // every node, ordered (score desc, id asc)
    std::vector<NodeScore> alerts;  // the subset with score > radius, same order
};

// score(v) = ||h_v - centroid||_2. Throws on dimension mismatch.
ScoreResult score_embeddings(const std::map<EntityId, FeatureVector>& embeddings,
                             const BenignProfile& profile);

// Text profile file with hex-float values, so save/load round-trips exactly.
void save_profile(const BenignProfile& profile, const std::string& path);
BenignProfile load_profile(const std::string& path);

}  // namespace provfaas
