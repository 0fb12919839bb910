#include "provfaas/detector.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace provfaas {

namespace {

constexpr double kMinRadius = 1e-9;

double distance(const FeatureVector& a, const FeatureVector& b) {
    double sq = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
        sq += d * d;
    }
    return std::sqrt(sq);
}

}  // namespace

BenignProfile fit_profile(const std::vector<FeatureVector>& benign_embeddings, double quantile) {
    if (benign_embeddings.empty()) throw std::invalid_argument("fit_profile: empty benign set");
    if (quantile <= 0 || quantile > 1) throw std::invalid_argument("fit_profile: quantile must be in (0, 1]");
    const std::size_t d = benign_embeddings.front().size();

    std::vector<double> sums(d, 0.0);
    for (const FeatureVector& v : benign_embeddings) {
        if (v.size() != d) throw std::invalid_argument("fit_profile: inconsistent embedding dims");
        for (std::size_t i = 0; i < d; ++i) sums[i] += v[i];
    }
    BenignProfile p;
    p.quantile = quantile;
    p.centroid.resize(d);
    for (std::size_t i = 0; i < d; ++i)
        p.centroid[i] = static_cast<float>(sums[i] / static_cast<double>(benign_embeddings.size()));

    std::vector<double> dist;
    dist.reserve(benign_embeddings.size());
    for (const FeatureVector& v : benign_embeddings) dist.push_back(distance(v, p.centroid));
    std::sort(dist.begin(), dist.end());

    // q-quantile as the ceil(q*N)-th smallest distance: at most (1-q)*N
    // benign points land strictly above it.
    const std::size_t n = dist.size();
    std::size_t idx = static_cast<std::size_t>(std::ceil(quantile * static_cast<double>(n)));
    idx = std::min(std::max<std::size_t>(idx, 1), n) - 1;
    p.radius = std::max(dist[idx], kMinRadius);
    return p;
}

ScoreResult score_embeddings(const std::map<EntityId, FeatureVector>& embeddings,
                             const BenignProfile& profile) {
    ScoreResult r;
    r.scores.reserve(embeddings.size());
    for (const auto& [node, vec] : embeddings) {
        if (vec.size() != profile.centroid.size())
            throw std::invalid_argument("score: embedding dim " + std::to_string(vec.size()) +
                                        " != profile dim " + std::to_string(profile.centroid.size()) +
                                        " for node " + std::to_string(node));
        r.scores.push_back(NodeScore{node, distance(vec, profile.centroid)});
    }
    std::sort(r.scores.begin(), r.scores.end(), [](const NodeScore& a, const NodeScore& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.node < b.node;
    });
    for (const NodeScore& s : r.scores)
        if (s.score > profile.radius) r.alerts.push_back(s);
    return r;
}

void save_profile(const BenignProfile& profile, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open profile for writing: " + path);
    char buf[64];
    os << "pfprofile\t1\n";
    os << "dim\t" << profile.centroid.size() << "\n";
    std::snprintf(buf, sizeof buf, "%a", profile.quantile);
    os << "quantile\t" << buf << "\n";
    std::snprintf(buf, sizeof buf, "%a", profile.radius);
    os << "radius\t" << buf << "\n";
    os << "centroid";
    for (float x : profile.centroid) {
        std::snprintf(buf, sizeof buf, "%a", static_cast<double>(x));
        os << '\t' << buf;
    }
    os << "\n";
}

BenignProfile load_profile(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open profile: " + path);
    std::string line;
    if (!std::getline(is, line) || line.rfind("pfprofile\t", 0) != 0)
        throw std::runtime_error("profile: bad header in " + path);

    BenignProfile p;
    std::size_t dim = 0;
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "dim") {
            ls >> dim;
        } else if (tag == "quantile") {
            std::string v;
            ls >> v;
            p.quantile = std::strtod(v.c_str(), nullptr);
        } else if (tag == "radius") {
            std::string v;
            ls >> v;
            p.radius = std::strtod(v.c_str(), nullptr);
        } else if (tag == "centroid") {
            std::string v;
            while (ls >> v) p.centroid.push_back(static_cast<float>(std::strtod(v.c_str(), nullptr)));
        }
    }
    if (p.centroid.size() != dim)
        throw std::runtime_error("profile: centroid length does not match dim in " + path);
    if (p.radius <= 0) throw std::runtime_error("profile: radius must be positive in " + path);
    return p;
}

}  // namespace provfaas
