#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include "provfaas/graph.hpp"
#include "provfaas/types.hpp"

namespace provfaas {

// First path-like token of an object attribute: the attribute up to the
// first whitespace. "/usr/bin/ssh -p 2222" and "/usr/bin/ssh" share a token.
std::string signature_token(std::string_view object_attr);

// Serialized edge signature: SUBJECT_TYPE:EVENT_TYPE:token.
std::string edge_signature(EntityType subject_type, EventType event_type, std::string_view object_attr);

// Occurrence counts of edge signatures over a designated training stream.
// A signature absent from the map has count 0. Rare means count <= threshold.
class FrequencyDb {
public:
    explicit FrequencyDb(std::uint64_t threshold = 10) : threshold_(threshold) {}

    void add(const LogEvent& e);
    void add_signature(const std::string& sig, std::uint64_t n = 1);

    std::uint64_t count(const std::string& sig) const;
    bool is_rare(const std::string& sig) const { return count(sig) <= threshold_; }

    std::uint64_t threshold() const { return threshold_; }
    std::size_t distinct_signatures() const { return counts_.size(); }
    const std::map<std::string, std::uint64_t>& counts() const { return counts_; }

    // Two-column text file: one header line "threshold<TAB>N", then
    // signature<TAB>count rows sorted by signature.
    void save(const std::string& path) const;
    static FrequencyDb load(const std::string& path);

private:
    std::map<std::string, std::uint64_t> counts_;
    std::uint64_t threshold_;
};

template <typename EventRange>
FrequencyDb build_frequency_db(const EventRange& training_events, std::uint64_t threshold) {
    FrequencyDb db(threshold);
    for (const LogEvent& e : training_events) db.add(e);
    return db;
}

}  // namespace provfaas
