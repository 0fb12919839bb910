#include "provfaas/frequency.hpp"

#include <cctype>
#include <fstream>
#include <stdexcept>

namespace provfaas {

std::string signature_token(std::string_view object_attr) {
    std::size_t b = 0;
    while (b < object_attr.size() && std::isspace(static_cast<unsigned char>(object_attr[b]))) ++b;
    std::size_t e = b;
    while (e < object_attr.size() && !std::isspace(static_cast<unsigned char>(object_attr[e]))) ++e;
    return std::string(object_attr.substr(b, e - b));
}

std::string edge_signature(EntityType subject_type, EventType event_type, std::string_view object_attr) {
    std::string s;
    s += to_string(subject_type);
    s += ':';
    s += to_string(event_type);
    s += ':';
    s += signature_token(object_attr);
    return s;
}

void FrequencyDb::add(const LogEvent& e) {
    add_signature(edge_signature(e.subject.type, e.type, e.object.attr));
}

void FrequencyDb::add_signature(const std::string& sig, std::uint64_t n) {
    counts_[sig] += n;
}

std::uint64_t FrequencyDb::count(const std::string& sig) const {
    auto it = counts_.find(sig);
    return it == counts_.end() ? 0 : it->second;
}

void FrequencyDb::save(const std::string& path) const {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open frequency db for writing: " + path);
    os << "threshold\t" << threshold_ << "\n";
    for (const auto& [sig, n] : counts_) os << sig << '\t' << n << '\n';
}

FrequencyDb FrequencyDb::load(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open frequency db: " + path);
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("frequency db missing header: " + path);
    const auto tab = line.find('\t');
    if (tab == std::string::npos || line.substr(0, tab) != "threshold")
        throw std::runtime_error("frequency db bad header line: " + path);
    FrequencyDb db(std::stoull(line.substr(tab + 1)));
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto t = line.rfind('\t');
        if (t == std::string::npos)
            throw std::runtime_error("frequency db line " + std::to_string(lineno) + ": missing tab");
        db.add_signature(line.substr(0, t), std::stoull(line.substr(t + 1)));
    }
    return db;
}

}  // namespace provfaas
