#include "provfaas/jsonl.hpp"

#include <string>

#include "json.hpp"

namespace provfaas {

namespace {

using nlohmann::json;

std::variant<EntityRef, std::string> parse_entity(const json& j, const char* field) {
    if (!j.is_object()) return std::string("field '") + field + "' must be an object";
    EntityRef ref;
    auto key = j.find("key");
    if (key == j.end() || !key->is_string()) return std::string("missing or non-string field '") + field + ".key'";
    ref.key = key->get<std::string>();
    auto type = j.find("type");
    if (type == j.end() || !type->is_string()) return std::string("missing or non-string field '") + field + ".type'";
    auto parsed = parse_entity_type(type->get<std::string>());
    if (!parsed) return std::string("unknown entity type in field '") + field + ".type'";
    ref.type = *parsed;
    if (auto attr = j.find("attr"); attr != j.end()) {
        if (!attr->is_string()) return std::string("non-string field '") + field + ".attr'";
        ref.attr = attr->get<std::string>();
    }
    return ref;
}

}  // namespace

std::variant<LogEvent, std::string> parse_log_event(std::string_view line) {
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) return std::string("invalid JSON");
    if (!j.is_object()) return std::string("event must be a JSON object");

    LogEvent e;
    auto ts = j.find("ts");
    if (ts == j.end() || !ts->is_number_integer()) return std::string("missing or non-integer field 'ts'");
    e.ts_ns = ts->get<std::int64_t>();

    auto type = j.find("type");
    if (type == j.end() || !type->is_string()) return std::string("missing or non-string field 'type'");
    auto parsed = parse_event_type(type->get<std::string>());
    if (!parsed) return std::string("unknown event type in field 'type'");
    e.type = *parsed;

    auto subj = j.find("subj");
    if (subj == j.end()) return std::string("missing field 'subj'");
    auto s = parse_entity(*subj, "subj");
    if (std::holds_alternative<std::string>(s)) return std::get<std::string>(s);
    e.subject = std::get<EntityRef>(std::move(s));

    auto obj = j.find("obj");
    if (obj == j.end()) return std::string("missing field 'obj'");
    auto o = parse_entity(*obj, "obj");
    if (std::holds_alternative<std::string>(o)) return std::get<std::string>(o);
    e.object = std::get<EntityRef>(std::move(o));

    return e;
}

StreamStats for_each_event(std::istream& in, const std::function<void(const LogEvent&)>& on_event,
                           const std::function<void(std::size_t, const std::string&)>& on_error) {
    StreamStats stats;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto parsed = parse_log_event(line);
        if (std::holds_alternative<std::string>(parsed)) {
            ++stats.parse_errors;
            if (on_error) on_error(lineno, std::get<std::string>(parsed));
            continue;
        }
        ++stats.events;
        on_event(std::get<LogEvent>(parsed));
    }
    return stats;
}

std::string to_jsonl(const LogEvent& e) {
    json j;
    j["ts"] = e.ts_ns;
    j["type"] = to_string(e.type);
    j["subj"] = {{"key", e.subject.key}, {"type", to_string(e.subject.type)}, {"attr", e.subject.attr}};
    j["obj"] = {{"key", e.object.key}, {"type", to_string(e.object.type)}, {"attr", e.object.attr}};
    return j.dump();
}

}  // namespace provfaas
