#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace provfaas {

// Dense node index, assigned at first sight of an external entity key.
// Ids are contiguous from 0 so node sets can be plain bitsets.
using EntityId = std::uint64_t;

enum class EventType : std::uint8_t {
    Read,
    Write,
    Exec,
    Fork,
    Connect,
    Send,
    Recv,
    Open,
    Close,
    Other,
};

enum class EntityType : std::uint8_t {
    Process,
    File,
    Socket,
    Pipe,
    Memory,
};

std::string_view to_string(EventType t);
std::string_view to_string(EntityType t);
std::optional<EventType> parse_event_type(std::string_view s);
std::optional<EntityType> parse_entity_type(std::string_view s);

struct EntityRef {
    std::string key;   // stable external identifier (pid@boot, inode path, ...)
    EntityType type = EntityType::Process;
    std::string attr;  // command line / path / ip:port, analyst-facing text
};

// One audit record.
struct LogEvent {
    std::int64_t ts_ns = 0;  // nanoseconds since epoch, non-decreasing per stream
    EventType type = EventType::Other;
    EntityRef subject;
    EntityRef object;
};

struct DetectionInterval {
    std::int64_t start_ns = 0;
    std::int64_t end_ns = 0;  // exclusive; end_ns > start_ns
    std::uint64_t index = 0;
};

}  // namespace provfaas
