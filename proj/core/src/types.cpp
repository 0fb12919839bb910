#include "provfaas/types.hpp"

namespace provfaas {

std::string_view to_string(EventType t) {
    switch (t) {
        case EventType::Read: return "READ";
        case EventType::Write: return "WRITE";
        case EventType::Exec: return "EXEC";
        case EventType::Fork: return "FORK";
        case EventType::Connect: return "CONNECT";
        case EventType::Send: return "SEND";
        case EventType::Recv: return "RECV";
        case EventType::Open: return "OPEN";
        case EventType::Close: return "CLOSE";
        case EventType::Other: return "OTHER";
    }
    return "OTHER";
}

std::string_view to_string(EntityType t) {
    switch (t) {
        case EntityType::Process: return "PROCESS";
        case EntityType::File: return "FILE";
        case EntityType::Socket: return "SOCKET";
        case EntityType::Pipe: return "PIPE";
        case EntityType::Memory: return "MEMORY";
    }
    return "PROCESS";
}

std::optional<EventType> parse_event_type(std::string_view s) {
    if (s == "READ") return EventType::Read;
    if (s == "WRITE") return EventType::Write;
    if (s == "EXEC") return EventType::Exec;
    if (s == "FORK") return EventType::Fork;
    if (s == "CONNECT") return EventType::Connect;
    if (s == "SEND") return EventType::Send;
    if (s == "RECV") return EventType::Recv;
    if (s == "OPEN") return EventType::Open;
    if (s == "CLOSE") return EventType::Close;
    if (s == "OTHER") return EventType::Other;
    return std::nullopt;
}

std::optional<EntityType> parse_entity_type(std::string_view s) {
    if (s == "PROCESS") return EntityType::Process;
    if (s == "FILE") return EntityType::File;
    if (s == "SOCKET") return EntityType::Socket;
    if (s == "PIPE") return EntityType::Pipe;
    if (s == "MEMORY") return EntityType::Memory;
    return std::nullopt;
}

}  // namespace provfaas
