#pragma once

#include <functional>
#include <istream>
#include <string>
#include <string_view>
#include <variant>

#include "provfaas/types.hpp"

namespace provfaas {

// One LogEvent per line:
//   {"ts":<int ns>,"type":"READ","subj":{"key":..,"type":"PROCESS","attr":..},
//    "obj":{"key":..,"type":"FILE","attr":..}}
// On failure the returned string names the offending field.
std::variant<LogEvent, std::string> parse_log_event(std::string_view line);

struct StreamStats {
    std::uint64_t events = 0;
    std::uint64_t parse_errors = 0;
};

// Reads a JSONL stream line by line. Blank lines are skipped. Well-formed
// events go to on_event; malformed lines are rejected to on_error with their
// 1-based line number and are not ingested.
StreamStats for_each_event(std::istream& in, const std::function<void(const LogEvent&)>& on_event,
                           const std::function<void(std::size_t, const std::string&)>& on_error = {});

std::string to_jsonl(const LogEvent& e);

}  // namespace provfaas
