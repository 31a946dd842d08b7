#pragma once

#include <cctype>
#include <string>

#include "errors.hpp"

namespace euds {

inline constexpr const char* kToolVersion = "0.1.0";

enum class Source { original, synthetic };
enum class Task { SA, TopicCLS, QA, other };
enum class EntropyType { IE, GE, SE };

inline const char* to_string(Source s) {
    return s == Source::original ? "original" : "synthetic";
}

inline Source source_from_string(const std::string& s) {
    if (s == "original") return Source::original;
    if (s == "synthetic") return Source::synthetic;
    throw data_error("unknown source tag '" + s + "' (expected original|synthetic)");
}

inline const char* to_string(Task t) {
    switch (t) {
        case Task::SA: return "SA";
        case Task::TopicCLS: return "TopicCLS";
        case Task::QA: return "QA";
        default: return "other";
    }
}

inline Task task_from_string(const std::string& s) {
    if (s == "SA") return Task::SA;
    if (s == "TopicCLS") return Task::TopicCLS;
    if (s == "QA") return Task::QA;
    if (s == "other") return Task::other;
    throw config_error("unknown task '" + s + "' (expected SA|TopicCLS|QA|other)");
}

inline const char* to_string(EntropyType t) {
    switch (t) {
        case EntropyType::IE: return "IE";
        case EntropyType::GE: return "GE";
        default: return "SE";
    }
}

inline EntropyType entropy_type_from_string(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (s == "ie") return EntropyType::IE;
    if (s == "ge") return EntropyType::GE;
    if (s == "se") return EntropyType::SE;
    throw config_error("unknown entropy type '" + s + "' (expected ie|ge|se)");
}

} // namespace euds
