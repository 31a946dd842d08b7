#pragma once

#include <stdexcept>
#include <string>

namespace euds {

// Error categories map 1:1 onto CLI exit codes and C API status values.
enum class ErrorKind : int {
    config = 2,
    data = 3,
    evaluator = 4,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(msg), kind_(kind) {}

    ErrorKind kind() const { return kind_; }
    int code() const { return static_cast<int>(kind_); }

private:
    ErrorKind kind_;
};

inline Error config_error(const std::string& msg) { return Error(ErrorKind::config, msg); }
inline Error data_error(const std::string& msg) { return Error(ErrorKind::data, msg); }
inline Error evaluator_error(const std::string& msg) { return Error(ErrorKind::evaluator, msg); }

} // namespace euds
