#pragma once

#include <stdexcept>
#include <string>

namespace tfc {

// Categories map one-to-one onto the machine-readable error strings the CLI
// prints on failure.
enum class ErrorCategory { config, io, schema, data, internal };

inline const char* to_string(ErrorCategory cat) {
    switch (cat) {
        case ErrorCategory::config: return "config";
        case ErrorCategory::io: return "io";
        case ErrorCategory::schema: return "schema";
        case ErrorCategory::data: return "data";
        case ErrorCategory::internal: return "internal";
    }
    return "internal";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCategory cat, const std::string& msg)
        : std::runtime_error(msg), cat_(cat) {}

    ErrorCategory category() const noexcept { return cat_; }

private:
    ErrorCategory cat_;
};

}  // namespace tfc
