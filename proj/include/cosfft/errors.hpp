#pragma once

#include <stdexcept>
#include <string>

namespace cosfft {

// Thrown when an input field violates its domain; the message names the
// offending field so frontends can surface it directly.
class ParameterError : public std::invalid_argument {
public:
    ParameterError(const std::string& field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(field) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

}  // namespace cosfft
