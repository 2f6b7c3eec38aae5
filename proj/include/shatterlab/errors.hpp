#pragma once

#include <stdexcept>
#include <string>

namespace shatterlab {

// Malformed or out-of-contract input (bad index, length mismatch, degenerate
// geometry, violated precondition of a construction).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An exhaustive computation would exceed a configured size cap.
class ResourceError : public std::runtime_error {
public:
    ResourceError(const std::string& cap_name, std::size_t limit, std::size_t requested)
        : std::runtime_error("resource cap '" + cap_name + "' exceeded: limit " +
                             std::to_string(limit) + ", requested " + std::to_string(requested)),
          cap_(cap_name) {}

    const std::string& cap() const noexcept { return cap_; }

private:
    std::string cap_;
};

}  // namespace shatterlab
