#pragma once

#include <stdexcept>
#include <string>

namespace cevkit {

// Base error for all toolkit failures. Input/schema problems throw
// InputError; everything else throws Error.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct InputError : Error {
    explicit InputError(const std::string& msg) : Error(msg) {}
};

}  // namespace cevkit
