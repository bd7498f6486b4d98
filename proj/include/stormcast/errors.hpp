#pragma once

#include <stdexcept>
#include <string>

namespace stormcast {

// Problems with external data (files, formats, degenerate inputs).
// Parameter/contract violations use std::invalid_argument instead.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace stormcast
