#pragma once

#include <stdexcept>
#include <string>

namespace reductminer {

/// Raised for problems with user-supplied input: missing or malformed
/// files, bad schema/spec documents, unknown attribute names. The CLI
/// maps this to exit code 2; everything else maps to exit code 1.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace reductminer
