#pragma once

#include <stdexcept>
#include <string>

namespace monoea {

/// Invalid parameters or incompatible settings, detected before any work runs.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A file could not be read or written; the message names the path.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace monoea
