#pragma once

#include <stdexcept>
#include <string>

namespace hippo {

// Vocabulary is full: the next token id would exceed the configured sigma.
class CapacityError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Unrecognized magic, unsupported version, or malformed section layout.
class FormatError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Checksum mismatch or truncated image.
class CorruptionError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace hippo
