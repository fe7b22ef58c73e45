#pragma once

#include <stdexcept>
#include <string>

namespace trfca {

/// Malformed user input: lattice/group specs, FIMI text, CLI arguments.
class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A configured size cap (group order, subspace count, orbit pairs, ...) was hit.
class CapExceeded : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A 64-bit concept counter would have wrapped.
class CounterOverflow : public std::overflow_error {
public:
  using std::overflow_error::overflow_error;
};

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace trfca
