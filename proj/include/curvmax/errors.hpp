#pragma once

#include <stdexcept>
#include <string>

namespace curvmax {

// Bad arguments, malformed instance files, violated preconditions.
// The CLI maps this to exit code 2.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// A configured cap was exceeded (enumeration size, lifted-copy count).
// The CLI maps this to exit code 3.
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

// A structural guarantee failed to hold, e.g. no perfect matching in a
// basis-exchange graph. Reachable only through oracles that violate the
// matroid axioms (the explicit-bases kind makes that possible on purpose).
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace curvmax
