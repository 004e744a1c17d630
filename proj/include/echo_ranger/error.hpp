#pragma once

#include <stdexcept>
#include <string>

namespace echo_ranger {

/// Raised for every contract violation in the library (bad arguments,
/// unsupported formats, geometry outside the room, ...).
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

namespace detail {
[[noreturn]] inline void fail(const std::string& what) { throw Error(what); }

inline void require(bool condition, const std::string& what) {
  if (!condition) fail(what);
}
}  // namespace detail

}  // namespace echo_ranger
