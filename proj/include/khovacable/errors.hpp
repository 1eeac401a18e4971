#pragma once

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace khovacable {

// Malformed or inconsistent input (bad PD document, bad color tuple, ...).
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A structural identity did not hold; `what()` carries a witness.
struct IdentityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CapExceeded : std::runtime_error {
  std::uint64_t required;
  std::uint64_t cap;
  CapExceeded(std::uint64_t required, std::uint64_t cap)
      : std::runtime_error("state-space cap exceeded: need " + std::to_string(required) +
                           ", cap is " + std::to_string(cap)),
        required(required), cap(cap) {}
};

inline constexpr std::uint64_t kDefaultCap = std::uint64_t(1) << 24;

// KHOVACABLE_CAP overrides the default when set to a positive integer.
inline std::uint64_t cap_from_env() {
  const char* v = std::getenv("KHOVACABLE_CAP");
  if (!v || !*v) return kDefaultCap;
  char* end = nullptr;
  unsigned long long c = std::strtoull(v, &end, 10);
  if (*end != '\0' || c == 0) throw InputError("KHOVACABLE_CAP must be a positive integer");
  return c;
}

}  // namespace khovacable
