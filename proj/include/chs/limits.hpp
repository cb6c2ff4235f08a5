#pragma once

#include <cstddef>

namespace chs {

/// Size caps enforced before any large allocation or enumeration.
struct Limits {
  std::size_t max_dim = 16384;       // flat Hilbert-space dimension
  std::size_t max_enum = 1'000'000;  // enumerated combinatorial objects / keys
};

namespace detail {
inline Limits& limits_slot() {
  thread_local Limits slot{};
  return slot;
}
}  // namespace detail

inline const Limits& limits() { return detail::limits_slot(); }

/// Overrides the caps of the calling thread until destruction.
class ScopedLimits {
 public:
  explicit ScopedLimits(Limits l) : saved_(detail::limits_slot()) { detail::limits_slot() = l; }
  ~ScopedLimits() { detail::limits_slot() = saved_; }
  ScopedLimits(const ScopedLimits&) = delete;
  ScopedLimits& operator=(const ScopedLimits&) = delete;

 private:
  Limits saved_;
};

}  // namespace chs
