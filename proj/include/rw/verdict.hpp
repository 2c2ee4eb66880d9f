#pragma once

#include <cstdint>
#include <string_view>

namespace rw {

/// Three-valued outcome shared by every checker. FAILS is catalog-relative:
/// the loaded catalog was searched exhaustively. UNKNOWN means a numeric
/// bound (nodes, seconds, truncation, depth) cut the search short.
enum class Status { Holds, Fails, Unknown };

std::string_view to_string(Status s);

/// Conjunction in the three-valued logic: any FAILS wins, then any UNKNOWN.
constexpr Status operator&&(Status a, Status b) {
  if (a == Status::Fails || b == Status::Fails) return Status::Fails;
  if (a == Status::Unknown || b == Status::Unknown) return Status::Unknown;
  return Status::Holds;
}

struct SearchStats {
  std::uint64_t nodes = 0;
  std::uint64_t symmetry_prunes = 0;
};

}  // namespace rw
