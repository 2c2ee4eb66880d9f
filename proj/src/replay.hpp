#pragma once

#include "rw/io.hpp"

namespace rw::cli {

struct ReplaySummary {
  int verified = 0;
  int exhaustion = 0;
  std::map<std::string, int> by_kind;
};

/// Re-checks every certificate of a report against the inputs embedded in it.
/// Throws CorruptCertificate on the first mismatch.
ReplaySummary replay(const io::ordered_json& report);

}  // namespace rw::cli
