#pragma once

namespace qbc {

inline constexpr const char* kToolVersion = "0.1.0";

} // namespace qbc
