#pragma once

namespace cqd {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace cqd
