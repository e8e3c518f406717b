#pragma once

namespace lrc {

inline constexpr const char* kEngineVersion = "lrc-0.1.0";

}  // namespace lrc
