#pragma once

namespace csl {

inline constexpr const char* kArtifactVersion = "1.0.0";
inline constexpr int kSchemaVersion = 1;

}  // namespace csl
