#pragma once

namespace fracneumann {

inline constexpr const char* artifact_version = "fracneumann/0.1.0";
inline constexpr int artifact_schema = 1;

}  // namespace fracneumann
