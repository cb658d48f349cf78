#pragma once

namespace creutz {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr const char* kToolName = "creutz-sim";

}  // namespace creutz
