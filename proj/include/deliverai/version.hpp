#pragma once

namespace deliverai {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace deliverai
