#pragma once

namespace splashcert {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace splashcert
