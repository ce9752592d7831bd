#pragma once

namespace subfrac {

inline constexpr const char* version = "0.1.0";

}  // namespace subfrac
