#pragma once

namespace skewprice {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace skewprice
