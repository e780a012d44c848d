#pragma once

namespace escat {
inline constexpr const char *kVersion = "0.1.0";
}
