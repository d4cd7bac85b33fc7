// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace exitlab {

inline constexpr const char* kToolName = "exitlab";
inline constexpr const char* kVersion = "1.0.0";

}  // namespace exitlab
