#pragma once

namespace ltcn {

inline constexpr const char* kVersion = "0.1.0";

/// Version number of the model/manifest file formats.
inline constexpr int kModelFormatVersion = 1;

} // namespace ltcn
