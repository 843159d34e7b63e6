#pragma once

namespace lossforge {

inline constexpr const char* kVersion = "0.1.0";

// Version tag for machine-readable reports.  Bump when report layout changes.
inline constexpr int kReportSchemaVersion = 1;

}  // namespace lossforge
