#pragma once

namespace gammalab {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kReportSchema = "gammalab-report/1";

}  // namespace gammalab
