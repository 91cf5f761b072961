#pragma once

// Small output helpers: locale-independent numeric formatting and
// atomic write-then-rename file emission.

#include <string>

namespace qsphere {

// shortest round-trip-safe decimal form (17 significant digits)
std::string fmt_double(double v);

// writes to <path>.tmp then renames; throws NumericalError on I/O failure
void write_file_atomic(const std::string& path, const std::string& content);

// FNV-1a 64-bit, hex-encoded; stable across platforms
std::string fnv1a_hex(const std::string& data);

} // namespace qsphere
