#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "msrimg/forward.hpp"

namespace msrimg {

/// Shortest round-trip text for a double (17 significant digits, "%.17g").
std::string format_real(double x);

// MSR matrix text format, version 1:
//
//   msrimg-msr 1
//   N <n>
//   omega <omega>
//   provenance clean|noisy
//   noise <snr_db> <seed> <stream>      (one line per noise application)
//   data
//   <n lines, each with n "re im" pairs separated by spaces>
//
// Directions are the equiangular set of make_directions(N). Reals are written
// with 17 significant digits, so write then read reproduces every bit.
void write_msr(std::ostream& os, const MsrMatrix& k);
MsrMatrix read_msr(std::istream& is);

void write_msr_file(const std::filesystem::path& path, const MsrMatrix& k);
MsrMatrix read_msr_file(const std::filesystem::path& path);

}  // namespace msrimg
