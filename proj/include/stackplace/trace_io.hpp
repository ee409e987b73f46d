#pragma once

// Placement traces as columnar text.
//
//   # stackplace-trace 1
//   # outcome <Outcome>
//   # final_com <x> <y> <z>            (or "none")
//   [iterations]
//   <header row>
//   <one row per iteration, whitespace separated>
//   [descent]
//   <header row>
//   <one row per descent sample>
//
// Missing estimates are written as "nan". Numbers use 17 significant digits,
// so a trace reads back exactly.

#include "stackplace/policy.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace stackplace {

inline constexpr int kTraceFormatVersion = 1;

void write_trace(std::ostream& out, const PlacementTrace& trace);
void write_trace(const std::filesystem::path& path, const PlacementTrace& trace);

/// Throws std::runtime_error on malformed input.
PlacementTrace read_trace(std::istream& in);
PlacementTrace read_trace(const std::filesystem::path& path);

/// Force and torque norms during descent, one row per sample:
///   iteration t tip_z force_norm torque_norm
/// Throws std::invalid_argument if the trace has no descent samples.
void emit_contact_plot_data(const PlacementTrace& trace, std::ostream& out);
void emit_contact_plot_data(const PlacementTrace& trace, const std::filesystem::path& path);

}  // namespace stackplace
