#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "sgsim/experiment.hpp"
#include "sgsim/field.hpp"

namespace sgsim {

/// One report row with its identifiers.
struct ReportRow {
  std::string scenario_id;
  double gradient = 0.0;  // T/m
  double voltage = 0.0;   // V
  SplitReport report;
};

/// scenario_id,gradient,voltage,splitting_m,lorentz_deflection_m,resolved,
/// exit_splitting_m,standard_error_m,lost
void write_report_csv(std::ostream& out, std::span<const ReportRow> rows);

/// index,y,z,spin_sign
void write_hits_csv(std::ostream& out, const ScreenImage& image);

/// Binary P5 graymap, rows from highest z to lowest, columns increasing y,
/// grey = round(255 * count / max count).
void write_screen_pgm(std::ostream& out, const ScreenImage& image);

/// y,z,H,B,dBdz,epsilon
void write_fieldmap_csv(std::ostream& out, const InhomogeneityMap& map);

/// Binary P5 graymap of |grad |B|| mapped linearly from the grid minimum (0)
/// to the grid maximum (255); rows from highest z to lowest.
void write_fieldmap_pgm(std::ostream& out, const InhomogeneityMap& map);

}  // namespace sgsim
