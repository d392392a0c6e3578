#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hessdamp/dynamics.hpp"
#include "hessdamp/optimizers.hpp"

namespace hessdamp::csv {

/// Fixed rendering with 17 significant digits.
std::string format_real(double v);

/// Coordinate column names: "x" in one dimension, "x1".."xn" otherwise.
std::vector<std::string> coordinate_names(std::string_view prefix, Index dim);

/// Columns: k, x..., value_error, grad_norm, dist, step, energy, n_grad_evals.
/// Absent optionals are written as empty fields. Each line of `comment` is
/// emitted first with a leading "# ".
void write_iterates(std::ostream& os, std::span<const IterateRecord> records, Index dim,
                    std::string_view comment = {});

/// Columns: t, x..., v..., value_error, traj_error, speed, energy.
void write_trajectory(std::ostream& os, std::span<const TrajectoryRecord> records, Index dim,
                      std::string_view comment = {});

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;  // empty fields parse as NaN

  /// Throws Error(kParseError) if the column is missing.
  std::vector<double> column(std::string_view name) const;
};

/// Reads a CSV written by the functions above; '#' lines are skipped.
Table read(std::istream& is);

}  // namespace hessdamp::csv
