#pragma once

#include <string>

#include "hkflow/measures.hpp"

namespace hkflow {

/// CSV columns: x0,...,x{d-1},w.
void write_measure_csv(const std::string& path, const DiscreteMeasure& m);
DiscreteMeasure read_measure_csv(const std::string& path);

/// CSV columns: cell_index,x0,...,x{d-1},u.
void write_grid_csv(const std::string& path, const GridDensity& u);

/// Reads the value column of a grid CSV written by write_grid_csv; the grid
/// geometry must be supplied by the caller.
std::vector<double> read_grid_values_csv(const std::string& path);

/// Writes content to path atomically (temp file in the same directory, then
/// rename).
void atomic_write(const std::string& path, const std::string& content);

}  // namespace hkflow
