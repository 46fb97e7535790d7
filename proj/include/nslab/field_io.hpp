#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "nslab/field.hpp"

namespace nslab {

// Binary snapshot layout (little-endian, packed):
//   char[8]  magic "NSLABF01"
//   int32    dim, component count, cells x, cells y (1 in 1D)
//   float64  spacing x, spacing y (0 in 1D), time
//   float64  payload: components back to back, each row-major with x fastest
struct Snapshot {
  Grid grid;
  double time = 0.0;
  std::vector<ScalarField> components;
};

void write_snapshot(const std::filesystem::path& path, const Snapshot& snap);
Snapshot read_snapshot(const std::filesystem::path& path);

// CSV with columns x[,y] followed by one column per component.
void write_field_csv(const std::filesystem::path& path, const std::vector<ScalarField>& components,
                     const std::vector<std::string>& names);

}  // namespace nslab
