#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "conslaw/grid.hpp"
#include "conslaw/solver.hpp"

namespace conslaw {

/// Binary frame layout (little endian):
///   "CLFRAME1", uint32 rank, uint32 reserved (0),
///   uint64 shape[rank], double origin[rank], double spacing[rank], double time,
///   double values[size] in row-major order (axis 0 slowest).
/// A trajectory file is a sequence of frames.
void write_frame(std::ostream& out, const ScalarField& field);
ScalarField read_frame(std::istream& in);

void write_trajectory(const std::filesystem::path& path, const Trajectory& traj);
/// Flux name and solver configuration are not stored; pass them back in.
Trajectory read_trajectory(const std::filesystem::path& path, const std::string& flux_name,
                           const SolverConfig& config = {});

/// Comma-separated rows with a header line; doubles use 17 significant digits.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

/// Frame as CSV: one row per cell with the center coordinates and the value.
void write_frame_csv(const std::filesystem::path& path, const ScalarField& field);
/// Inverse of write_frame_csv: a header line, then one row per cell in
/// row-major order. Throws InputError unless the centers form a uniform grid.
ScalarField read_frame_csv(const std::filesystem::path& path, double time = 0.0);

/// Lowercase hex SHA-256 of a file's bytes / of a string.
std::string sha256_file(const std::filesystem::path& path);
std::string sha256_hex(const std::string& data);

std::string format_double(double v);

}  // namespace conslaw
