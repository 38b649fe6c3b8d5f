#pragma once

#include <string>
#include <vector>

#include "socsim/engine.hpp"
#include "socsim/types.hpp"

namespace socsim {

/// Shortest exact decimal form (round-trips bit-identically).
std::string format_double(double value);

inline constexpr const char* kTrajectoryHeader = "# socsim-trajectory v1";
inline constexpr const char* kAttitudesHeader = "# socsim-attitudes v1";

/// Columnar engagement table: header line, column names, one row per day
/// (t, views, likes, comments, shares), tab-separated.
void write_trajectory_file(const Trajectory& trajectory, const std::string& path);

/// Reads a trajectory table back; only engagement columns are populated.
Trajectory read_trajectory_file(const std::string& path);

/// Per-agent attitude series: header line, "t" plus one column per agent id,
/// one row per timestep starting at t = 0.
void write_attitudes_file(const Trajectory& trajectory, const std::string& path);

/// Reads an attitude table into agent_ids + the attitude matrix.
Trajectory read_attitudes_file(const std::string& path);

/// Newline-delimited structured phase records for audit.
void write_run_log(const std::vector<LogRecord>& log, const std::string& path);

} // namespace socsim
