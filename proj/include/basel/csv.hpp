#pragma once

#include <string>
#include <vector>

#include "basel/config.hpp"
#include "basel/trajectory.hpp"

namespace basel {

// All writers go through a temp file renamed into place, so a failed run
// never leaves a partial result behind.
bool write_file_atomic(const std::string& path, const std::string& content,
                       std::string* error = nullptr);

// Header: t_years,sigma_sq,w_f,price,n,l_b,p_lag,leverage,target_leverage,
// equity,assets_bank,relative_size,delta_b,status. One row per completed
// step, carrying the state it produced and the balance sheet at that state;
// the status column records what happened during the step (clamping,
// ownership excursion) plus insolvency at the resulting state. A diverged
// run simply ends early; the manifest carries the reason.
std::string trajectory_csv(const Trajectory& t);

bool write_trajectory_csv(const Trajectory& t, const std::string& path,
                          std::string* error = nullptr);

std::string table_csv(const std::string& header,
                      const std::vector<std::vector<std::string>>& rows);

// Comment header (tool version, start time, termination status) followed by
// the canonical config; the file parses as a config, so a run can be
// repeated from its manifest alone.
std::string manifest_text(const RunConfig& cfg, const std::string& version,
                          const std::string& started,
                          const std::string& status);

std::string utc_timestamp();

}  // namespace basel
