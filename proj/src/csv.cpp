#include "basel/csv.hpp"

#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace basel {

bool write_file_atomic(const std::string& path, const std::string& content,
                       std::string* error) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) {
      if (error) *error = "cannot open " + tmp + " for writing";
      return false;
    }
    os << content;
    os.flush();
    if (!os) {
      if (error) *error = "write failed for " + tmp;
      std::remove(tmp.c_str());
      return false;
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    if (error) *error = "rename to " + path + " failed: " + ec.message();
    std::remove(tmp.c_str());
    return false;
  }
  return true;
}

namespace {

std::string row_status(bool clamped, bool n_excursion, bool insolvent) {
  std::string s;
  if (clamped) s = "clamped";
  if (insolvent) s += s.empty() ? "insolvent" : "|insolvent";
  if (n_excursion) s += s.empty() ? "n_excursion" : "|n_excursion";
  return s.empty() ? "live" : s;
}

void append_row(std::ostringstream& os, double t_years, const Vec6d& x,
                const Derived<double>& d, const std::string& status) {
  os << format_double(t_years) << ',' << format_double(x[kSigmaSq]) << ','
     << format_double(x[kWF]) << ',' << format_double(x[kPrice]) << ','
     << format_double(x[kN]) << ',' << format_double(x[kLB]) << ','
     << format_double(x[kPLag]) << ',' << format_double(d.leverage) << ','
     << format_double(d.target_leverage) << ',' << format_double(d.equity)
     << ',' << format_double(d.assets_bank) << ','
     << format_double(d.relative_size) << ',' << format_double(d.delta_b)
     << ',' << status << '\n';
}

}  // namespace

std::string trajectory_csv(const Trajectory& t) {
  std::ostringstream os;
  os << "t_years,sigma_sq,w_f,price,n,l_b,p_lag,leverage,target_leverage,"
        "equity,assets_bank,relative_size,delta_b,status\n";
  // rows[i] holds the state entering step i and the flags of that step; the
  // state the step produced is rows[i + 1] (or final_state for the last).
  const std::size_t completed =
      t.diverged() ? t.rows.size() - 1 : t.rows.size();
  for (std::size_t i = 0; i < completed; ++i) {
    const Vec6d& produced =
        i + 1 < t.rows.size() ? t.rows[i + 1].state : t.final_state;
    const Derived<double>& d =
        i + 1 < t.rows.size() ? t.rows[i + 1].derived : t.final_derived;
    append_row(os, t.time_at(i + 1), produced, d,
               row_status(t.rows[i].clamped, t.rows[i].n_excursion,
                          d.insolvent));
  }
  return os.str();
}

bool write_trajectory_csv(const Trajectory& t, const std::string& path,
                          std::string* error) {
  return write_file_atomic(path, trajectory_csv(t), error);
}

std::string table_csv(const std::string& header,
                      const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream os;
  os << header << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      os << row[i];
    }
    os << '\n';
  }
  return os.str();
}

std::string manifest_text(const RunConfig& cfg, const std::string& version,
                          const std::string& started,
                          const std::string& status) {
  std::ostringstream os;
  os << "# basel-cli " << version << "\n";
  os << "# started: " << started << "\n";
  os << "# status: " << status << "\n";
  os << serialize_config(cfg);
  return os.str();
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace basel
