#pragma once

#include <string>
#include <vector>

#include "mfp/equilibrium.hpp"
#include "mfp/types.hpp"

namespace mfp::io {

/// Shortest representation that round-trips the double exactly (printf %.17g).
std::string format_g17(double x);

// CSV writers. All files are UTF-8, comma separated, LF line endings, one
// header row, values printed with 17 significant digits so that parsing a
// file back reproduces the in-memory grid bit for bit. Rows iterate time
// (outer) then level (inner).

void write_value_csv(const std::string& path, const TimeGrid& grid, const ValuePath& V);
void write_distribution_csv(const std::string& path, const TimeGrid& grid,
                            const DistributionPath& m);
void write_policy_csv(const std::string& path, const TimeGrid& grid, const PolicyPath& policy);
void write_market_csv(const std::string& path, const TimeGrid& grid, const MeanPricePath& p_bar,
                      const DistributionPath& m);
void write_trace_csv(const std::string& path, const IterationTrace& trace);
void write_stability_csv(const std::string& path, double cv_V, double cv_pbar, double cv_m);
void write_montecarlo_csv(const std::string& path, const TimeGrid& grid,
                          const DistributionPath& ode, const DistributionPath& empirical);

void write_text_file(const std::string& path, const std::string& text);

/// Parses a CSV written by the writers above into cells (header included).
std::vector<std::vector<std::string>> read_csv(const std::string& path);

}  // namespace mfp::io
