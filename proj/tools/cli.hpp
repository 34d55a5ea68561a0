#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "minty/data_model.hpp"

namespace minty::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_check_failed = 1;
inline constexpr int exit_usage = 2;

/// Runs the command line `args` (program name excluded). Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "Variable 1 OR Variable 5   +1.63" style rendering, intercept last.
std::string render_scorecard(const RuleModel& model);

/// Signed 2-decimal rendering: "+1.63", "−0.57".
std::string format_coefficient(double v);

/// Number of UTF-8 code points in `s`.
std::size_t display_width(const std::string& s) noexcept;

/// `count` log-spaced values from lo to hi inclusive.
std::vector<double> log_space(double lo, double hi, std::size_t count);

} // namespace minty::cli
