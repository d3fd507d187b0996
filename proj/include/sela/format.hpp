#pragma once

#include <charconv>
#include <string>
#include <string_view>

#include <Eigen/Core>

namespace sela {

/// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double value);

/// Comma-joined `format_double` of every entry.
std::string format_vector(const Eigen::VectorXd& v);

/// Strict full-string parse; returns false on trailing garbage or overflow.
bool parse_double(std::string_view text, double& out);
bool parse_int(std::string_view text, long long& out);

std::string_view trim(std::string_view s);

} // namespace sela
