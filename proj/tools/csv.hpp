#pragma once

#include <Eigen/Dense>

#include <string>

namespace uniband::cli {

//! Reads a one-column numeric CSV. The first line may be a non-numeric
//! header; any later non-numeric row raises config_error naming the line.
//! Parsing is locale-independent and accepts LF and CRLF endings.
Eigen::VectorXd read_csv_column(const std::string& path);

} // namespace uniband::cli
