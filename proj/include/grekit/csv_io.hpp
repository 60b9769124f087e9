#pragma once

#include <filesystem>
#include <string>

#include <Eigen/Dense>

#include "grekit/growth_frag.hpp"
#include "grekit/transport_slab.hpp"
#include "grekit/weighted_ops.hpp"

namespace grekit {

/// 17 significant digits; "inf", "-inf" and "nan" for non-finite values.
std::string format_double(double x);

/// Row-major CSV preceded by a `# rows m cols n` header line.
Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path);
void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m);

/// A matrix file with one row or one column.
Eigen::VectorXd read_vector_csv(const std::filesystem::path& path);

void write_csv(const std::filesystem::path& path, const MarginReport& report);
void write_csv(const std::filesystem::path& path, const DiscreteTrace& trace);
void write_csv(const std::filesystem::path& path, const GrowthTrace& trace);
void write_csv(const std::filesystem::path& path, const TransportTrace& trace);

}  // namespace grekit
