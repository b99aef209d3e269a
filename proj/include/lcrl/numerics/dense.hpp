#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <json.hpp>

namespace lcrl {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using IntMatrix = Eigen::MatrixXi;

/// Raised when a training or estimation step produces non-finite values.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when operand shapes do not agree.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

bool all_finite(const Eigen::Ref<const Matrix>& m);

void require_size(const Vector& v, Eigen::Index expected, const std::string& what);

// Rows-of-arrays JSON form: [[a, b], [c, d]].
nlohmann::json matrix_to_json(const Eigen::Ref<const Matrix>& m);
nlohmann::json int_matrix_to_json(const Eigen::Ref<const IntMatrix>& m);
Matrix matrix_from_json(const nlohmann::json& j);
IntMatrix int_matrix_from_json(const nlohmann::json& j);

nlohmann::json vector_to_json(const Vector& v);
Vector vector_from_json(const nlohmann::json& j);

// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

}  // namespace lcrl
