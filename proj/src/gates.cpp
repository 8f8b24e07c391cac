#include "lose/gates.hpp"

#include <cmath>

namespace lose::gates {

using namespace std::complex_literals;

Eigen::Matrix2cd identity() { return Eigen::Matrix2cd::Identity(); }

Eigen::Matrix2cd pauli_x() {
  Eigen::Matrix2cd m;
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

Eigen::Matrix2cd pauli_y() {
  Eigen::Matrix2cd m;
  m << 0.0, -1i, 1i, 0.0;
  return m;
}

Eigen::Matrix2cd pauli_z() {
  Eigen::Matrix2cd m;
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

Eigen::Matrix2cd hadamard() {
  const double h = 1.0 / std::sqrt(2.0);
  Eigen::Matrix2cd m;
  m << h, h, h, -h;
  return m;
}

Eigen::Matrix2cd exp_i_pauli(const Eigen::Matrix2cd& sigma, double theta) {
  return std::cos(theta) * identity() + 1i * std::sin(theta) * sigma;
}

Eigen::Matrix2cd rx(double theta) { return exp_i_pauli(pauli_x(), theta); }

Eigen::Matrix2cd rotate_y(double theta) { return exp_i_pauli(pauli_y(), -theta); }

Operator single(const Eigen::Matrix2cd& m, const std::string& qubit) {
  return Operator(m, {qubit});
}

Operator controlled(const std::string& control, const std::string& target,
                    const Eigen::Matrix2cd& target_matrix) {
  return controlled_by_value({control}, target, {identity(), target_matrix});
}

Operator controlled_by_value(const std::vector<std::string>& control, const std::string& target,
                             const std::vector<Eigen::Matrix2cd>& blocks) {
  const Eigen::Index values = Eigen::Index{1} << control.size();
  if (static_cast<Eigen::Index>(blocks.size()) > values)
    throw std::invalid_argument("controlled_by_value: more blocks than control values");
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2 * values, 2 * values);
  for (Eigen::Index j = 0; j < values; ++j) {
    const Eigen::Matrix2cd b =
        j < static_cast<Eigen::Index>(blocks.size()) ? blocks[static_cast<std::size_t>(j)] : identity();
    m.block(2 * j, 2 * j, 2, 2) = b;
  }
  std::vector<std::string> labels = control;
  labels.push_back(target);
  return Operator(std::move(m), std::move(labels));
}

Operator swap(const std::string& a, const std::string& b) {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  m(0, 0) = m(1, 2) = m(2, 1) = m(3, 3) = 1.0;
  return Operator(m, {a, b});
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace lose::gates
