#pragma once

#include "lose/qsim.hpp"

#include <string>
#include <vector>

namespace lose::gates {

Eigen::Matrix2cd identity();
Eigen::Matrix2cd pauli_x();
Eigen::Matrix2cd pauli_y();
Eigen::Matrix2cd pauli_z();
Eigen::Matrix2cd hadamard();

// exp(i*theta*sigma) for a Pauli matrix sigma.
Eigen::Matrix2cd exp_i_pauli(const Eigen::Matrix2cd& sigma, double theta);

// Controlled-rotation convention of the steering protocol: exp(+i*theta*sigma_x).
Eigen::Matrix2cd rx(double theta);

// Real rotation by theta: maps |+_b> to |+_{b+theta}>; equals exp(-i*theta*sigma_y).
Eigen::Matrix2cd rotate_y(double theta);

Operator single(const Eigen::Matrix2cd& m, const std::string& qubit);

// |0><0| (x) I + |1><1| (x) target_matrix, control first in acts_on.
Operator controlled(const std::string& control, const std::string& target,
                    const Eigen::Matrix2cd& target_matrix);

// sum_j |j><j| (x) blocks[j]; the control register is read big-endian and
// values without a block get the identity.
Operator controlled_by_value(const std::vector<std::string>& control, const std::string& target,
                             const std::vector<Eigen::Matrix2cd>& blocks);

Operator swap(const std::string& a, const std::string& b);

// Kronecker product, left factor most significant.
Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

}  // namespace lose::gates
