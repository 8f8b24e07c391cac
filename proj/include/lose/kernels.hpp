// State-vector kernels. Each kernel exists twice: a plain serial loop that
// serves as the reference, and an OpenMP version used for large registers.
// The dispatching entry points pick one based on the vector length.
#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace lose::kernels {

using amp_t = std::complex<double>;

// Applies a dense 2^m x 2^m matrix (column-major) to the qubits sitting at
// `bits` (bit 0 = least significant bit of the basis index). bits[0] is the
// most significant bit of the matrix's local index.
void apply_matrix_serial(std::span<amp_t> amps, std::span<const unsigned> bits,
                         std::span<const amp_t> matrix);
void apply_matrix_parallel(std::span<amp_t> amps, std::span<const unsigned> bits,
                           std::span<const amp_t> matrix);
void apply_matrix(std::span<amp_t> amps, std::span<const unsigned> bits,
                  std::span<const amp_t> matrix);

// out[i] = |amps[i]|^2
void probabilities_serial(std::span<const amp_t> amps, std::span<double> out);
void probabilities_parallel(std::span<const amp_t> amps, std::span<double> out);
void probabilities(std::span<const amp_t> amps, std::span<double> out);

double norm_squared_serial(std::span<const amp_t> amps);
double norm_squared_parallel(std::span<const amp_t> amps);
double norm_squared(std::span<const amp_t> amps);

// Vectors shorter than this stay on the serial path.
inline constexpr std::size_t kParallelThreshold = std::size_t{1} << 14;

}  // namespace lose::kernels
