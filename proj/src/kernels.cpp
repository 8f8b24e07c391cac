#include "lose/kernels.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lose::kernels {
namespace {

struct Layout {
  std::vector<std::size_t> offsets;  // local index -> global bit pattern
  std::vector<unsigned> sorted_bits;
  std::size_t dim = 0;
  std::size_t outer = 0;
};

Layout make_layout(std::size_t n_amps, std::span<const unsigned> bits,
                   std::size_t matrix_size) {
  const std::size_t m = bits.size();
  Layout lay;
  lay.dim = std::size_t{1} << m;
  if (matrix_size != lay.dim * lay.dim)
    throw std::invalid_argument("kernel: matrix size does not match target count");
  if ((n_amps >> m) << m != n_amps || n_amps < lay.dim)
    throw std::invalid_argument("kernel: state too small for targets");
  lay.offsets.resize(lay.dim);
  for (std::size_t l = 0; l < lay.dim; ++l) {
    std::size_t off = 0;
    for (std::size_t j = 0; j < m; ++j)
      if ((l >> (m - 1 - j)) & 1U) off |= std::size_t{1} << bits[j];
    lay.offsets[l] = off;
  }
  lay.sorted_bits.assign(bits.begin(), bits.end());
  std::sort(lay.sorted_bits.begin(), lay.sorted_bits.end());
  if (std::adjacent_find(lay.sorted_bits.begin(), lay.sorted_bits.end()) !=
      lay.sorted_bits.end())
    throw std::invalid_argument("kernel: repeated target bit");
  lay.outer = n_amps >> m;
  return lay;
}

// Spreads the bits of `x` around zero bits inserted at `sorted_bits`.
inline std::size_t deposit(std::size_t x, const std::vector<unsigned>& sorted_bits) {
  for (unsigned p : sorted_bits) {
    const std::size_t low = x & ((std::size_t{1} << p) - 1);
    x = ((x >> p) << (p + 1)) | low;
  }
  return x;
}

inline void apply_block(std::span<amp_t> amps, const Layout& lay,
                        std::span<const amp_t> matrix, std::size_t o,
                        amp_t* in, amp_t* out) {
  const std::size_t base = deposit(o, lay.sorted_bits);
  for (std::size_t l = 0; l < lay.dim; ++l) in[l] = amps[base + lay.offsets[l]];
  for (std::size_t r = 0; r < lay.dim; ++r) out[r] = 0.0;
  for (std::size_t c = 0; c < lay.dim; ++c) {
    const amp_t v = in[c];
    if (v == amp_t{}) continue;
    const amp_t* col = matrix.data() + c * lay.dim;
    for (std::size_t r = 0; r < lay.dim; ++r) out[r] += col[r] * v;
  }
  for (std::size_t l = 0; l < lay.dim; ++l) amps[base + lay.offsets[l]] = out[l];
}

bool use_parallel(std::size_t n) {
#ifdef _OPENMP
  return n >= kParallelThreshold && omp_get_max_threads() > 1;
#else
  (void)n;
  return false;
#endif
}

}  // namespace

void apply_matrix_serial(std::span<amp_t> amps, std::span<const unsigned> bits,
                         std::span<const amp_t> matrix) {
  const Layout lay = make_layout(amps.size(), bits, matrix.size());
  std::vector<amp_t> in(lay.dim), out(lay.dim);
  for (std::size_t o = 0; o < lay.outer; ++o)
    apply_block(amps, lay, matrix, o, in.data(), out.data());
}

void apply_matrix_parallel(std::span<amp_t> amps, std::span<const unsigned> bits,
                           std::span<const amp_t> matrix) {
  const Layout lay = make_layout(amps.size(), bits, matrix.size());
  const auto outer = static_cast<long long>(lay.outer);
#pragma omp parallel
  {
    std::vector<amp_t> in(lay.dim), out(lay.dim);
#pragma omp for schedule(static)
    for (long long o = 0; o < outer; ++o)
      apply_block(amps, lay, matrix, static_cast<std::size_t>(o), in.data(), out.data());
  }
}

void apply_matrix(std::span<amp_t> amps, std::span<const unsigned> bits,
                  std::span<const amp_t> matrix) {
  if (use_parallel(amps.size()))
    apply_matrix_parallel(amps, bits, matrix);
  else
    apply_matrix_serial(amps, bits, matrix);
}

void probabilities_serial(std::span<const amp_t> amps, std::span<double> out) {
  if (out.size() != amps.size()) throw std::invalid_argument("probabilities: size mismatch");
  for (std::size_t i = 0; i < amps.size(); ++i) out[i] = std::norm(amps[i]);
}

void probabilities_parallel(std::span<const amp_t> amps, std::span<double> out) {
  if (out.size() != amps.size()) throw std::invalid_argument("probabilities: size mismatch");
  const auto n = static_cast<long long>(amps.size());
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < n; ++i) out[i] = std::norm(amps[i]);
}

void probabilities(std::span<const amp_t> amps, std::span<double> out) {
  if (use_parallel(amps.size()))
    probabilities_parallel(amps, out);
  else
    probabilities_serial(amps, out);
}

double norm_squared_serial(std::span<const amp_t> amps) {
  double s = 0.0;
  for (const auto& a : amps) s += std::norm(a);
  return s;
}

double norm_squared_parallel(std::span<const amp_t> amps) {
  double s = 0.0;
  const auto n = static_cast<long long>(amps.size());
#pragma omp parallel for reduction(+ : s) schedule(static)
  for (long long i = 0; i < n; ++i) s += std::norm(amps[i]);
  return s;
}

double norm_squared(std::span<const amp_t> amps) {
  return use_parallel(amps.size()) ? norm_squared_parallel(amps) : norm_squared_serial(amps);
}

}  // namespace lose::kernels
