#include "lose/qsim.hpp"

#include "lose/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace lose {
namespace {

constexpr double kNormTol = 1e-12;
constexpr double kNullBranch = 1e-20;

std::vector<unsigned> bits_for(const Register& reg, std::span<const std::string> labels) {
  std::vector<unsigned> out;
  out.reserve(labels.size());
  for (const auto& l : labels) out.push_back(reg.bit_of(l));
  return out;
}

std::vector<unsigned> complement_bits(const Register& reg, std::span<const unsigned> used) {
  std::vector<unsigned> out;
  for (std::size_t i = 0; i < reg.size(); ++i) {
    const auto b = static_cast<unsigned>(reg.size() - 1 - i);
    if (std::find(used.begin(), used.end(), b) == used.end()) out.push_back(b);
  }
  return out;
}

std::vector<std::string> sorted_in_register(const Register& reg,
                                            std::span<const std::string> keep) {
  if (keep.empty()) throw std::invalid_argument("partial_trace: keep list is empty");
  std::set<std::string> wanted(keep.begin(), keep.end());
  if (wanted.size() != keep.size()) throw std::invalid_argument("partial_trace: repeated label");
  std::vector<std::string> out;
  for (const auto& q : reg.qubits())
    if (wanted.count(q.label)) out.push_back(q.label);
  if (out.size() != keep.size()) throw std::invalid_argument("partial_trace: unknown label");
  return out;
}

PureState apply_any(const Operator& op, const PureState& state) {
  if (!op.is_unitary()) throw std::invalid_argument("operator is not unitary");
  const auto bits = bits_for(state.reg(), op.acts_on);
  Amplitudes amps = state.amplitudes();
  kernels::apply_matrix(amps, bits,
                        std::span<const cplx>(op.matrix.data(),
                                              static_cast<std::size_t>(op.matrix.size())));
  return PureState(state.reg(), std::move(amps));
}

}  // namespace

std::string_view to_string(Party p) { return p == Party::alice ? "Alice" : "Bob"; }
Party other(Party p) { return p == Party::alice ? Party::bob : Party::alice; }

// ---------------------------------------------------------------- Register

Register::Register(std::vector<Qubit> qubits) : qubits_(std::move(qubits)) {
  std::set<std::string> seen;
  for (const auto& q : qubits_) {
    if (q.label.empty()) throw std::invalid_argument("register: empty qubit label");
    if (!seen.insert(q.label).second)
      throw std::invalid_argument("register: duplicate label '" + q.label + "'");
  }
  if (qubits_.size() > 30) throw std::invalid_argument("register: too many qubits");
}

bool Register::contains(std::string_view label) const {
  return std::any_of(qubits_.begin(), qubits_.end(),
                     [&](const Qubit& q) { return q.label == label; });
}

std::size_t Register::index_of(std::string_view label) const {
  for (std::size_t i = 0; i < qubits_.size(); ++i)
    if (qubits_[i].label == label) return i;
  throw std::invalid_argument("register: unknown label '" + std::string(label) + "'");
}

unsigned Register::bit_of(std::string_view label) const {
  return static_cast<unsigned>(qubits_.size() - 1 - index_of(label));
}

Party Register::party_of(std::string_view label) const { return qubits_[index_of(label)].party; }

std::vector<std::string> Register::labels() const {
  std::vector<std::string> out;
  for (const auto& q : qubits_) out.push_back(q.label);
  return out;
}

std::vector<std::string> Register::labels_of(Party p) const {
  std::vector<std::string> out;
  for (const auto& q : qubits_)
    if (q.party == p) out.push_back(q.label);
  return out;
}

Register Register::concat(const Register& other) const {
  std::vector<Qubit> all = qubits_;
  all.insert(all.end(), other.qubits_.begin(), other.qubits_.end());
  return Register(std::move(all));
}

Register Register::subset(std::span<const std::string> keep) const {
  const auto names = sorted_in_register(*this, keep);
  std::vector<Qubit> out;
  for (const auto& n : names) out.push_back(qubits_[index_of(n)]);
  return Register(std::move(out));
}

Register Register::without(std::string_view label) const {
  (void)index_of(label);
  std::vector<Qubit> out;
  for (const auto& q : qubits_)
    if (q.label != label) out.push_back(q);
  return Register(std::move(out));
}

// --------------------------------------------------------------- PureState

PureState::PureState(Register reg, Amplitudes amps) : reg_(std::move(reg)), amps_(std::move(amps)) {
  if (amps_.size() != reg_.dimension())
    throw std::invalid_argument("state: amplitude count does not match register dimension");
  const double n2 = kernels::norm_squared(amps_);
  if (std::abs(std::sqrt(n2) - 1.0) > kNormTol) {
    std::ostringstream msg;
    msg << "state: norm " << std::sqrt(n2) << " differs from 1";
    throw std::invalid_argument(msg.str());
  }
}

PureState PureState::basis(Register reg, std::size_t index) {
  Amplitudes amps(reg.dimension(), cplx{});
  if (index >= amps.size()) throw std::invalid_argument("state: basis index out of range");
  amps[index] = 1.0;
  return PureState(std::move(reg), std::move(amps));
}

PureState PureState::normalized(Register reg, Amplitudes amps) {
  const double n = std::sqrt(kernels::norm_squared(amps));
  if (n < 1e-300) throw std::invalid_argument("state: cannot normalise the zero vector");
  for (auto& a : amps) a /= n;
  return PureState(std::move(reg), std::move(amps));
}

// ---------------------------------------------------------------- Operator

Operator::Operator(Eigen::MatrixXcd m, std::vector<std::string> labels)
    : matrix(std::move(m)), acts_on(std::move(labels)) {
  std::set<std::string> uniq(acts_on.begin(), acts_on.end());
  if (uniq.size() != acts_on.size()) throw std::invalid_argument("operator: repeated label");
  const Eigen::Index dim = Eigen::Index{1} << acts_on.size();
  if (matrix.rows() != dim || matrix.cols() != dim)
    throw std::invalid_argument("operator: matrix dimension does not match qubit count");
}

bool Operator::is_unitary(double tol) const {
  const Eigen::MatrixXcd d =
      matrix.adjoint() * matrix - Eigen::MatrixXcd::Identity(matrix.rows(), matrix.cols());
  return d.cwiseAbs().maxCoeff() <= tol;
}

Operator Operator::adjoint() const { return Operator(matrix.adjoint(), acts_on); }

// ----------------------------------------------------------- DensityMatrix

DensityMatrix::DensityMatrix(Register reg, Eigen::MatrixXcd m) : reg_(std::move(reg)), m_(std::move(m)) {
  const auto dim = static_cast<Eigen::Index>(reg_.dimension());
  if (m_.rows() != dim || m_.cols() != dim)
    throw std::invalid_argument("density matrix: dimension mismatch");
  if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("density matrix: not Hermitian");
  if (std::abs(m_.trace() - cplx(1.0)) > 1e-12)
    throw std::invalid_argument("density matrix: trace differs from 1");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10)
    throw std::invalid_argument("density matrix: negative eigenvalue");
}

DensityMatrix DensityMatrix::from_pure(const PureState& s) {
  Eigen::Map<const Eigen::VectorXcd> v(s.amplitudes().data(),
                                       static_cast<Eigen::Index>(s.dimension()));
  return DensityMatrix(s.reg(), v * v.adjoint());
}

// ------------------------------------------------------------------ Basis

std::pair<Eigen::Vector2cd, Eigen::Vector2cd> Basis::vectors() const {
  Eigen::Vector2cd plus, minus;
  switch (kind_) {
    case Kind::computational:
      plus << 1.0, 0.0;
      minus << 0.0, 1.0;
      break;
    case Kind::x: {
      const double h = 1.0 / std::sqrt(2.0);
      plus << h, h;
      minus << h, -h;
      break;
    }
    case Kind::rotated:
      plus << std::cos(angle_), std::sin(angle_);
      minus << std::sin(angle_), -std::cos(angle_);
      break;
  }
  return {plus, minus};
}

std::string Basis::tag() const {
  switch (kind_) {
    case Kind::computational:
      return "z";
    case Kind::x:
      return "x";
    case Kind::rotated: {
      std::ostringstream s;
      s.precision(17);
      s << "rot(" << angle_ << ")";
      return s.str();
    }
  }
  return "?";
}

// ------------------------------------------------------------- operations

PureState tensor(const PureState& a, const PureState& b) {
  Register reg = a.reg().concat(b.reg());
  Amplitudes amps(a.dimension() * b.dimension());
  for (std::size_t i = 0; i < a.dimension(); ++i)
    for (std::size_t j = 0; j < b.dimension(); ++j)
      amps[i * b.dimension() + j] = a.amplitude(i) * b.amplitude(j);
  return PureState::normalized(std::move(reg), std::move(amps));
}

PureState tensor(std::span<const PureState> parts) {
  if (parts.empty()) throw std::invalid_argument("tensor: no parts");
  PureState acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) acc = tensor(acc, parts[i]);
  return acc;
}

PureState apply_local(const Operator& op, const PureState& state) {
  if (op.acts_on.empty()) throw std::invalid_argument("apply_local: operator acts on nothing");
  const Party p = state.reg().party_of(op.acts_on.front());
  for (const auto& l : op.acts_on)
    if (state.reg().party_of(l) != p)
      throw LocalityViolation("apply_local: operator spans both parties");
  return apply_any(op, state);
}

PureState apply_global(const Operator& op, const PureState& state) { return apply_any(op, state); }

std::pair<Branch, Branch> measure(const PureState& state, std::string_view qubit,
                                  const Basis& basis) {
  const unsigned bit = state.reg().bit_of(qubit);
  const auto [vp, vm] = basis.vectors();
  auto project = [&](const Eigen::Vector2cd& v, int outcome) {
    const Eigen::Matrix2cd proj = v * v.adjoint();
    Amplitudes amps = state.amplitudes();
    const unsigned bits[1] = {bit};
    kernels::apply_matrix(amps, bits, std::span<const cplx>(proj.data(), 4));
    Branch br;
    br.probability = kernels::norm_squared(amps);
    br.records.push_back(Record{std::string(qubit), basis.tag(), outcome});
    if (br.probability > kNullBranch) br.state = PureState::normalized(state.reg(), std::move(amps));
    return br;
  };
  return {project(vp, +1), project(vm, -1)};
}

Collapsed collapse(const PureState& state, std::string_view qubit, const Basis& basis,
                   int outcome) {
  if (outcome != 1 && outcome != -1) throw std::invalid_argument("collapse: outcome must be +1 or -1");
  const unsigned bit = state.reg().bit_of(qubit);
  const auto vecs = basis.vectors();
  const Eigen::Vector2cd v = outcome == 1 ? vecs.first : vecs.second;
  const cplx c0 = std::conj(v[0]), c1 = std::conj(v[1]);
  const std::size_t half = state.dimension() / 2;
  const std::size_t low_mask = (std::size_t{1} << bit) - 1;
  Amplitudes out(half);
  for (std::size_t j = 0; j < half; ++j) {
    const std::size_t i0 = ((j & ~low_mask) << 1) | (j & low_mask);
    const std::size_t i1 = i0 | (std::size_t{1} << bit);
    out[j] = c0 * state.amplitude(i0) + c1 * state.amplitude(i1);
  }
  Collapsed c;
  c.probability = kernels::norm_squared(out);
  if (c.probability > kNullBranch)
    c.state = PureState::normalized(state.reg().without(qubit), std::move(out));
  return c;
}

DensityMatrix partial_trace(const PureState& state, std::span<const std::string> keep) {
  const auto names = sorted_in_register(state.reg(), keep);
  const auto kb = bits_for(state.reg(), names);
  const auto rb = complement_bits(state.reg(), kb);
  Eigen::MatrixXcd m(Eigen::Index{1} << kb.size(), Eigen::Index{1} << rb.size());
  for (std::size_t i = 0; i < state.dimension(); ++i)
    m(static_cast<Eigen::Index>(gather_bits(i, kb)), static_cast<Eigen::Index>(gather_bits(i, rb))) =
        state.amplitude(i);
  Eigen::MatrixXcd rho = m * m.adjoint();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return DensityMatrix(state.reg().subset(names), std::move(rho));
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::string> keep) {
  const auto names = sorted_in_register(rho.reg(), keep);
  const auto kb = bits_for(rho.reg(), names);
  const auto rb = complement_bits(rho.reg(), kb);
  const auto dk = Eigen::Index{1} << kb.size();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dk, dk);
  const auto dim = static_cast<std::size_t>(rho.matrix().rows());
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      if (gather_bits(i, rb) == gather_bits(j, rb))
        out(static_cast<Eigen::Index>(gather_bits(i, kb)), static_cast<Eigen::Index>(gather_bits(j, kb))) +=
            rho.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  return DensityMatrix(rho.reg().subset(names), std::move(out));
}

double von_neumann_entropy(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.matrix(), Eigen::EigenvaluesOnly);
  double h = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double l = es.eigenvalues()[i];
    if (l > 1e-15) h -= l * std::log2(l);
  }
  return h;
}

double entanglement_entropy(const PureState& state, Party cut) {
  auto side = state.reg().labels_of(cut);
  auto rest = state.reg().labels_of(other(cut));
  if (side.empty() || rest.empty()) return 0.0;
  const auto& smaller = side.size() <= rest.size() ? side : rest;
  return von_neumann_entropy(partial_trace(state, smaller));
}

cplx inner_product(const PureState& a, const PureState& b) {
  if (!(a.reg() == b.reg())) throw std::invalid_argument("inner product: register mismatch");
  cplx s{};
  for (std::size_t i = 0; i < a.dimension(); ++i) s += std::conj(a.amplitude(i)) * b.amplitude(i);
  return s;
}

bool equal_up_to_global_phase(const PureState& a, const PureState& b, double tol) {
  return std::abs(inner_product(a, b)) >= 1.0 - tol;
}

double ppt_min_eigenvalue(const DensityMatrix& rho, Party transpose_party) {
  const Register& reg = rho.reg();
  if (reg.size() != 2 || reg[0].party == reg[1].party)
    throw std::invalid_argument("ppt: expects one qubit per party");
  const unsigned tb = reg[0].party == transpose_party ? 1U : 0U;  // bit of the transposed qubit
  Eigen::Matrix4cd pt;
  for (unsigned i = 0; i < 4; ++i)
    for (unsigned j = 0; j < 4; ++j) {
      const unsigned bi = (i >> tb) & 1U, bj = (j >> tb) & 1U;
      const unsigned ii = (i & ~(1U << tb)) | (bj << tb);
      const unsigned jj = (j & ~(1U << tb)) | (bi << tb);
      pt(i, j) = rho.matrix()(ii, jj);
    }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(pt, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

PureState reorder(const PureState& state, std::span<const std::string> order) {
  if (order.size() != state.reg().size()) throw std::invalid_argument("reorder: not a permutation");
  std::vector<Qubit> qs;
  for (const auto& l : order) qs.push_back(state.reg()[state.reg().index_of(l)]);
  Register target(std::move(qs));
  const auto src_bits = bits_for(state.reg(), target.labels());
  Amplitudes out(state.dimension());
  for (std::size_t i = 0; i < state.dimension(); ++i) out[gather_bits(i, src_bits)] = state.amplitude(i);
  return PureState(std::move(target), std::move(out));
}

std::vector<double> probabilities(const PureState& state) {
  std::vector<double> p(state.dimension());
  kernels::probabilities(state.amplitudes(), p);
  return p;
}

Eigen::MatrixXcd embed(const Operator& op, const Register& reg) {
  const auto bits = bits_for(reg, op.acts_on);
  const auto dim = reg.dimension();
  Eigen::MatrixXcd full(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  Amplitudes col(dim);
  const std::span<const cplx> mat(op.matrix.data(), static_cast<std::size_t>(op.matrix.size()));
  for (std::size_t c = 0; c < dim; ++c) {
    std::fill(col.begin(), col.end(), cplx{});
    col[c] = 1.0;
    kernels::apply_matrix(col, bits, mat);
    for (std::size_t r = 0; r < dim; ++r)
      full(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = col[r];
  }
  return full;
}

std::vector<ConditionalBlock> condition_and_reduce(const PureState& state,
                                                   std::span<const std::string> condition,
                                                   std::span<const std::string> keep) {
  const auto cb = bits_for(state.reg(), condition);
  const auto kb = bits_for(state.reg(), keep);
  std::vector<unsigned> used = cb;
  used.insert(used.end(), kb.begin(), kb.end());
  const auto rb = complement_bits(state.reg(), used);
  const std::size_t nc = std::size_t{1} << cb.size();
  const auto dk = Eigen::Index{1} << kb.size();
  const auto dr = Eigen::Index{1} << rb.size();
  std::vector<Eigen::MatrixXcd> mats(nc, Eigen::MatrixXcd::Zero(dk, dr));
  for (std::size_t i = 0; i < state.dimension(); ++i) {
    const cplx a = state.amplitude(i);
    if (a == cplx{}) continue;
    mats[gather_bits(i, cb)](static_cast<Eigen::Index>(gather_bits(i, kb)),
                             static_cast<Eigen::Index>(gather_bits(i, rb))) = a;
  }
  std::vector<ConditionalBlock> out(nc);
  for (std::size_t c = 0; c < nc; ++c) {
    out[c].condition_bits = c;
    out[c].rho = mats[c] * mats[c].adjoint();
    out[c].weight = out[c].rho.trace().real();
  }
  return out;
}

std::uint64_t gather_bits(std::uint64_t index, std::span<const unsigned> bit_positions) {
  std::uint64_t out = 0;
  for (unsigned b : bit_positions) out = (out << 1) | ((index >> b) & 1U);
  return out;
}

}  // namespace lose
