#include "lose/variants.hpp"

#include "lose/gates.hpp"

#include <map>
#include <cmath>
#include <numbers>
#include <random>

namespace lose {

namespace {

constexpr double kPi = std::numbers::pi;

std::string history_key(const std::vector<int>& r, const std::string& a_bits) {
  std::string k;
  for (int x : r) k += x > 0 ? '+' : '-';
  return k + "|" + a_bits;
}

}  // namespace

ApproxResult approximate_steer(double alpha, double epsilon) {
  if (!(alpha >= 0.0 && alpha < kPi / 2)) throw std::invalid_argument("approximate_steer: alpha must lie in [0, pi/2)");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("approximate_steer: epsilon must lie in (0, 1)");
  ApproxResult res;
  res.alpha = alpha;
  res.epsilon = epsilon;
  res.msb = msb_position(epsilon);
  const double x = 2.0 * alpha / kPi;
  const auto m = static_cast<std::uint64_t>(std::floor(std::ldexp(x, static_cast<int>(res.msb))));
  res.truncated = res.msb == 0 ? DyadicAngle::zero() : DyadicAngle::from_bits(m, res.msb);
  res.ebits_used = static_cast<int>(res.truncated.intrinsic_length());
  res.beta = alpha - res.truncated.radians();
  res.p_e_formula = std::pow(std::sin(res.beta / 2), 2);

  const StateSet set = build_A_radians({alpha});
  SteeringLayout layout;
  layout.control = {"A"};
  const AngleSchedule schedule = dyadic_schedule({res.truncated}, res.ebits_used);
  const auto [plus, minus] = Basis::rotated(res.beta / 2).vectors();
  // Bob's guess for the member class: 0 for {00, 1+}, 1 for {01, 1-}.
  const int truth[4] = {0, 1, 0, 1};

  // Record-dependent relabelling, read off from the exact protocol on the
  // truncated set: which B value members 00 and 1+ of A[truncated] land on.
  const StateSet exact = build_A_radians({res.truncated.radians()});
  std::map<std::string, int> flip[2];
  for (int c = 0; c < 2; ++c) {
    OpAudit audit;
    for (const auto& rb : enumerate_branches(exact[c == 0 ? 0 : 2].state, layout, schedule, audit))
      for (const auto& leaf : rb.leaves) {
        if (leaf.rho.trace().real() <= 1e-14) continue;
        Eigen::Index best = 0;
        leaf.rho.diagonal().real().maxCoeff(&best);
        flip[c][history_key(rb.r, leaf.a_bits)] = static_cast<int>(best & 1);
      }
  }

  res.residual_verified = true;
  double total_error = 0.0;
  for (std::size_t i = 0; i < set.size(); ++i) {
    OpAudit audit;
    const auto raw = enumerate_branches(set[i].state, layout, schedule, audit);
    std::vector<std::pair<double, bool>> outs;
    for (const auto& rb : raw) {
      for (const auto& leaf : rb.leaves) {
        const double p = leaf.rho.trace().real();
        if (p <= 1e-14) continue;
        // Register (A, B): trace out A to get Bob's qubit.
        const Eigen::Matrix2cd rho_b = (leaf.rho.topLeftCorner(2, 2) + leaf.rho.bottomRightCorner(2, 2)) / p;
        const int par = flip[i < 2 ? 0 : 1].at(history_key(rb.r, leaf.a_bits));
        // Expected residual: the member of A[beta] with the class flipped by parity.
        Eigen::Vector2cd expect;
        if (i < 2)
          expect = Eigen::Vector2cd::Unit(static_cast<Eigen::Index>((truth[i] + par) & 1));
        else
          expect = ((truth[i] + par) & 1) == 0 ? plus_state(res.beta) : minus_state(res.beta);
        if ((expect.adjoint() * rho_b * expect)(0, 0).real() < 1.0 - 1e-9) res.residual_verified = false;
        for (int o = 0; o < 2; ++o) {
          const Eigen::Vector2cd& v = o == 0 ? plus : minus;
          const double q = (v.adjoint() * rho_b * v)(0, 0).real();
          const bool correct = ((o + par) & 1) == truth[i];
          outs.emplace_back(p * q, correct);
          if (!correct) total_error += 0.25 * p * q;
        }
      }
    }
    res.outcomes.push_back(std::move(outs));
  }
  res.p_e_simulated = total_error;
  return res;
}

double discrimination_error(const ApproxResult& r, const std::vector<double>& prior) {
  if (prior.size() != r.outcomes.size()) throw std::invalid_argument("discrimination_error: prior size mismatch");
  double e = 0.0;
  for (std::size_t i = 0; i < prior.size(); ++i)
    for (const auto& [p, ok] : r.outcomes[i])
      if (!ok) e += prior[i] * p;
  return e;
}

double sample_discrimination_error(const ApproxResult& r, std::size_t n, std::uint64_t seed,
                                   const std::vector<double>& prior) {
  if (prior.size() != r.outcomes.size() || n == 0)
    throw std::invalid_argument("sample_discrimination_error: bad prior or sample count");
  // Only the per-member error mass matters for the draw.
  std::vector<double> member_error(prior.size(), 0.0);
  for (std::size_t i = 0; i < prior.size(); ++i)
    for (const auto& [p, ok] : r.outcomes[i])
      if (!ok) member_error[i] += p;
  std::mt19937_64 rng(seed);
  auto uniform = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  std::size_t errors = 0;
  for (std::size_t s = 0; s < n; ++s) {
    double u = uniform(), acc = 0.0;
    std::size_t member = prior.size() - 1;
    for (std::size_t i = 0; i < prior.size(); ++i) {
      acc += prior[i];
      if (u < acc) {
        member = i;
        break;
      }
    }
    if (uniform() < member_error[member]) ++errors;
  }
  return static_cast<double>(errors) / static_cast<double>(n);
}

// ------------------------------------------------------------- D[alpha]

namespace {

struct StageOne {
  int z_b;
  double probability;
  std::optional<PureState> state;  // register (A, B, a0)
};

// Nonlocal CNOT with control B and target A through the pair (a0, b0),
// leaving a0 unmeasured, followed by Bob's rotation of B.
std::vector<StageOne> stage_one(const PureState& member, double alpha, OpAudit& audit) {
  const PureState start = tensor(member, build_ebits(1, "a", "b", 0));
  const PureState s1 = audited_apply(gates::controlled("B", "b0", gates::pauli_x()), start, audit);
  std::vector<StageOne> out;
  for (int z : {+1, -1}) {
    Collapsed c = collapse(s1, "b0", Basis::computational(), z);
    ++audit.measurements;
    StageOne st{z, c.probability, std::nullopt};
    if (c.state) {
      PureState s = audited_apply(gates::controlled("a0", "A", gates::pauli_x()), *c.state, audit);
      st.state = audited_apply(gates::single(gates::rotate_y(alpha), "B"), s, audit);
    }
    out.push_back(std::move(st));
  }
  return out;
}

}  // namespace

std::vector<DStageEntry> d_stage_one(double alpha, KetOrder order) {
  const StateSet set = build_D(alpha, order);
  std::vector<DStageEntry> out;
  for (const auto& m : set.members()) {
    OpAudit audit;
    for (const auto& st : stage_one(m.state, alpha, audit)) {
      if (!st.state) continue;
      for (int x : {+1, -1}) {
        Collapsed c = collapse(*st.state, "a0", Basis::x(), x);
        if (!c.state) continue;
        out.push_back(DStageEntry{m.label, x, st.z_b, st.probability * c.probability, *c.state});
      }
    }
  }
  return out;
}

PureState d_stage_one_expected(std::size_t member, int x_a, int z_b, double alpha) {
  if (member > 3) throw std::invalid_argument("d_stage_one_expected: member index out of range");
  const int a = static_cast<int>(member / 2) ^ (z_b < 0 ? 1 : 0);
  Eigen::Vector2cd b;
  if (x_a > 0)
    b = member % 2 == 0 ? plus_state(2 * alpha) : minus_state(2 * alpha);
  else
    b = Eigen::Vector2cd::Unit(static_cast<Eigen::Index>(member % 2));
  Amplitudes amps(4, cplx{});
  amps[static_cast<std::size_t>(2 * a)] = b[0];
  amps[static_cast<std::size_t>(2 * a + 1)] = b[1];
  return PureState(Register({{"A", Party::alice}, {"B", Party::bob}}), std::move(amps));
}

DSteerResult steer_D_set(const StateSet& set, const DyadicAngle& alpha) {
  const int total = static_cast<int>(alpha.intrinsic_length());
  if (total == 0) throw std::invalid_argument("steer_D: angle has no nonlocality; the set is already local");
  const DyadicAngle doubled = double_mod(alpha);
  SteeringLayout layout;
  layout.control = {"a0"};
  const AngleSchedule schedule = dyadic_schedule({doubled}, total - 1);
  const std::vector<DyadicAngle> angles{doubled};
  // x_a = +1 (|+> on a0) must become control value 1.
  const Operator relabel = gates::single(gates::pauli_x() * gates::hadamard(), "a0");

  DSteerResult res;
  res.ebits = total;
  res.traces.resize(set.size());
  const auto n = static_cast<long long>(set.size());
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < n; ++i) {
    const auto& m = set[static_cast<std::size_t>(i)];
    OpAudit audit;
    ProtocolTrace trace;
    trace.input_label = m.label;
    trace.ebits = total;
    for (auto& st : stage_one(m.state, alpha.radians(), audit)) {
      if (!st.state) continue;
      const PureState ready = audited_apply(relabel, *st.state, audit);
      auto raw = enumerate_branches(ready, layout, schedule, audit);
      for (auto& rb : raw) {
        rb.probability *= st.probability;
        for (auto& leaf : rb.leaves) leaf.rho *= st.probability;
      }
      const PriorRecords prior{"", std::string("z_b=") + (st.z_b > 0 ? "+1" : "-1") + ";"};
      ProtocolTrace part = analyse_branches(m.label, raw, layout, total - 1, prior, &angles, true);
      for (auto& br : part.branches) trace.branches.push_back(std::move(br));
    }
    trace.audit = audit;
    res.traces[static_cast<std::size_t>(i)] = std::move(trace);
  }
  res.decode = build_decode_table(res.traces);
  return res;
}

DSteerResult steer_D(const DyadicAngle& alpha, KetOrder order) {
  return steer_D_set(build_D(alpha.radians(), order), alpha);
}

}  // namespace lose
