// Constructors for the orthogonal state families used by the steering game.
#pragma once

#include "lose/angles.hpp"
#include "lose/qsim.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace lose {

struct Member {
  std::string label;
  PureState state;
};

class StateSet {
 public:
  // Checks that every member shares one register and that the members are
  // pairwise orthogonal (1e-12).
  StateSet(std::string name, std::vector<Member> members, std::vector<std::string> angle_literals = {});

  const std::string& name() const { return name_; }
  const std::vector<Member>& members() const { return members_; }
  const Member& operator[](std::size_t i) const { return members_[i]; }
  std::size_t size() const { return members_.size(); }
  const Register& reg() const { return members_.front().state.reg(); }
  const std::vector<std::string>& angle_literals() const { return angles_; }

  std::size_t index_of(const std::string& label) const;

 private:
  std::string name_;
  std::vector<Member> members_;
  std::vector<std::string> angles_;
};

// Labels of the qubits encoding Alice's (n+1)-valued control register.
std::vector<std::string> control_labels(std::size_t n_angles);

// |+_a> = cos a|0> + sin a|1>, |-_a> = sin a|0> - cos a|1>.
Eigen::Vector2cd plus_state(double alpha);
Eigen::Vector2cd minus_state(double alpha);

StateSet build_A(const std::vector<DyadicAngle>& angles);
StateSet build_A_radians(const std::vector<double>& angles);
StateSet build_B(std::size_t n);

// Ket order for the four entangled states. `alice_first` reads every ket as
// |A B>; `bob_first` reads it as |B A>. The two coincide at alpha = pi/4 and
// alpha = 0 up to signs and member order; see steer_D for why both exist.
enum class KetOrder { alice_first, bob_first };
StateSet build_D(double alpha, KetOrder order = KetOrder::alice_first);

StateSet build_two_entangled(const std::vector<cplx>& c, const std::vector<cplx>& d,
                             const std::vector<double>& angles);

// (|00> + |11>)/sqrt2 on (a_t, b_t) for t = 1..k; a_t belongs to Alice.
PureState build_ebits(int k, const std::string& alice_prefix = "a", const std::string& bob_prefix = "b",
                      int first_index = 1);

DensityMatrix build_werner(double F, double alpha, KetOrder order = KetOrder::alice_first);

struct EnsembleSpec {
  StateSet set;
  std::vector<double> probabilities;
  EnsembleSpec(StateSet s, std::vector<double> p);
};

nlohmann::json to_json(const StateSet& set);

}  // namespace lose
