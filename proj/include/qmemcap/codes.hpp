#pragma once

#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "qmemcap/blockstruct.hpp"
#include "qmemcap/chanrep.hpp"

namespace qmemcap {

struct QuantumCode {
  double log_dim = 0.0;
  int block = -1;  // -1 for codes not built from a structure
  Channel encoder;  // data -> memory
  std::function<Channel(long)> decoder_builder;  // t -> (memory -> data)
};

struct ClassicalCode {
  std::vector<Mat> message_states;
  // t -> POVM; the last element is the abort outcome (never a success)
  std::function<std::vector<Mat>(long)> decode_povm_builder;
};

// Superdense coding inside each block: message (k, a, b) applies the Weyl
// operator X^a Z^b to one half of a maximally entangled pair on C^{d_k} (x) C^{d_k}
// and encodes the other half into block k.
struct EACode {
  struct Message {
    int block = 0;
    int a = 0;
    int b = 0;
  };
  std::vector<Message> messages;
  std::vector<Channel> encoders;  // per block: B(C^{d_k}) -> memory
  std::vector<int> dims;          // d_k per block
  // t -> per message: projector on C^{d_k} (x) memory
  std::function<std::vector<Mat>(long)> decode_builder;
};

struct CodeEvaluation {
  double entanglement_fidelity = 0.0;
  double worst_case_estimate = 0.0;  // seeded descent, not a certificate
  double success_prob = 0.0;
  double max_overlap = 0.0;  // normalized Hilbert-Schmidt overlap of evolved EA states
};

// k-th block code; r is the reversal channel of the same structure
QuantumCode build_quantum_code(const PeripheralStructure& ps, int k, const Channel& r);
ClassicalCode build_classical_code(const PeripheralStructure& ps);
EACode build_ea_code(const PeripheralStructure& ps);
// X -> V X V^+, decoded by V^+ . V plus a fixed abort state
QuantumCode isometry_code(const Mat& v);

CodeEvaluation evaluate_code(const Channel& ch_t, const QuantumCode& code, long t, unsigned long seed = 5);
CodeEvaluation evaluate_code(const Channel& ch_t, const ClassicalCode& code, long t);
CodeEvaluation evaluate_code(const Channel& ch_t, const EACode& code, long t);

// block index reached after t steps from block k, with the accumulated unitary:
// Psi^t(W_k (x (x) delta_k) W_k^+) = W_r (V x V^+ (x) delta_r) W_r^+
struct BlockOrbit {
  int block = 0;
  Mat v;
};
BlockOrbit evolve_block(const PeripheralStructure& ps, int k, long t);

// ---- zoo ----

struct ExpectedStructure {
  int k = 0;
  std::vector<int> d;
  std::vector<int> m;
  int h0_dim = -1;  // -1: not fixed
};

struct ChannelZooEntry {
  std::string name;
  std::map<std::string, double> params;
  Channel channel;
  std::optional<ExpectedStructure> expected;
};

ChannelZooEntry zoo(const std::string& name, const std::map<std::string, double>& params = {});
// "name:k=v,k=v"
ChannelZooEntry zoo_from_spec(const std::string& spec);
std::vector<std::string> zoo_names();
std::string zoo_help();

Channel depolarizing(double p, int d = 2);
Channel amplitude_damping(double gamma);
Channel dephasing(cplx p);
Channel correlated_pauli(int n, double p0, double px, double py, double pz);
Channel random_mixed_unitary_twirl(int n, int d, unsigned long seed);
Channel shift_channel(int d);
Mat weyl(int d, int a, int b);

// f(n-j, j) = C(n,j) - C(n,j-1), g = n+1-2j, sorted like decompose_structure
ExpectedStructure schur_weyl_qubits(int n);

nlohmann::json to_json(const CodeEvaluation& e);

}  // namespace qmemcap
