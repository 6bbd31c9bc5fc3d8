#include <algorithm>
#include <cmath>
#include <sstream>

#include "qmemcap/codes.hpp"
#include "qmemcap/linalg.hpp"

namespace qmemcap {

namespace {

using Params = std::map<std::string, double>;

double get(const Params& p, const std::string& key, double fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

int get_int(const Params& p, const std::string& key, int fallback) {
  const double v = get(p, key, fallback);
  if (v != std::floor(v)) throw Error(ErrorKind::InvalidArgument, "parameter " + key + " must be an integer");
  return static_cast<int>(v);
}

void check_prob(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::InvalidArgument, std::string(what) + " must lie in [0,1]");
}

void check_dim(int d, int lo, int hi) {
  if (d < lo || d > hi) {
    std::ostringstream os;
    os << "dimension " << d << " outside [" << lo << "," << hi << "]";
    throw Error(ErrorKind::InvalidArgument, os.str());
  }
}

ExpectedStructure single(int d) { return {1, {d}, {1}, -1}; }

long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

struct ZooItem {
  const char* name;
  std::vector<std::string> keys;
  const char* help;
};

const std::vector<ZooItem> kItems = {
    {"depolarizing", {"p", "d"}, "p in [0,1], d >= 2 (default p=0.5, d=2)"},
    {"amplitude_damping", {"gamma"}, "gamma in [0,1] (default 0.5)"},
    {"dephasing", {"p", "pi"}, "p + i*pi with |p + i*pi| <= 1 (default p=0.3, pi=0)"},
    {"correlated_pauli", {"n", "p0", "px", "py", "pz"}, "n qubits, p0, px, py, pz (default n=3, 0.4, 0.2, 0.15, 0.25)"},
    {"random_channel", {"d", "kraus", "seed"}, "d, kraus, seed (default d=3, kraus=2, seed=1)"},
    {"random_mixed_unitary_twirl", {"n", "d", "seed"}, "n, d, seed: three Haar U^(x)n (default n=3, d=2, seed=1)"},
    {"identity", {"d"}, "d (default 2)"},
    {"unitary", {"d", "seed"}, "d, seed: Haar unitary conjugation (default d=2, seed=1)"},
    {"shift", {"d"}, "d: cyclic shift |i> -> |i+1> (default 3)"},
};

}  // namespace

Channel depolarizing(double p, int d) {
  check_prob(p, "depolarizing p");
  check_dim(d, 2, 64);
  // (1-p) X + p Tr(X) 1/d as a Weyl mixture
  std::vector<Mat> kraus;
  const double dd = static_cast<double>(d) * d;
  kraus.push_back(std::sqrt(1.0 - p + p / dd) * Mat::Identity(d, d));
  if (p > 0.0)
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        if (a != 0 || b != 0) kraus.push_back(std::sqrt(p / dd) * weyl(d, a, b));
  return Channel(kraus);
}

Channel amplitude_damping(double gamma) {
  check_prob(gamma, "gamma");
  Mat k0 = Mat::Zero(2, 2);
  Mat k1 = Mat::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - gamma);
  k1(0, 1) = std::sqrt(gamma);
  if (gamma == 0.0) return Channel({k0});
  return Channel({k0, k1});
}

Channel dephasing(cplx p) {
  if (std::abs(p) > 1.0 + 1e-12) throw Error(ErrorKind::InvalidArgument, "dephasing needs |p| <= 1");
  Mat j = Mat::Zero(4, 4);
  j(0, 0) = 1.0;
  j(3, 3) = 1.0;
  j(0, 3) = p;
  j(3, 0) = std::conj(p);
  return from_choi(j, 2, 2);
}

Channel correlated_pauli(int n, double p0, double px, double py, double pz) {
  check_dim(n, 1, 6);
  for (double q : {p0, px, py, pz}) check_prob(q, "Pauli weight");
  if (std::abs(p0 + px + py + pz - 1.0) > 1e-9) throw Error(ErrorKind::InvalidArgument, "Pauli weights must sum to 1");
  const double w[4] = {p0, px, py, pz};
  const char* letters = "ixyz";
  std::vector<Mat> kraus;
  for (int a = 0; a < 4; ++a) {
    if (w[a] == 0.0) continue;
    Mat k = Mat::Identity(1, 1);
    for (int i = 0; i < n; ++i) k = kron(k, pauli(letters[a]));
    kraus.push_back(std::sqrt(w[a]) * k);
  }
  return Channel(kraus);
}

Channel random_mixed_unitary_twirl(int n, int d, unsigned long seed) {
  check_dim(d, 2, 4);
  check_dim(n, 1, 6);
  if (std::pow(static_cast<double>(d), n) > 64.0) throw Error(ErrorKind::InvalidArgument, "d^n must be <= 64");
  std::mt19937_64 rng(seed);
  std::vector<Mat> kraus;
  for (int i = 0; i < 3; ++i) {
    Mat u = haar_unitary(d, rng);
    Mat un = Mat::Identity(1, 1);
    for (int j = 0; j < n; ++j) un = kron(un, u);
    kraus.push_back(un / std::sqrt(3.0));
  }
  return Channel(kraus);
}

Channel shift_channel(int d) {
  check_dim(d, 2, 64);
  std::vector<Mat> kraus;
  for (int i = 0; i < d; ++i) {
    Mat k = Mat::Zero(d, d);
    k((i + 1) % d, i) = 1.0;
    kraus.push_back(k);
  }
  return Channel(kraus);
}

ExpectedStructure schur_weyl_qubits(int n) {
  struct Irrep {
    int f, g;
  };
  std::vector<Irrep> blocks;
  for (int j = 0; 2 * j <= n; ++j) blocks.push_back({static_cast<int>(binom(n, j) - binom(n, j - 1)), n + 1 - 2 * j});
  std::stable_sort(blocks.begin(), blocks.end(), [](const Irrep& a, const Irrep& b) {
    return a.f != b.f ? a.f > b.f : a.g > b.g;
  });
  ExpectedStructure e;
  e.k = static_cast<int>(blocks.size());
  for (const auto& b : blocks) {
    e.d.push_back(b.f);
    e.m.push_back(b.g);
  }
  return e;
}

ChannelZooEntry zoo(const std::string& name, const Params& params) {
  auto item = std::find_if(kItems.begin(), kItems.end(), [&](const ZooItem& it) { return name == it.name; });
  if (item == kItems.end()) throw Error(ErrorKind::UnknownChannel, "unknown zoo channel '" + name + "'");
  for (const auto& [key, value] : params)
    if (std::find(item->keys.begin(), item->keys.end(), key) == item->keys.end())
      throw Error(ErrorKind::InvalidArgument, "zoo channel '" + name + "' has no parameter '" + key + "'");
  ChannelZooEntry e;
  e.name = name;
  e.params = params;
  if (name == "depolarizing") {
    const double p = get(params, "p", 0.5);
    const int d = get_int(params, "d", 2);
    e.channel = depolarizing(p, d);
    e.expected = p > 0.0 ? ExpectedStructure{1, {1}, {d}, -1} : single(d);
  } else if (name == "amplitude_damping") {
    const double g = get(params, "gamma", 0.5);
    e.channel = amplitude_damping(g);
    e.expected = g > 0.0 ? ExpectedStructure{1, {1}, {1}, 1} : single(2);
  } else if (name == "dephasing") {
    const cplx p(get(params, "p", 0.3), get(params, "pi", 0.0));
    e.channel = dephasing(p);
    if (std::abs(p) < 1.0 - 1e-12)
      e.expected = ExpectedStructure{2, {1, 1}, {1, 1}, -1};
    else
      e.expected = single(2);
  } else if (name == "correlated_pauli") {
    e.channel = correlated_pauli(get_int(params, "n", 3), get(params, "p0", 0.4), get(params, "px", 0.2),
                                 get(params, "py", 0.15), get(params, "pz", 0.25));
  } else if (name == "random_channel") {
    const int d = get_int(params, "d", 3);
    const int k = get_int(params, "kraus", 2);
    check_dim(d, 1, 8);
    check_dim(k, 1, 64);
    std::mt19937_64 rng(static_cast<unsigned long>(get_int(params, "seed", 1)));
    e.channel = random_channel(d, k, rng);
  } else if (name == "random_mixed_unitary_twirl") {
    const int n = get_int(params, "n", 3);
    const int d = get_int(params, "d", 2);
    e.channel = random_mixed_unitary_twirl(n, d, static_cast<unsigned long>(get_int(params, "seed", 1)));
    if (d == 2) e.expected = schur_weyl_qubits(n);
  } else if (name == "identity") {
    const int d = get_int(params, "d", 2);
    check_dim(d, 1, 64);
    e.channel = identity_channel(d);
    e.expected = single(d);
  } else if (name == "unitary") {
    const int d = get_int(params, "d", 2);
    check_dim(d, 1, 64);
    std::mt19937_64 rng(static_cast<unsigned long>(get_int(params, "seed", 1)));
    e.channel = unitary_channel(haar_unitary(d, rng));
    e.expected = single(d);
  } else if (name == "shift") {
    const int d = get_int(params, "d", 3);
    e.channel = shift_channel(d);
    e.expected = ExpectedStructure{d, std::vector<int>(d, 1), std::vector<int>(d, 1), -1};
  } else {
    throw Error(ErrorKind::UnknownChannel, "unknown zoo channel '" + name + "'");
  }
  return e;
}

ChannelZooEntry zoo_from_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  Params params;
  if (colon != std::string::npos) {
    std::stringstream rest(spec.substr(colon + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
      if (item.empty()) continue;
      const auto eq = item.find('=');
      if (eq == std::string::npos || eq == 0) throw Error(ErrorKind::ParseError, "zoo parameter '" + item + "' is not key=value");
      const std::string key = item.substr(0, eq);
      const std::string val = item.substr(eq + 1);
      size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(val, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != val.size()) throw Error(ErrorKind::ParseError, "zoo parameter '" + key + "' is not a number");
      params[key] = v;
    }
  }
  return zoo(name, params);
}

std::vector<std::string> zoo_names() {
  std::vector<std::string> out;
  for (const auto& it : kItems) out.emplace_back(it.name);
  return out;
}

std::string zoo_help() {
  std::ostringstream os;
  for (const auto& it : kItems) os << it.name << ": " << it.help << '\n';
  return os.str();
}

}  // namespace qmemcap
