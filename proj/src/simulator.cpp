#include "scq/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "scq/density_matrix.hpp"
#include "scq/readout.hpp"
#include "scq/rng.hpp"
#include "scq/state_vector.hpp"

namespace scq {

namespace {

void require_runnable(const Circuit& circuit, int limit, bool allow_scan) {
  const ValidationReport report = circuit.check();
  if (!report.ok()) throw std::invalid_argument("invalid circuit: " + report.to_string());
  if (circuit.num_qubits() > limit) {
    throw std::invalid_argument("circuit width " + std::to_string(circuit.num_qubits()) +
                                " exceeds the simulator limit of " + std::to_string(limit));
  }
  if (!allow_scan && circuit.has_scanned_params()) {
    throw std::invalid_argument("circuit has unbound scan parameters; instantiate it first");
  }
  if (circuit.measured().empty()) throw std::invalid_argument("circuit has no measurement");
}

double gate_error(const Gate& g, const NoiseModel& noise) {
  if (g.kind == GateKind::Measure) return 0.0;
  if (is_two_qubit(g.kind)) return noise.pair_error(g.qubits[0], g.qubits[1]);
  return noise.p1[static_cast<std::size_t>(g.qubits[0])];
}

void require_noise_covers(const NoiseModel& noise, const Circuit& circuit) {
  noise.check();
  if (noise.num_qubits() < circuit.num_qubits()) {
    throw std::invalid_argument("noise model covers fewer qubits than the circuit");
  }
}

struct PatternHash {
  std::size_t operator()(const std::vector<std::uint32_t>& v) const noexcept {
    std::uint64_t h = 0x9E3779B97F4A7C15ULL ^ v.size();
    for (std::uint32_t x : v) h = mix_seed(h, x);
    return static_cast<std::size_t>(h);
  }
};

// Late error patterns pack (gate index << 4) | pauli code.
constexpr std::uint32_t kPauliBits = 4;

std::size_t sample_cdf(const Eigen::VectorXd& weights, double total, double u) {
  const double target = u * total;
  double acc = 0.0;
  std::size_t last = 0;
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    if (weights(i) <= 0.0) continue;
    acc += weights(i);
    last = static_cast<std::size_t>(i);
    if (target < acc) return last;
  }
  return last;
}

/// Distribution ready for repeated draws.
class Sampler {
public:
  Sampler(Eigen::VectorXd weights, std::size_t draws) : weights_(std::move(weights)), total_(weights_.sum()) {
    if (draws >= 16) {
      alias_ = AliasTable(std::span<const double>(weights_.data(), static_cast<std::size_t>(weights_.size())));
      use_alias_ = true;
    }
  }
  std::size_t operator()(double u) const {
    return use_alias_ ? alias_.sample(u) : sample_cdf(weights_, total_, u);
  }
  const Eigen::VectorXd& weights() const noexcept { return weights_; }

private:
  Eigen::VectorXd weights_;
  double total_;
  AliasTable alias_;
  bool use_alias_ = false;
};

/// Quarter turns of a rotation angle when it is an exact multiple of π/2.
std::optional<int> quarter_turns(double angle) {
  const double k = std::round(angle / (std::numbers::pi / 2));
  if (std::abs(angle - k * (std::numbers::pi / 2)) > 1e-12) return std::nullopt;
  return static_cast<int>(((static_cast<long long>(k) % 4) + 4) % 4);
}

bool is_clifford(const Gate& g) {
  return !is_rotation(g.kind) || quarter_turns(literal_angle(g)).has_value();
}

/// Pauli operator up to phase as X and Z bit masks over the register.
struct PauliFrame {
  std::uint32_t x = 0;
  std::uint32_t z = 0;
};

/// P → G P G† for a Clifford gate.
void conjugate(PauliFrame& f, const Gate& g) {
  const auto bit = [](std::uint32_t m, int q) { return (m >> q) & 1u; };
  const int a = g.qubits[0];
  switch (g.kind) {
    case GateKind::H: {
      const std::uint32_t xa = bit(f.x, a), za = bit(f.z, a);
      f.x = (f.x & ~(1u << a)) | (za << a);
      f.z = (f.z & ~(1u << a)) | (xa << a);
      return;
    }
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ: {
      if (*quarter_turns(literal_angle(g)) % 2 == 0) return;
      const std::uint32_t xa = bit(f.x, a), za = bit(f.z, a);
      if (g.kind == GateKind::RX) f.x ^= za << a;
      if (g.kind == GateKind::RZ) f.z ^= xa << a;
      if (g.kind == GateKind::RY) {
        f.x = (f.x & ~(1u << a)) | (za << a);
        f.z = (f.z & ~(1u << a)) | (xa << a);
      }
      return;
    }
    case GateKind::CZ: {
      const int b = g.qubits[1];
      const std::uint32_t xa = bit(f.x, a), xb = bit(f.x, b);
      f.z ^= (xb << a) | (xa << b);
      return;
    }
    case GateKind::CNOT: {
      const int t = g.qubits[1];
      f.x ^= bit(f.x, a) << t;
      f.z ^= bit(f.z, t) << a;
      return;
    }
    default: return;  // X, Y, Z only flip signs
  }
}

PauliFrame pauli_frame(const Gate& g, std::uint32_t code) {
  PauliFrame f;
  auto put = [&](int q, std::uint32_t p) {
    if (p == 1 || p == 2) f.x |= 1u << q;
    if (p == 2 || p == 3) f.z |= 1u << q;
  };
  if (is_two_qubit(g.kind)) {
    put(g.qubits[0], code % 4);
    put(g.qubits[1], code / 4);
  } else {
    put(g.qubits[0], code);
  }
  return f;
}

void apply_frame(StateVector& state, const PauliFrame& f, int n) {
  for (int q = 0; q < n; ++q) {
    const int p = static_cast<int>(((f.x >> q) & 1u) | (((f.z >> q) & 1u) << 1));
    // (x, z) = (1, 0) X, (1, 1) Y, (0, 1) Z
    static constexpr int kPauli[4] = {0, 1, 3, 2};
    if (p) state.apply_pauli(q, kPauli[p]);
  }
}

ScanPoint sample_point(const Circuit& concrete, int k, double gamma, std::uint64_t shots,
                       const NoiseModel& noise, std::uint64_t seed_k,
                       const std::vector<int>& measured) {
  // Error rates come from the device labels; simulation runs on the
  // compacted register of qubits that are touched or measured.
  std::vector<Gate> gates;
  std::vector<double> err;
  std::vector<int> active = measured;
  for (const Gate& g : concrete.gates()) {
    if (g.kind == GateKind::Measure) continue;
    gates.push_back(g);
    err.push_back(gate_error(g, noise));
    active.insert(active.end(), g.qubits.begin(), g.qubits.end());
  }
  std::sort(active.begin(), active.end());
  active.erase(std::unique(active.begin(), active.end()), active.end());
  const int width = static_cast<int>(active.size());
  auto local = [&](int q) {
    return static_cast<int>(std::lower_bound(active.begin(), active.end(), q) - active.begin());
  };
  for (Gate& g : gates)
    for (int& q : g.qubits) q = local(q);
  std::vector<int> measured_local;
  for (int q : measured) measured_local.push_back(local(q));

  std::vector<std::uint32_t> noisy;
  for (std::size_t i = 0; i < gates.size(); ++i)
    if (err[i] > 0.0) noisy.push_back(static_cast<std::uint32_t>(i));
  const std::vector<Confusion> confusion = noise.confusions(measured);
  const std::size_t m = measured.size();

  // Errors before the first non-Clifford gate are pushed forward to it and
  // merged into one Pauli frame; later errors are simulated in place.
  std::size_t boundary = 0;
  while (boundary < gates.size() && is_clifford(gates[boundary])) ++boundary;
  const bool clifford_tail = boundary == gates.size();
  std::uint32_t measured_mask = 0;
  for (int q : measured_local) measured_mask |= 1u << q;

  std::vector<std::vector<PauliFrame>> pushed(gates.size());
  auto pushed_frame = [&](std::uint32_t i, std::uint32_t code) {
    auto& table = pushed[i];
    if (table.empty()) {
      const std::uint32_t codes = is_two_qubit(gates[i].kind) ? 16 : 4;
      table.resize(codes);
      for (std::uint32_t c = 1; c < codes; ++c) {
        PauliFrame f = pauli_frame(gates[i], c);
        for (std::size_t j = i + 1; j < boundary; ++j) conjugate(f, gates[j]);
        table[c] = f;
      }
    }
    return table[code];
  };

  // Pass 1: draw every shot's errors, remember where its stream is. The key
  // holds the frame (x, z) followed by the late errors.
  std::vector<std::uint64_t> stream(shots);
  std::vector<std::uint32_t> group_of(shots, 0);
  std::vector<std::vector<std::uint32_t>> keys;
  {
    std::unordered_map<std::vector<std::uint32_t>, std::uint32_t, PatternHash> ids;
    std::vector<std::uint32_t> key;
    for (std::uint64_t s = 0; s < shots; ++s) {
      SplitMix64 rng(mix_seed(seed_k, s));
      PauliFrame frame;
      key.assign(2, 0);
      for (std::uint32_t i : noisy) {
        if (rng.uniform() < err[i]) {
          const std::uint32_t code = is_two_qubit(gates[i].kind) ? 1 + rng.below(15) : 1 + rng.below(3);
          if (i < boundary) {
            const PauliFrame f = pushed_frame(i, code);
            frame.x ^= f.x;
            frame.z ^= f.z;
          } else {
            key.push_back((i << kPauliBits) | code);
          }
        }
      }
      if (clifford_tail) {
        // Only bit flips on measured qubits change the outcome.
        key[0] = frame.x & measured_mask;
      } else {
        key[0] = frame.x;
        key[1] = frame.z;
      }
      stream[s] = rng.state();
      auto [it, inserted] = ids.try_emplace(key, static_cast<std::uint32_t>(keys.size()));
      if (inserted) keys.push_back(key);
      group_of[s] = it->second;
    }
  }

  const std::size_t groups = keys.size();
  std::vector<std::size_t> offset(groups + 1, 0);
  for (std::uint32_t g : group_of) ++offset[g + 1];
  std::partial_sum(offset.begin(), offset.end(), offset.begin());
  std::vector<std::uint64_t> members(shots);
  {
    std::vector<std::size_t> fill(offset.begin(), offset.end() - 1);
    for (std::uint64_t s = 0; s < shots; ++s) members[fill[group_of[s]]++] = s;
  }

  // Pass 2: one simulation per group, starting from the shared ideal state
  // at the boundary.
  StateVector prefix(width);
  for (std::size_t i = 0; i < boundary; ++i) prefix.apply(gates[i]);
  std::optional<Sampler> ideal;
  if (clifford_tail) ideal.emplace(marginalize(prefix.probabilities(), measured_local), shots);

  std::vector<std::uint64_t> counts(std::size_t{1} << m, 0);
  std::optional<ProbabilityTable> exact;
  for (std::size_t g = 0; g < groups; ++g) {
    const std::vector<std::uint32_t>& key = keys[g];
    const std::size_t begin = offset[g];
    const std::size_t end = offset[g + 1];
    std::optional<Sampler> own;
    std::size_t flip = 0;
    if (clifford_tail) {
      for (std::size_t i = 0; i < m; ++i)
        if ((key[0] >> measured_local[i]) & 1u) flip |= std::size_t{1} << i;
    } else {
      StateVector state = prefix;
      apply_frame(state, PauliFrame{key[0], key[1]}, width);
      std::size_t pos = boundary;
      for (std::size_t e = 2; e < key.size(); ++e) {
        const std::size_t gi = key[e] >> kPauliBits;
        const std::uint32_t code = key[e] & ((1u << kPauliBits) - 1);
        for (; pos <= gi; ++pos) state.apply(gates[pos]);
        apply_frame(state, pauli_frame(gates[gi], code), width);
      }
      for (; pos < gates.size(); ++pos) state.apply(gates[pos]);
      own.emplace(marginalize(state.probabilities(), measured_local), end - begin);
    }
    const Sampler& sampler = own ? *own : *ideal;
    if (noisy.empty()) exact = ProbabilityTable(measured, sampler.weights() / sampler.weights().sum());

    for (std::size_t idx = begin; idx < end; ++idx) {
      SplitMix64 rng(stream[members[idx]]);
      std::size_t outcome = sampler(rng.uniform()) ^ flip;
      for (std::size_t i = 0; i < m; ++i) {
        const Confusion& c = confusion[i];
        if (c.is_identity()) continue;
        const double u = rng.uniform();
        const bool one = (outcome >> i) & 1u;
        if (u < (one ? 1.0 - c.f1 : 1.0 - c.f0)) outcome ^= std::size_t{1} << i;
      }
      ++counts[outcome];
    }
  }

  const bool perfect_readout = std::all_of(confusion.begin(), confusion.end(),
                                           [](const Confusion& c) { return c.is_identity(); });
  ScanPoint point;
  point.index = k;
  point.gamma = gamma;
  point.probs_raw = ProbabilityTable::from_counts(measured, counts);
  point.counts = std::move(counts);
  if (perfect_readout) point.probs_exact = std::move(exact);
  return point;
}

}  // namespace

Circuit instantiate(const Circuit& circuit, int k) {
  const auto& scan = circuit.scan();
  if (!scan) {
    if (k != 0) throw std::out_of_range("circuit has no scan; only index 0 exists");
    if (circuit.has_scanned_params()) {
      throw std::invalid_argument("scanned parameter without a scan declaration");
    }
    return circuit;
  }
  const double gamma = scan->at(k);
  Circuit out(circuit.num_qubits());
  for (Gate g : circuit.gates()) {
    if (g.is_scanned()) g.param = Literal{std::get<Scanned>(*g.param).multiplier * gamma};
    out.push(std::move(g));
  }
  return out;
}

std::vector<int> measured_ascending(const Circuit& circuit) {
  std::vector<int> q = circuit.measured();
  std::sort(q.begin(), q.end());
  return q;
}

ProbabilityTable run_exact(const Circuit& circuit) {
  require_runnable(circuit, kMaxStateQubits, false);
  StateVector state(circuit.num_qubits());
  for (const Gate& g : circuit.gates()) state.apply(g);
  const std::vector<int> measured = measured_ascending(circuit);
  return {measured, marginalize(state.probabilities(), measured)};
}

ProbabilityTable run_density_exact(const Circuit& circuit, const NoiseModel& noise) {
  require_runnable(circuit, kMaxDensityQubits, false);
  require_noise_covers(noise, circuit);
  DensityMatrix rho(circuit.num_qubits());
  for (const Gate& g : circuit.gates()) {
    if (g.kind == GateKind::Measure) continue;
    rho.apply(g);
    const double p = gate_error(g, noise);
    if (p <= 0.0) continue;
    if (is_two_qubit(g.kind)) {
      rho.depolarize(g.qubits[0], g.qubits[1], p);
    } else {
      rho.depolarize(g.qubits[0], p);
    }
  }
  const std::vector<int> measured = measured_ascending(circuit);
  const ProbabilityTable actual(measured, marginalize(rho.probabilities(), measured));
  return confuse(actual, noise.confusions(measured));
}

RunResult run_shots(const Circuit& circuit, std::uint64_t shots, const NoiseModel& noise,
                    std::uint64_t seed) {
  if (shots == 0) throw std::invalid_argument("shots must be at least 1");
  require_runnable(circuit, kMaxStateQubits, true);
  require_noise_covers(noise, circuit);
  RunResult result;
  result.measured = measured_ascending(circuit);
  result.shots = shots;
  result.seed = seed;
  result.scanned = circuit.scan().has_value();
  const int points = circuit.instance_count();
  result.points.reserve(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) {
    const double gamma = circuit.scan() ? circuit.scan()->at(k) : 0.0;
    result.points.push_back(sample_point(instantiate(circuit, k), k, gamma, shots, noise,
                                         mix_seed(seed, static_cast<std::uint64_t>(k)),
                                         result.measured));
  }
  return result;
}

}  // namespace scq
