#pragma once

#include <nsgames/game.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

namespace nsgames {

using Complex = std::complex<double>;

// Basis index convention: qubit q is bit q of the index (qubit 0 least
// significant).
struct StateVector {
    int num_qubits = 0;
    std::vector<Complex> amp;

    static StateVector zero(int qubits) {
        StateVector s;
        s.num_qubits = qubits;
        s.amp.assign(std::size_t{1} << qubits, Complex(0));
        return s;
    }

    double norm2() const {
        double n = 0;
        for (const auto& a : amp) n += std::norm(a);
        return n;
    }
};

// (|0...0> + |1...1>)/sqrt(2) on m qubits.
inline StateVector ghz_state(int m) {
    if (m < 1) throw std::invalid_argument("ghz_state requires m >= 1");
    StateVector s = StateVector::zero(m);
    const double r = 1.0 / std::sqrt(2.0);
    s.amp.front() = r;
    s.amp.back() = r;
    return s;
}

using Matrix2 = std::array<Complex, 4>;  // row major

inline constexpr Matrix2 kSigmaZ{Complex(1), Complex(0), Complex(0), Complex(-1)};
inline constexpr Matrix2 kSigmaX{Complex(0), Complex(1), Complex(1), Complex(0)};
inline const Matrix2 kSigmaY{Complex(0), Complex(0, -1), Complex(0, 1), Complex(0)};

// A two-outcome observable with eigenvalues +1 and -1; the +1 eigenspace maps
// to answer bit 0.
struct BinaryObservable {
    Matrix2 m{Complex(1), Complex(0), Complex(0), Complex(1)};

    static BinaryObservable sigma_z() { return {kSigmaZ}; }
    static BinaryObservable sigma_x() { return {kSigmaX}; }
    static BinaryObservable sigma_y() { return {kSigmaY}; }

    // cos(theta) sigma_z + sin(theta) sigma_x: measurement along an angle in
    // the x-z plane.
    static BinaryObservable from_angle(double theta) {
        BinaryObservable o;
        o.m = {Complex(std::cos(theta)), Complex(std::sin(theta)),
               Complex(std::sin(theta)), Complex(-std::cos(theta))};
        return o;
    }

    BinaryObservable negated() const {
        BinaryObservable o;
        for (int i = 0; i < 4; ++i) o.m[i] = -m[i];
        return o;
    }

    // Hermitian and squares to the identity, within tolerance.
    bool valid(double tol = 1e-12) const {
        if (std::abs(m[0] - std::conj(m[0])) > tol) return false;
        if (std::abs(m[3] - std::conj(m[3])) > tol) return false;
        if (std::abs(m[1] - std::conj(m[2])) > tol) return false;
        const Complex sq00 = m[0] * m[0] + m[1] * m[2];
        const Complex sq01 = m[0] * m[1] + m[1] * m[3];
        const Complex sq10 = m[2] * m[0] + m[3] * m[2];
        const Complex sq11 = m[2] * m[1] + m[3] * m[3];
        return std::abs(sq00 - 1.0) <= tol && std::abs(sq01) <= tol &&
               std::abs(sq10) <= tol && std::abs(sq11 - 1.0) <= tol;
    }
};

inline void apply_single_qubit(StateVector& s, int qubit, const Matrix2& m) {
    const std::size_t step = std::size_t{1} << qubit;
    for (std::size_t base = 0; base < s.amp.size(); base += 2 * step)
        for (std::size_t off = 0; off < step; ++off) {
            const std::size_t i0 = base + off;
            const std::size_t i1 = i0 + step;
            const Complex a0 = s.amp[i0], a1 = s.amp[i1];
            s.amp[i0] = m[0] * a0 + m[1] * a1;
            s.amp[i1] = m[2] * a0 + m[3] * a1;
        }
}

// Projects onto the eigenspace of the observable for the given answer bit
// (bit 0 <-> eigenvalue +1). The state is left unnormalized; the returned
// value is the outcome probability of the projection.
inline double project_outcome(StateVector& s, int qubit, const BinaryObservable& o,
                              int bit) {
    const double sign = bit == 0 ? 1.0 : -1.0;
    Matrix2 proj{0.5 * (1.0 + sign * o.m[0]), 0.5 * sign * o.m[1],
                 0.5 * sign * o.m[2], 0.5 * (1.0 + sign * o.m[3])};
    apply_single_qubit(s, qubit, proj);
    return s.norm2();
}

struct QuantumStrategy {
    StateVector state;
    std::vector<int> qubit;  // player -> qubit index, -1 when the player holds none
    // (player, input index) -> observable measured for that input.
    std::map<std::pair<int, int>, BinaryObservable> measurement;
    // Optional unitary applied to the player's qubit before measuring.
    std::map<std::pair<int, int>, Matrix2> correction;
};

struct QuantumEvaluation {
    std::vector<double> per_question;  // conditional winning probability
    double overall = 0;
};

// Winning probability of a strategy whose players measure binary observables
// on a shared pure state. Asked players must have output alphabet {"0","1"}.
inline QuantumEvaluation evaluate_quantum(const Game& game, const QuantumStrategy& qs) {
    if (game.has_postselection())
        throw std::invalid_argument("postselected games need a dedicated simulation");
    if (static_cast<int>(qs.qubit.size()) != game.num_players())
        throw std::invalid_argument("strategy does not cover all players");
    QuantumEvaluation eval;
    eval.per_question.resize(game.questions.size(), 0.0);
    std::vector<int> outs(game.players.size(), 0);
    for (std::size_t q = 0; q < game.questions.size(); ++q) {
        std::vector<std::pair<int, int>> asked;  // (player, input index)
        for (int p = 0; p < game.num_players(); ++p) {
            if (!game.asked(static_cast<int>(q), p)) continue;
            if (game.players[p].outputs != std::vector<std::string>{"0", "1"})
                throw std::invalid_argument("asked player must answer one bit");
            const int in = game.input_index(p, game.questions[q].inputs[p]);
            asked.emplace_back(p, in);
            if (qs.qubit[p] < 0 || qs.qubit[p] >= qs.state.num_qubits)
                throw std::invalid_argument("asked player holds no qubit");
            const auto it = qs.measurement.find({p, in});
            if (it == qs.measurement.end())
                throw std::invalid_argument("missing observable for " +
                                            game.players[p].name);
            if (!it->second.valid())
                throw std::invalid_argument("observable is not a binary measurement");
        }
        double win = 0;
        const std::size_t outcomes = std::size_t{1} << asked.size();
        for (std::size_t bits = 0; bits < outcomes; ++bits) {
            StateVector s = qs.state;
            for (std::size_t i = 0; i < asked.size(); ++i) {
                const auto [p, in] = asked[i];
                const auto corr = qs.correction.find({p, in});
                if (corr != qs.correction.end())
                    apply_single_qubit(s, qs.qubit[p], corr->second);
                project_outcome(s, qs.qubit[p], qs.measurement.at({p, in}),
                                (bits >> i) & 1);
            }
            const double prob = s.norm2();
            if (prob == 0) continue;
            std::fill(outs.begin(), outs.end(), 0);
            for (std::size_t i = 0; i < asked.size(); ++i)
                outs[asked[i].first] = static_cast<int>((bits >> i) & 1);
            if (game.accepts(static_cast<int>(q), outs)) win += prob;
        }
        eval.per_question[q] = win;
        eval.overall += to_double(game.questions[q].prob) * win;
    }
    return eval;
}

// The strategies used in the constructions: measurement angles on a shared
// GHZ state (an EPR pair for the two-player games).
inline QuantumStrategy canonical_strategy(const Game& game) {
    QuantumStrategy qs;
    const double pi = std::numbers::pi;
    switch (game.family) {
        case Family::chsh: {
            qs.state = ghz_state(2);
            qs.qubit = {0, 1};
            qs.measurement[{0, 0}] = BinaryObservable::sigma_z();
            qs.measurement[{0, 1}] = BinaryObservable::sigma_x();
            qs.measurement[{1, 0}] = BinaryObservable::from_angle(pi / 4);
            qs.measurement[{1, 1}] = BinaryObservable::from_angle(-pi / 4);
            return qs;
        }
        case Family::chsh_n: {
            const int n = game.metadata.at("n").convert_to<int>();
            qs.state = ghz_state(2);
            qs.qubit = {0, 1};
            for (int a = 0; a < n; ++a) {
                const double theta = a == n - 1 ? -pi / n : a * pi / n;
                qs.measurement[{0, a}] = BinaryObservable::from_angle(theta);
            }
            for (int b = 0; b < n; ++b)
                qs.measurement[{1, b}] =
                    BinaryObservable::from_angle((b - 0.5) * pi / n);
            return qs;
        }
        case Family::extended_chsh: {
            const int k = game.metadata.at("k").convert_to<int>();
            qs.state = ghz_state(k + 2);
            qs.qubit.resize(k + 2);
            for (int p = 0; p < k + 2; ++p) qs.qubit[p] = p;
            qs.measurement[{0, 0}] = BinaryObservable::sigma_z();
            qs.measurement[{0, 1}] = BinaryObservable::sigma_x();
            qs.measurement[{1, 0}] = BinaryObservable::from_angle(pi / 4);
            qs.measurement[{1, 1}] = BinaryObservable::from_angle(-pi / 4);
            for (int j = 1; j <= k; ++j) {
                qs.measurement[{1 + j, 0}] = BinaryObservable::sigma_z();
                qs.measurement[{1 + j, 1}] = BinaryObservable::sigma_x();
            }
            return qs;
        }
        case Family::extended_chsh_n: {
            const int n = game.metadata.at("n").convert_to<int>();
            const int k = game.metadata.at("k").convert_to<int>();
            qs.state = ghz_state(k + 2);
            qs.qubit.resize(k + 2);
            for (int p = 0; p < k + 2; ++p) qs.qubit[p] = p;
            // Alice's inputs are the signed values -(n-1)..(n-1) in ascending
            // order; she plays the chained strategy on |a| after a sigma_z
            // correction for negative a.
            for (int idx = 0; idx < 2 * n - 1; ++idx) {
                const int a = idx - (n - 1);
                const int alpha = a < 0 ? -a : a;
                const double theta = alpha == n - 1 ? -pi / n : alpha * pi / n;
                qs.measurement[{0, idx}] = BinaryObservable::from_angle(theta);
                if (a < 0) qs.correction[{0, idx}] = kSigmaZ;
            }
            for (int b = 0; b < n; ++b)
                qs.measurement[{1, b}] =
                    BinaryObservable::from_angle((b - 0.5) * pi / n);
            for (int j = 1; j <= k; ++j) {
                qs.measurement[{1 + j, 0}] = BinaryObservable::sigma_z();
                qs.measurement[{1 + j, 1}] = BinaryObservable::sigma_x();
            }
            return qs;
        }
        case Family::ghz: {
            qs.state = ghz_state(3);
            qs.qubit = {0, 1, 2};
            // Mermin-style parity strategy; the first player's observables
            // absorb the sign of the phase-flipped state.
            qs.measurement[{0, 0}] = BinaryObservable::sigma_y().negated();
            qs.measurement[{0, 1}] = BinaryObservable::sigma_x().negated();
            qs.measurement[{1, 0}] = BinaryObservable::sigma_y();
            qs.measurement[{1, 1}] = BinaryObservable::sigma_x();
            qs.measurement[{2, 0}] = BinaryObservable::sigma_y();
            qs.measurement[{2, 1}] = BinaryObservable::sigma_x();
            return qs;
        }
        default:
            throw std::invalid_argument(
                "no canonical binary-observable strategy for this game");
    }
}

namespace detail {

// Projects qubits (q1, q2) of the state onto one of the four Bell vectors
//   0: (|00>+|11>)/sqrt2   1: (|00>-|11>)/sqrt2
//   2: (|01>+|10>)/sqrt2   3: (|01>-|10>)/sqrt2
// and returns the outcome probability together with the residual state on
// the remaining qubits (original order).
inline std::pair<double, StateVector> project_bell(const StateVector& s, int q1, int q2,
                                                   int bell) {
    const int rest_qubits = s.num_qubits - 2;
    StateVector out = StateVector::zero(rest_qubits);
    const double r = 1.0 / std::sqrt(2.0);
    // Bell component amplitudes on (q2 q1) pairs 00,01,10,11; qubit q1 is the
    // low bit of the pair.
    std::array<Complex, 4> bra{};
    switch (bell) {
        case 0: bra = {r, 0, 0, r}; break;
        case 1: bra = {r, 0, 0, -r}; break;
        case 2: bra = {0, r, r, 0}; break;
        case 3: bra = {0, r, -r, 0}; break;
        default: throw std::invalid_argument("bell index out of range");
    }
    for (std::size_t idx = 0; idx < s.amp.size(); ++idx) {
        const int b1 = static_cast<int>((idx >> q1) & 1);
        const int b2 = static_cast<int>((idx >> q2) & 1);
        const Complex w = std::conj(bra[2 * b2 + b1]);
        if (w == Complex(0)) continue;
        // Compact the remaining qubits, preserving order.
        std::size_t rest = 0;
        int bit = 0;
        for (int qq = 0; qq < s.num_qubits; ++qq) {
            if (qq == q1 || qq == q2) continue;
            rest |= ((idx >> qq) & 1) << bit;
            ++bit;
        }
        out.amp[rest] += w * s.amp[idx];
    }
    return {out.norm2(), out};
}

}  // namespace detail

struct TeleportedChshResult {
    double success_probability = 0;   // probability the swap reports success
    double win_given_success = 0;     // CHSH winning probability in that case
};

// Two EPR pairs, a Bell measurement on the inner qubits, postselected on the
// first Bell outcome; the outer pair then plays CHSH with the canonical
// measurements.
inline TeleportedChshResult simulate_teleported_chsh() {
    // Qubits: 0 Alice, 1 and 2 the swapping party, 3 Bob.
    StateVector s = StateVector::zero(4);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            const std::size_t idx = static_cast<std::size_t>(a) |
                                    (static_cast<std::size_t>(a) << 1) |
                                    (static_cast<std::size_t>(b) << 2) |
                                    (static_cast<std::size_t>(b) << 3);
            s.amp[idx] = 0.5;
        }
    const auto [prob, residual] = detail::project_bell(s, 1, 2, 0);

    StateVector pair = residual;
    const double scale = 1.0 / std::sqrt(pair.norm2());
    for (auto& a : pair.amp) a *= scale;

    const BinaryObservable alice[2] = {BinaryObservable::sigma_z(),
                                       BinaryObservable::sigma_x()};
    const BinaryObservable bob[2] = {
        BinaryObservable::from_angle(std::numbers::pi / 4),
        BinaryObservable::from_angle(-std::numbers::pi / 4)};
    double win = 0;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int x = 0; x < 2; ++x)
                for (int y = 0; y < 2; ++y) {
                    if ((x ^ y) != (a & b)) continue;
                    StateVector t = pair;
                    project_outcome(t, 0, alice[a], x);
                    project_outcome(t, 1, bob[b], y);
                    win += 0.25 * t.norm2();
                }
    return {prob, win};
}

// Full (not postselected) teleported CHSH: every Bell outcome is kept and the
// swapping party reports the two correction bits, which the predicate charges
// to the answers. Returns the overall winning probability.
inline double teleported_chsh_value() {
    StateVector s = StateVector::zero(4);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            const std::size_t idx = static_cast<std::size_t>(a) |
                                    (static_cast<std::size_t>(a) << 1) |
                                    (static_cast<std::size_t>(b) << 2) |
                                    (static_cast<std::size_t>(b) << 3);
            s.amp[idx] = 0.5;
        }
    const BinaryObservable alice[2] = {BinaryObservable::sigma_z(),
                                       BinaryObservable::sigma_x()};
    const BinaryObservable bob[2] = {
        BinaryObservable::from_angle(std::numbers::pi / 4),
        BinaryObservable::from_angle(-std::numbers::pi / 4)};
    double value = 0;
    for (int bell = 0; bell < 4; ++bell) {
        const auto [prob, residual] = detail::project_bell(s, 1, 2, bell);
        if (prob == 0) continue;
        // Correction bits: z1 flags a phase flip, z2 a bit flip.
        const int z1 = bell == 1 || bell == 3 ? 1 : 0;
        const int z2 = bell == 2 || bell == 3 ? 1 : 0;
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                for (int x = 0; x < 2; ++x)
                    for (int y = 0; y < 2; ++y) {
                        if ((x ^ y ^ (a ? z1 : z2)) != (a & b)) continue;
                        StateVector t = residual;
                        project_outcome(t, 0, alice[a], x);
                        project_outcome(t, 1, bob[b], y);
                        value += 0.25 * t.norm2();
                    }
    }
    return value;
}

// Baseline without the swap: the outer parties hold halves of separate EPR
// pairs and the correction bits are fixed to zero.
inline double teleported_chsh_noswap_value() {
    StateVector s = StateVector::zero(4);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            const std::size_t idx = static_cast<std::size_t>(a) |
                                    (static_cast<std::size_t>(a) << 1) |
                                    (static_cast<std::size_t>(b) << 2) |
                                    (static_cast<std::size_t>(b) << 3);
            s.amp[idx] = 0.5;
        }
    const BinaryObservable alice[2] = {BinaryObservable::sigma_z(),
                                       BinaryObservable::sigma_x()};
    const BinaryObservable bob[2] = {
        BinaryObservable::from_angle(std::numbers::pi / 4),
        BinaryObservable::from_angle(-std::numbers::pi / 4)};
    double value = 0;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int x = 0; x < 2; ++x)
                for (int y = 0; y < 2; ++y) {
                    if ((x ^ y) != (a & b)) continue;  // z1 = z2 = 0
                    StateVector t = s;
                    project_outcome(t, 0, alice[a], x);
                    project_outcome(t, 3, bob[b], y);
                    value += 0.25 * t.norm2();
                }
    return value;
}

}  // namespace nsgames
