#pragma once

#include <nsgames/game.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace nsgames {

// One response table per player: answer[p][input_index] is an output index.
// Entries for the not-asked symbol are present but never scored; enumeration
// and comparison ignore them.
struct DeterministicStrategy {
    std::vector<std::vector<int>> answer;
};

inline DeterministicStrategy zero_strategy(const Game& game) {
    DeterministicStrategy s;
    s.answer.resize(game.players.size());
    for (int p = 0; p < game.num_players(); ++p)
        s.answer[p].assign(game.players[p].inputs.size(), 0);
    return s;
}

// Winning probability of a deterministic strategy. For a postselected game
// this is the conditional probability of acceptance given a scored answer
// (zero when no answer is scored).
inline Rational evaluate_deterministic(const Game& game, const DeterministicStrategy& s) {
    Rational accept_mass(0), scored_mass(0);
    std::vector<int> outs(game.players.size());
    for (std::size_t q = 0; q < game.questions.size(); ++q) {
        for (int p = 0; p < game.num_players(); ++p) {
            const int in = game.input_index(p, game.questions[q].inputs[p]);
            if (in < 0) throw std::invalid_argument("question uses unknown input symbol");
            outs[p] = s.answer.at(p).at(in);
        }
        const std::size_t idx = game.answer_index(outs);
        if (game.is_scored(static_cast<int>(q), idx)) {
            scored_mass += game.questions[q].prob;
            if (game.accept[q][idx]) accept_mass += game.questions[q].prob;
        }
    }
    if (!game.has_postselection()) return accept_mass;
    if (scored_mass == 0) return Rational(0);
    return accept_mass / scored_mass;
}

struct DeterministicValue {
    Rational value;
    DeterministicStrategy witness;
    std::uint64_t strategies_enumerated = 0;
};

// Exhaustive maximization over deterministic strategies. Enumeration runs in
// lexicographic order over the concatenated response tables (player-major,
// input-minor, not-asked entries pinned to 0), so keeping strict improvements
// returns the lexicographically first maximizer.
inline DeterministicValue deterministic_value(const Game& game,
                                              std::uint64_t cap = 100000000ull) {
    // Positions that are actually enumerated: (player, input) pairs where the
    // input is a real symbol.
    std::vector<std::pair<int, int>> slots;
    std::vector<std::size_t> radix;
    double log_total = 0;
    for (int p = 0; p < game.num_players(); ++p)
        for (std::size_t i = 0; i < game.players[p].inputs.size(); ++i)
            if (game.players[p].inputs[i] != kNotAsked) {
                slots.emplace_back(p, static_cast<int>(i));
                radix.push_back(game.players[p].outputs.size());
                log_total += std::log2(static_cast<double>(radix.back()));
            }
    if (log_total > 63 || [&] {
            std::uint64_t total = 1;
            for (const std::size_t r : radix) {
                if (total > cap / r + 1) return true;
                total *= r;
            }
            return total > cap;
        }())
        throw std::runtime_error("deterministic strategy space exceeds enumeration cap");

    DeterministicValue best;
    best.value = Rational(-1);
    DeterministicStrategy current = zero_strategy(game);
    std::vector<std::size_t> digits(slots.size(), 0);
    bool done = slots.empty();
    while (true) {
        for (std::size_t i = 0; i < slots.size(); ++i)
            current.answer[slots[i].first][slots[i].second] = static_cast<int>(digits[i]);
        const Rational v = evaluate_deterministic(game, current);
        ++best.strategies_enumerated;
        if (v > best.value) {
            best.value = v;
            best.witness = current;
        }
        if (done) break;
        // Increment the least significant (last) digit.
        std::size_t pos = digits.size();
        while (pos > 0) {
            --pos;
            if (++digits[pos] < radix[pos]) break;
            digits[pos] = 0;
            if (pos == 0) done = true;
        }
        if (done) break;
    }
    return best;
}

}  // namespace nsgames
