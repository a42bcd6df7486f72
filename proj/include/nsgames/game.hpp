#pragma once

#include <nsgames/rational.hpp>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace nsgames {

// Input symbol sent to a player that is not asked anything on a given
// question. Such a player does not act and their answer is never scored.
inline const std::string kNotAsked = "⊥";

enum class QuestionTag { plain, game, consistency };

enum class Family {
    custom,
    chsh,
    chsh_n,
    extended_chsh,
    extended_chsh_n,
    teleported_chsh,
    ghz,
    distributed_chsh,
};

struct PlayerSpec {
    std::string name;
    // Variable names used by the probability-constraint language, e.g. the
    // constraint "P(X=0|A=0)=1" refers to input_var "A" and output_var "X".
    std::string input_var;
    std::string output_var;
    std::vector<std::string> inputs;   // input alphabet, may contain kNotAsked
    std::vector<std::string> outputs;  // output alphabet
};

struct Question {
    std::vector<std::string> inputs;  // one symbol per player
    Rational prob;
    QuestionTag tag = QuestionTag::plain;
};

// A multiparty game with finite alphabets, an explicit question distribution
// and explicit predicate truth tables. Only questions with positive
// probability are listed; anything absent from the list has probability 0.
struct Game {
    std::string name;
    Family family = Family::custom;
    std::vector<PlayerSpec> players;
    std::vector<Question> questions;
    // accept[q][answer_index] over the full product of output alphabets.
    std::vector<std::vector<std::uint8_t>> accept;
    // Optional postselection: when nonempty, scored[q][answer_index] marks the
    // answers that count toward the conditional winning probability.
    std::vector<std::vector<std::uint8_t>> scored;
    // Named exact parameters of the construction (n, k, p, q, ...).
    std::map<std::string, Rational> metadata;

    int num_players() const { return static_cast<int>(players.size()); }

    std::size_t answer_space() const {
        std::size_t s = 1;
        for (const auto& p : players) s *= p.outputs.size();
        return s;
    }

    int input_index(int player, const std::string& sym) const {
        const auto& alpha = players.at(player).inputs;
        for (std::size_t i = 0; i < alpha.size(); ++i)
            if (alpha[i] == sym) return static_cast<int>(i);
        return -1;
    }

    int output_index(int player, const std::string& sym) const {
        const auto& alpha = players.at(player).outputs;
        for (std::size_t i = 0; i < alpha.size(); ++i)
            if (alpha[i] == sym) return static_cast<int>(i);
        return -1;
    }

    bool asked(int question, int player) const {
        return questions.at(question).inputs.at(player) != kNotAsked;
    }

    // Mixed-radix answer encoding, player 0 most significant.
    std::size_t answer_index(const std::vector<int>& outs) const {
        std::size_t idx = 0;
        for (int p = 0; p < num_players(); ++p)
            idx = idx * players[p].outputs.size() + outs[p];
        return idx;
    }

    void decode_answer(std::size_t idx, std::vector<int>& outs) const {
        outs.resize(players.size());
        for (int p = num_players() - 1; p >= 0; --p) {
            const std::size_t base = players[p].outputs.size();
            outs[p] = static_cast<int>(idx % base);
            idx /= base;
        }
    }

    bool accepts(int question, const std::vector<int>& outs) const {
        return accept.at(question).at(answer_index(outs)) != 0;
    }

    bool has_postselection() const { return !scored.empty(); }

    bool is_scored(int question, std::size_t answer_idx) const {
        if (scored.empty()) return true;
        return scored.at(question).at(answer_idx) != 0;
    }

    int question_index(const std::vector<std::string>& inputs) const {
        for (std::size_t q = 0; q < questions.size(); ++q)
            if (questions[q].inputs == inputs) return static_cast<int>(q);
        return -1;
    }

    Rational question_probability(const std::vector<std::string>& inputs) const {
        const int q = question_index(inputs);
        return q < 0 ? Rational(0) : questions[q].prob;
    }

    int player_index(const std::string& name) const {
        for (std::size_t p = 0; p < players.size(); ++p)
            if (players[p].name == name) return static_cast<int>(p);
        return -1;
    }
};

// Fills the predicate table of `game` from a callback taking the question
// index and the decoded answer tuple.
inline void build_predicate(Game& game,
                            const std::function<bool(int, const std::vector<int>&)>& fn) {
    const std::size_t space = game.answer_space();
    game.accept.assign(game.questions.size(), std::vector<std::uint8_t>(space, 0));
    std::vector<int> outs;
    for (std::size_t q = 0; q < game.questions.size(); ++q)
        for (std::size_t a = 0; a < space; ++a) {
            game.decode_answer(a, outs);
            game.accept[q][a] = fn(static_cast<int>(q), outs) ? 1 : 0;
        }
}

struct ValidationReport {
    bool ok = true;
    std::vector<std::string> violations;

    void fail(std::string what) {
        ok = false;
        violations.push_back(std::move(what));
    }
};

// Structural well-formedness: the question distribution sums to one, all
// symbols live in the declared alphabets, predicate tables have the right
// shape, and no predicate depends on the answer of an unasked player.
inline ValidationReport validate_game(const Game& game) {
    ValidationReport report;
    if (game.players.empty()) report.fail("no players");
    for (const auto& p : game.players) {
        if (p.inputs.empty()) report.fail(p.name + ": empty input alphabet");
        if (p.outputs.empty()) report.fail(p.name + ": empty output alphabet");
    }
    const std::size_t space = game.answer_space();
    if (game.accept.size() != game.questions.size())
        report.fail("predicate table count differs from question count");
    if (!game.scored.empty() && game.scored.size() != game.questions.size())
        report.fail("scored table count differs from question count");

    Rational total(0);
    for (std::size_t q = 0; q < game.questions.size(); ++q) {
        const auto& question = game.questions[q];
        if (question.inputs.size() != game.players.size()) {
            report.fail("question " + std::to_string(q) + ": wrong arity");
            continue;
        }
        if (question.prob < 0)
            report.fail("question " + std::to_string(q) + ": negative probability");
        total += question.prob;
        for (int p = 0; p < game.num_players(); ++p)
            if (game.input_index(p, question.inputs[p]) < 0)
                report.fail("question " + std::to_string(q) + ": input '" +
                            question.inputs[p] + "' not in alphabet of " +
                            game.players[p].name);
        if (q < game.accept.size() && game.accept[q].size() != space)
            report.fail("question " + std::to_string(q) + ": predicate table size");
        if (!game.scored.empty() && q < game.scored.size() &&
            game.scored[q].size() != space)
            report.fail("question " + std::to_string(q) + ": scored table size");
    }
    if (total != 1) report.fail("question probabilities sum to " + to_string(total));

    // An unasked player's answer must never affect acceptance (or scoring).
    std::vector<int> outs;
    for (std::size_t q = 0; q < game.questions.size() && q < game.accept.size(); ++q) {
        for (int p = 0; p < game.num_players(); ++p) {
            if (game.asked(static_cast<int>(q), p)) continue;
            const std::size_t nout = game.players[p].outputs.size();
            if (nout <= 1) continue;
            bool sensitive = false;
            for (std::size_t a = 0; a < space && !sensitive; ++a) {
                game.decode_answer(a, outs);
                if (outs[p] != 0) continue;
                std::vector<int> flipped = outs;
                for (std::size_t alt = 1; alt < nout; ++alt) {
                    flipped[p] = static_cast<int>(alt);
                    const std::size_t b = game.answer_index(flipped);
                    if (game.accept[q][a] != game.accept[q][b] ||
                        game.is_scored(static_cast<int>(q), a) !=
                            game.is_scored(static_cast<int>(q), b)) {
                        sensitive = true;
                        break;
                    }
                }
            }
            if (sensitive)
                report.fail("question " + std::to_string(q) + ": predicate depends on " +
                            game.players[p].name + " who is not asked");
        }
    }
    return report;
}

// Players whose answer can change the predicate value on the given question.
inline std::vector<int> involved_players(const Game& game, int question) {
    std::vector<int> involved;
    const std::size_t space = game.answer_space();
    std::vector<int> outs;
    for (int p = 0; p < game.num_players(); ++p) {
        const std::size_t nout = game.players[p].outputs.size();
        bool sensitive = false;
        for (std::size_t a = 0; a < space && !sensitive; ++a) {
            game.decode_answer(a, outs);
            if (outs[p] != 0) continue;
            std::vector<int> flipped = outs;
            for (std::size_t alt = 1; alt < nout; ++alt) {
                flipped[p] = static_cast<int>(alt);
                if (game.accept[question][a] !=
                    game.accept[question][game.answer_index(flipped)]) {
                    sensitive = true;
                    break;
                }
            }
        }
        if (sensitive) involved.push_back(p);
    }
    return involved;
}

struct UniquenessCounterexample {
    int question = -1;
    int player = -1;
    // Answers of the other involved players under which `player` does not
    // have exactly one accepting answer.
    std::vector<int> context;
    int accepting_answers = 0;
};

struct UniquenessReport {
    bool unique = true;
    std::vector<UniquenessCounterexample> counterexamples;
};

// A game is unique on a question when, for every involved player and every
// fixed answer tuple of the other players, exactly one of the player's
// answers is accepted.
inline UniquenessReport check_uniqueness(const Game& game,
                                         const std::vector<int>& question_subset) {
    UniquenessReport report;
    std::vector<int> outs(game.players.size(), 0);
    for (const int q : question_subset) {
        if (q < 0 || q >= static_cast<int>(game.questions.size()))
            throw std::out_of_range("question index out of range");
        const std::vector<int> involved = involved_players(game, q);
        for (const int player : involved) {
            // Enumerate answers of the other involved players; players not
            // involved cannot change the count, so they stay at 0.
            std::vector<int> others;
            for (const int p : involved)
                if (p != player) others.push_back(p);
            std::size_t contexts = 1;
            for (const int p : others) contexts *= game.players[p].outputs.size();
            for (std::size_t c = 0; c < contexts; ++c) {
                std::fill(outs.begin(), outs.end(), 0);
                std::size_t rest = c;
                for (auto it = others.rbegin(); it != others.rend(); ++it) {
                    const std::size_t base = game.players[*it].outputs.size();
                    outs[*it] = static_cast<int>(rest % base);
                    rest /= base;
                }
                int accepting = 0;
                const std::size_t nout = game.players[player].outputs.size();
                for (std::size_t a = 0; a < nout; ++a) {
                    outs[player] = static_cast<int>(a);
                    if (game.accepts(q, outs)) ++accepting;
                }
                if (accepting != 1) {
                    report.unique = false;
                    UniquenessCounterexample ce;
                    ce.question = q;
                    ce.player = player;
                    std::fill(outs.begin(), outs.end(), 0);
                    rest = c;
                    for (auto it = others.rbegin(); it != others.rend(); ++it) {
                        const std::size_t base = game.players[*it].outputs.size();
                        outs[*it] = static_cast<int>(rest % base);
                        rest /= base;
                    }
                    ce.context = outs;
                    ce.accepting_answers = accepting;
                    report.counterexamples.push_back(std::move(ce));
                }
            }
        }
    }
    return report;
}

inline std::vector<int> all_question_indices(const Game& game) {
    std::vector<int> idx(game.questions.size());
    for (std::size_t q = 0; q < idx.size(); ++q) idx[q] = static_cast<int>(q);
    return idx;
}

}  // namespace nsgames
