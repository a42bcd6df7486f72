#pragma once

#include <nsgames/boxes.hpp>
#include <nsgames/game.hpp>

#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nsgames {

// One box query in a player's program. The input table maps
// (shared randomness value, game input, outputs received so far) to an input
// symbol index of the player's port, mixed radix with the randomness most
// significant.
struct QueryStep {
    int box = -1;
    std::vector<int> input_table;
};

struct PlayerProgram {
    std::vector<QueryStep> steps;
    // Maps (shared randomness value, game input, all received outputs) to an
    // output index of the player's game alphabet.
    std::vector<int> answer_table;
};

struct NetworkStrategy {
    std::vector<NSBox> boxes;
    std::vector<PlayerProgram> programs;  // aligned with the game's players
    std::vector<Rational> shared;         // shared randomness weights; empty = none
};

inline std::vector<int> make_table(const std::vector<std::size_t>& sizes,
                                   const std::function<int(const std::vector<int>&)>& fn) {
    std::size_t total = 1;
    for (const std::size_t s : sizes) total *= s;
    std::vector<int> table(total);
    std::vector<int> digits(sizes.size(), 0);
    for (std::size_t idx = 0; idx < total; ++idx) {
        table[idx] = fn(digits);
        for (std::size_t pos = sizes.size(); pos-- > 0;) {
            if (++digits[pos] < static_cast<int>(sizes[pos])) break;
            digits[pos] = 0;
        }
    }
    return table;
}

namespace detail {

struct NetworkShape {
    std::size_t shared_size = 1;
    // [player][step] -> port index in the step's box
    std::vector<std::vector<int>> port;
    // [player][step] -> output alphabet size of that port
    std::vector<std::vector<std::size_t>> out_size;
    // [player] -> input alphabet size
    std::vector<std::size_t> in_size;
};

inline NetworkShape analyze_network(const Game& game, const NetworkStrategy& s) {
    if (s.programs.size() != game.players.size())
        throw std::invalid_argument("one program per player is required");
    NetworkShape shape;
    if (!s.shared.empty()) {
        Rational sum(0);
        for (const auto& w : s.shared) {
            if (w < 0) throw std::invalid_argument("negative shared randomness weight");
            sum += w;
        }
        if (sum != 1) throw std::invalid_argument("shared randomness weights must sum to 1");
        shape.shared_size = s.shared.size();
    }
    shape.port.resize(s.programs.size());
    shape.out_size.resize(s.programs.size());
    shape.in_size.resize(s.programs.size());
    for (std::size_t p = 0; p < s.programs.size(); ++p) {
        shape.in_size[p] = game.players[p].inputs.size();
        std::vector<bool> seen(s.boxes.size(), false);
        std::size_t table_size = shape.shared_size * shape.in_size[p];
        for (const auto& step : s.programs[p].steps) {
            if (step.box < 0 || step.box >= static_cast<int>(s.boxes.size()))
                throw std::invalid_argument("query step names an unknown box");
            if (seen[step.box])
                throw std::invalid_argument(game.players[p].name +
                                            " queries the same box twice");
            seen[step.box] = true;
            const int port = s.boxes[step.box].port_of(game.players[p].name);
            if (port < 0)
                throw std::invalid_argument("box '" + s.boxes[step.box].name +
                                            "' has no port for " + game.players[p].name);
            if (step.input_table.size() != table_size)
                throw std::invalid_argument("query table has wrong size for " +
                                            game.players[p].name);
            const std::size_t in_alpha = s.boxes[step.box].table.inputs[port].size();
            for (const int v : step.input_table)
                if (v < 0 || v >= static_cast<int>(in_alpha))
                    throw std::invalid_argument("query table value out of range");
            shape.port[p].push_back(port);
            shape.out_size[p].push_back(s.boxes[step.box].table.outputs[port].size());
            table_size *= shape.out_size[p].back();
        }
        if (s.programs[p].answer_table.size() != table_size)
            throw std::invalid_argument("answer table has wrong size for " +
                                        game.players[p].name);
        for (const int v : s.programs[p].answer_table)
            if (v < 0 || v >= static_cast<int>(game.players[p].outputs.size()))
                throw std::invalid_argument("answer table value out of range");
    }
    return shape;
}

// Probability mass of a partial transcript of one box: queried ports carry
// (input, output), unqueried ports contribute their summed outputs at an
// arbitrary input (the box is non-signaling, so the choice cannot matter).
inline Rational box_marginal(const NSBox& box,
                             const std::vector<std::pair<int, int>>& assigned) {
    const auto& t = box.table;
    const std::size_t parties = t.num_parties();
    std::vector<int> in(parties), out(parties);
    std::vector<int> free_ports;
    for (std::size_t p = 0; p < parties; ++p) {
        if (assigned[p].first >= 0) {
            in[p] = assigned[p].first;
            out[p] = assigned[p].second;
        } else {
            in[p] = 0;
            free_ports.push_back(static_cast<int>(p));
        }
    }
    std::size_t combos = 1;
    for (const int p : free_ports) combos *= t.outputs[p].size();
    Rational sum(0);
    for (std::size_t c = 0; c < combos; ++c) {
        std::size_t rest = c;
        for (auto it = free_ports.rbegin(); it != free_ports.rend(); ++it) {
            out[*it] = static_cast<int>(rest % t.outputs[*it].size());
            rest /= t.outputs[*it].size();
        }
        sum += t.at(in, out);
    }
    return sum;
}

}  // namespace detail

// Round-major order: round 0 of every player with a program, then round 1,
// and so on, players in declaration order.
inline std::vector<int> default_interleaving(const NetworkStrategy& s) {
    std::vector<int> order;
    std::size_t max_steps = 0;
    for (const auto& p : s.programs) max_steps = std::max(max_steps, p.steps.size());
    for (std::size_t r = 0; r < max_steps; ++r)
        for (std::size_t p = 0; p < s.programs.size(); ++p)
            if (r < s.programs[p].steps.size()) order.push_back(static_cast<int>(p));
    return order;
}

// Every global query order consistent with each player's program order, i.e.
// all distinct permutations of the multiset {player p, multiplicity steps_p}.
inline std::vector<std::vector<int>> all_interleavings(const NetworkStrategy& s,
                                                       std::size_t cap = 100000) {
    std::vector<std::size_t> remaining;
    std::size_t total = 0;
    for (const auto& p : s.programs) {
        remaining.push_back(p.steps.size());
        total += p.steps.size();
    }
    std::vector<std::vector<int>> result;
    std::vector<int> current;
    current.reserve(total);
    const std::function<void()> rec = [&] {
        if (current.size() == total) {
            result.push_back(current);
            if (result.size() > cap)
                throw std::runtime_error("interleaving count exceeds cap");
            return;
        }
        for (std::size_t p = 0; p < remaining.size(); ++p) {
            if (remaining[p] == 0) continue;
            --remaining[p];
            current.push_back(static_cast<int>(p));
            rec();
            current.pop_back();
            ++remaining[p];
        }
    };
    rec();
    return result;
}

// Exact winning probability of a box-network strategy under a global query
// interleaving (players not asked on a question skip their program). The
// branch cap guards the transcript enumeration.
inline Rational evaluate_network(const Game& game, const NetworkStrategy& s,
                                 const std::vector<int>& interleaving_in = {},
                                 std::uint64_t branch_cap = 1000000) {
    const detail::NetworkShape shape = detail::analyze_network(game, s);
    std::vector<int> interleaving =
        interleaving_in.empty() ? default_interleaving(s) : interleaving_in;
    {
        std::vector<std::size_t> count(s.programs.size(), 0);
        for (const int p : interleaving) {
            if (p < 0 || p >= static_cast<int>(s.programs.size()))
                throw std::invalid_argument("interleaving names an unknown player");
            ++count[p];
        }
        for (std::size_t p = 0; p < s.programs.size(); ++p)
            if (count[p] != s.programs[p].steps.size())
                throw std::invalid_argument(
                    "interleaving is inconsistent with the players' step counts");
    }

    std::uint64_t branches = 0;
    Rational accept_mass(0), scored_mass(0);
    std::vector<int> outs(game.players.size());
    for (std::size_t q = 0; q < game.questions.size(); ++q) {
        std::vector<int> filtered;
        for (const int p : interleaving)
            if (game.asked(static_cast<int>(q), p)) filtered.push_back(p);
        std::vector<int> qin(game.players.size(), 0);
        for (int p = 0; p < game.num_players(); ++p)
            qin[p] = game.input_index(p, game.questions[q].inputs[p]);

        for (std::size_t r = 0; r < shape.shared_size; ++r) {
            const Rational r_weight = s.shared.empty() ? Rational(1) : s.shared[r];
            if (r_weight == 0) continue;

            std::vector<std::vector<std::pair<int, int>>> assigned(s.boxes.size());
            for (std::size_t b = 0; b < s.boxes.size(); ++b)
                assigned[b].assign(s.boxes[b].table.num_parties(), {-1, -1});
            std::vector<std::vector<int>> received(s.programs.size());
            std::vector<std::size_t> next_step(s.programs.size(), 0);

            Rational question_accept(0), question_scored(0);
            const std::function<void(std::size_t, Rational)> walk =
                [&](std::size_t pos, Rational weight) {
                    if (++branches > branch_cap)
                        throw std::runtime_error("transcript enumeration exceeds branch cap");
                    if (pos == filtered.size()) {
                        for (int p = 0; p < game.num_players(); ++p) {
                            if (!game.asked(static_cast<int>(q), p)) {
                                outs[p] = 0;
                                continue;
                            }
                            std::size_t idx = r;
                            idx = idx * shape.in_size[p] + qin[p];
                            for (std::size_t t = 0; t < received[p].size(); ++t)
                                idx = idx * shape.out_size[p][t] + received[p][t];
                            outs[p] = s.programs[p].answer_table[idx];
                        }
                        const std::size_t aidx = game.answer_index(outs);
                        if (game.is_scored(static_cast<int>(q), aidx)) {
                            question_scored += weight;
                            if (game.accept[q][aidx]) question_accept += weight;
                        }
                        return;
                    }
                    const int p = filtered[pos];
                    const std::size_t t = next_step[p];
                    const QueryStep& step = s.programs[p].steps[t];
                    std::size_t idx = r;
                    idx = idx * shape.in_size[p] + qin[p];
                    for (std::size_t u = 0; u < t; ++u)
                        idx = idx * shape.out_size[p][u] + received[p][u];
                    const int box_input = step.input_table[idx];
                    const int port = shape.port[p][t];
                    auto& slot = assigned[step.box][port];
                    const Rational denom =
                        detail::box_marginal(s.boxes[step.box], assigned[step.box]);
                    next_step[p] = t + 1;
                    for (std::size_t o = 0; o < shape.out_size[p][t]; ++o) {
                        slot = {box_input, static_cast<int>(o)};
                        const Rational num =
                            detail::box_marginal(s.boxes[step.box], assigned[step.box]);
                        if (num != 0) {
                            received[p].push_back(static_cast<int>(o));
                            walk(pos + 1, weight * num / denom);
                            received[p].pop_back();
                        }
                    }
                    slot = {-1, -1};
                    next_step[p] = t;
                };
            walk(0, Rational(1));
            accept_mass += game.questions[q].prob * r_weight * question_accept;
            scored_mass += game.questions[q].prob * r_weight * question_scored;
        }
    }
    if (!game.has_postselection()) return accept_mass;
    if (scored_mass == 0) return Rational(0);
    return accept_mass / scored_mass;
}

struct SampleResult {
    double estimate = 0;
    double std_error = 0;
    std::uint64_t trials = 0;
    std::uint64_t wins = 0;
};

// Monte Carlo estimate of the winning probability under the default
// interleaving. The standard error is sqrt(p(1-p)/trials) for the estimate p.
inline SampleResult sample_network(const Game& game, const NetworkStrategy& s,
                                   std::uint64_t trials, std::uint64_t seed) {
    const detail::NetworkShape shape = detail::analyze_network(game, s);
    const std::vector<int> interleaving = default_interleaving(s);
    std::mt19937_64 rng(seed);
    const auto uniform = [&rng]() {
        return static_cast<double>(rng() >> 11) * 0x1p-53;
    };

    std::vector<double> question_cdf;
    double acc = 0;
    for (const auto& question : game.questions) {
        acc += to_double(question.prob);
        question_cdf.push_back(acc);
    }
    std::vector<double> shared_cdf;
    acc = 0;
    for (const auto& w : s.shared) {
        acc += to_double(w);
        shared_cdf.push_back(acc);
    }

    std::uint64_t wins = 0, scored = 0;
    std::vector<int> outs(game.players.size());
    std::vector<int> qin(game.players.size());
    for (std::uint64_t trial = 0; trial < trials; ++trial) {
        double u = uniform();
        std::size_t q = 0;
        while (q + 1 < question_cdf.size() && u >= question_cdf[q]) ++q;
        std::size_t r = 0;
        if (!s.shared.empty()) {
            u = uniform();
            while (r + 1 < shared_cdf.size() && u >= shared_cdf[r]) ++r;
        }
        for (int p = 0; p < game.num_players(); ++p)
            qin[p] = game.input_index(p, game.questions[q].inputs[p]);

        std::vector<std::vector<std::pair<int, int>>> assigned(s.boxes.size());
        for (std::size_t b = 0; b < s.boxes.size(); ++b)
            assigned[b].assign(s.boxes[b].table.num_parties(), {-1, -1});
        std::vector<std::vector<int>> received(s.programs.size());
        std::vector<std::size_t> next_step(s.programs.size(), 0);

        for (const int p : interleaving) {
            if (!game.asked(static_cast<int>(q), p)) continue;
            const std::size_t t = next_step[p]++;
            const QueryStep& step = s.programs[p].steps[t];
            std::size_t idx = r;
            idx = idx * shape.in_size[p] + qin[p];
            for (std::size_t v = 0; v < t; ++v)
                idx = idx * shape.out_size[p][v] + received[p][v];
            const int box_input = step.input_table[idx];
            const int port = shape.port[p][t];
            const Rational denom =
                detail::box_marginal(s.boxes[step.box], assigned[step.box]);
            u = uniform();
            double cdf = 0;
            std::size_t picked = shape.out_size[p][t] - 1;
            for (std::size_t o = 0; o < shape.out_size[p][t]; ++o) {
                assigned[step.box][port] = {box_input, static_cast<int>(o)};
                const Rational num =
                    detail::box_marginal(s.boxes[step.box], assigned[step.box]);
                cdf += to_double(num / denom);
                if (u < cdf) {
                    picked = o;
                    break;
                }
            }
            assigned[step.box][port] = {box_input, static_cast<int>(picked)};
            received[p].push_back(static_cast<int>(picked));
        }
        for (int p = 0; p < game.num_players(); ++p) {
            if (!game.asked(static_cast<int>(q), p)) {
                outs[p] = 0;
                continue;
            }
            std::size_t idx = r;
            idx = idx * shape.in_size[p] + qin[p];
            for (std::size_t t = 0; t < received[p].size(); ++t)
                idx = idx * shape.out_size[p][t] + received[p][t];
            outs[p] = s.programs[p].answer_table[idx];
        }
        const std::size_t aidx = game.answer_index(outs);
        if (game.is_scored(static_cast<int>(q), aidx)) {
            ++scored;
            if (game.accept[q][aidx]) ++wins;
        }
    }
    SampleResult result;
    result.trials = trials;
    result.wins = wins;
    const double denom = game.has_postselection() ? static_cast<double>(scored)
                                                  : static_cast<double>(trials);
    if (denom > 0) {
        result.estimate = static_cast<double>(wins) / denom;
        result.std_error = std::sqrt(result.estimate * (1 - result.estimate) / denom);
    }
    return result;
}

// Builds the no-box part of an exor strategy: when the predicate of a binary
// game is "answers' parity equals t(question)" and t extends to a multilinear
// polynomial of degree at most two over GF(2) in the input bits, the players
// can win with one PR box per cross term.
inline NetworkStrategy exor_box_strategy(const Game& game) {
    const int m = game.num_players();
    for (const auto& p : game.players) {
        if (p.inputs != std::vector<std::string>{"0", "1"} ||
            p.outputs != std::vector<std::string>{"0", "1"})
            throw std::invalid_argument(
                "exor strategies need binary inputs and outputs for every player");
    }

    // Extract the parity target of each question and reject non-exor games.
    std::vector<int> target(game.questions.size(), 0);
    std::vector<int> outs(m);
    for (std::size_t q = 0; q < game.questions.size(); ++q) {
        std::fill(outs.begin(), outs.end(), 0);
        target[q] = game.accepts(static_cast<int>(q), outs) ? 0 : 1;
        for (std::size_t a = 0; a < game.answer_space(); ++a) {
            game.decode_answer(a, outs);
            int parity = 0;
            for (const int o : outs) parity ^= o;
            if (game.accept[q][a] != (parity == target[q] ? 1 : 0))
                throw std::invalid_argument("the predicate is not an exor of the answers");
        }
    }

    // Solve for a polynomial c0 + sum c_i a_i + sum c_{ij} a_i a_j matching
    // the target on every question, over GF(2). Columns are ordered constant,
    // linear, cross; Gaussian elimination leaves free variables at zero.
    std::vector<std::pair<int, int>> cross;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) cross.emplace_back(i, j);
    const std::size_t cols = 1 + m + cross.size();
    std::vector<std::vector<std::uint8_t>> rows;
    for (std::size_t q = 0; q < game.questions.size(); ++q) {
        std::vector<std::uint8_t> row(cols + 1, 0);
        std::vector<int> bits(m);
        for (int p = 0; p < m; ++p)
            bits[p] = game.questions[q].inputs[p][0] - '0';
        row[0] = 1;
        for (int p = 0; p < m; ++p) row[1 + p] = static_cast<std::uint8_t>(bits[p]);
        for (std::size_t c = 0; c < cross.size(); ++c)
            row[1 + m + c] =
                static_cast<std::uint8_t>(bits[cross[c].first] & bits[cross[c].second]);
        row[cols] = static_cast<std::uint8_t>(target[q]);
        rows.push_back(std::move(row));
    }
    std::vector<int> pivot_of_col(cols, -1);
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < rows.size(); ++col) {
        std::size_t pivot = rank;
        while (pivot < rows.size() && rows[pivot][col] == 0) ++pivot;
        if (pivot == rows.size()) continue;
        std::swap(rows[rank], rows[pivot]);
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (i != rank && rows[i][col])
                for (std::size_t j = 0; j <= cols; ++j) rows[i][j] ^= rows[rank][j];
        pivot_of_col[col] = static_cast<int>(rank);
        ++rank;
    }
    for (std::size_t i = rank; i < rows.size(); ++i)
        if (rows[i][cols])
            throw std::invalid_argument(
                "no degree-two polynomial matches the parity targets");
    std::vector<int> coef(cols, 0);
    for (std::size_t col = 0; col < cols; ++col)
        if (pivot_of_col[col] >= 0) coef[col] = rows[pivot_of_col[col]][cols];

    NetworkStrategy s;
    std::vector<std::vector<int>> boxes_of(m);
    for (std::size_t c = 0; c < cross.size(); ++c) {
        if (!coef[1 + m + c]) continue;
        const auto [i, j] = cross[c];
        boxes_of[i].push_back(static_cast<int>(s.boxes.size()));
        boxes_of[j].push_back(static_cast<int>(s.boxes.size()));
        s.boxes.push_back(nonlocal_box(game.players[i].name, game.players[j].name));
    }
    s.programs.resize(m);
    for (int p = 0; p < m; ++p) {
        std::vector<std::size_t> sizes{1, 2};
        for (const int b : boxes_of[p]) {
            QueryStep step;
            step.box = b;
            step.input_table = make_table(sizes, [](const std::vector<int>& d) {
                return d[1];  // query with the game input, ignore prior outputs
            });
            s.programs[p].steps.push_back(std::move(step));
            sizes.push_back(2);
        }
        const int lin = coef[1 + p];
        const int constant = p == 0 ? coef[0] : 0;
        s.programs[p].answer_table =
            make_table(sizes, [lin, constant](const std::vector<int>& d) {
                int v = constant ^ (lin & d[1]);
                for (std::size_t t = 2; t < d.size(); ++t) v ^= d[t];
                return v;
            });
    }
    return s;
}

// The one-box GHZ strategy: the first two players share a PR box and answer
// with its outputs, the third answers 0.
inline NetworkStrategy ghz_box_strategy(const Game& game) {
    NetworkStrategy s;
    s.boxes.push_back(nonlocal_box(game.players.at(0).name, game.players.at(1).name));
    s.programs.resize(game.players.size());
    for (int p = 0; p < 2; ++p) {
        QueryStep step;
        step.box = 0;
        step.input_table = make_table({1, 2}, [](const std::vector<int>& d) { return d[1]; });
        s.programs[p].steps.push_back(std::move(step));
        s.programs[p].answer_table =
            make_table({1, 2, 2}, [](const std::vector<int>& d) { return d[2]; });
    }
    s.programs[2].answer_table =
        make_table({1, 2}, [](const std::vector<int>&) { return 0; });
    return s;
}

// Adaptive strategy for the two-Bob distributed game: Alice plays CHSH with
// both Bobs through PR boxes, feeds both of her outputs into a selection box,
// and answers with its masked output; the last player resolves the mask.
inline NetworkStrategy distributed_selection_strategy(const Game& game) {
    if (game.players.size() != 4)
        throw std::invalid_argument("the selection strategy handles exactly two Bobs");
    NetworkStrategy s;
    s.boxes.push_back(nonlocal_box(game.players[0].name, game.players[1].name));
    s.boxes.push_back(nonlocal_box(game.players[0].name, game.players[2].name));
    s.boxes.push_back(selection_box(game.players[0].name, game.players[3].name));
    s.programs.resize(4);

    auto& alice = s.programs[0];
    alice.steps.push_back(
        {0, make_table({1, 2}, [](const std::vector<int>& d) { return d[1]; })});
    alice.steps.push_back(
        {1, make_table({1, 2, 2}, [](const std::vector<int>& d) { return d[1]; })});
    alice.steps.push_back({2, make_table({1, 2, 2, 2}, [](const std::vector<int>& d) {
                               return d[2] * 2 + d[3];  // both PR outputs
                           })});
    alice.answer_table =
        make_table({1, 2, 2, 2, 2}, [](const std::vector<int>& d) { return d[4]; });

    for (int bob = 1; bob <= 2; ++bob) {
        s.programs[bob].steps.push_back(
            {bob - 1, make_table({1, 3}, [](const std::vector<int>& d) {
                 return d[1] == 2 ? 0 : d[1];  // the not-asked row is never used
             })});
        s.programs[bob].answer_table =
            make_table({1, 3, 2}, [](const std::vector<int>& d) { return d[2]; });
    }

    auto& charlie = s.programs[3];
    charlie.steps.push_back(
        {2, make_table({1, 2}, [](const std::vector<int>& d) { return d[1]; })});
    charlie.answer_table =
        make_table({1, 2, 4}, [](const std::vector<int>& d) { return d[2]; });
    return s;
}

// Nonadaptive strategy for the same game from two copies of the switched
// resource: Alice xors her two copies' bits, the selected Bob answers his
// copy's bit, and the last player xors the two correction pairs.
inline NetworkStrategy distributed_resource_strategy(const Game& game) {
    if (game.players.size() != 4)
        throw std::invalid_argument("the resource strategy handles exactly two Bobs");
    NetworkStrategy s;
    s.boxes.push_back(
        resource_r(game.players[0].name, game.players[3].name, game.players[1].name));
    s.boxes.push_back(
        resource_r(game.players[0].name, game.players[3].name, game.players[2].name));
    s.programs.resize(4);

    auto& alice = s.programs[0];
    alice.steps.push_back(
        {0, make_table({1, 2}, [](const std::vector<int>& d) { return d[1]; })});
    alice.steps.push_back(
        {1, make_table({1, 2, 2}, [](const std::vector<int>& d) { return d[1]; })});
    alice.answer_table =
        make_table({1, 2, 2, 2}, [](const std::vector<int>& d) { return d[2] ^ d[3]; });

    for (int bob = 1; bob <= 2; ++bob) {
        s.programs[bob].steps.push_back(
            {bob - 1, make_table({1, 3}, [](const std::vector<int>& d) {
                 return d[1] == 2 ? 0 : d[1];
             })});
        s.programs[bob].answer_table =
            make_table({1, 3, 2}, [](const std::vector<int>& d) { return d[2]; });
    }

    auto& charlie = s.programs[3];
    charlie.steps.push_back(
        {0, make_table({1, 2}, [](const std::vector<int>& d) { return d[1]; })});
    charlie.steps.push_back(
        {1, make_table({1, 2, 4}, [](const std::vector<int>& d) { return 1 - d[1]; })});
    charlie.answer_table =
        make_table({1, 2, 4, 4}, [](const std::vector<int>& d) { return d[2] ^ d[3]; });
    return s;
}

}  // namespace nsgames
