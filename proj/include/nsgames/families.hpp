#pragma once

#include <nsgames/game.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace nsgames {

namespace detail {

inline PlayerSpec bit_player(std::string name, std::string in_var, std::string out_var,
                             bool may_be_unasked = false) {
    PlayerSpec p;
    p.name = std::move(name);
    p.input_var = std::move(in_var);
    p.output_var = std::move(out_var);
    p.inputs = {"0", "1"};
    if (may_be_unasked) p.inputs.push_back(kNotAsked);
    p.outputs = {"0", "1"};
    return p;
}

}  // namespace detail

// CHSH: two players, uniform binary questions, accept iff X xor Y = A and B.
inline Game make_chsh() {
    Game g;
    g.name = "chsh";
    g.family = Family::chsh;
    g.players = {detail::bit_player("Alice", "A", "X"),
                 detail::bit_player("Bob", "B", "Y")};
    for (const char* a : {"0", "1"})
        for (const char* b : {"0", "1"})
            g.questions.push_back({{a, b}, make_rational(1, 4), QuestionTag::game});
    build_predicate(g, [&](int q, const std::vector<int>& outs) {
        const int a = g.questions[q].inputs[0][0] - '0';
        const int b = g.questions[q].inputs[1][0] - '0';
        return (outs[0] ^ outs[1]) == (a & b);
    });
    return g;
}

// Chained CHSH with n questions per player: B is either A or A+1 mod n, and
// the players' bits must agree except on the wrap-around question (n-1, n-1).
inline Game make_chsh_n(int n) {
    if (n < 2) throw std::invalid_argument("make_chsh_n requires n >= 2");
    Game g;
    g.name = "chsh_" + std::to_string(n);
    g.family = Family::chsh_n;
    PlayerSpec alice, bob;
    alice.name = "Alice";
    alice.input_var = "A";
    alice.output_var = "X";
    bob.name = "Bob";
    bob.input_var = "B";
    bob.output_var = "Y";
    for (int i = 0; i < n; ++i) {
        alice.inputs.push_back(std::to_string(i));
        bob.inputs.push_back(std::to_string(i));
    }
    alice.outputs = {"0", "1"};
    bob.outputs = {"0", "1"};
    g.players = {alice, bob};
    for (int a = 0; a < n; ++a)
        for (const int b : {a, (a + 1) % n})
            g.questions.push_back(
                {{std::to_string(a), std::to_string(b)}, make_rational(1, 2 * n),
                 QuestionTag::game});
    build_predicate(g, [&](int q, const std::vector<int>& outs) {
        const int a = std::stoi(g.questions[q].inputs[0]);
        const int b = std::stoi(g.questions[q].inputs[1]);
        const bool want_differ = (a == n - 1 && b == n - 1);
        return (outs[0] != outs[1]) == want_differ;
    });
    g.metadata["n"] = Rational(n);
    return g;
}

// CHSH extended with k extra players. Consistency questions check Alice
// against one Charlie; game questions play CHSH with the Charlies' answers
// folded into Alice's when A = 1. The consistency weight q is chosen so that
// q = 1 - 2/(3^k + 1).
inline Game make_extended_chsh(int k) {
    if (k < 0) throw std::invalid_argument("make_extended_chsh requires k >= 0");
    Game g;
    g.name = "chsh+" + std::to_string(k);
    g.family = Family::extended_chsh;
    g.players = {detail::bit_player("Alice", "A", "X"),
                 detail::bit_player("Bob", "B", "Y", k >= 1)};
    for (int j = 1; j <= k; ++j)
        g.players.push_back(detail::bit_player("Charlie_" + std::to_string(j),
                                               "C_" + std::to_string(j),
                                               "Z_" + std::to_string(j), true));
    const Rational q = k == 0 ? Rational(0) : 1 - 2 / (int_pow(Rational(3), k) + 1);
    for (int j = 1; j <= k; ++j) {
        std::vector<std::string> in(g.players.size(), kNotAsked);
        in[0] = "0";
        in[1 + j] = "0";
        g.questions.push_back({in, q / k, QuestionTag::consistency});
    }
    for (const char* a : {"0", "1"})
        for (const char* b : {"0", "1"}) {
            std::vector<std::string> in(g.players.size(), kNotAsked);
            in[0] = a;
            in[1] = b;
            for (int j = 1; j <= k; ++j) in[1 + j] = (a[0] == '1') ? "1" : kNotAsked;
            g.questions.push_back({in, (1 - q) / 4, QuestionTag::game});
        }
    build_predicate(g, [&](int qi, const std::vector<int>& outs) {
        const Question& question = g.questions[qi];
        if (question.tag == QuestionTag::consistency) {
            for (int j = 1; j <= k; ++j)
                if (question.inputs[1 + j] != kNotAsked) return outs[0] == outs[1 + j];
            return false;
        }
        const int a = question.inputs[0][0] - '0';
        const int b = question.inputs[1][0] - '0';
        if (a == 0) return outs[0] == outs[1];
        int x = outs[0];
        for (int j = 1; j <= k; ++j) x ^= outs[1 + j];
        return (x ^ outs[1]) == b;
    });
    g.metadata["k"] = Rational(k);
    g.metadata["q"] = q;
    return g;
}

// CHSH_n extended with k extra players. Alice's input carries a sign; on a
// game question with A != 0 the verifier only scores the answers when the
// Charlies' combined parity matches the sign.
inline Game make_extended_chsh_n(int n, int k) {
    if (n < 2) throw std::invalid_argument("make_extended_chsh_n requires n >= 2");
    if (k < 1) throw std::invalid_argument("make_extended_chsh_n requires k >= 1");
    Game g;
    g.name = "chsh_" + std::to_string(n) + "+" + std::to_string(k);
    g.family = Family::extended_chsh_n;

    PlayerSpec alice;
    alice.name = "Alice";
    alice.input_var = "A";
    alice.output_var = "X";
    for (int a = -(n - 1); a <= n - 1; ++a) alice.inputs.push_back(std::to_string(a));
    alice.outputs = {"0", "1"};
    PlayerSpec bob;
    bob.name = "Bob";
    bob.input_var = "B";
    bob.output_var = "Y";
    for (int b = 0; b < n; ++b) bob.inputs.push_back(std::to_string(b));
    bob.inputs.push_back(kNotAsked);
    bob.outputs = {"0", "1"};
    g.players = {alice, bob};
    for (int j = 1; j <= k; ++j)
        g.players.push_back(detail::bit_player("Charlie_" + std::to_string(j),
                                               "C_" + std::to_string(j),
                                               "Z_" + std::to_string(j), true));

    const Rational p = make_rational(1, 2 * n - 1);
    const Rational q = (int_pow(Rational(3), k) - 1) / (2 * n + int_pow(Rational(3), k) - 2);
    for (int j = 1; j <= k; ++j) {
        std::vector<std::string> in(g.players.size(), kNotAsked);
        in[0] = "0";
        in[1 + j] = "0";
        g.questions.push_back({in, q / k, QuestionTag::consistency});
    }
    // Game questions: A = 0 with conditional probability p, otherwise A is
    // uniform over the nonzero signed values; B is |A| or |A|+1 mod n.
    for (int a = -(n - 1); a <= n - 1; ++a) {
        const int alpha = a < 0 ? -a : a;
        const Rational pa = a == 0 ? p : (1 - p) / (2 * n - 2);
        for (const int b : {alpha, (alpha + 1) % n}) {
            std::vector<std::string> in(g.players.size(), kNotAsked);
            in[0] = std::to_string(a);
            in[1] = std::to_string(b);
            for (int j = 1; j <= k; ++j) in[1 + j] = a != 0 ? "1" : kNotAsked;
            g.questions.push_back({in, (1 - q) * pa / 2, QuestionTag::game});
        }
    }
    build_predicate(g, [&](int qi, const std::vector<int>& outs) {
        const Question& question = g.questions[qi];
        if (question.tag == QuestionTag::consistency) {
            for (int j = 1; j <= k; ++j)
                if (question.inputs[1 + j] != kNotAsked) return outs[0] == outs[1 + j];
            return false;
        }
        const int a = std::stoi(question.inputs[0]);
        const int b = std::stoi(question.inputs[1]);
        if (a == 0) return outs[0] == outs[1];
        const int s = a < 0 ? 1 : 0;
        int z = 0;
        for (int j = 1; j <= k; ++j) z ^= outs[1 + j];
        if (z != s) return true;
        const bool want_differ = ((a == n - 1 || a == -(n - 1)) && b == n - 1);
        return (outs[0] != outs[1]) == want_differ;
    });
    g.metadata["n"] = Rational(n);
    g.metadata["k"] = Rational(k);
    g.metadata["p"] = p;
    g.metadata["q"] = q;
    return g;
}

// CHSH where the players' entanglement is established by a third party
// performing entanglement swapping. Charlie reports two correction bits; the
// predicate charges the relevant one to the pair's answers. In the
// postselected variant Charlie instead reports whether the swap attempt
// succeeded and only successful rounds are scored.
inline Game make_teleported_chsh(bool postselected) {
    Game g;
    g.name = postselected ? "teleported_chsh_postselected" : "teleported_chsh";
    g.family = Family::teleported_chsh;
    g.players = {detail::bit_player("Alice", "A", "X"),
                 detail::bit_player("Bob", "B", "Y")};
    PlayerSpec charlie;
    charlie.name = "Charlie";
    charlie.input_var = "C";
    charlie.output_var = "Z";
    charlie.inputs = {"0"};
    charlie.outputs = postselected ? std::vector<std::string>{"success", "failure"}
                                   : std::vector<std::string>{"00", "01", "10", "11"};
    g.players.push_back(charlie);
    for (const char* a : {"0", "1"})
        for (const char* b : {"0", "1"})
            g.questions.push_back({{a, b, "0"}, make_rational(1, 4), QuestionTag::game});
    if (postselected) {
        build_predicate(g, [&](int q, const std::vector<int>& outs) {
            const int a = g.questions[q].inputs[0][0] - '0';
            const int b = g.questions[q].inputs[1][0] - '0';
            return outs[2] == 0 && (outs[0] ^ outs[1]) == (a & b);
        });
        g.scored.assign(g.questions.size(),
                        std::vector<std::uint8_t>(g.answer_space(), 0));
        std::vector<int> outs;
        for (std::size_t q = 0; q < g.questions.size(); ++q)
            for (std::size_t ai = 0; ai < g.answer_space(); ++ai) {
                g.decode_answer(ai, outs);
                g.scored[q][ai] = outs[2] == 0 ? 1 : 0;
            }
    } else {
        build_predicate(g, [&](int q, const std::vector<int>& outs) {
            const int a = g.questions[q].inputs[0][0] - '0';
            const int b = g.questions[q].inputs[1][0] - '0';
            const int z1 = g.players[2].outputs[outs[2]][0] - '0';
            const int z2 = g.players[2].outputs[outs[2]][1] - '0';
            return (outs[0] ^ outs[1] ^ (a ? z1 : z2)) == (a & b);
        });
    }
    g.metadata["postselected"] = Rational(postselected ? 1 : 0);
    return g;
}

// Three players, questions restricted to bit strings of even weight plus
// (1,1,1); accept iff the xor of the answers equals the and of the inputs.
inline Game make_ghz_game() {
    Game g;
    g.name = "ghz";
    g.family = Family::ghz;
    g.players = {detail::bit_player("Alice", "A", "X"),
                 detail::bit_player("Bob", "B", "Y"),
                 detail::bit_player("Charlie", "C", "Z")};
    for (const auto& in : std::vector<std::vector<std::string>>{
             {"0", "0", "1"}, {"0", "1", "0"}, {"1", "0", "0"}, {"1", "1", "1"}})
        g.questions.push_back({in, make_rational(1, 4), QuestionTag::game});
    build_predicate(g, [&](int q, const std::vector<int>& outs) {
        int conj = 1;
        for (int p = 0; p < 3; ++p) conj &= g.questions[q].inputs[p][0] - '0';
        return (outs[0] ^ outs[1] ^ outs[2]) == conj;
    });
    return g;
}

// CHSH between Alice and one of m Bobs selected by the verifier; Charlie
// learns only the selection index and supplies the correction bits.
inline Game make_distributed_chsh(int num_bobs) {
    if (num_bobs < 2) throw std::invalid_argument("make_distributed_chsh requires num_bobs >= 2");
    Game g;
    g.name = "distributed_chsh_" + std::to_string(num_bobs);
    g.family = Family::distributed_chsh;
    g.players = {detail::bit_player("Alice", "A", "X")};
    for (int i = 1; i <= num_bobs; ++i)
        g.players.push_back(detail::bit_player("Bob_" + std::to_string(i),
                                               "B_" + std::to_string(i),
                                               "Y_" + std::to_string(i), true));
    PlayerSpec charlie;
    charlie.name = "Charlie";
    charlie.input_var = "J";
    charlie.output_var = "Z";
    for (int i = 1; i <= num_bobs; ++i) charlie.inputs.push_back(std::to_string(i));
    charlie.outputs = {"00", "01", "10", "11"};
    g.players.push_back(charlie);
    const int cpos = num_bobs + 1;
    for (int j = 1; j <= num_bobs; ++j)
        for (const char* a : {"0", "1"})
            for (const char* b : {"0", "1"}) {
                std::vector<std::string> in(g.players.size(), kNotAsked);
                in[0] = a;
                in[j] = b;
                in[cpos] = std::to_string(j);
                g.questions.push_back({in, make_rational(1, 4 * num_bobs), QuestionTag::game});
            }
    build_predicate(g, [&](int q, const std::vector<int>& outs) {
        const Question& question = g.questions[q];
        const int a = question.inputs[0][0] - '0';
        int j = 1;
        while (question.inputs[j] == kNotAsked) ++j;
        const int b = question.inputs[j][0] - '0';
        const auto& zsym = g.players[cpos].outputs[outs[cpos]];
        const int z1 = zsym[0] - '0';
        const int z2 = zsym[1] - '0';
        return (outs[0] ^ outs[j] ^ (a ? z1 : z2)) == (a & b);
    });
    g.metadata["num_bobs"] = Rational(num_bobs);
    return g;
}

}  // namespace nsgames
