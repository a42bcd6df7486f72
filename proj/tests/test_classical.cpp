#include <catch2/catch_amalgamated.hpp>

#include <nsgames/bounds.hpp>
#include <nsgames/classical.hpp>
#include <nsgames/families.hpp>

#include <algorithm>

using namespace nsgames;

TEST_CASE("chsh classical value") {
    const Game g = make_chsh();
    const DeterministicValue best = deterministic_value(g);
    REQUIRE(best.value == Rational(3, 4));
    REQUIRE(best.strategies_enumerated == 16);
    REQUIRE(evaluate_deterministic(g, best.witness) == Rational(3, 4));
    // The all-zeros strategy already wins three of the four questions, so the
    // lexicographically first maximizer is all zeros.
    REQUIRE(best.witness.answer == zero_strategy(g).answer);
}

TEST_CASE("chsh enumeration agrees with a direct sixteen strategy sweep") {
    const Game g = make_chsh();
    Rational manual_best(0);
    int maximizers = 0;
    for (int bits = 0; bits < 16; ++bits) {
        DeterministicStrategy s = zero_strategy(g);
        s.answer[0][0] = bits & 1;
        s.answer[0][1] = (bits >> 1) & 1;
        s.answer[1][0] = (bits >> 2) & 1;
        s.answer[1][1] = (bits >> 3) & 1;
        const Rational v = evaluate_deterministic(g, s);
        REQUIRE(v <= Rational(3, 4));
        if (v > manual_best) manual_best = v;
        if (v == Rational(3, 4)) ++maximizers;
    }
    REQUIRE(manual_best == deterministic_value(g).value);
    // Eight of the sixteen deterministic strategies reach the optimum.
    REQUIRE(maximizers == 8);
}

TEST_CASE("chained game classical values") {
    for (int n = 2; n <= 6; ++n) {
        const Game g = make_chsh_n(n);
        REQUIRE(deterministic_value(g).value == 1 - Rational(1, 2 * n));
    }
    // All answers equal loses only the anti-correlated question.
    const Game g3 = make_chsh_n(3);
    REQUIRE(evaluate_deterministic(g3, zero_strategy(g3)) == Rational(5, 6));
}

TEST_CASE("ghz classical value") {
    const DeterministicValue best = deterministic_value(make_ghz_game());
    REQUIRE(best.value == Rational(3, 4));
    REQUIRE(best.strategies_enumerated == 64);
}

TEST_CASE("extended chsh classical values match the local network bound") {
    for (int k = 1; k <= 2; ++k) {
        const Game g = make_extended_chsh(k);
        const DeterministicValue best = deterministic_value(g);
        // Consistency checks are free for deterministic players, so the value
        // is q plus (1 - q) times the plain chsh optimum, which collapses to
        // the same expression as the local hidden variable network bound.
        const Rational q = g.metadata.at("q");
        REQUIRE(best.value == q + (1 - q) * Rational(3, 4));
        REQUIRE(best.value == ns_bound_chsh_plus_k(k));
    }
    REQUIRE(deterministic_value(make_extended_chsh(1)).value == Rational(7, 8));
    REQUIRE(deterministic_value(make_extended_chsh(2)).value == Rational(19, 20));
}

TEST_CASE("extended chained game classical value at n = 2") {
    const Game g = make_extended_chsh_n(2, 1);
    const DeterministicValue best = deterministic_value(g);
    // With n = 2 every game question has probability (1 - q) / 6 and the
    // chained constraints contain a single parity obstruction, so exactly one
    // question must be lost.
    REQUIRE(best.value == Rational(9, 10));
    REQUIRE(to_double(best.value) < quantum_lb_chshn(2, 1));
}

TEST_CASE("enumeration cap throws") {
    REQUIRE_THROWS_AS(deterministic_value(make_distributed_chsh(3), 100),
                      std::runtime_error);
}

TEST_CASE("question order does not change the classical value") {
    Game g = make_chsh_n(4);
    std::reverse(g.questions.begin(), g.questions.end());
    std::reverse(g.accept.begin(), g.accept.end());
    REQUIRE(validate_game(g).ok);
    REQUIRE(deterministic_value(g).value == Rational(7, 8));
}

TEST_CASE("output relabeling does not change the classical value") {
    Game g = make_chsh();
    const Game plain = make_chsh();
    build_predicate(g, [&plain](int q, const std::vector<int>& outs) {
        return plain.accepts(q, {1 - outs[0], 1 - outs[1]});
    });
    REQUIRE(deterministic_value(g).value == Rational(3, 4));
}

TEST_CASE("postselected evaluation conditions on the scored answers") {
    const Game g = make_teleported_chsh(true);
    DeterministicStrategy s = zero_strategy(g);
    REQUIRE(g.players[2].outputs[0] == "success");
    // Charlie reports success, so every question is scored and the value is
    // the plain chsh payoff of constant answers.
    REQUIRE(evaluate_deterministic(g, s) == Rational(3, 4));
    // Charlie reports failure, nothing is scored, and the value collapses.
    s.answer[2][0] = 1;
    REQUIRE(evaluate_deterministic(g, s) == Rational(0));
    // Postselection cannot push a deterministic strategy past the chsh bound
    // because Charlie's single answer either keeps all questions or none.
    REQUIRE(deterministic_value(g).value == Rational(3, 4));
}
