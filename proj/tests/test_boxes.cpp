#include <catch2/catch_amalgamated.hpp>

#include <nsgames/boxes.hpp>
#include <nsgames/families.hpp>
#include <nsgames/network.hpp>

#include <cmath>
#include <functional>

using namespace nsgames;

namespace {

// All-questions parity game on m binary players: accept when the answers'
// parity equals target(question input bits).
Game parity_game(int m, const std::function<int(const std::vector<int>&)>& target) {
    Game g;
    g.name = "parity";
    g.family = Family::custom;
    for (int p = 0; p < m; ++p) {
        PlayerSpec spec;
        spec.name = "P" + std::to_string(p + 1);
        spec.input_var = "A" + std::to_string(p + 1);
        spec.output_var = "X" + std::to_string(p + 1);
        spec.inputs = {"0", "1"};
        spec.outputs = {"0", "1"};
        g.players.push_back(std::move(spec));
    }
    std::vector<std::vector<int>> combos;
    for (int idx = 0; idx < (1 << m); ++idx) {
        Question q;
        std::vector<int> bits(m);
        for (int p = 0; p < m; ++p) {
            bits[p] = (idx >> (m - 1 - p)) & 1;
            q.inputs.push_back(bits[p] ? "1" : "0");
        }
        q.prob = Rational(1, 1 << m);
        q.tag = QuestionTag::game;
        g.questions.push_back(std::move(q));
        combos.push_back(std::move(bits));
    }
    build_predicate(g, [&](int q, const std::vector<int>& outs) {
        int parity = 0;
        for (const int o : outs) parity ^= o;
        return parity == target(combos[q]);
    });
    return g;
}

// Constant-zero answers with no boxes.
NetworkStrategy constant_strategy(const Game& game) {
    NetworkStrategy s;
    s.programs.resize(game.players.size());
    for (std::size_t p = 0; p < game.players.size(); ++p)
        s.programs[p].answer_table = make_table(
            {1, game.players[p].inputs.size()}, [](const std::vector<int>&) { return 0; });
    return s;
}

}  // namespace

TEST_CASE("builtin boxes are sound") {
    for (const NSBox& box : {nonlocal_box(), selection_box(), resource_r()}) {
        REQUIRE(box.table.normalized());
        REQUIRE(check_nonsignaling(box.table).ok);
    }
    REQUIRE(nonlocal_box("A", "B").port_of("B") == 1);
    REQUIRE(nonlocal_box("A", "B").port_of("C") == -1);
    REQUIRE(resource_r().table.num_parties() == 3);
}

TEST_CASE("make_box rejects broken tables") {
    ConditionalTable t = nonlocal_box().table;
    t.at({0, 0}, {0, 0}) = Rational(1);  // not normalized any more
    REQUIRE_THROWS_AS(make_box("broken", t), std::invalid_argument);
    t.at({0, 0}, {1, 1}) = Rational(0);  // normalized but signaling
    REQUIRE(t.normalized());
    REQUIRE_THROWS_AS(make_box("signaling", t), std::invalid_argument);
}

TEST_CASE("factorization reconstructs two-party boxes") {
    for (const NSBox& box : {nonlocal_box(), selection_box()}) {
        for (const Direction d : {Direction::forward, Direction::reverse}) {
            const Factorization f = factorize(box, d);
            REQUIRE(f.reconstruct(box).entries == box.table.entries);
        }
    }
    // The leading marginal of the nonlocal box is uniform.
    const Factorization f = factorize(nonlocal_box(), Direction::forward);
    for (const auto& marginal : f.stage1)
        for (const auto& mass : marginal) REQUIRE(mass == Rational(1, 2));
    REQUIRE_THROWS_AS(factorize(resource_r(), Direction::forward),
                      std::invalid_argument);
}

TEST_CASE("one nonlocal box wins chsh") {
    const Game g = make_chsh();
    const NetworkStrategy s = exor_box_strategy(g);
    REQUIRE(s.boxes.size() == 1);
    REQUIRE(evaluate_network(g, s) == Rational(1));
}

TEST_CASE("one nonlocal box wins the ghz game") {
    const Game g = make_ghz_game();

    const NetworkStrategy handmade = ghz_box_strategy(g);
    REQUIRE(handmade.boxes.size() == 1);
    REQUIRE(evaluate_network(g, handmade) == Rational(1));

    // The polynomial extraction reaches the same single cross term.
    const NetworkStrategy derived = exor_box_strategy(g);
    REQUIRE(derived.boxes.size() == 1);
    REQUIRE(evaluate_network(g, derived) == Rational(1));
}

TEST_CASE("two boxes win the two cross term parity game") {
    const Game g = parity_game(
        3, [](const std::vector<int>& a) { return (a[0] ^ a[1]) & a[2]; });
    const NetworkStrategy s = exor_box_strategy(g);
    REQUIRE(s.boxes.size() == 2);
    REQUIRE(evaluate_network(g, s) == Rational(1));
}

TEST_CASE("exor derivation rejects unsuitable games") {
    // Not a parity predicate at all.
    Game flat = parity_game(2, [](const std::vector<int>&) { return 0; });
    build_predicate(flat, [](int, const std::vector<int>& outs) {
        return outs[0] == 0 && outs[1] == 0;
    });
    REQUIRE_THROWS_WITH(exor_box_strategy(flat),
                        Catch::Matchers::ContainsSubstring("not an exor"));

    // Parity target of degree three over the full cube.
    const Game cubic = parity_game(
        3, [](const std::vector<int>& a) { return a[0] & a[1] & a[2]; });
    REQUIRE_THROWS_WITH(exor_box_strategy(cubic),
                        Catch::Matchers::ContainsSubstring("degree-two"));

    // Alphabets with the not-asked symbol are out of scope.
    REQUIRE_THROWS_AS(exor_box_strategy(make_extended_chsh(1)),
                      std::invalid_argument);
}

TEST_CASE("selection network wins the distributed game") {
    const Game g = make_distributed_chsh(2);
    const NetworkStrategy s = distributed_selection_strategy(g);
    REQUIRE(s.boxes.size() == 3);
    REQUIRE(evaluate_network(g, s) == Rational(1));
    REQUIRE_THROWS_AS(distributed_selection_strategy(make_distributed_chsh(3)),
                      std::invalid_argument);
}

TEST_CASE("switched resource network wins the distributed game") {
    const Game g = make_distributed_chsh(2);
    const NetworkStrategy s = distributed_resource_strategy(g);
    REQUIRE(s.boxes.size() == 2);
    REQUIRE(evaluate_network(g, s) == Rational(1));
}

TEST_CASE("interleaving invariance by exhaustive enumeration") {
    SECTION("ghz one box") {
        const Game g = make_ghz_game();
        const NetworkStrategy s = ghz_box_strategy(g);
        const auto orders = all_interleavings(s);
        REQUIRE(orders.size() == 2);
        for (const auto& order : orders)
            REQUIRE(evaluate_network(g, s, order) == Rational(1));
    }
    SECTION("distributed selection") {
        const Game g = make_distributed_chsh(2);
        const NetworkStrategy s = distributed_selection_strategy(g);
        const auto orders = all_interleavings(s);
        REQUIRE(orders.size() == 120);  // 6! / 3! for Alice's three queries
        for (const auto& order : orders)
            REQUIRE(evaluate_network(g, s, order) == Rational(1));
    }
    SECTION("distributed resource") {
        const Game g = make_distributed_chsh(2);
        const NetworkStrategy s = distributed_resource_strategy(g);
        const auto orders = all_interleavings(s);
        REQUIRE(orders.size() == 180);  // 6! / (2! 2!)
        for (const auto& order : orders)
            REQUIRE(evaluate_network(g, s, order) == Rational(1));
    }
}

TEST_CASE("default interleaving is round major") {
    REQUIRE(default_interleaving(ghz_box_strategy(make_ghz_game())) ==
            std::vector<int>{0, 1});
    REQUIRE(default_interleaving(
                distributed_resource_strategy(make_distributed_chsh(2))) ==
            std::vector<int>{0, 1, 2, 3, 0, 3});
}

TEST_CASE("shared randomness mixes exactly") {
    const Game g = make_chsh();
    NetworkStrategy s;
    s.programs.resize(2);
    s.shared = {Rational(1, 4), Rational(3, 4)};
    // Alice answers the shared bit, Bob answers zero: the mixture wins
    // 1/4 * 3/4 + 3/4 * 1/4.
    s.programs[0].answer_table =
        make_table({2, 2}, [](const std::vector<int>& d) { return d[0]; });
    s.programs[1].answer_table =
        make_table({2, 2}, [](const std::vector<int>&) { return 0; });
    REQUIRE(evaluate_network(g, s) == Rational(3, 8));

    s.shared = {Rational(1, 4), Rational(1, 4)};
    REQUIRE_THROWS_AS(evaluate_network(g, s), std::invalid_argument);
}

TEST_CASE("postselected games evaluate conditionally") {
    const Game g = make_teleported_chsh(true);
    NetworkStrategy s = constant_strategy(g);
    // Charlie's constant answer 0 reads "success": everything is scored and
    // constant answers win the usual three of four questions.
    REQUIRE(evaluate_network(g, s) == Rational(3, 4));
    // Constant "failure" scores nothing.
    s.programs[2].answer_table = make_table({1, 1}, [](const std::vector<int>&) { return 1; });
    REQUIRE(evaluate_network(g, s) == Rational(0));
}

TEST_CASE("malformed networks are rejected") {
    const Game g = make_ghz_game();
    NetworkStrategy s = ghz_box_strategy(g);
    s.programs[0].steps[0].box = 7;
    REQUIRE_THROWS_AS(evaluate_network(g, s), std::invalid_argument);

    s = ghz_box_strategy(g);
    s.programs[0].answer_table.pop_back();
    REQUIRE_THROWS_AS(evaluate_network(g, s), std::invalid_argument);

    s = ghz_box_strategy(g);
    s.programs[2].answer_table[0] = 5;
    REQUIRE_THROWS_AS(evaluate_network(g, s), std::invalid_argument);

    s = ghz_box_strategy(g);
    REQUIRE_THROWS_AS(evaluate_network(g, s, {0, 0, 1}), std::invalid_argument);
    REQUIRE_THROWS_AS(evaluate_network(g, s, {1}), std::invalid_argument);
}

TEST_CASE("enumeration caps") {
    const Game g = make_distributed_chsh(2);
    const NetworkStrategy s = distributed_selection_strategy(g);
    REQUIRE_THROWS_AS(all_interleavings(s, 10), std::runtime_error);
    REQUIRE_THROWS_AS(evaluate_network(g, s, {}, 5), std::runtime_error);
}

TEST_CASE("sampling a perfect strategy never loses") {
    const Game g = make_ghz_game();
    const SampleResult r = sample_network(g, ghz_box_strategy(g), 20000, 99);
    REQUIRE(r.trials == 20000);
    REQUIRE(r.wins == 20000);
    REQUIRE(r.estimate == 1.0);
    REQUIRE(r.std_error == 0.0);
}

TEST_CASE("sampling tracks the exact value within four standard errors") {
    const Game g = make_chsh();
    const NetworkStrategy s = constant_strategy(g);
    REQUIRE(evaluate_network(g, s) == Rational(3, 4));
    const SampleResult r = sample_network(g, s, 40000, 12345);
    REQUIRE(r.std_error > 0.0);
    REQUIRE(std::abs(r.estimate - 0.75) <= 4 * r.std_error);

    const SampleResult again = sample_network(g, s, 40000, 12345);
    REQUIRE(again.wins == r.wins);
    REQUIRE(again.estimate == r.estimate);

    const SampleResult other = sample_network(g, s, 40000, 54321);
    REQUIRE(std::abs(other.estimate - 0.75) <= 4 * other.std_error);
}
