#include <catch2/catch_amalgamated.hpp>

#include <nsgames/bounds.hpp>
#include <nsgames/families.hpp>
#include <nsgames/quantum.hpp>

#include <cmath>
#include <numbers>

using namespace nsgames;
using Catch::Matchers::WithinAbs;

namespace {
const double kPi = std::numbers::pi;
double cos2(double t) { return std::cos(t) * std::cos(t); }
}  // namespace

TEST_CASE("binary observables") {
    REQUIRE(BinaryObservable::sigma_z().valid());
    REQUIRE(BinaryObservable::sigma_x().valid());
    REQUIRE(BinaryObservable::sigma_y().valid());
    for (const double t : {0.0, 0.3, kPi / 4, -kPi / 3, 2.7})
        REQUIRE(BinaryObservable::from_angle(t).valid());
    REQUIRE(BinaryObservable::from_angle(1.1).negated().valid());

    BinaryObservable bad;
    bad.m = {Complex(1), Complex(1), Complex(1), Complex(1)};
    REQUIRE_FALSE(bad.valid());  // hermitian but not an involution
    bad.m = {Complex(0), Complex(0, 1), Complex(0, 1), Complex(0)};
    REQUIRE_FALSE(bad.valid());  // not hermitian
}

TEST_CASE("ghz state") {
    const StateVector s = ghz_state(3);
    REQUIRE(s.num_qubits == 3);
    REQUIRE_THAT(s.norm2(), WithinAbs(1.0, 1e-15));
    REQUIRE_THAT(std::abs(s.amp[0]), WithinAbs(1.0 / std::sqrt(2.0), 1e-15));
    REQUIRE_THAT(std::abs(s.amp[7]), WithinAbs(1.0 / std::sqrt(2.0), 1e-15));
    REQUIRE(s.amp[3] == Complex(0));
    REQUIRE_THROWS_AS(ghz_state(0), std::invalid_argument);
}

TEST_CASE("single qubit projections") {
    StateVector s = StateVector::zero(1);
    s.amp[0] = 1;
    apply_single_qubit(s, 0, kSigmaX);
    REQUIRE_THAT(std::abs(s.amp[1]), WithinAbs(1.0, 1e-15));
    REQUIRE_THAT(std::abs(s.amp[0]), WithinAbs(0.0, 1e-15));

    // |+> measured in the computational basis: each outcome with mass 1/2.
    StateVector plus = StateVector::zero(1);
    plus.amp[0] = plus.amp[1] = 1.0 / std::sqrt(2.0);
    StateVector copy = plus;
    REQUIRE_THAT(project_outcome(copy, 0, BinaryObservable::sigma_z(), 0),
                 WithinAbs(0.5, 1e-15));
    copy = plus;
    REQUIRE_THAT(project_outcome(copy, 0, BinaryObservable::sigma_z(), 1),
                 WithinAbs(0.5, 1e-15));
    // But |+> is the +1 eigenvector of sigma_x.
    copy = plus;
    REQUIRE_THAT(project_outcome(copy, 0, BinaryObservable::sigma_x(), 0),
                 WithinAbs(1.0, 1e-15));
}

TEST_CASE("bell projections") {
    for (int bell = 0; bell < 4; ++bell) {
        const auto [prob, rest] = detail::project_bell(ghz_state(2), 0, 1, bell);
        REQUIRE_THAT(prob, WithinAbs(bell == 0 ? 1.0 : 0.0, 1e-14));
        REQUIRE(rest.num_qubits == 0);
    }
    REQUIRE_THROWS_AS(detail::project_bell(ghz_state(2), 0, 1, 4),
                      std::invalid_argument);
}

TEST_CASE("chsh quantum value") {
    const Game g = make_chsh();
    const QuantumEvaluation e = evaluate_quantum(g, canonical_strategy(g));
    REQUIRE_THAT(e.overall, WithinAbs(cos2(kPi / 8), 1e-12));
    for (const double w : e.per_question)
        REQUIRE_THAT(w, WithinAbs(cos2(kPi / 8), 1e-12));
}

TEST_CASE("chained game quantum values") {
    for (int n = 2; n <= 8; ++n) {
        const Game g = make_chsh_n(n);
        const QuantumEvaluation e = evaluate_quantum(g, canonical_strategy(g));
        REQUIRE_THAT(e.overall, WithinAbs(cos2(kPi / (4 * n)), 1e-12));
        // The chained measurements win every question with the same
        // probability.
        for (const double w : e.per_question)
            REQUIRE_THAT(w, WithinAbs(cos2(kPi / (4 * n)), 1e-12));
    }
}

TEST_CASE("extended chsh quantum values") {
    for (int k = 1; k <= 6; ++k) {
        const Game g = make_extended_chsh(k);
        const QuantumEvaluation e = evaluate_quantum(g, canonical_strategy(g));
        const double expected =
            1.0 - 2.0 / (std::pow(3.0, k) + 1.0) * std::pow(std::sin(kPi / 8), 2);
        REQUIRE_THAT(e.overall, WithinAbs(expected, 1e-12));
        REQUIRE_THAT(e.overall, WithinAbs(quantum_lb_chsh_plus_k(k), 1e-12));
        // Consistency questions are won with certainty, game questions at the
        // plain chsh rate.
        for (int j = 0; j < k; ++j)
            REQUIRE_THAT(e.per_question[j], WithinAbs(1.0, 1e-12));
        for (int q = k; q < k + 4; ++q)
            REQUIRE_THAT(e.per_question[q], WithinAbs(cos2(kPi / 8), 1e-12));
    }
}

TEST_CASE("extended chained game quantum values") {
    const int cases[3][2] = {{3, 1}, {4, 2}, {5, 3}};
    for (const auto& c : cases) {
        const int n = c[0], k = c[1];
        const Game g = make_extended_chsh_n(n, k);
        const QuantumEvaluation e = evaluate_quantum(g, canonical_strategy(g));
        REQUIRE_THAT(e.overall, WithinAbs(quantum_lb_chshn(n, k), 1e-10));
        for (int j = 0; j < k; ++j)
            REQUIRE_THAT(e.per_question[j], WithinAbs(1.0, 1e-12));
        // The two a = 0 questions play the plain chained pair; signed
        // questions auto-win on half the checking parities.
        const int a0 = k + (n - 1) * 2;
        REQUIRE(g.questions[a0].inputs[0] == "0");
        REQUIRE_THAT(e.per_question[a0], WithinAbs(cos2(kPi / (4 * n)), 1e-12));
        REQUIRE_THAT(e.per_question[a0 + 1], WithinAbs(cos2(kPi / (4 * n)), 1e-12));
        REQUIRE_THAT(e.per_question[k],
                     WithinAbs(0.5 + 0.5 * cos2(kPi / (4 * n)), 1e-12));
    }
}

TEST_CASE("ghz quantum value is one") {
    const Game g = make_ghz_game();
    const QuantumEvaluation e = evaluate_quantum(g, canonical_strategy(g));
    REQUIRE_THAT(e.overall, WithinAbs(1.0, 1e-12));
    for (const double w : e.per_question) REQUIRE_THAT(w, WithinAbs(1.0, 1e-12));
}

TEST_CASE("relabeling the qubits does not change the value") {
    const Game g = make_chsh();
    QuantumStrategy qs = canonical_strategy(g);
    qs.qubit = {1, 0};  // the two-qubit ghz state is swap invariant
    const QuantumEvaluation e = evaluate_quantum(g, qs);
    REQUIRE_THAT(e.overall, WithinAbs(cos2(kPi / 8), 1e-12));
}

TEST_CASE("teleported chsh simulations") {
    const TeleportedChshResult r = simulate_teleported_chsh();
    REQUIRE_THAT(r.success_probability, WithinAbs(0.25, 1e-12));
    REQUIRE_THAT(r.win_given_success, WithinAbs(cos2(kPi / 8), 1e-12));
    REQUIRE_THAT(teleported_chsh_value(), WithinAbs(cos2(kPi / 8), 1e-12));
    REQUIRE_THAT(teleported_chsh_noswap_value(), WithinAbs(0.5, 1e-12));
}

TEST_CASE("evaluation rejects malformed strategies") {
    const Game g = make_chsh();
    QuantumStrategy qs = canonical_strategy(g);
    qs.measurement.erase({1, 1});
    REQUIRE_THROWS_AS(evaluate_quantum(g, qs), std::invalid_argument);

    qs = canonical_strategy(g);
    qs.qubit.pop_back();
    REQUIRE_THROWS_AS(evaluate_quantum(g, qs), std::invalid_argument);

    qs = canonical_strategy(g);
    qs.measurement[{0, 0}].m[1] = Complex(0.5);
    REQUIRE_THROWS_AS(evaluate_quantum(g, qs), std::invalid_argument);

    REQUIRE_THROWS_AS(evaluate_quantum(make_teleported_chsh(true),
                                       canonical_strategy(make_chsh())),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(canonical_strategy(make_teleported_chsh(false)),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(canonical_strategy(make_distributed_chsh(2)),
                      std::invalid_argument);
}
