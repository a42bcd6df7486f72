#pragma once

#include <nsgames/game.hpp>
#include <nsgames/lp.hpp>
#include <nsgames/tables.hpp>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace nsgames {

// Conditional table shell over the game's full product input space; the
// not-asked symbol, when present in an alphabet, is an ordinary input.
inline ConditionalTable table_shell(const Game& game) {
    ConditionalTable t;
    for (const auto& p : game.players) {
        t.parties.push_back(p.name);
        t.inputs.push_back(p.inputs);
        t.outputs.push_back(p.outputs);
    }
    return t;
}

// Linear program over the variables p(outputs | inputs) of the full product
// input space whose feasible points are exactly the non-signaling tables and
// whose objective is the winning probability. Normalization rows come first,
// then per-party non-signaling rows over consecutive input pairs; redundant
// rows are not removed here.
inline LinearProgram build_ns_polytope(const Game& game,
                                       std::size_t max_vars = 20000) {
    if (game.has_postselection())
        throw std::invalid_argument("postselected games have no linear objective");
    const ConditionalTable shell = table_shell(game);
    const std::size_t is = shell.input_space();
    const std::size_t os = shell.output_space();
    if (is * os > max_vars)
        throw std::runtime_error("non-signaling polytope exceeds variable cap");

    LinearProgram lp;
    lp.var_names.reserve(is * os);
    std::vector<int> in, out;
    for (std::size_t i = 0; i < is; ++i) {
        shell.decode_input(i, in);
        for (std::size_t o = 0; o < os; ++o) {
            shell.decode_output(o, out);
            std::string name = "p(";
            for (std::size_t p = 0; p < shell.num_parties(); ++p)
                name += (p ? "," : "") + shell.outputs[p][out[p]];
            name += "|";
            for (std::size_t p = 0; p < shell.num_parties(); ++p)
                name += (p ? "," : "") + shell.inputs[p][in[p]];
            name += ")";
            lp.var_names.push_back(std::move(name));
        }
    }

    lp.objective.assign(is * os, Rational(0));
    for (std::size_t q = 0; q < game.questions.size(); ++q) {
        std::vector<int> qin(game.players.size());
        for (int p = 0; p < game.num_players(); ++p)
            qin[p] = game.input_index(p, game.questions[q].inputs[p]);
        const std::size_t i = shell.input_index(qin);
        for (std::size_t o = 0; o < os; ++o)
            if (game.accept[q][o]) lp.objective[i * os + o] += game.questions[q].prob;
    }

    for (std::size_t i = 0; i < is; ++i) {
        LinearConstraint c;
        c.coeffs.assign(is * os, Rational(0));
        for (std::size_t o = 0; o < os; ++o) c.coeffs[i * os + o] = 1;
        c.rel = Relation::eq;
        c.rhs = 1;
        c.label = "norm[" + std::to_string(i) + "]";
        lp.constraints.push_back(std::move(c));
    }

    const int m = game.num_players();
    std::vector<int> others;
    for (int party = 0; party < m; ++party) {
        const std::size_t nin = shell.inputs[party].size();
        if (nin < 2) continue;
        others.clear();
        for (int p = 0; p < m; ++p)
            if (p != party) others.push_back(p);
        std::size_t others_in = 1, others_out = 1;
        for (const int p : others) {
            others_in *= shell.inputs[p].size();
            others_out *= shell.outputs[p].size();
        }
        std::vector<int> in(m), out(m);
        for (std::size_t oi = 0; oi < others_in; ++oi) {
            std::size_t rest = oi;
            for (auto it = others.rbegin(); it != others.rend(); ++it) {
                in[*it] = static_cast<int>(rest % shell.inputs[*it].size());
                rest /= shell.inputs[*it].size();
            }
            for (std::size_t a = 0; a + 1 < nin; ++a)
                for (std::size_t oo = 0; oo < others_out; ++oo) {
                    rest = oo;
                    for (auto it = others.rbegin(); it != others.rend(); ++it) {
                        out[*it] = static_cast<int>(rest % shell.outputs[*it].size());
                        rest /= shell.outputs[*it].size();
                    }
                    LinearConstraint c;
                    c.coeffs.assign(is * os, Rational(0));
                    for (std::size_t x = 0; x < shell.outputs[party].size(); ++x) {
                        out[party] = static_cast<int>(x);
                        in[party] = static_cast<int>(a);
                        c.coeffs[shell.input_index(in) * os + shell.output_index(out)] += 1;
                        in[party] = static_cast<int>(a + 1);
                        c.coeffs[shell.input_index(in) * os + shell.output_index(out)] -= 1;
                    }
                    c.rel = Relation::eq;
                    c.rhs = 0;
                    c.label = "ns[" + game.players[party].name + "," +
                              shell.inputs[party][a] + "~" + shell.inputs[party][a + 1] +
                              "]";
                    lp.constraints.push_back(std::move(c));
                }
        }
    }
    return lp;
}

inline ConditionalTable table_from_solution(const Game& game,
                                            const std::vector<Rational>& x) {
    ConditionalTable t = table_shell(game);
    t.entries = x;
    if (t.entries.size() != t.input_space() * t.output_space())
        throw std::invalid_argument("solution vector has wrong length");
    return t;
}

struct NsValue {
    Rational value;
    ConditionalTable witness;
};

// Parses one constraint of the mini-language
//   P(X=0|A=0)=3/4
// where the left side lists output assignments, the condition lists input
// assignments (both by the players' declared variable names), and the right
// side is a rational. Expands to one equality per full input combination
// matching the input pattern: the matching outputs' mass must equal the
// right-hand side.
inline std::vector<LinearConstraint> parse_probability_constraint(
    const Game& game, const std::string& text) {
    const auto fail = [&](const std::string& why) {
        throw std::invalid_argument("constraint '" + text + "': " + why);
    };
    std::string s;
    for (const char c : text)
        if (c != ' ' && c != '\t') s += c;
    if (s.rfind("P(", 0) != 0) fail("expected P(...)");
    const auto close = s.find(')');
    if (close == std::string::npos) fail("missing ')'");
    if (close + 1 >= s.size() || s[close + 1] != '=') fail("expected '=' after ')'");
    const Rational target = parse_rational(s.substr(close + 2));
    const std::string body = s.substr(2, close - 2);
    const auto bar = body.find('|');
    if (bar == std::string::npos) fail("missing '|'");

    struct Assignment {
        int player;
        int symbol;
    };
    const auto parse_side = [&](const std::string& side, bool is_output) {
        std::vector<Assignment> result;
        std::size_t pos = 0;
        while (pos < side.size()) {
            auto comma = side.find(',', pos);
            if (comma == std::string::npos) comma = side.size();
            const std::string item = side.substr(pos, comma - pos);
            const auto eq = item.find('=');
            if (eq == std::string::npos) fail("expected var=symbol in '" + item + "'");
            const std::string var = item.substr(0, eq);
            const std::string sym = item.substr(eq + 1);
            int player = -1;
            for (int p = 0; p < game.num_players(); ++p)
                if ((is_output ? game.players[p].output_var
                               : game.players[p].input_var) == var)
                    player = p;
            if (player < 0) fail("unknown variable '" + var + "'");
            const int symbol = is_output ? game.output_index(player, sym)
                                         : game.input_index(player, sym);
            if (symbol < 0) fail("symbol '" + sym + "' not in alphabet of '" + var + "'");
            result.push_back({player, symbol});
            pos = comma + 1;
        }
        return result;
    };
    const std::vector<Assignment> out_pattern = parse_side(body.substr(0, bar), true);
    const std::vector<Assignment> in_pattern = parse_side(body.substr(bar + 1), false);
    if (out_pattern.empty()) fail("no output assignments");

    const ConditionalTable shell = table_shell(game);
    const std::size_t is = shell.input_space();
    const std::size_t os = shell.output_space();
    std::vector<LinearConstraint> rows;
    std::vector<int> in, out;
    for (std::size_t i = 0; i < is; ++i) {
        shell.decode_input(i, in);
        bool match = true;
        for (const auto& a : in_pattern)
            if (in[a.player] != a.symbol) match = false;
        if (!match) continue;
        LinearConstraint c;
        c.coeffs.assign(is * os, Rational(0));
        for (std::size_t o = 0; o < os; ++o) {
            shell.decode_output(o, out);
            bool keep = true;
            for (const auto& a : out_pattern)
                if (out[a.player] != a.symbol) keep = false;
            if (keep) c.coeffs[i * os + o] = 1;
        }
        c.rel = Relation::eq;
        c.rhs = target;
        c.label = text + " @input[" + std::to_string(i) + "]";
        rows.push_back(std::move(c));
    }
    if (rows.empty()) fail("no input combination matches");
    return rows;
}

// Maximum winning probability over non-signaling tables, with an optimal
// vertex as witness.
inline NsValue ns_value(const Game& game, std::size_t max_vars = 20000) {
    LinearProgram lp = build_ns_polytope(game, max_vars);
    if (!eliminate_redundant_equalities(lp))
        throw std::logic_error("non-signaling system is inconsistent");
    const LpSolution sol = solve_lp(lp);
    if (sol.status != LpStatus::optimal)
        throw std::logic_error("non-signaling polytope should be a nonempty polytope");
    return {sol.value, table_from_solution(game, sol.x)};
}

// Maximum winning probability over non-signaling tables subject to extra
// rational linear equalities on the table entries.
inline NsValue constrained_ns_value(const Game& game,
                                    const std::vector<LinearConstraint>& extra,
                                    std::size_t max_vars = 20000) {
    LinearProgram lp = build_ns_polytope(game, max_vars);
    for (const auto& c : extra) {
        if (c.coeffs.size() != lp.num_vars())
            throw std::invalid_argument("extra constraint has wrong arity");
        lp.constraints.push_back(c);
    }
    if (!eliminate_redundant_equalities(lp))
        throw std::invalid_argument("constraints are inconsistent");
    const LpSolution sol = solve_lp(lp);
    if (sol.status == LpStatus::infeasible)
        throw std::invalid_argument("constraints cut the polytope to the empty set");
    if (sol.status != LpStatus::optimal)
        throw std::logic_error("bounded program reported unbounded");
    return {sol.value, table_from_solution(game, sol.x)};
}

inline NsValue constrained_ns_value(const Game& game,
                                    const std::vector<std::string>& constraints,
                                    std::size_t max_vars = 20000) {
    std::vector<LinearConstraint> rows;
    for (const auto& text : constraints)
        for (auto& c : parse_probability_constraint(game, text))
            rows.push_back(std::move(c));
    return constrained_ns_value(game, rows, max_vars);
}

}  // namespace nsgames
