#pragma once

#include <nsgames/bounds.hpp>
#include <nsgames/classical.hpp>
#include <nsgames/families.hpp>
#include <nsgames/network.hpp>
#include <nsgames/ns_value.hpp>
#include <nsgames/quantum.hpp>
#include <nsgames/report.hpp>
#include <nsgames/serialize.hpp>
#include <nsgames/surgery.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace nsgames {
namespace detail {

struct OutputOptions {
    std::string format = "json";
    std::string output;
};

inline void emit_report(const OutputOptions& opt, const Json& report) {
    std::string text;
    if (opt.format == "json") text = dump_json(report);
    else if (opt.format == "markdown") text = render_markdown(report);
    else if (opt.format == "csv") text = render_csv(report);
    else throw std::invalid_argument("unknown format '" + opt.format + "'");
    if (opt.output.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(opt.output);
        if (!f) throw std::invalid_argument("cannot write to '" + opt.output + "'");
        f << text;
    }
}

struct GameSelection {
    std::string family = "chsh";
    std::string file;
    int n = 2;
    int k = 1;
    int bobs = 2;
    bool postselected = false;
    CLI::Option* family_opt = nullptr;
    CLI::Option* file_opt = nullptr;

    bool any_given() const {
        return (family_opt && family_opt->count()) || (file_opt && file_opt->count());
    }
};

inline void add_game_options(CLI::App* sub, GameSelection& sel) {
    sel.family_opt = sub->add_option(
        "--game", sel.family,
        "game family: chsh, chsh_n, extended_chsh, extended_chsh_n, ghz, "
        "teleported_chsh, distributed_chsh");
    sel.file_opt = sub->add_option("--game-file", sel.file, "JSON game description");
    sub->add_option("--n", sel.n, "chained-game parameter n");
    sub->add_option("--k", sel.k, "number of checking players k");
    sub->add_option("--bobs", sel.bobs, "number of Bobs in the distributed game");
    sub->add_flag("--postselected", sel.postselected,
                  "score the teleported game on heralded successes only");
}

inline Game select_game(const GameSelection& sel) {
    if (sel.file_opt && sel.file_opt->count()) {
        if (sel.family_opt && sel.family_opt->count())
            throw std::invalid_argument("pass either --game or --game-file, not both");
        std::ifstream f(sel.file);
        if (!f) throw std::invalid_argument("cannot open game file '" + sel.file + "'");
        return game_from_json(Json::parse(f));
    }
    if (sel.family == "chsh") return make_chsh();
    if (sel.family == "chsh_n") return make_chsh_n(sel.n);
    if (sel.family == "extended_chsh") return make_extended_chsh(sel.k);
    if (sel.family == "extended_chsh_n") return make_extended_chsh_n(sel.n, sel.k);
    if (sel.family == "ghz") return make_ghz_game();
    if (sel.family == "teleported_chsh") return make_teleported_chsh(sel.postselected);
    if (sel.family == "distributed_chsh") return make_distributed_chsh(sel.bobs);
    throw std::invalid_argument("unknown game family '" + sel.family + "'");
}

inline void require_valid(const Game& game) {
    const ValidationReport report = validate_game(game);
    if (!report.ok)
        throw std::invalid_argument("invalid game: " + report.violations.front());
}

inline std::vector<std::string> split_commas(const std::string& text) {
    std::vector<std::string> parts;
    std::string current;
    for (const char c : text) {
        if (c == ',') {
            parts.push_back(current);
            current.clear();
        } else {
            current += c;
        }
    }
    if (!current.empty() || !parts.empty()) parts.push_back(current);
    return parts;
}

}  // namespace detail

inline int run(int argc, const char* const* argv) {
    using detail::emit_report;

    CLI::App app{"laboratory for classical, quantum, and non-signaling values of "
                 "multiparty games"};
    app.fallthrough();
    app.require_subcommand(1);

    detail::OutputOptions out;
    app.add_option("--format", out.format, "report format: json, markdown, csv")
        ->default_val("json");
    app.add_option("--output", out.output, "write the report to a file instead of stdout");

    int exit_code = 0;

    // value: classical, non-signaling, and quantum winning probabilities.
    auto* value_cmd =
        app.add_subcommand("value", "compute the values of a game, with sanity guards");
    detail::GameSelection value_sel;
    detail::add_game_options(value_cmd, value_sel);
    std::uint64_t enum_cap = 100000000ull;
    value_cmd->add_option("--enum-cap", enum_cap,
                          "cap on the deterministic strategy enumeration");
    value_cmd->callback([&] {
        const Game game = detail::select_game(value_sel);
        detail::require_valid(game);
        Json rep;
        rep["game"] = game.name;
        rep["players"] = game.num_players();
        rep["questions"] = game.questions.size();
        const DeterministicValue cv = deterministic_value(game, enum_cap);
        rep["classical_value"] = to_string(cv.value);
        rep["classical_value_decimal"] = to_double(cv.value);
        rep["strategies_enumerated"] = cv.strategies_enumerated;
        Rational nsv;
        bool have_ns = false;
        if (!game.has_postselection()) {
            const NsValue nv = ns_value(game);
            nsv = nv.value;
            have_ns = true;
            rep["ns_value"] = to_string(nv.value);
            rep["ns_value_decimal"] = to_double(nv.value);
            rep["ns_vertex_deterministic"] = vertex_is_deterministic(nv.witness);
        }
        double qv = 0;
        bool have_q = false;
        if (game.family == Family::teleported_chsh) {
            qv = game.has_postselection() ? simulate_teleported_chsh().win_given_success
                                          : teleported_chsh_value();
            have_q = true;
        } else {
            try {
                qv = evaluate_quantum(game, canonical_strategy(game)).overall;
                have_q = true;
            } catch (const std::invalid_argument&) {
                // No canonical entangled strategy for this game.
            }
        }
        if (have_q) rep["quantum_value"] = qv;
        check_value_sanity(cv.value, have_ns ? &nsv : nullptr, have_q ? &qv : nullptr);
        rep["sanity"] = "ok";
        emit_report(out, rep);
    });

    // lp: the non-signaling polytope as an explicit linear program.
    auto* lp_cmd = app.add_subcommand(
        "lp", "solve the non-signaling LP, optionally with extra constraints");
    detail::GameSelection lp_sel;
    detail::add_game_options(lp_cmd, lp_sel);
    std::vector<std::string> constrain;
    std::string export_path;
    lp_cmd->add_option("--constrain", constrain,
                       "probability constraint like P(X=0|A=0)=1, repeatable");
    lp_cmd->add_option("--export", export_path, "write the LP in LP format to a file");
    lp_cmd->callback([&] {
        const Game game = detail::select_game(lp_sel);
        detail::require_valid(game);
        LinearProgram lp = build_ns_polytope(game);
        std::size_t norm_rows = 0, ns_rows = 0;
        for (const auto& c : lp.constraints) {
            if (c.label.rfind("norm", 0) == 0) ++norm_rows;
            if (c.label.rfind("ns[", 0) == 0) ++ns_rows;
        }
        std::size_t extra = 0;
        for (const auto& text : constrain) {
            const auto cs = parse_probability_constraint(game, text);
            extra += cs.size();
            lp.constraints.insert(lp.constraints.end(), cs.begin(), cs.end());
        }
        if (!export_path.empty()) {
            std::ofstream f(export_path);
            if (!f) throw std::invalid_argument("cannot write to '" + export_path + "'");
            write_lp_format(lp, f);
        }
        Json rep;
        rep["game"] = game.name;
        rep["variables"] = lp.num_vars();
        rep["rows"] = lp.constraints.size();
        rep["normalization_rows"] = norm_rows;
        rep["ns_rows"] = ns_rows;
        rep["extra_constraints"] = extra;
        LinearProgram reduced = lp;
        if (!eliminate_redundant_equalities(reduced)) {
            rep["status"] = "infeasible";
            exit_code = 1;
            emit_report(out, rep);
            return;
        }
        rep["rows_after_elimination"] = reduced.constraints.size();
        const LpSolution sol = solve_lp(reduced);
        rep["status"] = sol.status == LpStatus::optimal
                            ? "optimal"
                            : sol.status == LpStatus::infeasible ? "infeasible"
                                                                 : "unbounded";
        if (sol.status == LpStatus::optimal) {
            rep["value"] = to_string(sol.value);
            rep["value_decimal"] = to_double(sol.value);
            rep["pivots"] = sol.pivots;
            rep["vertex_deterministic"] =
                vertex_is_deterministic(table_from_solution(game, sol.x));
        } else {
            exit_code = 1;
        }
        emit_report(out, rep);
    });

    // simulate: quantum circuits and box networks, exact or sampled.
    auto* sim_cmd =
        app.add_subcommand("simulate", "run a quantum or box-network strategy");
    detail::GameSelection sim_sel;
    detail::add_game_options(sim_cmd, sim_sel);
    bool teleported = false, canonical = false, exor = false, exact = false;
    bool check_interleavings = false;
    std::string strategy_spec;
    std::uint64_t trials = 100000, seed = 12345;
    sim_cmd->add_flag("--teleported", teleported,
                      "simulate the CHSH strategy teleported through entanglement swapping");
    sim_cmd->add_flag("--canonical", canonical,
                      "evaluate the canonical entangled strategy of the game");
    sim_cmd->add_option("--strategy", strategy_spec,
                        "box-network strategy: a JSON file or builtin:ghz_one_box, "
                        "builtin:distributed_selection, builtin:distributed_resource");
    sim_cmd->add_flag("--exor", exor, "derive the PR-box strategy of an exor game");
    sim_cmd->add_flag("--exact", exact, "evaluate the network exactly instead of sampling");
    sim_cmd->add_flag("--check-interleavings", check_interleavings,
                      "evaluate every query interleaving and compare");
    sim_cmd->add_option("--trials", trials, "Monte Carlo trials")->default_val(100000);
    sim_cmd->add_option("--seed", seed, "RNG seed")->default_val(12345);
    sim_cmd->callback([&] {
        const int modes = (teleported ? 1 : 0) + (canonical ? 1 : 0) +
                          (strategy_spec.empty() ? 0 : 1) + (exor ? 1 : 0);
        if (modes != 1)
            throw std::invalid_argument(
                "choose exactly one of --teleported, --canonical, --strategy, --exor");
        Json rep;
        if (teleported) {
            const TeleportedChshResult r = simulate_teleported_chsh();
            rep["success_probability"] = r.success_probability;
            rep["win_given_success"] = r.win_given_success;
            rep["value"] = teleported_chsh_value();
            rep["noswap_value"] = teleported_chsh_noswap_value();
            emit_report(out, rep);
            return;
        }
        if (canonical) {
            const Game game = detail::select_game(sim_sel);
            detail::require_valid(game);
            const QuantumEvaluation ev = evaluate_quantum(game, canonical_strategy(game));
            rep["game"] = game.name;
            rep["overall"] = ev.overall;
            rep["per_question"] = ev.per_question;
            emit_report(out, rep);
            return;
        }
        Game game;
        NetworkStrategy strat;
        std::string strat_name;
        if (exor) {
            game = detail::select_game(sim_sel);
            detail::require_valid(game);
            strat = exor_box_strategy(game);
            strat_name = "exor";
        } else if (strategy_spec == "builtin:ghz_one_box") {
            game = sim_sel.any_given() ? detail::select_game(sim_sel) : make_ghz_game();
            detail::require_valid(game);
            strat = ghz_box_strategy(game);
            strat_name = strategy_spec;
        } else if (strategy_spec == "builtin:distributed_selection" ||
                   strategy_spec == "builtin:distributed_resource") {
            game = sim_sel.any_given() ? detail::select_game(sim_sel)
                                       : make_distributed_chsh(2);
            detail::require_valid(game);
            strat = strategy_spec == "builtin:distributed_selection"
                        ? distributed_selection_strategy(game)
                        : distributed_resource_strategy(game);
            strat_name = strategy_spec;
        } else {
            game = detail::select_game(sim_sel);
            detail::require_valid(game);
            std::ifstream f(strategy_spec);
            if (!f)
                throw std::invalid_argument("cannot open strategy file '" + strategy_spec +
                                            "'");
            strat = network_from_json(Json::parse(f));
            strat_name = strategy_spec;
        }
        rep["game"] = game.name;
        rep["strategy"] = strat_name;
        rep["boxes"] = strat.boxes.size();
        if (check_interleavings) {
            const auto orders = all_interleavings(strat);
            std::set<Rational> values;
            for (const auto& order : orders)
                values.insert(evaluate_network(game, strat, order));
            rep["interleavings"] = orders.size();
            rep["all_equal"] = values.size() == 1;
            Json vals = Json::array();
            for (const auto& v : values) vals.push_back(to_string(v));
            rep["values"] = vals;
            if (values.size() != 1) exit_code = 1;
        } else if (exact) {
            const Rational v = evaluate_network(game, strat);
            rep["value"] = to_string(v);
            rep["value_decimal"] = to_double(v);
        } else {
            const SampleResult r = sample_network(game, strat, trials, seed);
            rep["trials"] = r.trials;
            rep["seed"] = seed;
            rep["wins"] = r.wins;
            rep["estimate"] = r.estimate;
            rep["std_error"] = r.std_error;
        }
        emit_report(out, rep);
    });

    // surgery: run the randomness-fixing schedule of an instance file.
    auto* surgery_cmd = app.add_subcommand(
        "surgery", "fix a player's randomness and verify the loss bounds");
    std::string instance_path;
    int surgery_question = -1;
    std::string surgery_resource;
    surgery_cmd->add_option("--file", instance_path, "surgery instance JSON")->required();
    surgery_cmd->add_option("--question", surgery_question,
                            "anchor question when the file has no schedule");
    surgery_cmd->add_option("--resource", surgery_resource,
                            "comma-separated parties of the fixing resource");
    surgery_cmd->callback([&] {
        std::ifstream f(instance_path);
        if (!f)
            throw std::invalid_argument("cannot open instance file '" + instance_path +
                                        "'");
        const Json inst = Json::parse(f);
        const ParameterizedStrategy strategy = strategy_from_json(inst);
        std::vector<SurgeryStep> schedule;
        if (inst.count("schedule")) {
            schedule = schedule_from_json(inst.at("schedule"));
        } else if (surgery_question >= 0) {
            SurgeryStep step;
            step.v = strategy.v;
            step.question = surgery_question;
            step.resource = detail::split_commas(surgery_resource);
            schedule.push_back(std::move(step));
        } else {
            throw std::invalid_argument(
                "the instance has no schedule; pass --question and --resource");
        }
        const IteratedSurgery result = iterate_surgery(strategy, schedule);
        Json rep;
        rep["v"] = strategy.v;
        rep["schedule_length"] = schedule.size();
        bool ok = result.all_bounds_verified;
        Json steps = Json::array();
        for (const auto& r : result.reports) {
            Json sj;
            sj["question"] = r.question;
            sj["u_players"] = r.u_players;
            sj["block_u"] = r.block_u;
            sj["block_uv"] = r.block_uv;
            sj["block_v"] = r.block_v;
            sj["block_w"] = r.block_w;
            Json pinned;
            for (const auto& [name, val] : r.pinned) pinned[name] = val;
            sj["pinned"] = pinned;
            Json losses = Json::array();
            for (const auto& [q, before] : r.eps_before) {
                Json l;
                l["question"] = q;
                l["before"] = to_string(before);
                l["after"] = to_string(r.eps_after.at(q));
                l["before_decimal"] = to_double(before);
                l["after_decimal"] = to_double(r.eps_after.at(q));
                l["v_compatible"] = r.v_compatible.at(q);
                losses.push_back(l);
            }
            sj["losses"] = losses;
            sj["anchor_non_increasing"] = r.anchor_non_increasing;
            sj["compatible_bounds_hold"] = r.compatible_bounds_hold;
            ok = ok && r.anchor_non_increasing && r.compatible_bounds_hold;
            steps.push_back(sj);
        }
        rep["steps"] = steps;
        Json bounds = Json::array();
        for (const auto& [q, coeffs] : result.bound_coefficients) {
            Json b;
            b["question"] = q;
            b["valid"] = result.bound_valid.at(q);
            Json c;
            for (const auto& [src, k] : coeffs) c[std::to_string(src)] = k;
            b["coefficients"] = c;
            b["final_loss"] = to_string(loss_probability(result.strategy, q));
            bounds.push_back(b);
        }
        rep["bounds"] = bounds;
        rep["all_verified"] = ok;
        if (!ok) exit_code = 1;
        emit_report(out, rep);
    });

    // table: the quantum-over-non-signaling gap table.
    auto* table_cmd = app.add_subcommand(
        "table", "tabulate quantum vs non-signaling gaps of the extended games");
    int kmin = 1, kmax = 12, nmax = 0;
    table_cmd->add_option("--kmin", kmin, "smallest k")->default_val(1);
    table_cmd->add_option("--kmax", kmax, "largest k")->default_val(12);
    table_cmd->add_option("--nmax", nmax, "search limit for n (0 = automatic)");
    table_cmd->callback([&] {
        const std::vector<GapRow> rows = gap_table(kmin, kmax, nmax);
        Json arr = Json::array();
        for (const auto& row : rows) {
            Json r;
            r["k"] = row.k;
            r["chsh_gap"] = format_gap(row.chsh_gap);
            r["best_n"] = row.best_n;
            r["chshn_gap"] = format_gap(row.chshn_gap);
            arr.push_back(r);
        }
        emit_report(out, arr);
    });

    // check: non-signaling and game well-formedness reports.
    auto* check_cmd = app.add_subcommand(
        "check", "validate boxes, multi-round behaviors, and game descriptions");
    detail::GameSelection check_sel;
    detail::add_game_options(check_cmd, check_sel);
    std::string box_spec, multiround_spec, questions_spec;
    bool validate_flag = false, uniqueness_flag = false;
    check_cmd->add_option("--box", box_spec,
                          "box to check: a JSON file or builtin:nonlocal, "
                          "builtin:selection, builtin:resource_r");
    check_cmd->add_option("--multiround", multiround_spec,
                          "multi-round behavior to check: builtin:opposite_order");
    check_cmd->add_flag("--validate", validate_flag, "validate the selected game");
    check_cmd->add_flag("--uniqueness", uniqueness_flag,
                        "check the unique-answer property of the selected game");
    check_cmd->add_option("--questions", questions_spec,
                          "comma-separated question indices for --uniqueness");
    check_cmd->callback([&] {
        Json rep;
        if (!box_spec.empty()) {
            std::string name;
            ConditionalTable table;
            if (box_spec == "builtin:nonlocal") {
                const NSBox b = nonlocal_box();
                name = b.name;
                table = b.table;
            } else if (box_spec == "builtin:selection") {
                const NSBox b = selection_box();
                name = b.name;
                table = b.table;
            } else if (box_spec == "builtin:resource_r") {
                const NSBox b = resource_r();
                name = b.name;
                table = b.table;
            } else {
                std::ifstream f(box_spec);
                if (!f)
                    throw std::invalid_argument("cannot open box file '" + box_spec + "'");
                const Json j = Json::parse(f);
                name = j.count("name") ? j.at("name").get<std::string>() : box_spec;
                table = table_from_json(j);
            }
            const bool normalized = table.normalized();
            const NsCheckReport ns = check_nonsignaling(table);
            rep["box"] = name;
            rep["normalized"] = normalized;
            rep["non_signaling"] = ns.ok;
            rep["violation_count"] = ns.violations.size();
            Json viols = Json::array();
            for (const auto& v : ns.violations) {
                if (viols.size() == 20) break;
                Json vj;
                vj["party"] = table.parties.at(v.party);
                vj["inputs_a"] = v.inputs_a;
                vj["inputs_b"] = v.inputs_b;
                vj["other_outputs"] = v.other_outputs;
                vj["lhs"] = to_string(v.lhs);
                vj["rhs"] = to_string(v.rhs);
                viols.push_back(vj);
            }
            rep["violations"] = viols;
            if (!normalized || !ns.ok) exit_code = 1;
        } else if (!multiround_spec.empty()) {
            if (multiround_spec != "builtin:opposite_order")
                throw std::invalid_argument("unknown multi-round behavior '" +
                                            multiround_spec + "'");
            const MultiRoundTable table = opposite_order_pr_table();
            const MultiRoundCheckReport r = check_multiround_ns(table);
            rep["table"] = "opposite_order_pr";
            rep["non_signaling"] = r.ok;
            rep["violation_count"] = r.violations.size();
            Json viols = Json::array();
            for (const auto& v : r.violations) {
                if (viols.size() == 20) break;
                Json vj;
                vj["cut"] = v.cut;
                vj["prefix_inputs"] = v.prefix_inputs;
                vj["suffix_inputs_a"] = v.suffix_inputs_a;
                vj["suffix_inputs_b"] = v.suffix_inputs_b;
                vj["prefix_outputs"] = v.prefix_outputs;
                vj["lhs"] = to_string(v.lhs);
                vj["rhs"] = to_string(v.rhs);
                viols.push_back(vj);
            }
            rep["violations"] = viols;
            if (!r.ok) exit_code = 1;
        } else if (validate_flag) {
            const Game game = detail::select_game(check_sel);
            const ValidationReport r = validate_game(game);
            rep["game"] = game.name;
            rep["valid"] = r.ok;
            rep["violations"] = r.violations;
            if (!r.ok) exit_code = 1;
        } else if (uniqueness_flag) {
            const Game game = detail::select_game(check_sel);
            detail::require_valid(game);
            std::vector<int> questions;
            if (questions_spec.empty()) {
                questions = all_question_indices(game);
            } else {
                for (const auto& part : detail::split_commas(questions_spec))
                    questions.push_back(std::stoi(part));
            }
            const UniquenessReport r = check_uniqueness(game, questions);
            rep["game"] = game.name;
            Json qs = Json::array();
            for (const int q : questions) qs.push_back(q);
            rep["questions"] = qs;
            rep["unique"] = r.unique;
            Json ces = Json::array();
            for (const auto& ce : r.counterexamples) {
                if (ces.size() == 20) break;
                Json cj;
                cj["question"] = ce.question;
                cj["player"] = game.players.at(ce.player).name;
                cj["context"] = ce.context;
                cj["accepting_answers"] = ce.accepting_answers;
                ces.push_back(cj);
            }
            rep["counterexamples"] = ces;
            if (!r.unique) exit_code = 1;
        } else {
            throw std::invalid_argument(
                "nothing to check: pass --box, --multiround, --validate, or --uniqueness");
        }
        emit_report(out, rep);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::logic_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return exit_code;
}

}  // namespace nsgames
