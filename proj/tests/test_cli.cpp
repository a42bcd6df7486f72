#include <catch2/catch_amalgamated.hpp>

#include <nsgames/boxes.hpp>
#include <nsgames/families.hpp>
#include <nsgames/network.hpp>
#include <nsgames/report.hpp>
#include <nsgames/serialize.hpp>
#include <nsgames/surgery.hpp>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <string>

using namespace nsgames;
using Catch::Matchers::WithinAbs;

namespace {

struct CliResult {
    int code = -1;
    std::string out;
};

// Runs the CLI that ctest places next to this test binary and captures its
// standard output.
CliResult run_cli(const std::string& args, bool merge_stderr = false) {
    const std::string cmd =
        "./nsgames " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CliResult result;
    char buf[4096];
    std::size_t n = 0;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) result.out.append(buf, n);
    const int status = pclose(pipe);
    if (WIFEXITED(status)) result.code = WEXITSTATUS(status);
    return result;
}

Json parse_output(const CliResult& r) { return Json::parse(r.out); }

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    REQUIRE(f.good());
    f << text;
}

ParameterizedStrategy surgery_instance() {
    ParameterizedStrategy s;
    s.game = make_extended_chsh(1);
    s.v = "Alice";
    RandomSource u1{"u1", "Charlie_1", {"Alice", "Charlie_1"},
                    {Rational(1, 2), Rational(1, 2)}};
    RandomSource ab{"aB", "Alice", {"Alice", "Charlie_1"},
                    {Rational(1, 3), Rational(2, 3)}};
    RandomSource a1{"a1", "Alice", {"Alice", "Bob"}, {Rational(1, 4), Rational(3, 4)}};
    RandomSource w{"w", "Bob", {"Bob"}, {Rational(1, 6), Rational(5, 6)}};
    s.sources = {u1, ab, a1, w};
    s.v_answer["0"] = SourceFunction{{0, 1, 2}, {0, 1, 1, 0, 1, 0, 0, 1}};
    s.target[0] = SourceFunction{{0}, {0, 1}};
    s.target[1] = SourceFunction{{3}, {0, 1}};
    s.target[2] = SourceFunction{{3}, {1, 0}};
    return s;
}

const double kChshQuantum = std::cos(std::numbers::pi / 8) * std::cos(std::numbers::pi / 8);

}  // namespace

TEST_CASE("value subcommand") {
    const CliResult chsh = run_cli("value --game chsh");
    REQUIRE(chsh.code == 0);
    const Json j = parse_output(chsh);
    REQUIRE(j.at("players") == 2);
    REQUIRE(j.at("questions") == 4);
    REQUIRE(j.at("classical_value") == "3/4");
    REQUIRE(j.at("strategies_enumerated") == 16);
    REQUIRE(j.at("ns_value") == "1");
    REQUIRE(j.at("ns_vertex_deterministic") == false);
    REQUIRE_THAT(j.at("quantum_value").get<double>(), WithinAbs(kChshQuantum, 1e-12));
    REQUIRE(j.at("sanity") == "ok");

    // Identical invocations must be byte-identical.
    REQUIRE(run_cli("value --game chsh").out == chsh.out);

    const Json ghz = parse_output(run_cli("value --game ghz"));
    REQUIRE(ghz.at("classical_value") == "3/4");
    REQUIRE(ghz.at("ns_value") == "1");
    REQUIRE(ghz.at("strategies_enumerated") == 64);
    REQUIRE_THAT(ghz.at("quantum_value").get<double>(), WithinAbs(1.0, 1e-12));

    const Json chained = parse_output(run_cli("value --game chsh_n --n 3"));
    REQUIRE(chained.at("classical_value") == "5/6");
    REQUIRE(chained.at("ns_value") == "1");

    const Json extended = parse_output(run_cli("value --game extended_chsh --k 1"));
    REQUIRE(extended.at("classical_value") == "7/8");
    REQUIRE(extended.at("ns_value") == "1");
    REQUIRE_THAT(extended.at("quantum_value").get<double>(),
                 WithinAbs(0.926776695296637, 1e-12));

    // The postselected teleported game has no non-signaling LP report.
    const Json tele = parse_output(run_cli("value --game teleported_chsh --postselected"));
    REQUIRE(tele.at("classical_value") == "3/4");
    REQUIRE(tele.count("ns_value") == 0);
    REQUIRE_THAT(tele.at("quantum_value").get<double>(), WithinAbs(kChshQuantum, 1e-12));

    // A game without a canonical entangled strategy reports no quantum value.
    Json no_canon = game_to_json(make_chsh());
    no_canon["family"] = "distributed_chsh";
    write_file("cli_no_canonical.json", dump_json(no_canon));
    const Json dist = parse_output(run_cli("value --game-file cli_no_canonical.json"));
    REQUIRE(dist.at("classical_value") == "3/4");
    REQUIRE(dist.at("ns_value") == "1");
    REQUIRE(dist.count("quantum_value") == 0);
}

TEST_CASE("value subcommand errors") {
    const CliResult bad = run_cli("value --game nonsense", true);
    REQUIRE(bad.code == 2);
    REQUIRE(bad.out.find("unknown game family") != std::string::npos);
    REQUIRE(run_cli("value --game-file does_not_exist.json").code == 2);

    write_file("cli_game_chsh.json", dump_json(game_to_json(make_chsh())));
    const Json from_file = parse_output(run_cli("value --game-file cli_game_chsh.json"));
    REQUIRE(from_file.at("classical_value") == "3/4");
    REQUIRE(from_file.at("ns_value") == "1");
    REQUIRE(run_cli("value --game chsh --game-file cli_game_chsh.json").code == 2);

    // The enumeration cap aborts oversized strategy sweeps.
    REQUIRE(run_cli("value --game distributed_chsh --bobs 3 --enum-cap 100").code == 2);
}

TEST_CASE("lp subcommand") {
    const CliResult plain = run_cli("lp --game chsh");
    REQUIRE(plain.code == 0);
    const Json j = parse_output(plain);
    REQUIRE(j.at("variables") == 16);
    REQUIRE(j.at("rows") == 12);
    REQUIRE(j.at("normalization_rows") == 4);
    REQUIRE(j.at("ns_rows") == 8);
    REQUIRE(j.at("extra_constraints") == 0);
    REQUIRE(j.at("status") == "optimal");
    REQUIRE(j.at("value") == "1");
    REQUIRE(j.at("pivots").get<long>() > 0);
    REQUIRE(j.at("vertex_deterministic") == false);

    const Json pinned =
        parse_output(run_cli("lp --game chsh --constrain 'P(X=0|A=0)=1'"));
    REQUIRE(pinned.at("extra_constraints").get<int>() >= 1);
    REQUIRE(pinned.at("status") == "optimal");
    REQUIRE(pinned.at("value") == "3/4");
    REQUIRE(pinned.at("vertex_deterministic") == true);

    const CliResult clash = run_cli(
        "lp --game chsh --constrain 'P(X=0|A=0)=1/3' --constrain 'P(X=0|A=0)=1/2'");
    REQUIRE(clash.code == 1);
    REQUIRE(parse_output(clash).at("status") == "infeasible");

    const CliResult exported = run_cli("lp --game chsh --export cli_chsh.lp");
    REQUIRE(exported.code == 0);
    std::ifstream lp_file("cli_chsh.lp");
    REQUIRE(lp_file.good());
    std::string text((std::istreambuf_iterator<char>(lp_file)),
                     std::istreambuf_iterator<char>());
    REQUIRE(text.find("Maximize") != std::string::npos);
    REQUIRE(text.find("Subject To") != std::string::npos);
    REQUIRE(text.find("x0") != std::string::npos);

    REQUIRE(run_cli("lp --game chsh --constrain 'P(W=0|A=0)=1'").code == 2);
}

TEST_CASE("table subcommand") {
    const CliResult table = run_cli("table --kmax 3");
    REQUIRE(table.code == 0);
    const Json rows = parse_output(table);
    REQUIRE(rows.is_array());
    REQUIRE(rows.size() == 3);
    REQUIRE(rows[0].at("k") == 1);
    REQUIRE(rows[0].at("chsh_gap") == "5.178e-02");
    REQUIRE(rows[0].at("best_n") == 3);
    REQUIRE(rows[0].at("chshn_gap") == "4.272e-02");
    REQUIRE(rows[2].at("best_n") == 5);

    const CliResult csv = run_cli("table --kmax 2 --format csv");
    REQUIRE(csv.out ==
            "k,chsh_gap,best_n,chshn_gap\n"
            "1,5.178e-02,3,4.272e-02\n"
            "2,2.071e-02,4,2.318e-02\n");

    const CliResult md = run_cli("table --kmax 2 --format markdown");
    REQUIRE(md.out ==
            "| k | chsh_gap | best_n | chshn_gap |\n"
            "| --- | --- | --- | --- |\n"
            "| 1 | 5.178e-02 | 3 | 4.272e-02 |\n"
            "| 2 | 2.071e-02 | 4 | 2.318e-02 |\n");

    REQUIRE(run_cli("table --kmin 0").code == 2);
    REQUIRE(run_cli("table --kmax 1 --format bogus").code == 2);
}

TEST_CASE("simulate quantum modes") {
    const Json tele = parse_output(run_cli("simulate --teleported"));
    REQUIRE_THAT(tele.at("success_probability").get<double>(), WithinAbs(0.25, 1e-12));
    REQUIRE_THAT(tele.at("win_given_success").get<double>(),
                 WithinAbs(kChshQuantum, 1e-12));
    REQUIRE_THAT(tele.at("value").get<double>(), WithinAbs(kChshQuantum, 1e-12));
    REQUIRE_THAT(tele.at("noswap_value").get<double>(), WithinAbs(0.5, 1e-12));

    const Json canon = parse_output(run_cli("simulate --canonical --game chsh"));
    REQUIRE_THAT(canon.at("overall").get<double>(), WithinAbs(kChshQuantum, 1e-12));
    REQUIRE(canon.at("per_question").size() == 4);
    for (const auto& p : canon.at("per_question"))
        REQUIRE_THAT(p.get<double>(), WithinAbs(kChshQuantum, 1e-12));

    const Json chained =
        parse_output(run_cli("simulate --canonical --game extended_chsh_n --n 3 --k 1"));
    const double expected = 1 - 3 * std::pow(std::sin(std::numbers::pi / 12), 2) / 7;
    REQUIRE_THAT(chained.at("overall").get<double>(), WithinAbs(expected, 1e-10));

    REQUIRE(run_cli("simulate --canonical --game teleported_chsh").code == 2);
    REQUIRE(run_cli("simulate").code == 2);
    REQUIRE(run_cli("simulate --teleported --exor").code == 2);
}

TEST_CASE("simulate box networks") {
    const Json ghz = parse_output(run_cli("simulate --strategy builtin:ghz_one_box --exact"));
    REQUIRE(ghz.at("strategy") == "builtin:ghz_one_box");
    REQUIRE(ghz.at("boxes") == 1);
    REQUIRE(ghz.at("value") == "1");

    const Json sel =
        parse_output(run_cli("simulate --strategy builtin:distributed_selection --exact"));
    REQUIRE(sel.at("boxes") == 3);
    REQUIRE(sel.at("value") == "1");

    const Json res =
        parse_output(run_cli("simulate --strategy builtin:distributed_resource --exact"));
    REQUIRE(res.at("boxes") == 2);
    REQUIRE(res.at("value") == "1");

    const Json exor = parse_output(run_cli("simulate --exor --game chsh --exact"));
    REQUIRE(exor.at("strategy") == "exor");
    REQUIRE(exor.at("boxes") == 1);
    REQUIRE(exor.at("value") == "1");
    REQUIRE(parse_output(run_cli("simulate --exor --game ghz --exact")).at("value") == "1");
    REQUIRE(run_cli("simulate --exor --game extended_chsh --k 1").code == 2);

    const Json inter =
        parse_output(run_cli("simulate --strategy builtin:ghz_one_box --check-interleavings"));
    REQUIRE(inter.at("interleavings") == 2);
    REQUIRE(inter.at("all_equal") == true);
    REQUIRE(inter.at("values") == Json::array({"1"}));

    const Json inter_res = parse_output(
        run_cli("simulate --strategy builtin:distributed_resource --check-interleavings"));
    REQUIRE(inter_res.at("interleavings") == 180);
    REQUIRE(inter_res.at("all_equal") == true);
}

TEST_CASE("simulate sampling") {
    const CliResult run = run_cli("simulate --strategy builtin:ghz_one_box --trials 5000");
    REQUIRE(run.code == 0);
    const Json j = parse_output(run);
    REQUIRE(j.at("trials") == 5000);
    REQUIRE(j.at("seed") == 12345);
    REQUIRE(j.at("wins") == 5000);
    REQUIRE(j.at("estimate") == 1);
    REQUIRE(j.at("std_error") == 0);
    REQUIRE(run_cli("simulate --strategy builtin:ghz_one_box --trials 5000").out == run.out);

    const Json seeded = parse_output(
        run_cli("simulate --strategy builtin:ghz_one_box --trials 5000 --seed 999"));
    REQUIRE(seeded.at("seed") == 999);
    REQUIRE(seeded.at("wins") == 5000);

    const Json exor = parse_output(
        run_cli("simulate --exor --game chsh --trials 3000 --seed 42"));
    REQUIRE(exor.at("wins") == 3000);

    write_file("cli_network.json",
               dump_json(network_to_json(exor_box_strategy(make_chsh()))));
    const Json from_file =
        parse_output(run_cli("simulate --game chsh --strategy cli_network.json --exact"));
    REQUIRE(from_file.at("value") == "1");
    REQUIRE(run_cli("simulate --game chsh --strategy missing_network.json").code == 2);
    write_file("cli_broken.json", "{oops");
    REQUIRE(run_cli("simulate --game chsh --strategy cli_broken.json").code == 2);
}

TEST_CASE("surgery subcommand") {
    Json inst = strategy_to_json(surgery_instance());
    inst["schedule"] = schedule_to_json({{"Alice", {"Alice", "Bob"}, 0}});
    write_file("cli_surgery.json", dump_json(inst));

    const CliResult run = run_cli("surgery --file cli_surgery.json");
    REQUIRE(run.code == 0);
    const Json j = parse_output(run);
    REQUIRE(j.at("v") == "Alice");
    REQUIRE(j.at("schedule_length") == 1);
    const Json& step = j.at("steps").at(0);
    REQUIRE(step.at("question") == 0);
    REQUIRE(step.at("pinned") == Json{{"a1", 1}});
    REQUIRE(step.at("anchor_non_increasing") == true);
    REQUIRE(step.at("compatible_bounds_hold") == true);
    const Json& losses = step.at("losses");
    REQUIRE(losses.size() == 3);
    REQUIRE(losses.at(0).at("question") == 0);
    REQUIRE(losses.at(0).at("before") == "5/12");
    REQUIRE(losses.at(0).at("after") == "1/3");
    bool found = false;
    for (const auto& b : j.at("bounds")) {
        if (b.at("question") != 1) continue;
        found = true;
        REQUIRE(b.at("valid") == true);
        REQUIRE(b.at("coefficients").at("0") == 2);
        REQUIRE(b.at("coefficients").at("1") == 1);
        REQUIRE(b.at("final_loss") == "1/2");
    }
    REQUIRE(found);
    REQUIRE(j.at("all_verified") == true);

    // The same anchor given on the command line instead of in the file.
    Json bare = strategy_to_json(surgery_instance());
    write_file("cli_surgery_bare.json", dump_json(bare));
    const CliResult manual =
        run_cli("surgery --file cli_surgery_bare.json --question 0 --resource Alice,Bob");
    REQUIRE(manual.code == 0);
    REQUIRE(parse_output(manual).at("all_verified") == true);
    REQUIRE(run_cli("surgery --file cli_surgery_bare.json").code == 2);

    Json empty_schedule = strategy_to_json(surgery_instance());
    empty_schedule["schedule"] = Json::array();
    write_file("cli_surgery_empty.json", dump_json(empty_schedule));
    const CliResult empty = run_cli("surgery --file cli_surgery_empty.json");
    REQUIRE(empty.code == 1);
    REQUIRE(parse_output(empty).at("all_verified") == false);

    REQUIRE(run_cli("surgery --file missing_instance.json").code == 2);
    // A fixing resource that touches the checking player is rejected.
    REQUIRE(run_cli("surgery --file cli_surgery_bare.json --question 0 "
                    "--resource Alice,Charlie_1")
                .code == 2);
}

TEST_CASE("check subcommand") {
    for (const std::string box : {"nonlocal", "selection", "resource_r"}) {
        const CliResult run = run_cli("check --box builtin:" + box);
        REQUIRE(run.code == 0);
        const Json j = parse_output(run);
        REQUIRE(j.at("normalized") == true);
        REQUIRE(j.at("non_signaling") == true);
        REQUIRE(j.at("violation_count") == 0);
    }

    // Plant a signaling defect into the PR box and expect a located violation.
    ConditionalTable tampered = nonlocal_box().table;
    const std::size_t base = tampered.input_index({0, 0}) * tampered.output_space();
    tampered.entries[base + tampered.output_index({0, 0})] = Rational(1);
    tampered.entries[base + tampered.output_index({1, 1})] = Rational(0);
    Json tj = table_to_json(tampered);
    tj["name"] = "tampered_pr";
    write_file("cli_tampered_box.json", dump_json(tj));
    const CliResult bad = run_cli("check --box cli_tampered_box.json");
    REQUIRE(bad.code == 1);
    const Json bj = parse_output(bad);
    REQUIRE(bj.at("box") == "tampered_pr");
    REQUIRE(bj.at("normalized") == true);
    REQUIRE(bj.at("non_signaling") == false);
    REQUIRE(bj.at("violation_count").get<int>() >= 1);
    const Json& v = bj.at("violations").at(0);
    REQUIRE(v.count("party") == 1);
    REQUIRE(v.count("inputs_a") == 1);
    REQUIRE(v.count("inputs_b") == 1);
    REQUIRE(v.at("lhs") != v.at("rhs"));

    ConditionalTable leaky = nonlocal_box().table;
    leaky.entries[base + leaky.output_index({0, 0})] = Rational(1, 4);
    write_file("cli_subnormalized_box.json", dump_json(table_to_json(leaky)));
    const CliResult sub = run_cli("check --box cli_subnormalized_box.json");
    REQUIRE(sub.code == 1);
    REQUIRE(parse_output(sub).at("normalized") == false);

    const CliResult multi = run_cli("check --multiround builtin:opposite_order");
    REQUIRE(multi.code == 0);
    const Json mj = parse_output(multi);
    REQUIRE(mj.at("table") == "opposite_order_pr");
    REQUIRE(mj.at("non_signaling") == true);
    REQUIRE(run_cli("check --multiround builtin:other").code == 2);

    REQUIRE(run_cli("check").code == 2);
    REQUIRE(run_cli("check --box no_such_box.json").code == 2);
}

TEST_CASE("check validate and uniqueness") {
    const Json valid = parse_output(run_cli("check --validate --game chsh"));
    REQUIRE(valid.at("valid") == true);
    REQUIRE(valid.at("violations").empty());

    Json broken = game_to_json(make_chsh());
    broken["questions"][0]["prob"] = "1/3";
    write_file("cli_broken_game.json", dump_json(broken));
    const CliResult invalid = run_cli("check --validate --game-file cli_broken_game.json");
    REQUIRE(invalid.code == 1);
    const Json ij = parse_output(invalid);
    REQUIRE(ij.at("valid") == false);
    REQUIRE_FALSE(ij.at("violations").empty());

    const Json unique =
        parse_output(run_cli("check --uniqueness --game extended_chsh --k 2"));
    REQUIRE(unique.at("unique") == true);
    const Json subset = parse_output(
        run_cli("check --uniqueness --game extended_chsh --k 1 --questions 0,1,2"));
    REQUIRE(subset.at("unique") == true);
    REQUIRE(subset.at("questions") == Json::array({0, 1, 2}));

    // A question accepting two answers for the same context is flagged.
    Game loose = make_chsh();
    const Game plain = loose;
    build_predicate(loose, [&plain](int q, const std::vector<int>& outs) {
        if (q != 0) return plain.accepts(q, outs);
        return !(outs[0] == 1 && outs[1] == 1);
    });
    write_file("cli_loose_game.json", dump_json(game_to_json(loose)));
    const CliResult loose_run =
        run_cli("check --uniqueness --game-file cli_loose_game.json");
    REQUIRE(loose_run.code == 1);
    const Json lj = parse_output(loose_run);
    REQUIRE(lj.at("unique") == false);
    REQUIRE_FALSE(lj.at("counterexamples").empty());
    REQUIRE(lj.at("counterexamples").at(0).at("question") == 0);
    REQUIRE(lj.at("counterexamples").at(0).at("accepting_answers") == 2);
}

TEST_CASE("output redirection and formats") {
    const CliResult direct = run_cli("value --game chsh");
    const CliResult redirected = run_cli("value --game chsh --output cli_report.json");
    REQUIRE(redirected.code == 0);
    REQUIRE(redirected.out.empty());
    std::ifstream f("cli_report.json");
    REQUIRE(f.good());
    std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    REQUIRE(text == direct.out);

    const CliResult md = run_cli("--format markdown value --game chsh");
    REQUIRE(md.code == 0);
    REQUIRE(md.out.find("| field | value |") != std::string::npos);
    REQUIRE(md.out.find("| classical_value | 3/4 |") != std::string::npos);

    const CliResult csv = run_cli("--format csv value --game chsh");
    REQUIRE(csv.out.rfind("field,value\n", 0) == 0);
    REQUIRE(csv.out.find("classical_value,3/4\n") != std::string::npos);

    REQUIRE(run_cli("frobnicate").code == 2);
    REQUIRE(run_cli("").code == 2);
}
