#pragma once

#include <nsgames/boxes.hpp>
#include <nsgames/game.hpp>
#include <nsgames/network.hpp>
#include <nsgames/surgery.hpp>

#include <json.hpp>

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace nsgames {

using Json = nlohmann::ordered_json;

inline Json rational_to_json(const Rational& r) { return to_string(r); }

inline Rational rational_from_json(const Json& j) {
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_string()) return parse_rational(j.get<std::string>());
    throw std::invalid_argument("expected a rational as \"num/den\" or an integer");
}

inline std::string family_to_string(Family f) {
    switch (f) {
        case Family::custom: return "custom";
        case Family::chsh: return "chsh";
        case Family::chsh_n: return "chsh_n";
        case Family::extended_chsh: return "extended_chsh";
        case Family::extended_chsh_n: return "extended_chsh_n";
        case Family::teleported_chsh: return "teleported_chsh";
        case Family::ghz: return "ghz";
        case Family::distributed_chsh: return "distributed_chsh";
    }
    return "custom";
}

inline Family family_from_string(const std::string& s) {
    if (s == "custom") return Family::custom;
    if (s == "chsh") return Family::chsh;
    if (s == "chsh_n") return Family::chsh_n;
    if (s == "extended_chsh") return Family::extended_chsh;
    if (s == "extended_chsh_n") return Family::extended_chsh_n;
    if (s == "teleported_chsh") return Family::teleported_chsh;
    if (s == "ghz") return Family::ghz;
    if (s == "distributed_chsh") return Family::distributed_chsh;
    throw std::invalid_argument("unknown game family '" + s + "'");
}

inline std::string tag_to_string(QuestionTag t) {
    switch (t) {
        case QuestionTag::plain: return "plain";
        case QuestionTag::game: return "game";
        case QuestionTag::consistency: return "consistency";
    }
    return "plain";
}

inline QuestionTag tag_from_string(const std::string& s) {
    if (s == "plain") return QuestionTag::plain;
    if (s == "game") return QuestionTag::game;
    if (s == "consistency") return QuestionTag::consistency;
    throw std::invalid_argument("unknown question tag '" + s + "'");
}

namespace detail {

// Accepted (or scored) answers of one question, projected to the asked
// players' output symbols, first occurrence order over ascending answer
// indices. Predicates are independent of not-asked players, so the
// projection loses nothing.
inline Json answer_set_to_json(const Game& game, int q,
                               const std::vector<std::uint8_t>& flags) {
    Json list = Json::array();
    std::set<std::vector<std::string>> seen;
    std::vector<int> outs;
    for (std::size_t a = 0; a < game.answer_space(); ++a) {
        if (!flags[a]) continue;
        game.decode_answer(a, outs);
        std::vector<std::string> tuple;
        for (int p = 0; p < game.num_players(); ++p)
            if (game.asked(q, p)) tuple.push_back(game.players[p].outputs[outs[p]]);
        if (seen.insert(tuple).second) list.push_back(tuple);
    }
    return list;
}

inline std::vector<std::uint8_t> answer_set_from_json(const Game& game, int q,
                                                      const Json& list) {
    std::set<std::vector<std::string>> tuples;
    for (const auto& t : list) {
        std::vector<std::string> tuple;
        for (const auto& sym : t) tuple.push_back(sym.get<std::string>());
        tuples.insert(tuple);
    }
    std::vector<std::uint8_t> flags(game.answer_space(), 0);
    std::vector<int> outs;
    for (std::size_t a = 0; a < game.answer_space(); ++a) {
        game.decode_answer(a, outs);
        std::vector<std::string> tuple;
        for (int p = 0; p < game.num_players(); ++p)
            if (game.asked(q, p)) tuple.push_back(game.players[p].outputs[outs[p]]);
        flags[a] = tuples.count(tuple) ? 1 : 0;
    }
    return flags;
}

}  // namespace detail

inline Json game_to_json(const Game& game) {
    Json j;
    j["name"] = game.name;
    j["family"] = family_to_string(game.family);
    j["players"] = Json::array();
    for (const auto& p : game.players) {
        Json pj;
        pj["name"] = p.name;
        pj["input_var"] = p.input_var;
        pj["output_var"] = p.output_var;
        pj["inputs"] = p.inputs;
        pj["outputs"] = p.outputs;
        j["players"].push_back(pj);
    }
    j["questions"] = Json::array();
    for (std::size_t q = 0; q < game.questions.size(); ++q) {
        Json qj;
        qj["inputs"] = game.questions[q].inputs;
        qj["prob"] = rational_to_json(game.questions[q].prob);
        qj["tag"] = tag_to_string(game.questions[q].tag);
        qj["accept"] = detail::answer_set_to_json(game, static_cast<int>(q),
                                                  game.accept.at(q));
        if (game.has_postselection())
            qj["scored"] = detail::answer_set_to_json(game, static_cast<int>(q),
                                                      game.scored.at(q));
        j["questions"].push_back(qj);
    }
    if (!game.metadata.empty()) {
        Json meta;
        for (const auto& [key, value] : game.metadata)
            meta[key] = rational_to_json(value);
        j["metadata"] = meta;
    }
    return j;
}

inline Game game_from_json(const Json& j) {
    Game game;
    game.name = j.at("name").get<std::string>();
    if (j.count("family")) game.family = family_from_string(j.at("family"));
    for (const auto& pj : j.at("players")) {
        PlayerSpec p;
        p.name = pj.at("name").get<std::string>();
        p.input_var = pj.at("input_var").get<std::string>();
        p.output_var = pj.at("output_var").get<std::string>();
        p.inputs = pj.at("inputs").get<std::vector<std::string>>();
        p.outputs = pj.at("outputs").get<std::vector<std::string>>();
        game.players.push_back(std::move(p));
    }
    bool postselected = false;
    for (const auto& qj : j.at("questions"))
        if (qj.count("scored")) postselected = true;
    for (const auto& qj : j.at("questions")) {
        Question q;
        q.inputs = qj.at("inputs").get<std::vector<std::string>>();
        if (q.inputs.size() != game.players.size())
            throw std::invalid_argument("question inputs do not match the player count");
        q.prob = rational_from_json(qj.at("prob"));
        if (qj.count("tag")) q.tag = tag_from_string(qj.at("tag"));
        game.questions.push_back(std::move(q));
        const int qi = static_cast<int>(game.questions.size()) - 1;
        game.accept.push_back(
            detail::answer_set_from_json(game, qi, qj.at("accept")));
        if (postselected) {
            if (!qj.count("scored"))
                throw std::invalid_argument(
                    "either every question or none must declare scored answers");
            game.scored.push_back(
                detail::answer_set_from_json(game, qi, qj.at("scored")));
        }
    }
    if (j.count("metadata"))
        for (const auto& [key, value] : j.at("metadata").items())
            game.metadata[key] = rational_from_json(value);
    return game;
}

inline Json table_to_json(const ConditionalTable& t) {
    Json j;
    j["parties"] = t.parties;
    j["inputs"] = t.inputs;
    j["outputs"] = t.outputs;
    Json entries = Json::array();
    std::vector<int> in, out;
    for (std::size_t i = 0; i < t.input_space(); ++i) {
        for (std::size_t o = 0; o < t.output_space(); ++o) {
            const Rational& p = t.entries[i * t.output_space() + o];
            if (p == 0) continue;
            t.decode_input(i, in);
            t.decode_output(o, out);
            Json e;
            std::vector<std::string> ins, outs;
            for (std::size_t k = 0; k < t.num_parties(); ++k) {
                ins.push_back(t.inputs[k][in[k]]);
                outs.push_back(t.outputs[k][out[k]]);
            }
            e["input"] = ins;
            e["output"] = outs;
            e["p"] = rational_to_json(p);
            entries.push_back(e);
        }
    }
    j["entries"] = entries;
    return j;
}

inline ConditionalTable table_from_json(const Json& j) {
    ConditionalTable t;
    t.parties = j.at("parties").get<std::vector<std::string>>();
    t.inputs = j.at("inputs").get<std::vector<std::vector<std::string>>>();
    t.outputs = j.at("outputs").get<std::vector<std::vector<std::string>>>();
    if (t.inputs.size() != t.parties.size() || t.outputs.size() != t.parties.size())
        throw std::invalid_argument("table alphabets do not match the party count");
    t.allocate();
    const auto symbol_index = [](const std::vector<std::string>& alpha,
                                 const std::string& sym) {
        for (std::size_t i = 0; i < alpha.size(); ++i)
            if (alpha[i] == sym) return static_cast<int>(i);
        throw std::invalid_argument("unknown symbol '" + sym + "' in table entry");
    };
    for (const auto& e : j.at("entries")) {
        std::vector<int> in, out;
        const auto ins = e.at("input").get<std::vector<std::string>>();
        const auto outs = e.at("output").get<std::vector<std::string>>();
        if (ins.size() != t.num_parties() || outs.size() != t.num_parties())
            throw std::invalid_argument("table entry arity mismatch");
        for (std::size_t k = 0; k < t.num_parties(); ++k) {
            in.push_back(symbol_index(t.inputs[k], ins[k]));
            out.push_back(symbol_index(t.outputs[k], outs[k]));
        }
        t.entries[t.input_index(in) * t.output_space() + t.output_index(out)] =
            rational_from_json(e.at("p"));
    }
    return t;
}

inline Json box_to_json(const NSBox& box) {
    Json j = table_to_json(box.table);
    Json out;
    out["name"] = box.name;
    for (auto& [key, value] : j.items()) out[key] = std::move(value);
    return out;
}

inline NSBox box_from_json(const Json& j) {
    return make_box(j.at("name").get<std::string>(), table_from_json(j));
}

inline Json network_to_json(const NetworkStrategy& s) {
    Json j;
    j["boxes"] = Json::array();
    for (const auto& b : s.boxes) j["boxes"].push_back(box_to_json(b));
    if (!s.shared.empty()) {
        Json weights = Json::array();
        for (const auto& w : s.shared) weights.push_back(rational_to_json(w));
        j["shared"] = weights;
    }
    j["programs"] = Json::array();
    for (const auto& p : s.programs) {
        Json pj;
        pj["steps"] = Json::array();
        for (const auto& step : p.steps) {
            Json sj;
            sj["box"] = step.box;
            sj["input_table"] = step.input_table;
            pj["steps"].push_back(sj);
        }
        pj["answer_table"] = p.answer_table;
        j["programs"].push_back(pj);
    }
    return j;
}

inline NetworkStrategy network_from_json(const Json& j) {
    NetworkStrategy s;
    for (const auto& bj : j.at("boxes")) s.boxes.push_back(box_from_json(bj));
    if (j.count("shared"))
        for (const auto& w : j.at("shared")) s.shared.push_back(rational_from_json(w));
    for (const auto& pj : j.at("programs")) {
        PlayerProgram p;
        for (const auto& sj : pj.at("steps")) {
            QueryStep step;
            step.box = sj.at("box").get<int>();
            step.input_table = sj.at("input_table").get<std::vector<int>>();
            p.steps.push_back(std::move(step));
        }
        p.answer_table = pj.at("answer_table").get<std::vector<int>>();
        s.programs.push_back(std::move(p));
    }
    return s;
}

namespace detail {

inline Json source_function_to_json(const ParameterizedStrategy& s,
                                    const SourceFunction& fn) {
    Json j;
    Json reads = Json::array();
    for (const int r : fn.reads) reads.push_back(s.sources.at(r).name);
    j["reads"] = reads;
    j["table"] = fn.table;
    return j;
}

inline SourceFunction source_function_from_json(const ParameterizedStrategy& s,
                                                const Json& j) {
    SourceFunction fn;
    for (const auto& name : j.at("reads")) {
        int idx = -1;
        for (std::size_t i = 0; i < s.sources.size(); ++i)
            if (s.sources[i].name == name.get<std::string>()) idx = static_cast<int>(i);
        if (idx < 0)
            throw std::invalid_argument("function reads unknown source '" +
                                        name.get<std::string>() + "'");
        if (!fn.reads.empty() && idx <= fn.reads.back())
            throw std::invalid_argument(
                "function reads must be listed in source declaration order");
        fn.reads.push_back(idx);
    }
    fn.table = j.at("table").get<std::vector<int>>();
    return fn;
}

}  // namespace detail

inline Json strategy_to_json(const ParameterizedStrategy& s) {
    Json j;
    j["game"] = game_to_json(s.game);
    j["v"] = s.v;
    j["sources"] = Json::array();
    for (const auto& src : s.sources) {
        Json sj;
        sj["name"] = src.name;
        sj["owner"] = src.owner;
        sj["resource"] = src.resource;
        Json weights = Json::array();
        for (const auto& w : src.weights) weights.push_back(rational_to_json(w));
        sj["weights"] = weights;
        j["sources"].push_back(sj);
    }
    Json answers;
    for (const auto& [sym, fn] : s.v_answer)
        answers[sym] = detail::source_function_to_json(s, fn);
    j["v_answer"] = answers;
    Json targets;
    for (const auto& [q, fn] : s.target)
        targets[std::to_string(q)] = detail::source_function_to_json(s, fn);
    j["target"] = targets;
    return j;
}

inline ParameterizedStrategy strategy_from_json(const Json& j) {
    ParameterizedStrategy s;
    s.game = game_from_json(j.at("game"));
    s.v = j.at("v").get<std::string>();
    for (const auto& sj : j.at("sources")) {
        RandomSource src;
        src.name = sj.at("name").get<std::string>();
        src.owner = sj.at("owner").get<std::string>();
        src.resource = sj.at("resource").get<std::vector<std::string>>();
        for (const auto& w : sj.at("weights"))
            src.weights.push_back(rational_from_json(w));
        s.sources.push_back(std::move(src));
    }
    for (const auto& [sym, fj] : j.at("v_answer").items())
        s.v_answer[sym] = detail::source_function_from_json(s, fj);
    for (const auto& [key, fj] : j.at("target").items())
        s.target[std::stoi(key)] = detail::source_function_from_json(s, fj);
    return s;
}

inline Json schedule_to_json(const std::vector<SurgeryStep>& schedule) {
    Json j = Json::array();
    for (const auto& step : schedule) {
        Json sj;
        sj["v"] = step.v;
        sj["resource"] = step.resource;
        sj["question"] = step.question;
        j.push_back(sj);
    }
    return j;
}

inline std::vector<SurgeryStep> schedule_from_json(const Json& j) {
    std::vector<SurgeryStep> schedule;
    for (const auto& sj : j) {
        SurgeryStep step;
        step.v = sj.at("v").get<std::string>();
        step.resource = sj.at("resource").get<std::vector<std::string>>();
        step.question = sj.at("question").get<int>();
        schedule.push_back(std::move(step));
    }
    return schedule;
}

}  // namespace nsgames
