#pragma once

#include <nsgames/game.hpp>
#include <nsgames/rational.hpp>

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nsgames {

// A private random source. Each source belongs to one player (its owner) and
// models that player's local randomness for one shared resource, identified
// by the set of parties the resource connects.
struct RandomSource {
    std::string name;
    std::string owner;
    std::vector<std::string> resource;  // parties of the resource, owner included
    std::vector<Rational> weights;      // distribution over 0..size-1

    std::size_t size() const { return weights.size(); }
};

// A deterministic function of a subset of the sources, tabulated in mixed
// radix over the read sources (ascending index order, first read most
// significant).
struct SourceFunction {
    std::vector<int> reads;
    std::vector<int> table;

    int eval(const std::vector<RandomSource>& sources,
             const std::vector<int>& assignment) const {
        std::size_t idx = 0;
        for (const int r : reads) idx = idx * sources[r].size() + assignment[r];
        return table[idx];
    }
};

// A randomness-parameterized model of one player's answers: v_answer maps
// each input of the distinguished player v to a function of the sources, and
// target maps a question to the function computing the unique answer of v
// that the other players' behavior accepts on that question.
struct ParameterizedStrategy {
    Game game;
    std::string v;
    std::vector<RandomSource> sources;
    std::map<std::string, SourceFunction> v_answer;  // keyed by v's input symbol
    std::map<int, SourceFunction> target;            // keyed by question index
};

struct SurgeryReport {
    int question = -1;
    std::string v;
    std::vector<std::string> u_players;
    std::vector<std::string> block_u, block_uv, block_v, block_w;
    std::map<std::string, int> pinned;  // pinned source values (the block_v sources)
    std::map<int, Rational> eps_before, eps_after;
    std::map<int, bool> v_compatible;
    bool anchor_non_increasing = false;
    bool compatible_bounds_hold = false;
};

namespace detail {

inline void validate_strategy(const ParameterizedStrategy& s) {
    if (s.game.player_index(s.v) < 0)
        throw std::invalid_argument("the distinguished player is not in the game");
    std::set<std::string> names;
    for (const auto& src : s.sources) {
        if (!names.insert(src.name).second)
            throw std::invalid_argument("duplicate source name '" + src.name + "'");
        if (s.game.player_index(src.owner) < 0)
            throw std::invalid_argument("source '" + src.name + "' has an unknown owner");
        if (src.weights.empty())
            throw std::invalid_argument("source '" + src.name + "' has no values");
        Rational sum(0);
        for (const auto& w : src.weights) {
            if (w < 0) throw std::invalid_argument("negative source weight");
            sum += w;
        }
        if (sum != 1)
            throw std::invalid_argument("weights of source '" + src.name +
                                        "' do not sum to 1");
        if (std::find(src.resource.begin(), src.resource.end(), src.owner) ==
            src.resource.end())
            throw std::invalid_argument("source '" + src.name +
                                        "' does not list its owner as a resource party");
        for (const auto& party : src.resource)
            if (s.game.player_index(party) < 0)
                throw std::invalid_argument("source '" + src.name +
                                            "' lists an unknown resource party");
    }
    const int vpos = s.game.player_index(s.v);
    const auto check_fn = [&](const SourceFunction& fn, std::size_t out_range,
                              bool may_read_v) {
        std::size_t domain = 1;
        int prev = -1;
        for (const int r : fn.reads) {
            if (r <= prev || r >= static_cast<int>(s.sources.size()))
                throw std::invalid_argument("function reads must be ascending source indices");
            if (!may_read_v && s.sources[r].owner == s.v)
                throw std::invalid_argument(
                    "a target function must not read the distinguished player's sources");
            prev = r;
            domain *= s.sources[r].size();
        }
        if (fn.table.size() != domain)
            throw std::invalid_argument("function table has the wrong size");
        for (const int v : fn.table)
            if (v < 0 || v >= static_cast<int>(out_range))
                throw std::invalid_argument("function value out of range");
    };
    for (const auto& [sym, fn] : s.v_answer) {
        if (s.game.input_index(vpos, sym) < 0 || sym == kNotAsked)
            throw std::invalid_argument("v_answer keyed by a symbol v is never asked");
        check_fn(fn, s.game.players[vpos].outputs.size(), true);
    }
    for (const auto& [q, fn] : s.target) {
        if (q < 0 || q >= static_cast<int>(s.game.questions.size()))
            throw std::invalid_argument("target keyed by an unknown question");
        if (!s.game.asked(q, vpos))
            throw std::invalid_argument("target question does not ask v");
        check_fn(fn, s.game.players[vpos].outputs.size(), false);
    }
}

// Enumerates joint assignments of the given sources and folds their product
// weight into fn. Sources outside the subset stay at value 0 in the passed
// assignment but carry no weight factor.
inline void enumerate_sources(const std::vector<RandomSource>& sources,
                              const std::vector<int>& subset,
                              const std::function<void(const std::vector<int>&,
                                                       const Rational&)>& fn) {
    std::vector<int> assignment(sources.size(), 0);
    const std::function<void(std::size_t, Rational)> rec = [&](std::size_t pos,
                                                               Rational weight) {
        if (pos == subset.size()) {
            fn(assignment, weight);
            return;
        }
        const int src = subset[pos];
        for (std::size_t val = 0; val < sources[src].size(); ++val) {
            if (sources[src].weights[val] == 0) continue;
            assignment[src] = static_cast<int>(val);
            rec(pos + 1, weight * sources[src].weights[val]);
        }
        assignment[src] = 0;
    };
    rec(0, Rational(1));
}

inline std::vector<int> union_reads(const SourceFunction& a, const SourceFunction& b) {
    std::vector<int> u;
    std::set_union(a.reads.begin(), a.reads.end(), b.reads.begin(), b.reads.end(),
                   std::back_inserter(u));
    return u;
}

}  // namespace detail

// Pr[v's answer on question q differs from the unique accepted one].
inline Rational loss_probability(const ParameterizedStrategy& s, int q) {
    detail::validate_strategy(s);
    const int vpos = s.game.player_index(s.v);
    if (q < 0 || q >= static_cast<int>(s.game.questions.size()))
        throw std::invalid_argument("unknown question index");
    const std::string& sym = s.game.questions[q].inputs[vpos];
    const auto target_it = s.target.find(q);
    const auto answer_it = s.v_answer.find(sym);
    if (target_it == s.target.end())
        throw std::invalid_argument("question has no target function");
    if (answer_it == s.v_answer.end())
        throw std::invalid_argument("v has no answer function for this input");
    Rational loss(0);
    detail::enumerate_sources(
        s.sources, detail::union_reads(answer_it->second, target_it->second),
        [&](const std::vector<int>& a, const Rational& w) {
            if (answer_it->second.eval(s.sources, a) !=
                target_it->second.eval(s.sources, a))
                loss += w;
        });
    return loss;
}

// Whether the surgery on anchor question q leaves question qp analyzable:
// either v's input differs, or every non-v player involved in q keeps the
// same input on qp or is not involved in qp at all.
inline bool check_v_compatible(const Game& game, int q, int qp, const std::string& v) {
    const int vpos = game.player_index(v);
    if (vpos < 0) throw std::invalid_argument("unknown player '" + v + "'");
    if (q == qp) return true;
    if (game.questions[q].inputs[vpos] != game.questions[qp].inputs[vpos]) return true;
    const std::vector<int> inv_q = involved_players(game, q);
    const std::vector<int> inv_qp = involved_players(game, qp);
    for (const int u : inv_q) {
        if (u == vpos) continue;
        if (game.questions[qp].inputs[u] == game.questions[q].inputs[u]) continue;
        if (std::find(inv_qp.begin(), inv_qp.end(), u) == inv_qp.end()) continue;
        return false;
    }
    return true;
}

// The strategy surgery: pins v's randomness for every resource that avoids
// the players of the anchor question, choosing the lexicographically first
// assignment that maximizes the agreement with the anchor's target. Returns
// the surgered strategy together with the exact before/after losses.
inline std::pair<ParameterizedStrategy, SurgeryReport> fix_randomness(
    const ParameterizedStrategy& s, const std::string& v,
    const std::vector<std::string>& resource, int anchor) {
    detail::validate_strategy(s);
    if (v != s.v)
        throw std::invalid_argument("the surgery applies to the distinguished player");
    const int vpos = s.game.player_index(v);
    if (anchor < 0 || anchor >= static_cast<int>(s.game.questions.size()))
        throw std::invalid_argument("unknown anchor question");
    if (!s.game.asked(anchor, vpos))
        throw std::invalid_argument("the anchor question does not ask v");
    if (!s.target.count(anchor))
        throw std::invalid_argument("the anchor question has no target function");
    const std::string anchor_sym = s.game.questions[anchor].inputs[vpos];
    if (!s.v_answer.count(anchor_sym))
        throw std::invalid_argument("v has no answer function for the anchor input");

    // U is the set of involved players other than v; the fixing resource must
    // avoid all of them but include v.
    std::set<int> u_set;
    for (const int p : involved_players(s.game, anchor))
        if (p != vpos) u_set.insert(p);
    std::set<std::string> r_set;
    for (const auto& party : resource) {
        if (s.game.player_index(party) < 0)
            throw std::invalid_argument("resource lists an unknown party '" + party + "'");
        r_set.insert(party);
    }
    if (!r_set.count(v))
        throw std::invalid_argument("the fixing resource must include v");
    for (const int u : u_set)
        if (r_set.count(s.game.players[u].name))
            throw std::invalid_argument(
                "the fixing resource must avoid the players the anchor involves");

    // The unique-answer premise: on the anchor and on every question sharing
    // v's anchor input, the other involved players' answers must pin v's.
    std::vector<int> same_input;
    for (std::size_t q = 0; q < s.game.questions.size(); ++q)
        if (s.game.questions[q].inputs[vpos] == anchor_sym)
            same_input.push_back(static_cast<int>(q));
    const UniquenessReport uniq = check_uniqueness(s.game, same_input);
    if (!uniq.unique)
        throw std::invalid_argument(
            "the game is not unique on the questions sharing v's anchor input");

    SurgeryReport report;
    report.question = anchor;
    report.v = v;
    for (const int u : u_set) report.u_players.push_back(s.game.players[u].name);

    // Split the sources into the four blocks of the surgery.
    std::vector<int> block_v;
    std::set<int> u_or_uv;
    for (std::size_t i = 0; i < s.sources.size(); ++i) {
        const RandomSource& src = s.sources[i];
        bool touches_u = false;
        for (const int u : u_set)
            if (std::find(src.resource.begin(), src.resource.end(),
                          s.game.players[u].name) != src.resource.end())
                touches_u = true;
        if (src.owner == v) {
            if (touches_u) {
                report.block_uv.push_back(src.name);
                u_or_uv.insert(static_cast<int>(i));
            } else {
                report.block_v.push_back(src.name);
                block_v.push_back(static_cast<int>(i));
            }
        } else if (u_set.count(s.game.player_index(src.owner))) {
            report.block_u.push_back(src.name);
            u_or_uv.insert(static_cast<int>(i));
        } else {
            report.block_w.push_back(src.name);
        }
    }
    const SourceFunction& anchor_target = s.target.at(anchor);
    const SourceFunction& anchor_answer = s.v_answer.at(anchor_sym);
    for (const int r : anchor_target.reads)
        if (s.sources[r].owner != v &&
            !u_set.count(s.game.player_index(s.sources[r].owner)))
            throw std::invalid_argument(
                "the anchor target reads randomness outside the involved players");
    for (const int r : anchor_answer.reads)
        if (!u_or_uv.count(r) &&
            std::find(block_v.begin(), block_v.end(), r) == block_v.end())
            throw std::invalid_argument(
                "v's anchor answer reads randomness outside v's view of the anchor");

    for (const auto& [q, fn] : s.target) {
        (void)fn;
        report.eps_before[q] = loss_probability(s, q);
        report.v_compatible[q] = check_v_compatible(s.game, anchor, q, v);
    }

    // Pick the lexicographically first assignment of the v-block maximizing
    // agreement between v's anchor answer and the anchor target, the
    // remaining sources drawn from their product distribution.
    std::vector<int> outer;
    for (const int r :
         detail::union_reads(anchor_answer, anchor_target)) {
        if (std::find(block_v.begin(), block_v.end(), r) == block_v.end())
            outer.push_back(r);
    }
    std::vector<int> best(block_v.size(), 0);
    Rational best_agree(-1);
    std::vector<int> pin(block_v.size(), 0);
    const std::function<void(std::size_t)> scan = [&](std::size_t pos) {
        if (pos == block_v.size()) {
            Rational agree(0);
            std::vector<int> assignment(s.sources.size(), 0);
            for (std::size_t i = 0; i < block_v.size(); ++i)
                assignment[block_v[i]] = pin[i];
            detail::enumerate_sources(
                s.sources, outer, [&](const std::vector<int>& a, const Rational& w) {
                    std::vector<int> joint = a;
                    for (std::size_t i = 0; i < block_v.size(); ++i)
                        joint[block_v[i]] = pin[i];
                    if (anchor_answer.eval(s.sources, joint) ==
                        anchor_target.eval(s.sources, joint))
                        agree += w;
                });
            if (agree > best_agree) {
                best_agree = agree;
                best = pin;
            }
            return;
        }
        for (std::size_t val = 0; val < s.sources[block_v[pos]].size(); ++val) {
            pin[pos] = static_cast<int>(val);
            scan(pos + 1);
        }
        pin[pos] = 0;
    };
    scan(0);
    for (std::size_t i = 0; i < block_v.size(); ++i)
        report.pinned[s.sources[block_v[i]].name] = best[i];

    // Rebuild v's answer on the anchor input with the v-block hardwired. The
    // other inputs and every target are untouched.
    ParameterizedStrategy out = s;
    SourceFunction pinned_fn;
    for (const int r : anchor_answer.reads)
        if (std::find(block_v.begin(), block_v.end(), r) == block_v.end())
            pinned_fn.reads.push_back(r);
    std::vector<std::size_t> sizes;
    for (const int r : pinned_fn.reads) sizes.push_back(s.sources[r].size());
    std::size_t domain = 1;
    for (const std::size_t sz : sizes) domain *= sz;
    pinned_fn.table.resize(domain);
    std::vector<int> joint(s.sources.size(), 0);
    for (std::size_t i = 0; i < block_v.size(); ++i) joint[block_v[i]] = best[i];
    for (std::size_t idx = 0; idx < domain; ++idx) {
        std::size_t rest = idx;
        for (std::size_t pos = pinned_fn.reads.size(); pos-- > 0;) {
            joint[pinned_fn.reads[pos]] = static_cast<int>(rest % sizes[pos]);
            rest /= sizes[pos];
        }
        pinned_fn.table[idx] = anchor_answer.eval(s.sources, joint);
    }
    out.v_answer[anchor_sym] = std::move(pinned_fn);

    report.anchor_non_increasing = true;
    report.compatible_bounds_hold = true;
    for (const auto& [q, fn] : out.target) {
        (void)fn;
        report.eps_after[q] = loss_probability(out, q);
        if (q == anchor) {
            if (report.eps_after[q] > report.eps_before[q])
                report.anchor_non_increasing = false;
        } else if (report.v_compatible[q]) {
            if (report.eps_after[q] >
                report.eps_before[q] + Rational(2) * report.eps_before[anchor])
                report.compatible_bounds_hold = false;
        }
    }
    return {std::move(out), std::move(report)};
}

struct SurgeryStep {
    std::string v;
    std::vector<std::string> resource;
    int question = -1;
};

struct IteratedSurgery {
    ParameterizedStrategy strategy;
    std::vector<SurgeryReport> reports;
    // For each question, integer coefficients of the initial losses bounding
    // the final loss, when the chain of compatibilities supports a bound.
    std::map<int, std::map<int, long>> bound_coefficients;
    std::map<int, bool> bound_valid;
    bool all_bounds_verified = false;
};

// Applies a schedule of surgeries and tracks the loss bounds through the
// recursion: a compatible question picks up twice the anchor's current bound,
// a question with a different v-input is untouched, and anything else loses
// its bound.
inline IteratedSurgery iterate_surgery(const ParameterizedStrategy& start,
                                       const std::vector<SurgeryStep>& schedule) {
    IteratedSurgery result;
    result.strategy = start;
    for (const auto& [q, fn] : start.target) {
        (void)fn;
        result.bound_coefficients[q] = {{q, 1}};
        result.bound_valid[q] = true;
    }
    for (const auto& step : schedule) {
        auto [next, report] =
            fix_randomness(result.strategy, step.v, step.resource, step.question);
        const int vpos = result.strategy.game.player_index(step.v);
        const std::string anchor_sym =
            result.strategy.game.questions[step.question].inputs[vpos];
        const auto anchor_bound = result.bound_coefficients[step.question];
        const bool anchor_valid = result.bound_valid[step.question];
        for (auto& [q, coeffs] : result.bound_coefficients) {
            if (q == step.question) continue;
            const std::string& sym =
                result.strategy.game.questions[q].inputs[vpos];
            if (sym != anchor_sym) continue;  // untouched by this surgery
            if (report.v_compatible.at(q) && anchor_valid) {
                for (const auto& [src, c] : anchor_bound) coeffs[src] += 2 * c;
            } else {
                result.bound_valid[q] = false;
            }
        }
        result.strategy = std::move(next);
        result.reports.push_back(std::move(report));
    }
    if (!result.reports.empty()) {
        result.all_bounds_verified = true;
        const auto& initial = result.reports.front().eps_before;
        for (const auto& [q, coeffs] : result.bound_coefficients) {
            if (!result.bound_valid[q]) continue;
            Rational bound(0);
            for (const auto& [src, c] : coeffs) bound += Rational(c) * initial.at(src);
            if (loss_probability(result.strategy, q) > bound)
                result.all_bounds_verified = false;
        }
    }
    return result;
}

}  // namespace nsgames
