#pragma once

#include <nsgames/rational.hpp>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nsgames {

// A conditional distribution p(outputs | inputs) over finite per-party
// alphabets, stored densely. Entry layout: input combination major, output
// combination minor, both mixed radix with party 0 most significant.
struct ConditionalTable {
    std::vector<std::string> parties;
    std::vector<std::vector<std::string>> inputs;
    std::vector<std::vector<std::string>> outputs;
    std::vector<Rational> entries;

    std::size_t num_parties() const { return parties.size(); }

    std::size_t input_space() const {
        std::size_t s = 1;
        for (const auto& a : inputs) s *= a.size();
        return s;
    }

    std::size_t output_space() const {
        std::size_t s = 1;
        for (const auto& a : outputs) s *= a.size();
        return s;
    }

    std::size_t input_index(const std::vector<int>& in) const {
        std::size_t idx = 0;
        for (std::size_t p = 0; p < inputs.size(); ++p) idx = idx * inputs[p].size() + in[p];
        return idx;
    }

    std::size_t output_index(const std::vector<int>& out) const {
        std::size_t idx = 0;
        for (std::size_t p = 0; p < outputs.size(); ++p)
            idx = idx * outputs[p].size() + out[p];
        return idx;
    }

    void decode_input(std::size_t idx, std::vector<int>& in) const {
        in.resize(inputs.size());
        for (std::size_t p = inputs.size(); p-- > 0;) {
            in[p] = static_cast<int>(idx % inputs[p].size());
            idx /= inputs[p].size();
        }
    }

    void decode_output(std::size_t idx, std::vector<int>& out) const {
        out.resize(outputs.size());
        for (std::size_t p = outputs.size(); p-- > 0;) {
            out[p] = static_cast<int>(idx % outputs[p].size());
            idx /= outputs[p].size();
        }
    }

    const Rational& at(const std::vector<int>& in, const std::vector<int>& out) const {
        return entries.at(input_index(in) * output_space() + output_index(out));
    }

    Rational& at(const std::vector<int>& in, const std::vector<int>& out) {
        return entries.at(input_index(in) * output_space() + output_index(out));
    }

    void allocate() { entries.assign(input_space() * output_space(), Rational(0)); }

    // Every conditional distribution sums to one and has no negative entry.
    bool normalized() const {
        const std::size_t os = output_space();
        for (std::size_t i = 0; i < input_space(); ++i) {
            Rational sum(0);
            for (std::size_t o = 0; o < os; ++o) {
                if (entries[i * os + o] < 0) return false;
                sum += entries[i * os + o];
            }
            if (sum != 1) return false;
        }
        return true;
    }
};

struct NsViolation {
    int party = -1;
    // Full input tuples differing only in the party's coordinate.
    std::vector<std::string> inputs_a;
    std::vector<std::string> inputs_b;
    // Output symbols of the other parties; the party's own slot holds "*".
    std::vector<std::string> other_outputs;
    Rational lhs;
    Rational rhs;
};

struct NsCheckReport {
    bool ok = true;
    std::vector<NsViolation> violations;
};

// Non-signaling: for every party, the marginal distribution of the other
// parties' outputs must not depend on that party's input. All input pairs are
// compared so the report pinpoints each violating locus.
inline NsCheckReport check_nonsignaling(const ConditionalTable& t) {
    NsCheckReport report;
    const std::size_t os = t.output_space();
    const int m = static_cast<int>(t.num_parties());
    std::vector<int> in(m), out(m);
    for (int party = 0; party < m; ++party) {
        const std::size_t nin = t.inputs[party].size();
        const std::size_t nout = t.outputs[party].size();
        // Enumerate the other parties' inputs.
        std::size_t others_in = 1;
        for (int p = 0; p < m; ++p)
            if (p != party) others_in *= t.inputs[p].size();
        std::size_t others_out = 1;
        for (int p = 0; p < m; ++p)
            if (p != party) others_out *= t.outputs[p].size();
        for (std::size_t oi = 0; oi < others_in; ++oi) {
            std::size_t rest = oi;
            for (int p = m - 1; p >= 0; --p) {
                if (p == party) continue;
                in[p] = static_cast<int>(rest % t.inputs[p].size());
                rest /= t.inputs[p].size();
            }
            for (std::size_t a = 0; a < nin; ++a)
                for (std::size_t b = a + 1; b < nin; ++b)
                    for (std::size_t oo = 0; oo < others_out; ++oo) {
                        rest = oo;
                        for (int p = m - 1; p >= 0; --p) {
                            if (p == party) continue;
                            out[p] = static_cast<int>(rest % t.outputs[p].size());
                            rest /= t.outputs[p].size();
                        }
                        Rational lhs(0), rhs(0);
                        for (std::size_t x = 0; x < nout; ++x) {
                            out[party] = static_cast<int>(x);
                            in[party] = static_cast<int>(a);
                            lhs += t.entries[t.input_index(in) * os + t.output_index(out)];
                            in[party] = static_cast<int>(b);
                            rhs += t.entries[t.input_index(in) * os + t.output_index(out)];
                        }
                        if (lhs != rhs) {
                            report.ok = false;
                            NsViolation v;
                            v.party = party;
                            in[party] = static_cast<int>(a);
                            for (int p = 0; p < m; ++p)
                                v.inputs_a.push_back(t.inputs[p][in[p]]);
                            in[party] = static_cast<int>(b);
                            for (int p = 0; p < m; ++p)
                                v.inputs_b.push_back(t.inputs[p][in[p]]);
                            for (int p = 0; p < m; ++p)
                                v.other_outputs.push_back(p == party ? "*"
                                                                     : t.outputs[p][out[p]]);
                            v.lhs = lhs;
                            v.rhs = rhs;
                            report.violations.push_back(std::move(v));
                        }
                    }
        }
    }
    return report;
}

// A multi-round conditional distribution: each party holds a fixed number of
// query rounds, each round with its own input and output alphabet. Entries
// are laid out like ConditionalTable over the flattened (party, round) ports,
// party-major and round-minor.
struct MultiRoundTable {
    std::vector<std::string> parties;
    // [party][round] -> alphabet
    std::vector<std::vector<std::vector<std::string>>> inputs;
    std::vector<std::vector<std::vector<std::string>>> outputs;
    std::vector<Rational> entries;

    std::size_t num_ports() const {
        std::size_t n = 0;
        for (const auto& r : inputs) n += r.size();
        return n;
    }

    // Flatten to a single-round table over ports for shared indexing logic.
    ConditionalTable flattened() const {
        ConditionalTable t;
        for (std::size_t p = 0; p < parties.size(); ++p)
            for (std::size_t r = 0; r < inputs[p].size(); ++r) {
                t.parties.push_back(parties[p] + "@" + std::to_string(r));
                t.inputs.push_back(inputs[p][r]);
                t.outputs.push_back(outputs[p][r]);
            }
        t.entries = entries;
        return t;
    }
};

struct MultiRoundViolation {
    std::vector<int> cut;  // rounds revealed per party
    std::vector<std::string> prefix_inputs;
    std::vector<std::string> suffix_inputs_a;
    std::vector<std::string> suffix_inputs_b;
    std::vector<std::string> prefix_outputs;
    Rational lhs;
    Rational rhs;
};

struct MultiRoundCheckReport {
    bool ok = true;
    std::vector<MultiRoundViolation> violations;
};

// Multi-round non-signaling: for every cut vector (how many rounds each party
// has played), the joint distribution of the revealed outputs may depend only
// on the revealed inputs. Verified by comparing the prefix marginal across
// all assignments of the hidden inputs.
inline MultiRoundCheckReport check_multiround_ns(const MultiRoundTable& table) {
    MultiRoundCheckReport report;
    const ConditionalTable t = table.flattened();
    const std::size_t ports = t.num_parties();
    const std::size_t os = t.output_space();

    // port -> (party, round)
    std::vector<std::pair<int, int>> port_id;
    for (std::size_t p = 0; p < table.parties.size(); ++p)
        for (std::size_t r = 0; r < table.inputs[p].size(); ++r)
            port_id.emplace_back(static_cast<int>(p), static_cast<int>(r));

    // Enumerate cut vectors.
    std::vector<int> cut(table.parties.size(), 0);
    std::vector<int> in(ports), out(ports);
    while (true) {
        std::vector<int> prefix_ports, suffix_ports;
        for (std::size_t port = 0; port < ports; ++port)
            (port_id[port].second < cut[port_id[port].first] ? prefix_ports
                                                             : suffix_ports)
                .push_back(static_cast<int>(port));

        std::size_t prefix_in = 1, prefix_out = 1, suffix_in = 1;
        for (const int port : prefix_ports) {
            prefix_in *= t.inputs[port].size();
            prefix_out *= t.outputs[port].size();
        }
        for (const int port : suffix_ports) suffix_in *= t.inputs[port].size();

        for (std::size_t pi = 0; pi < prefix_in; ++pi) {
            std::size_t rest = pi;
            for (auto it = prefix_ports.rbegin(); it != prefix_ports.rend(); ++it) {
                in[*it] = static_cast<int>(rest % t.inputs[*it].size());
                rest /= t.inputs[*it].size();
            }
            for (std::size_t po = 0; po < prefix_out; ++po) {
                rest = po;
                for (auto it = prefix_ports.rbegin(); it != prefix_ports.rend(); ++it) {
                    out[*it] = static_cast<int>(rest % t.outputs[*it].size());
                    rest /= t.outputs[*it].size();
                }
                // Reference marginal with all hidden inputs at their first
                // symbol, then compare every other hidden assignment to it.
                bool have_ref = false;
                Rational ref(0);
                std::vector<int> ref_suffix;
                for (std::size_t si = 0; si < suffix_in; ++si) {
                    rest = si;
                    for (auto it = suffix_ports.rbegin(); it != suffix_ports.rend(); ++it) {
                        in[*it] = static_cast<int>(rest % t.inputs[*it].size());
                        rest /= t.inputs[*it].size();
                    }
                    // Sum over hidden outputs.
                    Rational sum(0);
                    std::size_t suffix_out = 1;
                    for (const int port : suffix_ports) suffix_out *= t.outputs[port].size();
                    for (std::size_t so = 0; so < suffix_out; ++so) {
                        rest = so;
                        for (auto it = suffix_ports.rbegin(); it != suffix_ports.rend();
                             ++it) {
                            out[*it] = static_cast<int>(rest % t.outputs[*it].size());
                            rest /= t.outputs[*it].size();
                        }
                        sum += t.entries[t.input_index(in) * os + t.output_index(out)];
                    }
                    if (!have_ref) {
                        have_ref = true;
                        ref = sum;
                        ref_suffix.clear();
                        for (const int port : suffix_ports)
                            ref_suffix.push_back(in[port]);
                    } else if (sum != ref) {
                        report.ok = false;
                        MultiRoundViolation v;
                        v.cut = cut;
                        for (const int port : prefix_ports)
                            v.prefix_inputs.push_back(t.inputs[port][in[port]]);
                        for (std::size_t s = 0; s < suffix_ports.size(); ++s)
                            v.suffix_inputs_a.push_back(
                                t.inputs[suffix_ports[s]][ref_suffix[s]]);
                        for (const int port : suffix_ports)
                            v.suffix_inputs_b.push_back(t.inputs[port][in[port]]);
                        for (const int port : prefix_ports)
                            v.prefix_outputs.push_back(t.outputs[port][out[port]]);
                        v.lhs = ref;
                        v.rhs = sum;
                        report.violations.push_back(std::move(v));
                    }
                }
            }
        }
        // Next cut vector.
        std::size_t pos = cut.size();
        bool done = true;
        while (pos-- > 0) {
            if (++cut[pos] <= static_cast<int>(table.inputs[pos].size())) {
                done = false;
                break;
            }
            cut[pos] = 0;
        }
        if (done) break;
    }
    return report;
}

// All entries zero or one (with normalization this means the outputs are a
// deterministic function of the inputs).
inline bool vertex_is_deterministic(const ConditionalTable& t) {
    for (const auto& e : t.entries)
        if (e != 0 && e != 1) return false;
    return true;
}

}  // namespace nsgames
