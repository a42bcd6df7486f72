#pragma once

#include <nsgames/tables.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace nsgames {

// A named non-signaling resource; ports are identified by the player names
// they are wired to. Construction through make_box checks non-signaling.
struct NSBox {
    std::string name;
    ConditionalTable table;

    int port_of(const std::string& player) const {
        for (std::size_t p = 0; p < table.parties.size(); ++p)
            if (table.parties[p] == player) return static_cast<int>(p);
        return -1;
    }
};

inline NSBox make_box(std::string name, ConditionalTable table) {
    if (!table.normalized())
        throw std::invalid_argument("box '" + name + "' is not a conditional distribution");
    if (!check_nonsignaling(table).ok)
        throw std::invalid_argument("box '" + name + "' signals");
    return {std::move(name), std::move(table)};
}

// The PR box: binary inputs and outputs, outputs uniform with
// x xor y = a and b.
inline NSBox nonlocal_box(const std::string& first = "Alice",
                          const std::string& second = "Bob") {
    ConditionalTable t;
    t.parties = {first, second};
    t.inputs = {{"0", "1"}, {"0", "1"}};
    t.outputs = {{"0", "1"}, {"0", "1"}};
    t.allocate();
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int x = 0; x < 2; ++x)
                for (int y = 0; y < 2; ++y)
                    if ((x ^ y) == (a & b))
                        t.at({a, b}, {x, y}) = make_rational(1, 2);
    return make_box("nonlocal_box", std::move(t));
}

// Selection box: the first party supplies two candidate bits (as one symbol),
// the second party picks an index; both learn the selected bit masked with
// the first party's fresh uniform output. The second party's two copies of
// the mask are always equal.
inline NSBox selection_box(const std::string& first = "Alice",
                           const std::string& second = "Charlie") {
    ConditionalTable t;
    t.parties = {first, second};
    t.inputs = {{"00", "01", "10", "11"}, {"1", "2"}};
    t.outputs = {{"0", "1"}, {"00", "01", "10", "11"}};
    t.allocate();
    for (int x12 = 0; x12 < 4; ++x12)
        for (int j = 0; j < 2; ++j) {
            const int xj = j == 0 ? (x12 >> 1) & 1 : x12 & 1;
            for (int x = 0; x < 2; ++x) {
                const int z = x ^ xj;
                t.at({x12, j}, {x, z * 2 + z}) = make_rational(1, 2);
            }
        }
    return make_box("selection_box", std::move(t));
}

// Three-party resource with a switched behavior: on "yes" the outputs are
// uniform over the tuples satisfying
//   x xor y xor a z1 xor (1-a) z2 = a b,
// on "no" the third party's bit is independent and the second party's two
// bits both equal the first party's bit.
inline NSBox resource_r(const std::string& first = "Alice",
                        const std::string& second = "Charlie",
                        const std::string& third = "Bob") {
    ConditionalTable t;
    t.parties = {first, second, third};
    t.inputs = {{"0", "1"}, {"yes", "no"}, {"0", "1"}};
    t.outputs = {{"0", "1"}, {"00", "01", "10", "11"}, {"0", "1"}};
    t.allocate();
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int x = 0; x < 2; ++x)
                for (int z1 = 0; z1 < 2; ++z1)
                    for (int z2 = 0; z2 < 2; ++z2)
                        for (int y = 0; y < 2; ++y) {
                            const int zz = z1 * 2 + z2;
                            if ((x ^ y ^ (a ? z1 : z2)) == (a & b))
                                t.at({a, 0, b}, {x, zz, y}) = make_rational(1, 8);
                            if (z1 == x && z2 == x)
                                t.at({a, 1, b}, {x, zz, y}) = make_rational(1, 4);
                        }
    return make_box("resource_r", std::move(t));
}

enum class Direction { forward, reverse };  // which port answers first

// Two-stage factorization of a two-party box: the leading port's output is
// drawn from its input marginal, the trailing port's from the conditional
// given that transcript. Probability-zero histories fall back to the uniform
// distribution.
struct Factorization {
    int first_port = 0;
    // stage1[a][x]: marginal of the leading port's output given its input.
    std::vector<std::vector<Rational>> stage1;
    // stage2[a][x][b][y]: trailing port's conditional.
    std::vector<std::vector<std::vector<std::vector<Rational>>>> stage2;

    ConditionalTable reconstruct(const NSBox& box) const {
        ConditionalTable t = box.table;
        const int lead = first_port;
        const int trail = 1 - first_port;
        for (auto& e : t.entries) e = 0;
        std::vector<int> in(2), out(2);
        for (std::size_t i = 0; i < t.input_space(); ++i) {
            t.decode_input(i, in);
            for (std::size_t o = 0; o < t.output_space(); ++o) {
                t.decode_output(o, out);
                t.entries[i * t.output_space() + o] =
                    stage1[in[lead]][out[lead]] *
                    stage2[in[lead]][out[lead]][in[trail]][out[trail]];
            }
        }
        return t;
    }
};

inline Factorization factorize(const NSBox& box, Direction direction) {
    if (box.table.num_parties() != 2)
        throw std::invalid_argument("factorize handles two-party boxes");
    const int lead = direction == Direction::forward ? 0 : 1;
    const int trail = 1 - lead;
    const auto& t = box.table;
    const std::size_t lead_in = t.inputs[lead].size();
    const std::size_t lead_out = t.outputs[lead].size();
    const std::size_t trail_in = t.inputs[trail].size();
    const std::size_t trail_out = t.outputs[trail].size();

    Factorization f;
    f.first_port = lead;
    f.stage1.assign(lead_in, std::vector<Rational>(lead_out, Rational(0)));
    f.stage2.assign(
        lead_in,
        std::vector<std::vector<std::vector<Rational>>>(
            lead_out, std::vector<std::vector<Rational>>(
                          trail_in, std::vector<Rational>(trail_out, Rational(0)))));

    std::vector<int> in(2), out(2);
    for (std::size_t a = 0; a < lead_in; ++a) {
        in[lead] = static_cast<int>(a);
        in[trail] = 0;  // non-signaling makes this choice irrelevant
        for (std::size_t x = 0; x < lead_out; ++x) {
            out[lead] = static_cast<int>(x);
            Rational marginal(0);
            for (std::size_t y = 0; y < trail_out; ++y) {
                out[trail] = static_cast<int>(y);
                marginal += t.at(in, out);
            }
            f.stage1[a][x] = marginal;
            for (std::size_t b = 0; b < trail_in; ++b) {
                in[trail] = static_cast<int>(b);
                for (std::size_t y = 0; y < trail_out; ++y) {
                    out[trail] = static_cast<int>(y);
                    f.stage2[a][x][b][y] =
                        marginal == 0 ? Rational(1) / static_cast<long>(trail_out)
                                      : t.at(in, out) / marginal;
                }
                in[trail] = 0;
            }
        }
    }
    return f;
}

// The joint two-round behavior of two PR boxes queried in opposite orders by
// the two parties: the first party asks box one then box two, the second
// party asks box two then box one.
inline MultiRoundTable opposite_order_pr_table() {
    MultiRoundTable t;
    t.parties = {"P1", "P2"};
    t.inputs = {{{"0", "1"}, {"0", "1"}}, {{"0", "1"}, {"0", "1"}}};
    t.outputs = {{{"0", "1"}, {"0", "1"}}, {{"0", "1"}, {"0", "1"}}};
    // Flattened ports: (P1 round 0, P1 round 1, P2 round 0, P2 round 1) with
    // inputs (a1, a2, b1, b2) and outputs (x1, x2, y1, y2); box one links
    // (P1 round 0, P2 round 1), box two links (P2 round 0, P1 round 1).
    t.entries.assign(16 * 16, Rational(0));
    for (int a1 = 0; a1 < 2; ++a1)
        for (int a2 = 0; a2 < 2; ++a2)
            for (int b1 = 0; b1 < 2; ++b1)
                for (int b2 = 0; b2 < 2; ++b2)
                    for (int x1 = 0; x1 < 2; ++x1)
                        for (int x2 = 0; x2 < 2; ++x2)
                            for (int y1 = 0; y1 < 2; ++y1)
                                for (int y2 = 0; y2 < 2; ++y2) {
                                    if ((x1 ^ y2) != (a1 & b2)) continue;
                                    if ((x2 ^ y1) != (a2 & b1)) continue;
                                    const std::size_t i =
                                        ((a1 * 2 + a2) * 2 + b1) * 2 + b2;
                                    const std::size_t o =
                                        ((x1 * 2 + x2) * 2 + y1) * 2 + y2;
                                    t.entries[i * 16 + o] = make_rational(1, 4);
                                }
    return t;
}

}  // namespace nsgames
