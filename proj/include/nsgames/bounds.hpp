#pragma once

#include <nsgames/rational.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <future>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace nsgames {

// Tight non-signaling bound of the consistency-extended CHSH game with k
// checking players: 1 - 1/(2(3^k + 1)); k = 0 is plain CHSH at 3/4.
inline Rational ns_bound_chsh_plus_k(int k) {
    if (k < 0) throw std::invalid_argument("k must be nonnegative");
    if (k == 0) return Rational(3, 4);
    const Integer pow3 = boost::multiprecision::pow(Integer(3), static_cast<unsigned>(k));
    return 1 - Rational(1, 2 * (pow3 + 1));
}

// Winning probability of the entangled strategy for the same game:
// 1 - (2/(3^k + 1)) sin^2(pi/8).
inline double quantum_lb_chsh_plus_k(int k) {
    if (k < 0) throw std::invalid_argument("k must be nonnegative");
    const double pow3 = std::pow(3.0, k);
    const double s = std::sin(std::numbers::pi / 8);
    return 1 - 2 / (pow3 + 1) * s * s;
}

// Tight non-signaling bound of the extended chained game with n Alice inputs
// per sign and k checking players: 1 - 1/(2(2n + 3^k - 2)).
inline Rational ns_bound_chshn(int n, int k) {
    if (n < 2) throw std::invalid_argument("n must be at least 2");
    if (k < 1) throw std::invalid_argument("k must be positive");
    const Integer pow3 = boost::multiprecision::pow(Integer(3), static_cast<unsigned>(k));
    return 1 - Rational(1, 2 * (2 * n + pow3 - 2));
}

// Entangled winning probability of the chained strategy for that game:
// 1 - n sin^2(pi/(4n)) / (2n + 3^k - 2).
inline double quantum_lb_chshn(int n, int k) {
    if (n < 2) throw std::invalid_argument("n must be at least 2");
    if (k < 1) throw std::invalid_argument("k must be positive");
    const double pow3 = std::pow(3.0, k);
    const double s = std::sin(std::numbers::pi / (4 * n));
    return 1 - n * s * s / (2 * n + pow3 - 2);
}

// The checking rate q and the per-game repetition rate p of the extended
// chained game satisfy 1/(1-q) = (3^k - 1) p / q = 1 + (3^k - 1) p.
struct MarkovIdentity {
    bool holds = false;
    Rational value;
};

inline MarkovIdentity verify_markov_identity(int k, const Rational& p) {
    if (k < 1) throw std::invalid_argument("k must be positive");
    if (p <= 0 || p >= 1) throw std::invalid_argument("p must lie strictly in (0, 1)");
    const Integer pow3 = boost::multiprecision::pow(Integer(3), static_cast<unsigned>(k));
    const Rational q = (pow3 - 1) * p / (1 + (pow3 - 1) * p);
    MarkovIdentity out;
    out.value = 1 / (1 - q);
    out.holds = out.value == (pow3 - 1) * p / q && out.value == 1 + (pow3 - 1) * p;
    return out;
}

inline double gap_chsh_plus_k(int k) {
    return quantum_lb_chsh_plus_k(k) - to_double(ns_bound_chsh_plus_k(k));
}

inline double gap_chshn(int n, int k) {
    return quantum_lb_chshn(n, k) - to_double(ns_bound_chshn(n, k));
}

// The n maximizing the quantum-over-non-signaling gap of the extended chained
// game at fixed k; ties keep the smallest n.
inline int best_chshn_n(int k, int n_max = 0) {
    if (k < 1) throw std::invalid_argument("k must be positive");
    if (n_max <= 0) {
        const double pow3 = std::pow(3.0, k);
        n_max = static_cast<int>(2 * pow3) + 16;
    }
    int best_n = 2;
    double best_gap = gap_chshn(2, k);
    for (int n = 3; n <= n_max; ++n) {
        const double g = gap_chshn(n, k);
        if (g > best_gap) {
            best_gap = g;
            best_n = n;
        }
    }
    return best_n;
}

struct GapRow {
    int k = 0;
    double chsh_gap = 0;
    int best_n = 0;
    double chshn_gap = 0;
};

inline GapRow gap_row(int k, int n_max = 0) {
    GapRow row;
    row.k = k;
    row.chsh_gap = gap_chsh_plus_k(k);
    row.best_n = best_chshn_n(k, n_max);
    row.chshn_gap = gap_chshn(row.best_n, k);
    return row;
}

// Builds the gap table for k in [kmin, kmax]. Rows are independent, so the
// search fans out over NSGAMES_WORKERS async tasks when that is set above 1.
inline std::vector<GapRow> gap_table(int kmin = 1, int kmax = 12, int n_max = 0) {
    if (kmin < 1 || kmax < kmin) throw std::invalid_argument("bad k range");
    int workers = 1;
    if (const char* env = std::getenv("NSGAMES_WORKERS")) {
        workers = std::atoi(env);
        if (workers < 1) workers = 1;
    }
    std::vector<GapRow> rows(kmax - kmin + 1);
    if (workers == 1) {
        for (int k = kmin; k <= kmax; ++k) rows[k - kmin] = gap_row(k, n_max);
        return rows;
    }
    std::vector<std::future<GapRow>> futures;
    for (int k = kmin; k <= kmax; ++k)
        futures.push_back(
            std::async(std::launch::async, [k, n_max] { return gap_row(k, n_max); }));
    for (std::size_t i = 0; i < futures.size(); ++i) rows[i] = futures[i].get();
    return rows;
}

// Scientific notation with four significant digits, e.g. 5.178e-02.
inline std::string format_gap(double g) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", g);
    return buf;
}

inline std::string gap_table_csv(const std::vector<GapRow>& rows) {
    std::ostringstream out;
    out << "k,chsh_gap,best_n,chshn_gap\n";
    for (const auto& row : rows)
        out << row.k << ',' << format_gap(row.chsh_gap) << ',' << row.best_n << ','
            << format_gap(row.chshn_gap) << '\n';
    return out.str();
}

inline std::string gap_table_markdown(const std::vector<GapRow>& rows) {
    std::ostringstream out;
    out << "| k | chsh_gap | best_n | chshn_gap |\n";
    out << "| --- | --- | --- | --- |\n";
    for (const auto& row : rows)
        out << "| " << row.k << " | " << format_gap(row.chsh_gap) << " | " << row.best_n
            << " | " << format_gap(row.chshn_gap) << " |\n";
    return out.str();
}

}  // namespace nsgames
