#pragma once

#include <nsgames/rational.hpp>

#include <cstddef>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace nsgames {

enum class Relation { eq, le, ge };

struct LinearConstraint {
    std::vector<Rational> coeffs;  // dense, one per variable
    Relation rel = Relation::eq;
    Rational rhs;
    std::string label;
};

// maximize objective . x subject to the constraints and x >= 0.
struct LinearProgram {
    std::vector<std::string> var_names;
    std::vector<Rational> objective;
    std::vector<LinearConstraint> constraints;

    std::size_t num_vars() const { return var_names.size(); }

    void check_shape() const {
        if (objective.size() != num_vars())
            throw std::invalid_argument("objective length differs from variable count");
        for (const auto& c : constraints)
            if (c.coeffs.size() != num_vars())
                throw std::invalid_argument("constraint length differs from variable count");
    }
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
    LpStatus status = LpStatus::optimal;
    Rational value;
    std::vector<Rational> x;
    std::size_t pivots = 0;
};

// Drops equality rows that are linear combinations of earlier ones, using
// exact Gaussian elimination on the equality subsystem. Inequalities are kept
// as they are. Returns false (and leaves `lp` partially reduced) when an
// inconsistent equality 0 = c is detected.
inline bool eliminate_redundant_equalities(LinearProgram& lp) {
    const std::size_t n = lp.num_vars();
    std::vector<std::vector<Rational>> reduced;  // rows in echelon form, with rhs appended
    std::vector<std::size_t> pivot_col;
    std::vector<LinearConstraint> kept;
    kept.reserve(lp.constraints.size());
    for (auto& c : lp.constraints) {
        if (c.rel != Relation::eq) {
            kept.push_back(std::move(c));
            continue;
        }
        std::vector<Rational> row(c.coeffs);
        row.push_back(c.rhs);
        for (std::size_t r = 0; r < reduced.size(); ++r) {
            const Rational& factor = row[pivot_col[r]];
            if (factor == 0) continue;
            const Rational f = factor;
            for (std::size_t j = 0; j <= n; ++j) row[j] -= f * reduced[r][j];
        }
        std::size_t col = 0;
        while (col < n && row[col] == 0) ++col;
        if (col == n) {
            if (row[n] != 0) return false;  // 0 = nonzero
            continue;                       // redundant row, drop it
        }
        const Rational inv = 1 / row[col];
        for (std::size_t j = 0; j <= n; ++j) row[j] *= inv;
        reduced.push_back(std::move(row));
        pivot_col.push_back(col);
        kept.push_back(std::move(c));
    }
    lp.constraints = std::move(kept);
    return true;
}

namespace detail {

// Dense simplex tableau with explicit basis bookkeeping. Variable order:
// original, slack, artificial; Bland's least-index rule on that order.
struct SimplexTableau {
    std::size_t n_orig = 0;
    std::size_t n_total = 0;
    std::vector<std::vector<Rational>> row;  // [i][j], j < n_total
    std::vector<Rational> rhs;               // per row, kept nonnegative
    std::vector<std::size_t> basis;          // per row, variable index
    std::vector<bool> artificial;            // per variable
    std::size_t pivots = 0;

    void pivot(std::size_t r, std::size_t col, std::vector<Rational>& cost,
               Rational& cost_shift) {
        ++pivots;
        const Rational inv = 1 / row[r][col];
        for (auto& v : row[r]) v *= inv;
        rhs[r] *= inv;
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i == r || row[i][col] == 0) continue;
            const Rational f = row[i][col];
            for (std::size_t j = 0; j < n_total; ++j) row[i][j] -= f * row[r][j];
            rhs[i] -= f * rhs[r];
        }
        if (cost[col] != 0) {
            const Rational f = cost[col];
            for (std::size_t j = 0; j < n_total; ++j) cost[j] -= f * row[r][j];
            cost_shift += f * rhs[r];
        }
        basis[r] = col;
    }

    // Maximizes cost_shift + cost . x with Bland's rule: the entering column
    // is the smallest index with positive reduced cost; the leaving row is
    // the minimum-ratio row, ties broken by smallest basic variable index.
    // Returns false when the objective is unbounded.
    bool run(std::vector<Rational>& cost, Rational& cost_shift, bool allow_artificial) {
        constexpr std::size_t kMaxPivots = 2000000;
        while (true) {
            std::size_t enter = n_total;
            for (std::size_t j = 0; j < n_total; ++j)
                if (cost[j] > 0 && (allow_artificial || !artificial[j])) {
                    enter = j;
                    break;
                }
            if (enter == n_total) return true;
            std::size_t leave = row.size();
            Rational best_ratio;
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (row[i][enter] <= 0) continue;
                const Rational ratio = rhs[i] / row[i][enter];
                if (leave == row.size() || ratio < best_ratio ||
                    (ratio == best_ratio && basis[i] < basis[leave])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
            if (leave == row.size()) return false;
            pivot(leave, enter, cost, cost_shift);
            if (pivots > kMaxPivots)
                throw std::runtime_error("simplex exceeded pivot limit");
        }
    }
};

}  // namespace detail

// Exact two-phase simplex with Bland's anti-cycling rule. All variables are
// implicitly nonnegative.
inline LpSolution solve_lp(const LinearProgram& lp) {
    lp.check_shape();
    const std::size_t n = lp.num_vars();

    detail::SimplexTableau t;
    t.n_orig = n;
    std::size_t n_slack = 0;
    for (const auto& c : lp.constraints)
        if (c.rel != Relation::eq) ++n_slack;

    // Assemble rows: ge rows are negated into le rows, le rows get a slack,
    // then rows with negative right-hand side are negated (flipping their
    // slack out of the basis).
    const std::size_t m = lp.constraints.size();
    t.row.assign(m, std::vector<Rational>());
    t.rhs.assign(m, Rational(0));
    std::size_t slack_seen = 0;
    std::vector<long> slack_col(m, -1);
    std::vector<bool> slack_usable(m, false);
    for (std::size_t i = 0; i < m; ++i) {
        const auto& c = lp.constraints[i];
        const bool flip_rel = c.rel == Relation::ge;
        std::vector<Rational> coeffs(c.coeffs);
        Rational b = c.rhs;
        if (flip_rel) {
            for (auto& v : coeffs) v = -v;
            b = -b;
        }
        long scol = -1;
        if (c.rel != Relation::eq) scol = static_cast<long>(n + slack_seen++);
        Rational slack_sign(1);
        if (b < 0) {
            for (auto& v : coeffs) v = -v;
            b = -b;
            slack_sign = -1;
        }
        coeffs.resize(n + n_slack, Rational(0));
        if (scol >= 0) coeffs[scol] = slack_sign;
        t.row[i] = std::move(coeffs);
        t.rhs[i] = b;
        slack_col[i] = scol;
        slack_usable[i] = scol >= 0 && slack_sign == 1;
    }

    // Basis: the slack where possible, otherwise a fresh artificial variable.
    std::size_t n_art = 0;
    t.basis.assign(m, 0);
    std::vector<bool> art_row(m, false);
    for (std::size_t i = 0; i < m; ++i)
        if (!slack_usable[i]) ++n_art;
    t.n_total = n + n_slack + n_art;
    t.artificial.assign(t.n_total, false);
    std::size_t next_art = n + n_slack;
    for (std::size_t i = 0; i < m; ++i) {
        t.row[i].resize(t.n_total, Rational(0));
        if (slack_usable[i]) {
            t.basis[i] = static_cast<std::size_t>(slack_col[i]);
        } else {
            t.row[i][next_art] = 1;
            t.basis[i] = next_art;
            t.artificial[next_art] = true;
            art_row[i] = true;
            ++next_art;
        }
    }

    LpSolution sol;

    // Phase 1: maximize -(sum of artificials); feasible iff the optimum is 0.
    if (n_art > 0) {
        std::vector<Rational> cost(t.n_total, Rational(0));
        Rational shift(0);
        for (std::size_t i = 0; i < m; ++i) {
            if (!art_row[i]) continue;
            for (std::size_t j = 0; j < t.n_total; ++j)
                if (!t.artificial[j]) cost[j] += t.row[i][j];
            shift -= t.rhs[i];
        }
        if (!t.run(cost, shift, false))
            throw std::logic_error("phase 1 objective unbounded");
        if (shift != 0) {
            sol.status = LpStatus::infeasible;
            sol.pivots = t.pivots;
            return sol;
        }
        // Pivot leftover artificials out of the basis; rows that cannot be
        // pivoted are redundant and get erased.
        for (std::size_t i = t.row.size(); i-- > 0;) {
            if (!t.artificial[t.basis[i]]) continue;
            std::size_t col = t.n_total;
            for (std::size_t j = 0; j < t.n_total; ++j)
                if (!t.artificial[j] && t.row[i][j] != 0) {
                    col = j;
                    break;
                }
            if (col == t.n_total) {
                t.row.erase(t.row.begin() + static_cast<long>(i));
                t.rhs.erase(t.rhs.begin() + static_cast<long>(i));
                t.basis.erase(t.basis.begin() + static_cast<long>(i));
            } else {
                std::vector<Rational> dummy_cost(t.n_total, Rational(0));
                Rational dummy_shift(0);
                t.pivot(i, col, dummy_cost, dummy_shift);
            }
        }
    }

    // Phase 2: restore the real objective in terms of the current basis.
    std::vector<Rational> cost(t.n_total, Rational(0));
    for (std::size_t j = 0; j < n; ++j) cost[j] = lp.objective[j];
    Rational shift(0);
    for (std::size_t i = 0; i < t.row.size(); ++i) {
        const Rational f = cost[t.basis[i]];
        if (f == 0) continue;
        for (std::size_t j = 0; j < t.n_total; ++j) cost[j] -= f * t.row[i][j];
        shift += f * t.rhs[i];
    }
    if (!t.run(cost, shift, false)) {
        sol.status = LpStatus::unbounded;
        sol.pivots = t.pivots;
        return sol;
    }

    sol.status = LpStatus::optimal;
    sol.value = shift;
    sol.x.assign(n, Rational(0));
    for (std::size_t i = 0; i < t.row.size(); ++i)
        if (t.basis[i] < n) sol.x[t.basis[i]] = t.rhs[i];
    sol.pivots = t.pivots;
    return sol;
}

// Writes the program in LP file format. Exact rationals are rendered as
// decimal strings, which is lossy; the header comment flags this and the
// variable comment block records the name mapping.
inline void write_lp_format(const LinearProgram& lp, std::ostream& os) {
    lp.check_shape();
    os << "\\ decimal rendering of exact rational coefficients (lossy)\n";
    for (std::size_t j = 0; j < lp.num_vars(); ++j)
        os << "\\ x" << j << " = " << lp.var_names[j] << "\n";
    auto coef = [](const Rational& r) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", to_double(r));
        return std::string(buf);
    };
    os << "Maximize\n obj:";
    bool first = true;
    for (std::size_t j = 0; j < lp.num_vars(); ++j) {
        if (lp.objective[j] == 0) continue;
        os << (first ? " " : " + ") << coef(lp.objective[j]) << " x" << j;
        first = false;
    }
    if (first) os << " 0 x0";
    os << "\nSubject To\n";
    for (std::size_t i = 0; i < lp.constraints.size(); ++i) {
        const auto& c = lp.constraints[i];
        os << " c" << i << ":";
        bool lead = true;
        for (std::size_t j = 0; j < lp.num_vars(); ++j) {
            if (c.coeffs[j] == 0) continue;
            if (lead && c.coeffs[j] < 0) {
                os << " -" << coef(-c.coeffs[j]) << " x" << j;
            } else if (lead) {
                os << " " << coef(c.coeffs[j]) << " x" << j;
            } else if (c.coeffs[j] < 0) {
                os << " - " << coef(-c.coeffs[j]) << " x" << j;
            } else {
                os << " + " << coef(c.coeffs[j]) << " x" << j;
            }
            lead = false;
        }
        if (lead) os << " 0 x0";
        os << (c.rel == Relation::eq ? " = " : c.rel == Relation::le ? " <= " : " >= ")
           << coef(c.rhs) << "\n";
    }
    os << "Bounds\n";
    for (std::size_t j = 0; j < lp.num_vars(); ++j) os << " 0 <= x" << j << "\n";
    os << "End\n";
}

}  // namespace nsgames
