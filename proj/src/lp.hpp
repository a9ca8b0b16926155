#pragma once

#include <cstddef>
#include <vector>

namespace hem::detail {

enum class LpStatus { optimal, infeasible, unbounded };

template <class T>
struct LpResult {
    LpStatus status = LpStatus::infeasible;
    T objective{};
    std::vector<T> x;
};

/// Dense two-phase simplex: Dantzig pricing, falling back to Bland's rule against cycling.
/// maximize c.x subject to eq rows (a.x = b), ub rows (a.x <= b);
/// the first n_free variables are free, the rest nonnegative.
template <class T>
class Simplex {
public:
    Simplex(std::size_t n_vars, std::size_t n_free, T eps) : n_(n_vars), n_free_(n_free), eps_(eps) {}

    void add_eq(std::vector<T> a, T b) { rows_.push_back({std::move(a), std::move(b), true}); }
    void add_ub(std::vector<T> a, T b) { rows_.push_back({std::move(a), std::move(b), false}); }

    LpResult<T> maximize(const std::vector<T>& c) {
        build();
        LpResult<T> out;
        // phase 1
        std::vector<T> c1(cols_, T(0));
        for (std::size_t j = art_begin_; j < cols_; ++j) c1[j] = T(-1);
        set_objective(c1);
        if (!run(cols_)) return out; // cannot be unbounded in phase 1
        if (obj_value() < -eps_) return out;
        drive_out_artificials();
        // phase 2
        std::vector<T> c2(cols_, T(0));
        for (std::size_t j = 0; j < n_; ++j) {
            c2[col_pos(j)] += c[j];
            if (j < n_free_) c2[col_neg(j)] -= c[j];
        }
        set_objective(c2);
        if (!run(art_begin_)) {
            out.status = LpStatus::unbounded;
            return out;
        }
        out.status = LpStatus::optimal;
        out.objective = obj_value();
        std::vector<T> val(cols_, T(0));
        for (std::size_t i = 0; i < basis_.size(); ++i) val[basis_[i]] = tab_[i][cols_];
        out.x.assign(n_, T(0));
        for (std::size_t j = 0; j < n_; ++j) {
            out.x[j] = val[col_pos(j)];
            if (j < n_free_) out.x[j] -= val[col_neg(j)];
        }
        return out;
    }

private:
    struct Row {
        std::vector<T> a;
        T b;
        bool eq;
    };

    // column layout: nonneg parts of all vars, negative parts of free vars, slacks, artificials
    std::size_t col_pos(std::size_t j) const { return j; }
    std::size_t col_neg(std::size_t j) const { return n_ + j; }

    void build() {
        const std::size_t m = rows_.size();
        std::size_t n_slack = 0;
        for (const Row& r : rows_)
            if (!r.eq) ++n_slack;
        const std::size_t slack_begin = n_ + n_free_;
        art_begin_ = slack_begin + n_slack;
        cols_ = art_begin_ + m;
        tab_.assign(m, std::vector<T>(cols_ + 1, T(0)));
        basis_.assign(m, 0);
        std::size_t s = slack_begin;
        for (std::size_t i = 0; i < m; ++i) {
            const Row& r = rows_[i];
            auto& t = tab_[i];
            for (std::size_t j = 0; j < n_; ++j) {
                t[col_pos(j)] = r.a[j];
                if (j < n_free_) t[col_neg(j)] = -r.a[j];
            }
            if (!r.eq) t[s++] = T(1);
            t[cols_] = r.b;
            if (r.b < T(0))
                for (auto& v : t) v = -v;
            t[art_begin_ + i] = T(1);
            basis_[i] = art_begin_ + i;
        }
    }

    void set_objective(const std::vector<T>& c) {
        cost_ = c;
        obj_.assign(cols_ + 1, T(0));
        for (std::size_t j = 0; j <= cols_; ++j) {
            T v = j < cols_ ? T(-c[j]) : T(0);
            for (std::size_t i = 0; i < basis_.size(); ++i) v += c[basis_[i]] * tab_[i][j];
            obj_[j] = v;
        }
    }

    T obj_value() const { return obj_[cols_]; }

    void pivot(std::size_t r, std::size_t e) {
        auto& pr = tab_[r];
        const T p = pr[e];
        for (auto& v : pr) v /= p;
        for (std::size_t i = 0; i < tab_.size(); ++i) {
            if (i == r) continue;
            const T f = tab_[i][e];
            if (f == T(0)) continue;
            for (std::size_t j = 0; j <= cols_; ++j) tab_[i][j] -= f * pr[j];
        }
        const T f = obj_[e];
        if (f != T(0))
            for (std::size_t j = 0; j <= cols_; ++j) obj_[j] -= f * pr[j];
        basis_[r] = e;
    }

    // false if unbounded
    bool run(std::size_t allowed_cols) {
        const int dantzig_iters = static_cast<int>(4 * (tab_.size() + cols_));
        for (int iter = 0; iter < 100000; ++iter) {
            std::size_t e = allowed_cols;
            const bool bland = iter >= dantzig_iters;
            for (std::size_t j = 0; j < allowed_cols; ++j)
                if (obj_[j] < -eps_ && (e == allowed_cols || obj_[j] < obj_[e])) {
                    e = j;
                    if (bland) break;
                }
            if (e == allowed_cols) return true;
            std::size_t r = tab_.size();
            T best{};
            for (std::size_t i = 0; i < tab_.size(); ++i) {
                if (!(tab_[i][e] > eps_)) continue;
                T ratio = tab_[i][cols_] / tab_[i][e];
                if (r == tab_.size() || ratio < best || (ratio == best && basis_[i] < basis_[r])) {
                    r = i;
                    best = ratio;
                }
            }
            if (r == tab_.size()) return false;
            pivot(r, e);
        }
        return true;
    }

    void drive_out_artificials() {
        for (std::size_t i = 0; i < basis_.size(); ++i) {
            if (basis_[i] < art_begin_) continue;
            for (std::size_t j = 0; j < art_begin_; ++j) {
                T v = tab_[i][j];
                if (v > eps_ || v < -eps_) {
                    pivot(i, j);
                    break;
                }
            }
        }
    }

    std::size_t n_, n_free_;
    T eps_;
    std::vector<Row> rows_;
    std::size_t art_begin_ = 0, cols_ = 0;
    std::vector<std::vector<T>> tab_;
    std::vector<T> obj_, cost_;
    std::vector<std::size_t> basis_;
};

} // namespace hem::detail
