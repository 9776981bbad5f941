#pragma once

// Exact linear algebra for finite abelian p-groups.
//
// Subgroups live inside (Z/p^E)^n and are kept in Howell form, which is
// canonical and makes membership decidable by back-substitution. Presentations
// are diagonalized once with an integer Smith normal form over arbitrary
// precision integers.

#include "walker/error.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace walker {

using BigInt = boost::multiprecision::cpp_int;
using Coords = std::vector<std::int64_t>;
__extension__ using Wide = __int128;

/// The ring Z/p^E with p^E < 2^62.
class PowerRing {
  public:
    PowerRing(std::uint64_t p, unsigned exponent) : p_(p), exponent_(exponent) {
        if (p < 2)
            throw Error(Errc::invalid_presentation, "p must be at least 2");
        Wide m = 1;
        powers_.push_back(1);
        for (unsigned k = 0; k < exponent; ++k) {
            m *= p;
            if (m >= (static_cast<Wide>(1) << 62))
                throw Error(Errc::resource_limit,
                            "p^" + std::to_string(exponent) +
                                " does not fit in 62 bits");
            powers_.push_back(static_cast<std::int64_t>(m));
        }
        modulus_ = static_cast<std::int64_t>(m);
    }

    [[nodiscard]] std::int64_t p() const noexcept {
        return static_cast<std::int64_t>(p_);
    }
    [[nodiscard]] unsigned exponent() const noexcept { return exponent_; }
    [[nodiscard]] std::int64_t modulus() const noexcept { return modulus_; }
    /// p^k for k <= E.
    [[nodiscard]] std::int64_t power(unsigned k) const { return powers_.at(k); }

    [[nodiscard]] std::int64_t reduce(Wide x) const {
        auto r = static_cast<std::int64_t>(x % modulus_);
        return r < 0 ? r + modulus_ : r;
    }
    [[nodiscard]] std::int64_t reduce(const BigInt& x) const {
        BigInt r = x % modulus_;
        if (r < 0)
            r += modulus_;
        return static_cast<std::int64_t>(r);
    }
    [[nodiscard]] std::int64_t add(std::int64_t a, std::int64_t b) const {
        return reduce(static_cast<Wide>(a) + b);
    }
    [[nodiscard]] std::int64_t sub(std::int64_t a, std::int64_t b) const {
        return reduce(static_cast<Wide>(a) - b);
    }
    [[nodiscard]] std::int64_t mul(std::int64_t a, std::int64_t b) const {
        return reduce(static_cast<Wide>(a) * b);
    }

    /// p-adic valuation of a residue; E for zero.
    [[nodiscard]] unsigned valuation(std::int64_t x) const {
        x = reduce(static_cast<Wide>(x));
        if (x == 0)
            return exponent_;
        unsigned v = 0;
        while (x % p() == 0) {
            x /= p();
            ++v;
        }
        return v;
    }

    /// Inverse of a unit modulo p^E.
    [[nodiscard]] std::int64_t inverse(std::int64_t u) const {
        Wide a = reduce(static_cast<Wide>(u)), m = modulus_;
        Wide x0 = 1, x1 = 0;
        while (m != 0) {
            Wide q = a / m;
            std::swap(a, m);
            m -= q * a;
            std::swap(x0, x1);
            x1 -= q * x0;
        }
        return reduce(x0);
    }

  private:
    std::uint64_t p_;
    unsigned exponent_;
    std::int64_t modulus_ = 1;
    std::vector<std::int64_t> powers_;
};

/// Canonical echelon basis of a submodule of (Z/p^E)^n.
///
/// Pivots are normalized to p^v, entries above a pivot lie in [0, p^v), and
/// the Howell property holds: every element of the span whose first k
/// entries vanish is a combination of the rows pivoting after column k.
class HowellForm {
  public:
    struct Pivot {
        std::size_t column;
        unsigned valuation;
    };

    HowellForm(PowerRing ring, std::size_t columns)
        : ring_(std::move(ring)), columns_(columns) {}

    HowellForm(PowerRing ring, std::size_t columns, std::vector<Coords> rows)
        : ring_(std::move(ring)), columns_(columns) {
        build(std::move(rows));
    }

    [[nodiscard]] const PowerRing& ring() const noexcept { return ring_; }
    [[nodiscard]] std::size_t columns() const noexcept { return columns_; }
    [[nodiscard]] const std::vector<Coords>& rows() const noexcept {
        return rows_;
    }
    [[nodiscard]] const std::vector<Pivot>& pivots() const noexcept {
        return pivots_;
    }

    /// log_p of the order of the span.
    [[nodiscard]] unsigned log_order() const {
        unsigned s = 0;
        for (const auto& pv : pivots_)
            s += ring_.exponent() - pv.valuation;
        return s;
    }

    /// Reduces x against the rows whose pivots lie in [from, to). The result
    /// is the lexicographically least element of x + span restricted to those
    /// rows, once the columns before `from` are fixed.
    void reduce_range(Coords& x, std::size_t from, std::size_t to) const {
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            const auto& pv = pivots_[i];
            if (pv.column < from || pv.column >= to)
                continue;
            const std::int64_t entry = x[pv.column];
            if (entry == 0)
                continue;
            const std::int64_t q = entry / ring_.power(pv.valuation);
            if (q == 0)
                continue;
            const auto& row = rows_[i];
            for (std::size_t j = pv.column; j < columns_; ++j)
                if (row[j] != 0)
                    x[j] = ring_.sub(x[j], ring_.mul(q, row[j]));
        }
    }

    [[nodiscard]] Coords reduce(Coords x) const {
        normalize(x);
        reduce_range(x, 0, columns_);
        return x;
    }

    [[nodiscard]] bool contains(Coords x) const {
        x = reduce(std::move(x));
        return std::all_of(x.begin(), x.end(),
                           [](std::int64_t v) { return v == 0; });
    }

    [[nodiscard]] bool contains_all(const HowellForm& other) const {
        return std::all_of(other.rows_.begin(), other.rows_.end(),
                           [&](const Coords& r) { return contains(r); });
    }

    friend bool operator==(const HowellForm& a, const HowellForm& b) {
        return a.ring_.modulus() == b.ring_.modulus() &&
               a.columns_ == b.columns_ && a.rows_ == b.rows_;
    }

  private:
    PowerRing ring_;
    std::size_t columns_;
    std::vector<Coords> rows_;
    std::vector<Pivot> pivots_;

    void normalize(Coords& x) const {
        if (x.size() != columns_)
            throw Error(Errc::ambient_mismatch,
                        "vector of length " + std::to_string(x.size()) +
                            " in a space of dimension " +
                            std::to_string(columns_));
        for (auto& v : x)
            v = ring_.reduce(static_cast<Wide>(v));
    }

    static bool is_zero(const Coords& x) {
        return std::all_of(x.begin(), x.end(),
                           [](std::int64_t v) { return v == 0; });
    }

    void build(std::vector<Coords> work) {
        for (auto& r : work)
            normalize(r);
        std::erase_if(work, is_zero);
        const unsigned E = ring_.exponent();
        for (std::size_t col = 0; col < columns_ && !work.empty(); ++col) {
            std::size_t best = work.size();
            unsigned best_v = E;
            for (std::size_t i = 0; i < work.size(); ++i) {
                if (work[i][col] == 0)
                    continue;
                const unsigned v = ring_.valuation(work[i][col]);
                if (v < best_v) {
                    best_v = v;
                    best = i;
                }
            }
            if (best == work.size())
                continue;
            Coords pivot = std::move(work[best]);
            work.erase(work.begin() + static_cast<std::ptrdiff_t>(best));
            const std::int64_t unit = pivot[col] / ring_.power(best_v);
            if (unit != 1) {
                const std::int64_t inv = ring_.inverse(unit);
                for (std::size_t j = col; j < columns_; ++j)
                    pivot[j] = ring_.mul(pivot[j], inv);
            }
            for (auto& w : work) {
                if (w[col] == 0)
                    continue;
                const std::int64_t q = w[col] / ring_.power(best_v);
                for (std::size_t j = col; j < columns_; ++j)
                    if (pivot[j] != 0)
                        w[j] = ring_.sub(w[j], ring_.mul(q, pivot[j]));
            }
            if (best_v > 0) {
                Coords extra(columns_, 0);
                const std::int64_t s = ring_.power(E - best_v);
                for (std::size_t j = col + 1; j < columns_; ++j)
                    extra[j] = ring_.mul(pivot[j], s);
                if (!is_zero(extra))
                    work.push_back(std::move(extra));
            }
            std::erase_if(work, is_zero);
            rows_.push_back(std::move(pivot));
            pivots_.push_back(Pivot{col, best_v});
        }
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            const auto [col, v] = pivots_[i];
            const std::int64_t pv = ring_.power(v);
            for (std::size_t k = 0; k < i; ++k) {
                const std::int64_t q = rows_[k][col] / pv;
                if (q == 0)
                    continue;
                for (std::size_t j = col; j < columns_; ++j)
                    if (rows_[i][j] != 0)
                        rows_[k][j] = ring_.sub(rows_[k][j],
                                                ring_.mul(q, rows_[i][j]));
            }
        }
    }
};

using BigMatrix = std::vector<std::vector<BigInt>>;

/// U * A * V = D with U, V unimodular. Only V and its inverse are kept: the
/// cokernel of the row space of A is identified with the cokernel of D via
/// x -> x V.
struct SmithForm {
    std::vector<BigInt> diagonal; // length min(rows, cols), entries >= 0
    BigMatrix transform;          // V, cols x cols
    BigMatrix inverse_transform;  // V^{-1}
};

inline SmithForm smith_normal_form(BigMatrix a, std::size_t cols) {
    const std::size_t rows = a.size();
    SmithForm out;
    out.transform.assign(cols, std::vector<BigInt>(cols, 0));
    out.inverse_transform.assign(cols, std::vector<BigInt>(cols, 0));
    for (std::size_t i = 0; i < cols; ++i) {
        out.transform[i][i] = 1;
        out.inverse_transform[i][i] = 1;
    }
    auto& V = out.transform;
    auto& W = out.inverse_transform;

    // col_j -= q * col_t on A and V; row_t += q * row_j on V^{-1}
    auto col_axpy = [&](std::size_t j, std::size_t t, const BigInt& q) {
        for (std::size_t i = t; i < rows; ++i)
            if (a[i][t] != 0)
                a[i][j] -= q * a[i][t];
        for (std::size_t i = 0; i < cols; ++i)
            if (V[i][t] != 0)
                V[i][j] -= q * V[i][t];
        for (std::size_t k = 0; k < cols; ++k)
            if (W[j][k] != 0)
                W[t][k] += q * W[j][k];
    };
    auto swap_cols = [&](std::size_t i, std::size_t j) {
        if (i == j)
            return;
        for (auto& r : a)
            std::swap(r[i], r[j]);
        for (auto& r : V)
            std::swap(r[i], r[j]);
        std::swap(W[i], W[j]);
    };

    const std::size_t n = std::min(rows, cols);
    for (std::size_t t = 0; t < n; ++t) {
        for (;;) {
            std::size_t bi = rows, bj = cols;
            BigInt best;
            for (std::size_t i = t; i < rows; ++i)
                for (std::size_t j = t; j < cols; ++j) {
                    if (a[i][j] == 0)
                        continue;
                    BigInt m = abs(a[i][j]);
                    if (bi == rows || m < best) {
                        best = m;
                        bi = i;
                        bj = j;
                        if (best == 1)
                            goto found;
                    }
                }
        found:
            if (bi == rows) {
                out.diagonal.resize(n, 0);
                return out;
            }
            std::swap(a[t], a[bi]);
            swap_cols(t, bj);
            bool clean = true;
            const BigInt piv = a[t][t];
            for (std::size_t i = t + 1; i < rows; ++i) {
                if (a[i][t] == 0)
                    continue;
                const BigInt q = a[i][t] / piv;
                if (q != 0)
                    for (std::size_t j = t; j < cols; ++j)
                        if (a[t][j] != 0)
                            a[i][j] -= q * a[t][j];
                if (a[i][t] != 0)
                    clean = false;
            }
            for (std::size_t j = t + 1; j < cols; ++j) {
                if (a[t][j] == 0)
                    continue;
                const BigInt q = a[t][j] / piv;
                if (q != 0)
                    col_axpy(j, t, q);
                if (a[t][j] != 0)
                    clean = false;
            }
            if (!clean)
                continue;
            bool divides = true;
            for (std::size_t i = t + 1; i < rows && divides; ++i)
                for (std::size_t j = t + 1; j < cols; ++j)
                    if (a[i][j] % piv != 0) {
                        for (std::size_t k = t; k < cols; ++k)
                            a[t][k] += a[i][k];
                        divides = false;
                        break;
                    }
            if (divides)
                break;
        }
        out.diagonal.push_back(abs(a[t][t]));
    }
    return out;
}

/// log_p |d| for a power of p; throws if d is not a power of p.
inline unsigned p_power_exponent(const BigInt& d, std::uint64_t p) {
    BigInt x = d;
    unsigned e = 0;
    while (x > 1) {
        if (x % p != 0)
            throw Error(Errc::invalid_presentation,
                        "relation matrix has a non-p-power invariant factor");
        x /= p;
        ++e;
    }
    if (x != 1)
        throw Error(Errc::invalid_presentation,
                    "relation matrix is not of full rank");
    return e;
}

} // namespace walker
