#ifndef EQUGEN_QUASIORDER_HPP
#define EQUGEN_QUASIORDER_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "equgen/partition.hpp"

namespace equgen {

/// A reflexive, transitive relation on {0,...,n-1}, stored as row
/// bitmasks (rows_[i] bit j set iff (i,j) is in the relation).  The
/// stored matrix is always reflexively and transitively closed;
/// constructors close their input once and every operation re-closes
/// where needed.  Immutable after construction.
class Quasiorder {
public:
    static constexpr int max_n = 32;

    /// Identity quasiorder (the diagonal) of size n.
    explicit Quasiorder(int n);

    /// From an arbitrary relation given as row bitmasks; closes it.
    static Quasiorder from_rows(int n, const std::array<std::uint32_t, max_n>& rows);

    int size() const noexcept { return n_; }
    bool contains(int x, int y) const noexcept {
        return (rows_[static_cast<std::size_t>(x)] >> y) & 1u;
    }
    std::uint32_t row(int i) const noexcept { return rows_[static_cast<std::size_t>(i)]; }

    /// Verifies reflexivity and transitivity of the stored matrix.
    bool is_closed() const noexcept;

    bool operator==(const Quasiorder& o) const noexcept {
        return n_ == o.n_ && rows_ == o.rows_;
    }
    bool operator!=(const Quasiorder& o) const noexcept { return !(*this == o); }

    std::size_t hash() const noexcept;

private:
    std::array<std::uint32_t, max_n> rows_{};
    std::uint8_t n_ = 1;

    friend Quasiorder meet(const Quasiorder&, const Quasiorder&);
    friend Quasiorder join(const Quasiorder&, const Quasiorder&);
    friend Quasiorder inverse(const Quasiorder&);
};

struct QuasiorderHash {
    std::size_t operator()(const Quasiorder& q) const noexcept { return q.hash(); }
};

/// Smallest quasiorder containing the pair (x,y).
Quasiorder qu(int n, int x, int y);

/// Meet = pairwise conjunction of the matrices (already closed).
Quasiorder meet(const Quasiorder& p, const Quasiorder& q);

/// Join = reflexive-transitive closure of the pairwise disjunction.
Quasiorder join(const Quasiorder& p, const Quasiorder& q);

/// Matrix transpose; an automorphism of the quasiorder lattice.
Quasiorder inverse(const Quasiorder& q);

/// The symmetric-closure embedding of an equivalence.
Quasiorder equ_to_quo(const Partition& p);

/// True iff the matrix is symmetric.
bool quo_is_equivalence(const Quasiorder& q);

/// Largest equivalence contained in q (its symmetric part), as a Partition.
/// The symmetric part of a closed relation is reflexive, symmetric and
/// transitive, so this is always well defined.
Partition quo_symmetric_part(const Quasiorder& q);

constexpr int quasiorder_enumeration_limit = 5;

/// Calls f(q) for every quasiorder on {0,...,n-1} exactly once, by
/// filtering all off-diagonal relations for transitivity.
void enumerate_quasiorders(int n, const std::function<void(const Quasiorder&)>& f);

/// Text format: header "n=<N>", then one line "x>y" per pair of the
/// transitive reduction, then a line "closed".
Quasiorder parse_quasiorder(const std::string& text);
std::string format_quasiorder(const Quasiorder& q);

/// The pairs of the transitive reduction of q minus the diagonal
/// (a minimal pair set whose closure is q), in row-major order.
std::vector<std::pair<int, int>> transitive_reduction_pairs(const Quasiorder& q);

} // namespace equgen

#endif
