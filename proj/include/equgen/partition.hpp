#ifndef EQUGEN_PARTITION_HPP
#define EQUGEN_PARTITION_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace equgen {

/// Thrown when a textual element (partition, quasiorder, script, ...)
/// cannot be parsed.  `pos` is a 0-based offset into the input text.
class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& what, std::size_t pos)
        : std::runtime_error(what + " (at position " + std::to_string(pos) + ")"),
          pos_(pos) {}
    std::size_t position() const noexcept { return pos_; }

private:
    std::size_t pos_;
};

/// An equivalence relation on {0,...,n-1}, stored as the canonical
/// restricted growth string: rgs[i] is the block label of element i,
/// rgs[0] == 0 and rgs[i] <= 1 + max(rgs[0..i-1]).  Two partitions are
/// equal exactly when their (n, rgs) encodings are identical, so the
/// encoding doubles as the deduplication key everywhere else.
///
/// Values are immutable after construction and safe to share across
/// threads; all operations on them are pure.
class Partition {
public:
    static constexpr int max_n = 64;

    /// Bottom partition (all singletons) of size n.
    explicit Partition(int n);

    /// From arbitrary block labels; canonicalizes.  labels.size() == n.
    static Partition from_labels(const std::vector<int>& labels);

    int size() const noexcept { return n_; }
    int label(int i) const noexcept { return rgs_[static_cast<std::size_t>(i)]; }

    /// Number of blocks: 1 + max label.
    int block_count() const noexcept { return blocks_; }

    bool same_block(int x, int y) const noexcept {
        return rgs_[static_cast<std::size_t>(x)] == rgs_[static_cast<std::size_t>(y)];
    }

    /// Blocks as element lists, ordered by minimum element.
    std::vector<std::vector<int>> blocks() const;

    bool operator==(const Partition& o) const noexcept {
        return n_ == o.n_ && rgs_ == o.rgs_;
    }
    bool operator!=(const Partition& o) const noexcept { return !(*this == o); }

    /// Lexicographic order on (n, rgs); used for sorted containers only.
    bool operator<(const Partition& o) const noexcept {
        if (n_ != o.n_) return n_ < o.n_;
        return rgs_ < o.rgs_;
    }

    std::size_t hash() const noexcept;

private:
    Partition() = default;
    // Trailing entries beyond n_ stay zero so whole-array comparison works.
    std::array<std::uint8_t, max_n> rgs_{};
    std::uint8_t n_ = 1;
    std::uint8_t blocks_ = 1;

    friend Partition meet(const Partition&, const Partition&);
    friend Partition join(const Partition&, const Partition&);
    friend Partition embed(const Partition&, int);
    friend class PartitionEnumerator;
};

struct PartitionHash {
    std::size_t operator()(const Partition& p) const noexcept { return p.hash(); }
};

Partition bottom(int n);
Partition top(int n);

/// Smallest equivalence collapsing exactly x and y (an atom).
Partition atom(int n, int x, int y);

/// Coarsest common refinement: (x,y) collapsed iff collapsed in both.
Partition meet(const Partition& p, const Partition& q);

/// Finest common coarsening, by disjoint-set merging of blocks.
Partition join(const Partition& p, const Partition& q);

/// Same blocks plus singletons {p.n}, ..., {n2-1}.
Partition embed(const Partition& p, int n2);

/// True iff join(p,q) is top and meet(p,q) is bottom.
bool is_complementary(const Partition& p, const Partition& q);

/// p <= q in the refinement order (every block of p inside a block of q).
bool finer_or_equal(const Partition& p, const Partition& q);

/// Accepts either compact notation eq(12;3;45;6) with 1-based single-digit
/// elements (only for n <= 9) or general notation 0,1|2|3,4|5 with 0-based
/// decimal elements.  Blocks must partition {0,...,n-1} exactly.
Partition parse_partition(const std::string& text, int n);

/// Canonical general notation: blocks sorted by minimum element,
/// elements ascending, e.g. "0,1|2|3,4|5".
std::string format_partition(const Partition& p);

/// Compact notation, 1-based; only valid for p.size() <= 9.
std::string format_partition_eq(const Partition& p);

constexpr int enumeration_limit = 13;

/// Calls f(p) for every partition of {0,...,n-1}, in lexicographic rgs
/// order.  Throws std::invalid_argument beyond enumeration_limit.
void enumerate_partitions(int n, const std::function<void(const Partition&)>& f);

/// Number of partitions of an n-set, computed by the same enumeration
/// that backs enumerate_partitions (counting only).  Cached per n.
std::uint64_t bell(int n);

} // namespace equgen

#endif
