#ifndef EQUGEN_CLOSURE_HPP
#define EQUGEN_CLOSURE_HPP

#include <chrono>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "equgen/partition.hpp"
#include "equgen/quasiorder.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace equgen {

enum class LatticeOp : std::uint8_t { generator, meet, join };

/// One parent pair + operator per element; full derivation expressions
/// are reconstructed on demand by walking this DAG.
struct Provenance {
    LatticeOp op = LatticeOp::generator;
    std::uint32_t a = 0;
    std::uint32_t b = 0;
};

struct ClosureOptions {
    std::size_t max_elements = 8'000'000;
    double time_limit_s = 600.0; // 0 disables the wall-clock cap
    int threads = 0;             // 0 = runtime default
    bool record_parents = true;
    std::size_t pairs_per_block = 1u << 15;
};

struct ClosureStats {
    std::size_t rounds = 0;
    double elapsed_s = 0.0;
    std::size_t peak_elements = 0;
};

/// Exceeding an element or wall-clock budget is an explicit error so a
/// truncated run can never masquerade as a "does not generate" verdict.
class closure_budget_error : public std::runtime_error {
public:
    closure_budget_error(const std::string& what, ClosureStats stats)
        : std::runtime_error(what), stats(stats) {}
    ClosureStats stats;
};

template <class Elem>
struct ClosureTarget {
    enum class Kind { fixpoint, reach_count, contains_all };
    Kind kind = Kind::fixpoint;
    std::uint64_t count = 0;       // reach_count
    std::vector<Elem> required;    // contains_all

    static ClosureTarget fixpoint() { return {}; }
    static ClosureTarget reach_count(std::uint64_t c) {
        ClosureTarget t;
        t.kind = Kind::reach_count;
        t.count = c;
        return t;
    }
    static ClosureTarget contains_all(std::vector<Elem> req) {
        ClosureTarget t;
        t.kind = Kind::contains_all;
        t.required = std::move(req);
        return t;
    }
};

template <class Elem>
struct ClosureOutcome {
    std::vector<Elem> elements;        // insertion order, generators first
    std::vector<Provenance> parents;   // parallel to elements when recorded
    bool target_met = false;
    std::vector<std::int64_t> required_index; // contains_all: where each required element landed (-1 = absent)
    ClosureStats stats;
};

// ---------------------------------------------------------------------------
// Lattice domains.  A domain bundles the element type with its meet/join
// and hashing so the closure kernels can run on packed machine words for
// small base sets and on full value types elsewhere.

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

} // namespace detail

/// Partitions of an n-set with n <= 16, packed 4 bits per element into a
/// single 64-bit word (canonical restricted growth labels).  This is the
/// hot representation: every full-closure verification runs on it.
struct PackedEquDomain {
    using Elem = std::uint64_t;
    static constexpr int max_n = 16;
    int n;

    explicit PackedEquDomain(int n) : n(n) {
        if (n < 1 || n > max_n)
            throw std::invalid_argument("packed partition domain requires 1 <= n <= 16");
    }

    Elem pack(const Partition& p) const {
        if (p.size() != n) throw std::invalid_argument("pack: size mismatch");
        Elem e = 0;
        for (int i = 0; i < n; ++i)
            e |= static_cast<Elem>(p.label(i)) << (4 * i);
        return e;
    }

    Partition unpack(Elem e) const {
        std::vector<int> labels(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            labels[static_cast<std::size_t>(i)] = static_cast<int>((e >> (4 * i)) & 15u);
        return Partition::from_labels(labels);
    }

    Elem meet(Elem a, Elem b) const noexcept {
        // New label of i = canonical rank of the label pair (a_i, b_i).
        std::uint8_t lab[256];
        std::uint8_t seen[256] = {};
        Elem out = 0;
        std::uint8_t next = 0;
        for (int i = 0; i < n; ++i) {
            const unsigned c = ((a >> (4 * i)) & 15u) | (((b >> (4 * i)) & 15u) << 4);
            if (!seen[c]) {
                seen[c] = 1;
                lab[c] = next++;
            }
            out |= static_cast<Elem>(lab[c]) << (4 * i);
        }
        return out;
    }

    Elem join(Elem a, Elem b) const noexcept {
        std::int8_t parent[max_n];
        std::int8_t first_a[max_n];
        std::int8_t first_b[max_n];
        for (int i = 0; i < n; ++i) {
            parent[i] = static_cast<std::int8_t>(i);
            first_a[i] = -1;
            first_b[i] = -1;
        }
        const auto find = [&parent](int x) {
            while (parent[x] != x) {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            return x;
        };
        for (int i = 0; i < n; ++i) {
            const int la = static_cast<int>((a >> (4 * i)) & 15u);
            const int lb = static_cast<int>((b >> (4 * i)) & 15u);
            if (first_a[la] < 0)
                first_a[la] = static_cast<std::int8_t>(i);
            else
                parent[find(i)] = static_cast<std::int8_t>(find(first_a[la]));
            if (first_b[lb] < 0)
                first_b[lb] = static_cast<std::int8_t>(i);
            else
                parent[find(i)] = static_cast<std::int8_t>(find(first_b[lb]));
        }
        std::uint8_t remap[max_n];
        std::uint8_t done[max_n] = {};
        std::uint8_t next = 0;
        Elem out = 0;
        for (int i = 0; i < n; ++i) {
            const int r = find(i);
            if (!done[r]) {
                done[r] = 1;
                remap[r] = next++;
            }
            out |= static_cast<Elem>(remap[r]) << (4 * i);
        }
        return out;
    }

    static std::size_t hash(Elem e) noexcept {
        return static_cast<std::size_t>(detail::splitmix64(e));
    }
};

/// Partitions as full values; any n up to Partition::max_n.
struct EquDomain {
    using Elem = Partition;
    int n;
    explicit EquDomain(int n) : n(n) {}
    Elem meet(const Elem& a, const Elem& b) const { return equgen::meet(a, b); }
    Elem join(const Elem& a, const Elem& b) const { return equgen::join(a, b); }
    static std::size_t hash(const Elem& e) noexcept { return e.hash(); }
};

/// Quasiorders as full values.
struct QuoDomain {
    using Elem = Quasiorder;
    int n;
    explicit QuoDomain(int n) : n(n) {}
    Elem meet(const Elem& a, const Elem& b) const { return equgen::meet(a, b); }
    Elem join(const Elem& a, const Elem& b) const { return equgen::join(a, b); }
    static std::size_t hash(const Elem& e) noexcept { return e.hash(); }
};

// ---------------------------------------------------------------------------
// Engine internals shared by the reference and the parallel kernel.

namespace detail {

/// Open-addressing index table over the element vector (linear probing,
/// power-of-two capacity).  Stores indices only; keys live in `elements`.
template <class Domain>
class IndexTable {
public:
    using Elem = typename Domain::Elem;

    explicit IndexTable(std::size_t expected = 64) { rehash(capacity_for(expected)); }

    // Returns the index of e, inserting it at `next_index` if absent.
    // `inserted` reports which happened.
    std::uint32_t find_or_insert(const std::vector<Elem>& elements, const Elem& e,
                                 std::uint32_t next_index, bool& inserted) {
        if ((count_ + 1) * 10 >= slots_.size() * 7) grow(elements);
        std::size_t i = Domain::hash(e) & mask_;
        for (;;) {
            const std::uint32_t s = slots_[i];
            if (s == empty_slot) {
                slots_[i] = next_index;
                ++count_;
                inserted = true;
                return next_index;
            }
            if (elements[s] == e) {
                inserted = false;
                return s;
            }
            i = (i + 1) & mask_;
        }
    }

    bool contains(const std::vector<Elem>& elements, const Elem& e) const {
        std::size_t i = Domain::hash(e) & mask_;
        for (;;) {
            const std::uint32_t s = slots_[i];
            if (s == empty_slot) return false;
            if (elements[s] == e) return true;
            i = (i + 1) & mask_;
        }
    }

private:
    static constexpr std::uint32_t empty_slot = 0xffffffffu;

    static std::size_t capacity_for(std::size_t expected) {
        std::size_t cap = 64;
        while (cap * 7 < expected * 10) cap <<= 1;
        return cap;
    }

    void rehash(std::size_t cap) {
        slots_.assign(cap, empty_slot);
        mask_ = cap - 1;
        count_ = 0;
    }

    void grow(const std::vector<Elem>& elements) {
        std::vector<std::uint32_t> old = std::move(slots_);
        rehash(old.size() * 2);
        for (std::uint32_t s : old) {
            if (s == empty_slot) continue;
            std::size_t i = Domain::hash(elements[s]) & mask_;
            while (slots_[i] != empty_slot) i = (i + 1) & mask_;
            slots_[i] = s;
            ++count_;
        }
    }

    std::vector<std::uint32_t> slots_;
    std::size_t mask_ = 0;
    std::size_t count_ = 0;
};

/// Tracks how many required elements are still missing (contains_all).
template <class Domain>
struct RequiredTracker {
    using Elem = typename Domain::Elem;
    std::vector<Elem> required;
    std::vector<std::int64_t> found_at;
    std::size_t missing = 0;

    void init(const std::vector<Elem>& req) {
        required = req;
        found_at.assign(req.size(), -1);
        missing = req.size();
    }

    void note(const Elem& e, std::uint32_t index) {
        if (missing == 0) return;
        for (std::size_t k = 0; k < required.size(); ++k) {
            if (found_at[k] < 0 && required[k] == e) {
                found_at[k] = index;
                --missing;
            }
        }
    }
};

} // namespace detail

// ---------------------------------------------------------------------------
// Serial reference implementation.  Deliberately simple; the parallel
// kernel below must reproduce its element order and counts exactly.

template <class Domain>
ClosureOutcome<typename Domain::Elem> close_sublattice_reference(
    const Domain& dom, std::span<const typename Domain::Elem> generators,
    const ClosureTarget<typename Domain::Elem>& target, const ClosureOptions& opt = {}) {
    using Elem = typename Domain::Elem;
    if (generators.empty()) throw std::invalid_argument("closure: empty generator list");
    const auto t0 = std::chrono::steady_clock::now();
    const auto elapsed = [&t0] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    ClosureOutcome<Elem> out;
    detail::IndexTable<Domain> table;
    detail::RequiredTracker<Domain> req;
    if (target.kind == ClosureTarget<Elem>::Kind::contains_all) req.init(target.required);

    const auto target_met = [&]() -> bool {
        switch (target.kind) {
            case ClosureTarget<Elem>::Kind::fixpoint: return false;
            case ClosureTarget<Elem>::Kind::reach_count: return out.elements.size() >= target.count;
            case ClosureTarget<Elem>::Kind::contains_all: return req.missing == 0;
        }
        return false;
    };

    const auto insert = [&](const Elem& e, LatticeOp op, std::uint32_t pa, std::uint32_t pb) {
        bool inserted = false;
        const std::uint32_t idx = table.find_or_insert(
            out.elements, e, static_cast<std::uint32_t>(out.elements.size()), inserted);
        if (!inserted) return;
        out.elements.push_back(e);
        if (opt.record_parents) out.parents.push_back({op, pa, pb});
        req.note(e, idx);
        if (out.elements.size() > opt.max_elements) {
            out.stats.rounds = 0;
            out.stats.elapsed_s = elapsed();
            out.stats.peak_elements = out.elements.size();
            throw closure_budget_error("closure element budget exceeded", out.stats);
        }
    };

    for (const Elem& g : generators) {
        if (target_met()) break;
        insert(g, LatticeOp::generator, 0, 0);
    }

    std::size_t lo = 0;
    while (!target_met() && lo < out.elements.size()) {
        const std::size_t hi = out.elements.size();
        ++out.stats.rounds;
        for (std::size_t i = lo; i < hi && !target_met(); ++i) {
            for (std::size_t j = 0; j < i && !target_met(); ++j) {
                insert(dom.meet(out.elements[i], out.elements[j]), LatticeOp::meet,
                       static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
                if (target_met()) break;
                insert(dom.join(out.elements[i], out.elements[j]), LatticeOp::join,
                       static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
            }
            if (opt.time_limit_s > 0 && elapsed() > opt.time_limit_s) {
                out.stats.elapsed_s = elapsed();
                out.stats.peak_elements = out.elements.size();
                throw closure_budget_error("closure wall-clock budget exceeded", out.stats);
            }
        }
        lo = hi;
    }

    out.target_met = target_met();
    out.required_index = req.found_at;
    out.stats.elapsed_s = elapsed();
    out.stats.peak_elements = out.elements.size();
    return out;
}

// ---------------------------------------------------------------------------
// Blocked OpenMP kernel.  Each round is split into blocks of candidate
// pairs; blocks are evaluated in parallel, then merged sequentially in
// pair order, so the element sequence (and any early exit) is identical
// for every worker count — including the serial reference above.

template <class Domain>
ClosureOutcome<typename Domain::Elem> close_sublattice(
    const Domain& dom, std::span<const typename Domain::Elem> generators,
    const ClosureTarget<typename Domain::Elem>& target, const ClosureOptions& opt = {}) {
    using Elem = typename Domain::Elem;
    if (generators.empty()) throw std::invalid_argument("closure: empty generator list");
    const auto t0 = std::chrono::steady_clock::now();
    const auto elapsed = [&t0] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    ClosureOutcome<Elem> out;
    detail::IndexTable<Domain> table(1024);
    detail::RequiredTracker<Domain> req;
    if (target.kind == ClosureTarget<Elem>::Kind::contains_all) req.init(target.required);

    bool met = false;
    const auto refresh_met = [&] {
        switch (target.kind) {
            case ClosureTarget<Elem>::Kind::fixpoint: met = false; break;
            case ClosureTarget<Elem>::Kind::reach_count: met = out.elements.size() >= target.count; break;
            case ClosureTarget<Elem>::Kind::contains_all: met = req.missing == 0; break;
        }
    };

    const auto insert = [&](const Elem& e, LatticeOp op, std::uint32_t pa, std::uint32_t pb) {
        bool inserted = false;
        const std::uint32_t idx = table.find_or_insert(
            out.elements, e, static_cast<std::uint32_t>(out.elements.size()), inserted);
        if (!inserted) return;
        out.elements.push_back(e);
        if (opt.record_parents) out.parents.push_back({op, pa, pb});
        req.note(e, idx);
        if (out.elements.size() > opt.max_elements) {
            out.stats.elapsed_s = elapsed();
            out.stats.peak_elements = out.elements.size();
            throw closure_budget_error("closure element budget exceeded", out.stats);
        }
        refresh_met();
    };

    for (const Elem& g : generators) {
        insert(g, LatticeOp::generator, 0, 0);
        if (met) break;
    }

#ifdef _OPENMP
    const int threads = opt.threads > 0 ? opt.threads : omp_get_max_threads();
#else
    const int threads = 1;
#endif

    std::vector<Elem> buf; // meet/join results for one block, 2 per pair

    std::size_t lo = 0;
    while (!met && lo < out.elements.size()) {
        const std::size_t hi = out.elements.size();
        ++out.stats.rounds;
        // Round pairs, in order: (i, j) for i in [lo, hi), j in [0, i).
        std::size_t i = lo;
        std::size_t j = 0;
        while (!met && i < hi) {
            // Collect the next block of pairs.
            std::vector<std::pair<std::uint32_t, std::uint32_t>> block;
            block.reserve(opt.pairs_per_block);
            {
                std::size_t bi = i, bj = j;
                while (block.size() < opt.pairs_per_block && bi < hi) {
                    if (bj >= bi) {
                        ++bi;
                        bj = 0;
                        continue;
                    }
                    block.emplace_back(static_cast<std::uint32_t>(bi),
                                       static_cast<std::uint32_t>(bj));
                    ++bj;
                }
                i = bi;
                j = bj;
            }
            if (block.empty()) break;

            // assign instead of resize: Elem need not be default-constructible
            buf.assign(block.size() * 2, out.elements.front());
            const auto* elems = out.elements.data();
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(threads)
#endif
            for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(block.size()); ++k) {
                const auto [pi, pj] = block[static_cast<std::size_t>(k)];
                buf[2 * static_cast<std::size_t>(k)] = dom.meet(elems[pi], elems[pj]);
                buf[2 * static_cast<std::size_t>(k) + 1] = dom.join(elems[pi], elems[pj]);
            }

            for (std::size_t k = 0; k < block.size() && !met; ++k) {
                const auto [pi, pj] = block[k];
                insert(buf[2 * k], LatticeOp::meet, pi, pj);
                if (met) break;
                insert(buf[2 * k + 1], LatticeOp::join, pi, pj);
            }

            if (opt.time_limit_s > 0 && elapsed() > opt.time_limit_s) {
                out.stats.elapsed_s = elapsed();
                out.stats.peak_elements = out.elements.size();
                throw closure_budget_error("closure wall-clock budget exceeded", out.stats);
            }
        }
        lo = hi;
    }

    out.target_met = met;
    out.required_index = req.found_at;
    out.stats.elapsed_s = elapsed();
    out.stats.peak_elements = out.elements.size();
    return out;
}

} // namespace equgen

#endif
