#include "equgen/quasiorder.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>
#include <stdexcept>

namespace equgen {

namespace {

void check_size(int n) {
    if (n < 1 || n > Quasiorder::max_n)
        throw std::invalid_argument("quasiorder size out of range: " + std::to_string(n));
}

// Row-wise transitive closure: propagate rows until a fixpoint.  Verified
// against plain boolean-matrix squaring in the test suite.
void close_rows(int n, std::array<std::uint32_t, Quasiorder::max_n>& rows) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (int i = 0; i < n; ++i) {
            std::uint32_t r = rows[static_cast<std::size_t>(i)];
            std::uint32_t acc = r;
            std::uint32_t todo = r;
            while (todo) {
                const int j = __builtin_ctz(todo);
                todo &= todo - 1;
                acc |= rows[static_cast<std::size_t>(j)];
            }
            if (acc != r) {
                rows[static_cast<std::size_t>(i)] = acc;
                changed = true;
            }
        }
    }
}

} // namespace

Quasiorder::Quasiorder(int n) {
    check_size(n);
    n_ = static_cast<std::uint8_t>(n);
    for (int i = 0; i < n; ++i) rows_[static_cast<std::size_t>(i)] = 1u << i;
}

Quasiorder Quasiorder::from_rows(int n, const std::array<std::uint32_t, max_n>& rows) {
    check_size(n);
    Quasiorder q(n);
    const std::uint32_t mask = n == 32 ? ~0u : (1u << n) - 1;
    for (int i = 0; i < n; ++i) {
        if (rows[static_cast<std::size_t>(i)] & ~mask)
            throw std::invalid_argument("relation pair out of range");
        q.rows_[static_cast<std::size_t>(i)] |= rows[static_cast<std::size_t>(i)];
    }
    close_rows(n, q.rows_);
    assert(q.is_closed());
    return q;
}

bool Quasiorder::is_closed() const noexcept {
    for (int i = 0; i < n_; ++i) {
        const std::uint32_t r = rows_[static_cast<std::size_t>(i)];
        if (!((r >> i) & 1u)) return false;
        std::uint32_t todo = r;
        while (todo) {
            const int j = __builtin_ctz(todo);
            todo &= todo - 1;
            if (rows_[static_cast<std::size_t>(j)] & ~r) return false;
        }
    }
    return true;
}

std::size_t Quasiorder::hash() const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (int i = 0; i < n_; ++i) {
        h ^= rows_[static_cast<std::size_t>(i)];
        h *= 1099511628211ull;
    }
    h ^= n_;
    h *= 1099511628211ull;
    return static_cast<std::size_t>(h);
}

Quasiorder qu(int n, int x, int y) {
    check_size(n);
    if (x < 0 || x >= n || y < 0 || y >= n)
        throw std::invalid_argument("qu: element out of range");
    Quasiorder q(n);
    // A single extra pair is already transitively closed.
    std::array<std::uint32_t, Quasiorder::max_n> rows = {};
    rows[static_cast<std::size_t>(x)] = 1u << y;
    return Quasiorder::from_rows(n, rows);
}

Quasiorder meet(const Quasiorder& p, const Quasiorder& q) {
    if (p.n_ != q.n_) throw std::invalid_argument("meet: size mismatch");
    Quasiorder r(p.n_);
    for (int i = 0; i < p.n_; ++i)
        r.rows_[static_cast<std::size_t>(i)] =
            p.rows_[static_cast<std::size_t>(i)] & q.rows_[static_cast<std::size_t>(i)];
    assert(r.is_closed());
    return r;
}

Quasiorder join(const Quasiorder& p, const Quasiorder& q) {
    if (p.n_ != q.n_) throw std::invalid_argument("join: size mismatch");
    Quasiorder r(p.n_);
    for (int i = 0; i < p.n_; ++i)
        r.rows_[static_cast<std::size_t>(i)] =
            p.rows_[static_cast<std::size_t>(i)] | q.rows_[static_cast<std::size_t>(i)];
    close_rows(p.n_, r.rows_);
    assert(r.is_closed());
    return r;
}

Quasiorder inverse(const Quasiorder& q) {
    Quasiorder r(q.n_);
    for (int i = 0; i < q.n_; ++i) r.rows_[static_cast<std::size_t>(i)] = 0;
    for (int i = 0; i < q.n_; ++i) {
        std::uint32_t row = q.rows_[static_cast<std::size_t>(i)];
        while (row) {
            const int j = __builtin_ctz(row);
            row &= row - 1;
            r.rows_[static_cast<std::size_t>(j)] |= 1u << i;
        }
    }
    // The transpose of a closed relation is closed.
    assert(r.is_closed());
    return r;
}

Quasiorder equ_to_quo(const Partition& p) {
    if (p.size() > Quasiorder::max_n)
        throw std::invalid_argument("equ_to_quo: partition too large");
    std::array<std::uint32_t, Quasiorder::max_n> rows = {};
    std::array<std::uint32_t, Partition::max_n> block_mask = {};
    for (int i = 0; i < p.size(); ++i)
        block_mask[static_cast<std::size_t>(p.label(i))] |= 1u << i;
    for (int i = 0; i < p.size(); ++i)
        rows[static_cast<std::size_t>(i)] = block_mask[static_cast<std::size_t>(p.label(i))];
    return Quasiorder::from_rows(p.size(), rows);
}

bool quo_is_equivalence(const Quasiorder& q) {
    return q == inverse(q);
}

Partition quo_symmetric_part(const Quasiorder& q) {
    const Quasiorder sym = meet(q, inverse(q));
    std::vector<int> labels(static_cast<std::size_t>(q.size()));
    for (int i = 0; i < q.size(); ++i)
        labels[static_cast<std::size_t>(i)] = __builtin_ctz(sym.row(i));
    return Partition::from_labels(labels);
}

void enumerate_quasiorders(int n, const std::function<void(const Quasiorder&)>& f) {
    check_size(n);
    if (n > quasiorder_enumeration_limit)
        throw std::invalid_argument("enumerate_quasiorders: n exceeds limit " +
                                    std::to_string(quasiorder_enumeration_limit));
    // Brute-force filter of all off-diagonal relations for transitivity.
    const int pairs = n * (n - 1);
    std::vector<std::pair<int, int>> pos;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) pos.emplace_back(i, j);
    for (std::uint64_t bits = 0; bits < (1ull << pairs); ++bits) {
        std::array<std::uint32_t, Quasiorder::max_n> rows = {};
        for (int i = 0; i < n; ++i) rows[static_cast<std::size_t>(i)] = 1u << i;
        for (int k = 0; k < pairs; ++k)
            if ((bits >> k) & 1ull)
                rows[static_cast<std::size_t>(pos[static_cast<std::size_t>(k)].first)] |=
                    1u << pos[static_cast<std::size_t>(k)].second;
        // Transitivity check without closing.
        bool ok = true;
        for (int i = 0; i < n && ok; ++i) {
            std::uint32_t todo = rows[static_cast<std::size_t>(i)];
            while (todo) {
                const int j = __builtin_ctz(todo);
                todo &= todo - 1;
                if (rows[static_cast<std::size_t>(j)] & ~rows[static_cast<std::size_t>(i)]) {
                    ok = false;
                    break;
                }
            }
        }
        if (ok) f(Quasiorder::from_rows(n, rows));
    }
}

std::vector<std::pair<int, int>> transitive_reduction_pairs(const Quasiorder& q) {
    const int n = q.size();
    // Condense the symmetric classes, reduce the induced strict order on
    // class representatives, and emit a cycle inside each class.
    const Partition classes = quo_symmetric_part(q);
    std::vector<std::vector<int>> blocks = classes.blocks();
    std::vector<std::pair<int, int>> out;
    for (const auto& b : blocks) {
        for (std::size_t k = 0; k + 1 < b.size(); ++k) out.emplace_back(b[k], b[k + 1]);
        if (b.size() > 1) out.emplace_back(b.back(), b.front());
    }
    const int m = static_cast<int>(blocks.size());
    const auto covers = [&](int bi, int bj) {
        const int x = blocks[static_cast<std::size_t>(bi)][0];
        const int y = blocks[static_cast<std::size_t>(bj)][0];
        if (bi == bj || !q.contains(x, y)) return false;
        for (int bk = 0; bk < m; ++bk) {
            if (bk == bi || bk == bj) continue;
            const int z = blocks[static_cast<std::size_t>(bk)][0];
            if (q.contains(x, z) && q.contains(z, y)) return false;
        }
        return true;
    };
    for (int bi = 0; bi < m; ++bi)
        for (int bj = 0; bj < m; ++bj)
            if (covers(bi, bj))
                out.emplace_back(blocks[static_cast<std::size_t>(bi)][0],
                                 blocks[static_cast<std::size_t>(bj)][0]);
    std::sort(out.begin(), out.end());
    return out;
}

std::string format_quasiorder(const Quasiorder& q) {
    std::string out = "n=" + std::to_string(q.size()) + "\n";
    for (const auto& [x, y] : transitive_reduction_pairs(q))
        out += std::to_string(x) + ">" + std::to_string(y) + "\n";
    out += "closed\n";
    return out;
}

Quasiorder parse_quasiorder(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int n = -1;
    std::array<std::uint32_t, Quasiorder::max_n> rows = {};
    std::size_t offset = 0;
    while (std::getline(in, line)) {
        const std::size_t line_start = offset;
        offset += line.size() + 1;
        if (line.empty() || line[0] == '#') continue;
        if (line == "closed") continue;
        if (line.rfind("n=", 0) == 0) {
            n = std::stoi(line.substr(2));
            check_size(n);
            continue;
        }
        const auto gt = line.find('>');
        if (gt == std::string::npos)
            throw parse_error("expected 'x>y' pair line", line_start);
        if (n < 0) throw parse_error("pair line before n= header", line_start);
        int x, y;
        try {
            x = std::stoi(line.substr(0, gt));
            y = std::stoi(line.substr(gt + 1));
        } catch (const std::exception&) {
            throw parse_error("malformed pair line", line_start);
        }
        if (x < 0 || x >= n || y < 0 || y >= n)
            throw parse_error("pair element out of range", line_start);
        rows[static_cast<std::size_t>(x)] |= 1u << y;
    }
    if (n < 0) throw parse_error("missing n= header", 0);
    return Quasiorder::from_rows(n, rows);
}

} // namespace equgen
