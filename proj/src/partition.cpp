#include "equgen/partition.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <mutex>

namespace equgen {

namespace {

void check_size(int n) {
    if (n < 1 || n > Partition::max_n)
        throw std::invalid_argument("partition size out of range: " + std::to_string(n));
}

} // namespace

Partition::Partition(int n) {
    check_size(n);
    n_ = static_cast<std::uint8_t>(n);
    for (int i = 0; i < n; ++i) rgs_[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(i);
    blocks_ = static_cast<std::uint8_t>(n);
}

Partition Partition::from_labels(const std::vector<int>& labels) {
    check_size(static_cast<int>(labels.size()));
    Partition p;
    const int n = static_cast<int>(labels.size());
    p.n_ = static_cast<std::uint8_t>(n);
    // Relabel to first-occurrence order.
    int remap[Partition::max_n];
    std::memset(remap, -1, sizeof remap);
    int next = 0;
    for (int i = 0; i < n; ++i) {
        const int l = labels[static_cast<std::size_t>(i)];
        if (l < 0 || l >= n) throw std::invalid_argument("block label out of range");
        if (remap[l] < 0) remap[l] = next++;
        p.rgs_[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(remap[l]);
    }
    p.blocks_ = static_cast<std::uint8_t>(next);
    return p;
}

std::vector<std::vector<int>> Partition::blocks() const {
    std::vector<std::vector<int>> out(static_cast<std::size_t>(blocks_));
    for (int i = 0; i < n_; ++i)
        out[rgs_[static_cast<std::size_t>(i)]].push_back(i);
    return out;
}

std::size_t Partition::hash() const noexcept {
    // FNV-1a over the 64 rgs bytes (tail is zero) plus n.
    std::uint64_t h = 1469598103934665603ull;
    const auto mix = [&h](std::uint64_t w) {
        h ^= w;
        h *= 1099511628211ull;
    };
    std::uint64_t words[8];
    std::memcpy(words, rgs_.data(), sizeof words);
    for (std::uint64_t w : words) mix(w);
    mix(n_);
    return static_cast<std::size_t>(h);
}

Partition bottom(int n) { return Partition(n); }

Partition top(int n) {
    check_size(n);
    return Partition::from_labels(std::vector<int>(static_cast<std::size_t>(n), 0));
}

Partition atom(int n, int x, int y) {
    check_size(n);
    if (x < 0 || x >= n || y < 0 || y >= n)
        throw std::invalid_argument("atom: element out of range");
    if (x == y) throw std::invalid_argument("atom: elements must be distinct");
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) labels[static_cast<std::size_t>(i)] = i;
    labels[static_cast<std::size_t>(std::max(x, y))] = std::min(x, y);
    return Partition::from_labels(labels);
}

Partition meet(const Partition& p, const Partition& q) {
    if (p.n_ != q.n_) throw std::invalid_argument("meet: size mismatch");
    Partition r;
    const int n = p.n_;
    r.n_ = p.n_;
    // New label of i = first j with the same (p,q) label pair.  n <= 64
    // keeps the quadratic scan cheap.
    std::uint8_t next = 0;
    for (int i = 0; i < n; ++i) {
        const std::uint8_t a = p.rgs_[static_cast<std::size_t>(i)];
        const std::uint8_t b = q.rgs_[static_cast<std::size_t>(i)];
        std::uint8_t lab = next;
        for (int j = 0; j < i; ++j) {
            if (p.rgs_[static_cast<std::size_t>(j)] == a &&
                q.rgs_[static_cast<std::size_t>(j)] == b) {
                lab = r.rgs_[static_cast<std::size_t>(j)];
                break;
            }
        }
        if (lab == next) ++next;
        r.rgs_[static_cast<std::size_t>(i)] = lab;
    }
    r.blocks_ = next;
    return r;
}

namespace {

int uf_find(int* parent, int x) {
    while (parent[x] != x) {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    return x;
}

} // namespace

Partition join(const Partition& p, const Partition& q) {
    if (p.size() != q.size()) throw std::invalid_argument("join: size mismatch");
    const int n = p.size();
    int parent[Partition::max_n];
    int first_p[Partition::max_n];
    int first_q[Partition::max_n];
    for (int i = 0; i < n; ++i) {
        parent[i] = i;
        first_p[i] = -1;
        first_q[i] = -1;
    }
    for (int i = 0; i < n; ++i) {
        const int lp = p.label(i);
        const int lq = q.label(i);
        if (first_p[lp] < 0)
            first_p[lp] = i;
        else
            parent[uf_find(parent, i)] = uf_find(parent, first_p[lp]);
        if (first_q[lq] < 0)
            first_q[lq] = i;
        else
            parent[uf_find(parent, i)] = uf_find(parent, first_q[lq]);
    }
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) labels[static_cast<std::size_t>(i)] = uf_find(parent, i);
    return Partition::from_labels(labels);
}

Partition embed(const Partition& p, int n2) {
    check_size(n2);
    if (n2 < p.size()) throw std::invalid_argument("embed: target size smaller than source");
    Partition r = p;
    r.n_ = static_cast<std::uint8_t>(n2);
    std::uint8_t next = r.blocks_;
    for (int i = p.size(); i < n2; ++i) r.rgs_[static_cast<std::size_t>(i)] = next++;
    r.blocks_ = next;
    return r;
}

bool is_complementary(const Partition& p, const Partition& q) {
    return join(p, q) == top(p.size()) && meet(p, q) == bottom(p.size());
}

bool finer_or_equal(const Partition& p, const Partition& q) {
    if (p.size() != q.size()) throw std::invalid_argument("finer_or_equal: size mismatch");
    // p <= q iff elements sharing a p-label share a q-label.
    int rep[Partition::max_n];
    std::memset(rep, -1, sizeof rep);
    for (int i = 0; i < p.size(); ++i) {
        const int lp = p.label(i);
        if (rep[lp] < 0)
            rep[lp] = q.label(i);
        else if (rep[lp] != q.label(i))
            return false;
    }
    return true;
}

namespace {

Partition from_blocks(const std::vector<std::vector<int>>& blocks, int n, std::size_t err_pos) {
    std::vector<int> labels(static_cast<std::size_t>(n), -1);
    int lab = 0;
    for (const auto& b : blocks) {
        for (int e : b) {
            if (e < 0 || e >= n)
                throw parse_error("element " + std::to_string(e) + " out of range for n=" +
                                      std::to_string(n),
                                  err_pos);
            if (labels[static_cast<std::size_t>(e)] >= 0)
                throw parse_error("duplicate element " + std::to_string(e), err_pos);
            labels[static_cast<std::size_t>(e)] = lab;
        }
        ++lab;
    }
    for (int i = 0; i < n; ++i)
        if (labels[static_cast<std::size_t>(i)] < 0)
            throw parse_error("missing element " + std::to_string(i), err_pos);
    return Partition::from_labels(labels);
}

} // namespace

Partition parse_partition(const std::string& text, int n) {
    check_size(n);
    if (text.empty()) throw parse_error("empty partition text", 0);
    std::vector<std::vector<int>> blocks;
    if (text.rfind("eq(", 0) == 0) {
        if (n > 9)
            throw parse_error("eq(...) notation requires n <= 9", 0);
        if (text.back() != ')') throw parse_error("expected ')'", text.size() - 1);
        blocks.emplace_back();
        for (std::size_t i = 3; i + 1 < text.size(); ++i) {
            const char c = text[i];
            if (c == ';') {
                if (blocks.back().empty()) throw parse_error("empty block", i);
                blocks.emplace_back();
            } else if (c >= '1' && c <= '9') {
                blocks.back().push_back(c - '1'); // 1-based digits
            } else {
                throw parse_error(std::string("unexpected character '") + c + "'", i);
            }
        }
        if (blocks.back().empty()) throw parse_error("empty block", text.size() - 1);
        return from_blocks(blocks, n, 0);
    }
    // General notation: comma-separated decimals, '|'-separated blocks.
    blocks.emplace_back();
    std::size_t i = 0;
    while (i < text.size()) {
        if (!std::isdigit(static_cast<unsigned char>(text[i])))
            throw parse_error(std::string("expected digit, got '") + text[i] + "'", i);
        int v = 0;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
            v = v * 10 + (text[i] - '0');
            if (v > Partition::max_n) throw parse_error("element value too large", i);
            ++i;
        }
        blocks.back().push_back(v);
        if (i == text.size()) break;
        if (text[i] == ',') {
            ++i;
        } else if (text[i] == '|') {
            blocks.emplace_back();
            ++i;
        } else {
            throw parse_error(std::string("unexpected character '") + text[i] + "'", i);
        }
        if (i == text.size()) throw parse_error("trailing separator", i - 1);
    }
    return from_blocks(blocks, n, 0);
}

std::string format_partition(const Partition& p) {
    std::string out;
    bool first_block = true;
    for (const auto& b : p.blocks()) {
        if (!first_block) out += '|';
        first_block = false;
        bool first = true;
        for (int e : b) {
            if (!first) out += ',';
            first = false;
            out += std::to_string(e);
        }
    }
    return out;
}

std::string format_partition_eq(const Partition& p) {
    if (p.size() > 9)
        throw std::invalid_argument("eq(...) notation requires n <= 9");
    std::string out = "eq(";
    bool first_block = true;
    for (const auto& b : p.blocks()) {
        if (!first_block) out += ';';
        first_block = false;
        for (int e : b) out += static_cast<char>('1' + e);
    }
    out += ')';
    return out;
}

namespace {

template <class Visit>
void enumerate_rgs(int n, Visit&& visit) {
    // Lexicographic restricted-growth-string enumeration, iterative.
    std::uint8_t rgs[Partition::max_n] = {};
    std::uint8_t maxl[Partition::max_n] = {}; // maxl[i] = max(rgs[0..i-1])
    int i = 1;
    if (n == 1) {
        visit(rgs);
        return;
    }
    for (;;) {
        if (i == n) {
            visit(rgs);
            // Backtrack to the rightmost position that can still grow.
            --i;
            while (i >= 1 && rgs[i] == maxl[i] + 1) --i;
            if (i < 1) return;
            ++rgs[i];
            ++i;
            if (i < n) {
                maxl[i] = std::max(maxl[i - 1], rgs[i - 1]);
                rgs[i] = 0;
            }
        } else {
            maxl[i] = std::max<std::uint8_t>(maxl[i - 1], rgs[i - 1]);
            rgs[i] = 0;
            ++i;
        }
    }
}

} // namespace

void enumerate_partitions(int n, const std::function<void(const Partition&)>& f) {
    check_size(n);
    if (n > enumeration_limit)
        throw std::invalid_argument("enumerate_partitions: n exceeds limit " +
                                    std::to_string(enumeration_limit));
    std::vector<int> labels(static_cast<std::size_t>(n));
    enumerate_rgs(n, [&](const std::uint8_t* rgs) {
        for (int i = 0; i < n; ++i) labels[static_cast<std::size_t>(i)] = rgs[i];
        f(Partition::from_labels(labels));
    });
}

std::uint64_t bell(int n) {
    check_size(n);
    if (n > enumeration_limit)
        throw std::invalid_argument("bell: n exceeds limit " + std::to_string(enumeration_limit));
    static std::uint64_t cache[enumeration_limit + 1] = {};
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    if (cache[n] == 0) {
        std::uint64_t count = 0;
        enumerate_rgs(n, [&count](const std::uint8_t*) { ++count; });
        cache[n] = count;
    }
    return cache[n];
}

} // namespace equgen
