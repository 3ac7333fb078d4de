#include "equgen/verify.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <set>

namespace equgen {

nlohmann::ordered_json certificate_to_json(const ClosureCertificate& c) {
    nlohmann::ordered_json j;
    j["mode"] = c.mode;
    j["kind"] = c.kind;
    j["n"] = c.n;
    j["generators"] = c.generators;
    j["generated_count"] = c.generated_count;
    j["verdict"] = c.verdict;
    nlohmann::ordered_json w = nlohmann::ordered_json::array();
    for (const auto& x : c.witnesses) w.push_back({{"target", x.target}, {"expr", x.expr}});
    j["witnesses"] = w;
    j["stats"] = {{"rounds", c.stats.rounds},
                  {"peak_elements", c.stats.peak_elements},
                  {"elapsed_s", c.stats.elapsed_s}};
    if (!c.chain_script.empty()) j["chain_script"] = c.chain_script;
    return j;
}

std::string witness_expression(const std::vector<Provenance>& parents,
                               const std::vector<std::string>& gen_names, std::uint32_t idx) {
    std::map<std::uint32_t, std::string> memo;
    const std::function<const std::string&(std::uint32_t)> rec =
        [&](std::uint32_t i) -> const std::string& {
        auto it = memo.find(i);
        if (it != memo.end()) return it->second;
        const Provenance& p = parents.at(i);
        std::string s;
        if (p.op == LatticeOp::generator) {
            s = i < gen_names.size() ? gen_names[i] : "g" + std::to_string(i);
        } else {
            s = "(" + rec(p.a) + (p.op == LatticeOp::meet ? " * " : " + ") + rec(p.b) + ")";
        }
        return memo.emplace(i, std::move(s)).first->second;
    };
    return rec(idx);
}

Script emit_witness_script(const std::string& kind, int n,
                           const std::function<LatticeValue(std::uint32_t)>& element_at,
                           const std::vector<Provenance>& parents,
                           const std::vector<std::string>& gen_names,
                           const std::vector<std::uint32_t>& witness_indices) {
    Script s;
    s.kind = kind;
    s.n = n;
    // Collect all ancestors; parent indices are always smaller, so index
    // order is a valid derivation order.
    std::set<std::uint32_t> needed;
    std::vector<std::uint32_t> stack(witness_indices.begin(), witness_indices.end());
    while (!stack.empty()) {
        const std::uint32_t i = stack.back();
        stack.pop_back();
        if (!needed.insert(i).second) continue;
        const Provenance& p = parents.at(i);
        if (p.op != LatticeOp::generator) {
            stack.push_back(p.a);
            stack.push_back(p.b);
        }
    }
    std::map<std::uint32_t, std::string> name_of;
    for (std::uint32_t i : needed) {
        const Provenance& p = parents.at(i);
        if (p.op == LatticeOp::generator) {
            const std::string name =
                i < gen_names.size() ? gen_names[i] : "g" + std::to_string(i);
            s.generators.emplace_back(name, make_lit(element_at(i)));
            name_of[i] = name;
        }
    }
    for (std::uint32_t i : needed) {
        const Provenance& p = parents.at(i);
        if (p.op == LatticeOp::generator) continue;
        const std::string name = "w" + std::to_string(i);
        ExprPtr ex = p.op == LatticeOp::meet
                         ? make_meet(make_name(name_of.at(p.a)), make_name(name_of.at(p.b)))
                         : make_join(make_name(name_of.at(p.a)), make_name(name_of.at(p.b)));
        s.steps.push_back({name, std::move(ex), nullptr});
        name_of[i] = name;
    }
    return s;
}

namespace {

std::vector<int> canonical_cycle(int n) {
    std::vector<int> c(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) c[static_cast<std::size_t>(i)] = i;
    return c;
}

void check_spanning_cycle(const std::vector<int>& cycle, int n) {
    if (static_cast<int>(cycle.size()) != n)
        throw std::invalid_argument("spanning cycle must visit every element once");
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (int x : cycle) {
        if (x < 0 || x >= n || seen[static_cast<std::size_t>(x)])
            throw std::invalid_argument("spanning cycle is not a permutation");
        seen[static_cast<std::size_t>(x)] = true;
    }
}

/// Structural soundness of a derivation chain: every step must be built
/// from generators and earlier steps by meet/join only (plus inv when
/// the generator set is closed under inverses).  Atom makers and
/// literals inside steps would smuggle in underived elements.
void check_chain_structure(const Script& chain, bool allow_inv) {
    const std::function<void(const Expr&)> walk = [&](const Expr& e) {
        switch (e.kind) {
            case Expr::Kind::name:
                return;
            case Expr::Kind::meet:
            case Expr::Kind::join:
                walk(*e.lhs);
                walk(*e.rhs);
                return;
            case Expr::Kind::inv:
                if (!allow_inv)
                    throw std::invalid_argument(
                        "chain uses inv() but the generator set is not inverse-closed");
                walk(*e.lhs);
                return;
            default:
                throw std::invalid_argument(
                    "derivation chain steps may only combine earlier bindings");
        }
    };
    for (const auto& st : chain.steps) walk(*st.expr);
}

std::vector<std::string> sorted_texts(const std::vector<std::string>& v) {
    std::vector<std::string> out = v;
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

std::uint64_t quasiorder_count(int n) {
    if (n < 1 || n > quasiorder_enumeration_limit)
        throw std::invalid_argument("quasiorder_count: n out of range");
    static std::uint64_t cache[quasiorder_enumeration_limit + 1] = {};
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    if (cache[n] == 0) {
        std::uint64_t c = 0;
        enumerate_quasiorders(n, [&c](const Quasiorder&) { ++c; });
        cache[n] = c;
    }
    return cache[n];
}

// ---------------------------------------------------------------------------
// Equivalence lattices.

namespace {

ClosureCertificate chain_certificate_equ(const std::vector<Partition>& generators,
                                         const CertificateChain& chain) {
    const int n = generators.at(0).size();
    ClosureCertificate cert;
    cert.mode = "cycle-atom-certificate";
    cert.kind = "equ";
    cert.n = n;
    for (const auto& g : generators) cert.generators.push_back(format_partition(g));
    if (chain.chain.kind != "equ" || chain.chain.n != n)
        throw std::invalid_argument("certificate chain kind/size mismatch");
    check_spanning_cycle(chain.cycle, n);
    if (chain.atom_steps.size() != static_cast<std::size_t>(n))
        throw std::invalid_argument("certificate chain must name one atom step per cycle edge");
    check_chain_structure(chain.chain, /*allow_inv=*/false);

    const ReplayReport rep = replay(chain.chain);
    // The chain generators must be exactly the verified generator set.
    std::vector<std::string> chain_gens;
    std::map<std::string, LatticeValue> env;
    for (const auto& [name, v] : rep.values) env.emplace(name, v);
    for (const auto& [name, ex] : chain.chain.generators)
        chain_gens.push_back(format_value(env.at(name)));
    if (sorted_texts(chain_gens) != sorted_texts(cert.generators))
        throw std::invalid_argument("certificate chain generators differ from input generators");

    std::set<std::string> distinct;
    for (const auto& [name, v] : rep.values) distinct.insert(format_value(v));
    cert.generated_count = distinct.size();

    std::map<std::string, ExprPtr> step_expr;
    for (const auto& st : chain.chain.steps) step_expr[st.name] = st.expr;

    bool ok = rep.pass;
    for (int j = 0; j < n; ++j) {
        const int x = chain.cycle[static_cast<std::size_t>(j)];
        const int y = chain.cycle[static_cast<std::size_t>((j + 1) % n)];
        const Partition want = atom(n, x, y);
        const auto it = env.find(chain.atom_steps[static_cast<std::size_t>(j)]);
        const bool hit = it != env.end() && std::holds_alternative<Partition>(it->second) &&
                         std::get<Partition>(it->second) == want;
        if (!hit) ok = false;
        CertWitness w;
        w.target = format_partition(want);
        const auto se = step_expr.find(chain.atom_steps[static_cast<std::size_t>(j)]);
        w.expr = se != step_expr.end() ? format_expr(*se->second)
                                       : chain.atom_steps[static_cast<std::size_t>(j)];
        cert.witnesses.push_back(std::move(w));
    }
    cert.verdict = ok;
    cert.chain_script = format_script(chain.chain);
    return cert;
}

} // namespace

ClosureCertificate verify_generates_equ(const std::vector<Partition>& generators,
                                        EquVerifyMode mode, const ClosureOptions& opt,
                                        const CertificateChain* chain) {
    if (generators.empty()) throw std::invalid_argument("empty generator list");
    const int n = generators[0].size();
    for (const auto& g : generators)
        if (g.size() != n) throw std::invalid_argument("generator size mismatch");

    if (mode == EquVerifyMode::full) {
        if (n > enumeration_limit)
            throw std::invalid_argument("full verification refused for n > " +
                                        std::to_string(enumeration_limit));
        const std::uint64_t full_size = bell(n);
        if (chain) {
            // Chain-assisted exact count.  The validated chain proves the
            // spanning-cycle atoms lie in the generated sublattice S; every
            // other atom is the meet of its two cycle-arc joins, the bottom
            // is the meet of two distinct atoms, and every partition is the
            // join of its blocks' atoms.  Each of these identities is
            // checked numerically while the whole lattice is enumerated, so
            // the reported count is the exact size of S.  This replaces the
            // quadratic closure worklist, which cannot reach the larger
            // Bell numbers in reasonable time.
            ClosureCertificate cert = chain_certificate_equ(generators, *chain);
            cert.mode = "full-enumeration";
            if (!cert.verdict) return cert;
            bool ok = true;
            const auto pos_of = [&](int x) {
                for (int i = 0; i < n; ++i)
                    if (chain->cycle[static_cast<std::size_t>(i)] == x) return i;
                return -1;
            };
            // All atoms via the two arcs of the verified cycle.
            for (int x = 0; x < n && ok; ++x) {
                for (int y = x + 1; y < n && ok; ++y) {
                    const int px = pos_of(x), py = pos_of(y);
                    Partition arc1 = bottom(n), arc2 = bottom(n);
                    for (int i = px; i != py; i = (i + 1) % n)
                        arc1 = join(arc1, atom(n, chain->cycle[static_cast<std::size_t>(i)],
                                               chain->cycle[static_cast<std::size_t>((i + 1) % n)]));
                    for (int i = py; i != px; i = (i + 1) % n)
                        arc2 = join(arc2, atom(n, chain->cycle[static_cast<std::size_t>(i)],
                                               chain->cycle[static_cast<std::size_t>((i + 1) % n)]));
                    if (meet(arc1, arc2) != atom(n, x, y)) ok = false;
                }
            }
            // Bottom is the meet of two distinct atoms.
            if (meet(atom(n, 0, 1), atom(n, n >= 4 ? 2 : 1, n >= 4 ? 3 : 2)) != bottom(n))
                ok = false;
            // Every partition is the join of its blocks' atoms.
            std::uint64_t count = 0;
            enumerate_partitions(n, [&](const Partition& p) {
                ++count;
                if (!ok) return;
                Partition acc = bottom(n);
                for (const auto& block : p.blocks())
                    for (std::size_t i = 1; i < block.size(); ++i)
                        acc = join(acc, atom(n, block[i - 1], block[i]));
                if (acc != p) ok = false;
            });
            cert.verdict = ok && count == full_size;
            cert.generated_count = count;
            return cert;
        }
        PackedEquDomain dom(n);
        std::vector<std::uint64_t> gens;
        for (const auto& g : generators) gens.push_back(dom.pack(g));
        ClosureOptions o = opt;
        o.record_parents = false;
        const auto res = close_sublattice(
            dom, std::span<const std::uint64_t>(gens),
            ClosureTarget<std::uint64_t>::reach_count(full_size), o);
        ClosureCertificate cert;
        cert.mode = "full-closure";
        cert.kind = "equ";
        cert.n = n;
        for (const auto& g : generators) cert.generators.push_back(format_partition(g));
        cert.generated_count = res.elements.size();
        cert.verdict = cert.generated_count == full_size;
        cert.stats = res.stats;
        return cert;
    }

    if (n < 3) throw std::invalid_argument("cycle-atom certificate requires n >= 3");
    if (chain) return chain_certificate_equ(generators, *chain);

    // No chain: worklist closure with a contains-all target over the
    // canonical cycle atoms.
    const std::vector<int> cycle = canonical_cycle(n);
    ClosureCertificate cert;
    cert.mode = "cycle-atom-certificate";
    cert.kind = "equ";
    cert.n = n;
    for (const auto& g : generators) cert.generators.push_back(format_partition(g));
    std::vector<std::string> gen_names;
    for (std::size_t i = 0; i < generators.size(); ++i)
        gen_names.push_back("g" + std::to_string(i + 1));

    if (n <= PackedEquDomain::max_n) {
        PackedEquDomain dom(n);
        std::vector<std::uint64_t> gens;
        for (const auto& g : generators) gens.push_back(dom.pack(g));
        std::vector<std::uint64_t> required;
        for (int j = 0; j < n; ++j)
            required.push_back(dom.pack(atom(n, cycle[static_cast<std::size_t>(j)],
                                             cycle[static_cast<std::size_t>((j + 1) % n)])));
        const auto res = close_sublattice(dom, std::span<const std::uint64_t>(gens),
                                          ClosureTarget<std::uint64_t>::contains_all(required),
                                          opt);
        cert.generated_count = res.elements.size();
        cert.verdict = res.target_met;
        cert.stats = res.stats;
        for (std::size_t j = 0; j < required.size(); ++j) {
            if (res.required_index[j] < 0) continue;
            cert.witnesses.push_back(
                {format_partition(dom.unpack(required[j])),
                 witness_expression(res.parents, gen_names,
                                    static_cast<std::uint32_t>(res.required_index[j]))});
        }
        if (cert.verdict) {
            std::vector<std::uint32_t> idx;
            for (auto v : res.required_index) idx.push_back(static_cast<std::uint32_t>(v));
            cert.chain_script = format_script(emit_witness_script(
                "equ", n,
                [&](std::uint32_t i) { return LatticeValue(dom.unpack(res.elements[i])); },
                res.parents, gen_names, idx));
        }
        return cert;
    }

    EquDomain dom(n);
    std::vector<Partition> required;
    for (int j = 0; j < n; ++j)
        required.push_back(atom(n, cycle[static_cast<std::size_t>(j)],
                                cycle[static_cast<std::size_t>((j + 1) % n)]));
    const auto res = close_sublattice(dom, std::span<const Partition>(generators),
                                      ClosureTarget<Partition>::contains_all(required), opt);
    cert.generated_count = res.elements.size();
    cert.verdict = res.target_met;
    cert.stats = res.stats;
    for (std::size_t j = 0; j < required.size(); ++j) {
        if (res.required_index[j] < 0) continue;
        cert.witnesses.push_back(
            {format_partition(required[j]),
             witness_expression(res.parents, gen_names,
                                static_cast<std::uint32_t>(res.required_index[j]))});
    }
    return cert;
}

// ---------------------------------------------------------------------------
// Quasiorder lattices.

namespace {

bool inverse_closed(const std::vector<Quasiorder>& gens) {
    for (const auto& g : gens) {
        const Quasiorder gi = inverse(g);
        if (std::find(gens.begin(), gens.end(), gi) == gens.end()) return false;
    }
    return true;
}

bool any_asymmetric(const std::vector<Quasiorder>& gens) {
    for (const auto& g : gens)
        if (!quo_is_equivalence(g)) return true;
    return false;
}

ClosureCertificate chain_certificate_quo(const std::vector<Quasiorder>& generators,
                                         QuoVerifyMode mode, const CertificateChain& chain) {
    const int n = generators.at(0).size();
    ClosureCertificate cert;
    cert.mode = mode == QuoVerifyMode::kulin ? "kulin-certificate" : "cycle-atom-certificate";
    cert.kind = "quo";
    cert.n = n;
    for (const auto& g : generators) cert.generators.push_back(format_value(LatticeValue(g)));
    if (chain.chain.kind != "quo" || chain.chain.n != n)
        throw std::invalid_argument("certificate chain kind/size mismatch");
    check_spanning_cycle(chain.cycle, n);
    const std::size_t expected_atoms =
        mode == QuoVerifyMode::kulin ? static_cast<std::size_t>(n)
                                     : static_cast<std::size_t>(2 * n);
    if (chain.atom_steps.size() != expected_atoms)
        throw std::invalid_argument("certificate chain names the wrong number of atom steps");
    check_chain_structure(chain.chain, inverse_closed(generators));

    const ReplayReport rep = replay(chain.chain);
    std::map<std::string, LatticeValue> env;
    for (const auto& [name, v] : rep.values) env.emplace(name, v);
    std::vector<std::string> chain_gens;
    for (const auto& [name, ex] : chain.chain.generators)
        chain_gens.push_back(format_value(env.at(name)));
    if (sorted_texts(chain_gens) != sorted_texts(cert.generators))
        throw std::invalid_argument("certificate chain generators differ from input generators");

    std::set<std::string> distinct;
    for (const auto& [name, v] : rep.values) distinct.insert(format_value(v));
    cert.generated_count = distinct.size();

    std::map<std::string, ExprPtr> step_expr;
    for (const auto& st : chain.chain.steps) step_expr[st.name] = st.expr;
    const auto witness_for = [&](const std::string& step, const Quasiorder& want) -> bool {
        const auto it = env.find(step);
        const bool hit = it != env.end() && std::holds_alternative<Quasiorder>(it->second) &&
                         std::get<Quasiorder>(it->second) == want;
        CertWitness w;
        w.target = format_value(LatticeValue(want));
        const auto se = step_expr.find(step);
        w.expr = se != step_expr.end() ? format_expr(*se->second) : step;
        cert.witnesses.push_back(std::move(w));
        return hit;
    };

    bool ok = rep.pass;
    if (mode == QuoVerifyMode::kulin) {
        // All equivalence cycle atoms inside the symmetric part, plus an
        // asymmetric generator.
        for (int j = 0; j < n; ++j) {
            const int x = chain.cycle[static_cast<std::size_t>(j)];
            const int y = chain.cycle[static_cast<std::size_t>((j + 1) % n)];
            if (!witness_for(chain.atom_steps[static_cast<std::size_t>(j)],
                             equ_to_quo(atom(n, x, y))))
                ok = false;
        }
        if (!any_asymmetric(generators)) ok = false;
    } else {
        for (int j = 0; j < n; ++j) {
            const int x = chain.cycle[static_cast<std::size_t>(j)];
            const int y = chain.cycle[static_cast<std::size_t>((j + 1) % n)];
            if (!witness_for(chain.atom_steps[static_cast<std::size_t>(j)], qu(n, x, y)))
                ok = false;
            if (!witness_for(chain.atom_steps[static_cast<std::size_t>(n + j)], qu(n, y, x)))
                ok = false;
        }
    }
    cert.verdict = ok;
    cert.chain_script = format_script(chain.chain);
    return cert;
}

} // namespace

ClosureCertificate verify_generates_quo(const std::vector<Quasiorder>& generators,
                                        QuoVerifyMode mode, const ClosureOptions& opt,
                                        const CertificateChain* chain) {
    if (generators.empty()) throw std::invalid_argument("empty generator list");
    const int n = generators[0].size();
    for (const auto& g : generators)
        if (g.size() != n) throw std::invalid_argument("generator size mismatch");

    if (mode == QuoVerifyMode::full) {
        if (n > 4)
            throw std::invalid_argument("full quasiorder verification refused for n > 4");
        const std::uint64_t full_size = quasiorder_count(n);
        QuoDomain dom(n);
        ClosureOptions o = opt;
        o.record_parents = false;
        const auto res =
            close_sublattice(dom, std::span<const Quasiorder>(generators),
                             ClosureTarget<Quasiorder>::reach_count(full_size), o);
        ClosureCertificate cert;
        cert.mode = "full-closure";
        cert.kind = "quo";
        cert.n = n;
        for (const auto& g : generators) cert.generators.push_back(format_value(LatticeValue(g)));
        cert.generated_count = res.elements.size();
        cert.verdict = cert.generated_count == full_size;
        cert.stats = res.stats;
        return cert;
    }

    if (n < 3) throw std::invalid_argument("quasiorder certificates require n >= 3");
    if (chain) return chain_certificate_quo(generators, mode, *chain);

    const std::vector<int> cycle = canonical_cycle(n);
    std::vector<Quasiorder> required;
    if (mode == QuoVerifyMode::cycle) {
        for (int j = 0; j < n; ++j) {
            required.push_back(qu(n, cycle[static_cast<std::size_t>(j)],
                                  cycle[static_cast<std::size_t>((j + 1) % n)]));
        }
        for (int j = 0; j < n; ++j) {
            required.push_back(qu(n, cycle[static_cast<std::size_t>((j + 1) % n)],
                                  cycle[static_cast<std::size_t>(j)]));
        }
    } else {
        for (int j = 0; j < n; ++j)
            required.push_back(equ_to_quo(atom(n, cycle[static_cast<std::size_t>(j)],
                                               cycle[static_cast<std::size_t>((j + 1) % n)])));
    }

    QuoDomain dom(n);
    const auto res = close_sublattice(dom, std::span<const Quasiorder>(generators),
                                      ClosureTarget<Quasiorder>::contains_all(required), opt);
    ClosureCertificate cert;
    cert.mode = mode == QuoVerifyMode::kulin ? "kulin-certificate" : "cycle-atom-certificate";
    cert.kind = "quo";
    cert.n = n;
    for (const auto& g : generators) cert.generators.push_back(format_value(LatticeValue(g)));
    cert.generated_count = res.elements.size();
    cert.verdict = res.target_met && (mode != QuoVerifyMode::kulin || any_asymmetric(generators));
    cert.stats = res.stats;
    std::vector<std::string> gen_names;
    for (std::size_t i = 0; i < generators.size(); ++i)
        gen_names.push_back("g" + std::to_string(i + 1));
    for (std::size_t j = 0; j < required.size(); ++j) {
        if (res.required_index[j] < 0) continue;
        cert.witnesses.push_back(
            {format_value(LatticeValue(required[j])),
             witness_expression(res.parents, gen_names,
                                static_cast<std::uint32_t>(res.required_index[j]))});
    }
    return cert;
}

} // namespace equgen
