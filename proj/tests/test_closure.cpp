#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <random>
#include <set>

#include "equgen/constructions.hpp"

using namespace equgen;

namespace {

std::vector<std::uint64_t> pack_all(const PackedEquDomain& dom, const std::vector<Partition>& ps) {
    std::vector<std::uint64_t> out;
    for (const auto& p : ps) out.push_back(dom.pack(p));
    return out;
}

} // namespace

TEST_CASE("packed domain agrees with the value domain") {
    std::mt19937_64 rng(41);
    for (int n : {4, 9, 16}) {
        PackedEquDomain dom(n);
        std::uniform_int_distribution<int> d(0, n - 1);
        for (int rep = 0; rep < 300; ++rep) {
            std::vector<int> la((std::size_t)n), lb((std::size_t)n);
            for (auto& l : la) l = d(rng);
            for (auto& l : lb) l = d(rng);
            const Partition a = Partition::from_labels(la);
            const Partition b = Partition::from_labels(lb);
            CHECK(dom.unpack(dom.pack(a)) == a);
            CHECK(dom.unpack(dom.meet(dom.pack(a), dom.pack(b))) == meet(a, b));
            CHECK(dom.unpack(dom.join(dom.pack(a), dom.pack(b))) == join(a, b));
        }
    }
}

TEST_CASE("full closure of the base systems reaches the whole lattice") {
    {
        PackedEquDomain dom(6);
        const auto gens = pack_all(dom, base6().generators());
        const auto out = close_sublattice(dom, std::span<const std::uint64_t>(gens),
                                          ClosureTarget<std::uint64_t>::fixpoint());
        CHECK(out.elements.size() == 203);
        // Fixpoint closure of generators contains the generators themselves
        // plus all atoms; spot-check a few members.
        std::set<std::uint64_t> all(out.elements.begin(), out.elements.end());
        CHECK(all.size() == 203);
        CHECK(all.count(dom.pack(atom(6, 0, 1))) == 1);
        CHECK(all.count(dom.pack(top(6))) == 1);
        CHECK(all.count(dom.pack(bottom(6))) == 1);
    }
    {
        PackedEquDomain dom(9);
        const auto gens = pack_all(dom, base9().generators());
        const auto out = close_sublattice(dom, std::span<const std::uint64_t>(gens),
                                          ClosureTarget<std::uint64_t>::fixpoint());
        CHECK(out.elements.size() == 21147);
    }
}

TEST_CASE("reach_count stops exactly at the requested count") {
    PackedEquDomain dom(6);
    const auto gens = pack_all(dom, base6().generators());
    const auto out = close_sublattice(dom, std::span<const std::uint64_t>(gens),
                                      ClosureTarget<std::uint64_t>::reach_count(bell(6)));
    CHECK(out.target_met);
    CHECK(out.elements.size() == bell(6));
}

TEST_CASE("reference and parallel kernels produce identical sequences") {
    PackedEquDomain dom(9);
    const auto gens = pack_all(dom, base9().generators());
    const std::span<const std::uint64_t> gspan(gens);
    const auto target = ClosureTarget<std::uint64_t>::fixpoint();

    ClosureOptions o1;
    o1.record_parents = false;
    const auto ref = close_sublattice_reference(dom, gspan, target, o1);

    for (int t : {1, 2, 8}) {
        ClosureOptions o = o1;
        o.threads = t;
        const auto par = close_sublattice(dom, gspan, target, o);
        CHECK(par.elements == ref.elements);
    }
}

TEST_CASE("determinism also holds under an early-exit target") {
    PackedEquDomain dom(9);
    const auto gens = pack_all(dom, base9().generators());
    const std::span<const std::uint64_t> gspan(gens);
    const auto target = ClosureTarget<std::uint64_t>::reach_count(5000);

    std::vector<std::vector<std::uint64_t>> runs;
    for (int t : {1, 2, 8}) {
        ClosureOptions o;
        o.record_parents = false;
        o.threads = t;
        runs.push_back(close_sublattice(dom, gspan, target, o).elements);
    }
    CHECK(runs[0].size() == 5000);
    CHECK(runs[0] == runs[1]);
    CHECK(runs[0] == runs[2]);
}

TEST_CASE("budget overruns are errors, not verdicts") {
    PackedEquDomain dom(9);
    const auto gens = pack_all(dom, base9().generators());
    const std::span<const std::uint64_t> gspan(gens);
    {
        ClosureOptions o;
        o.max_elements = 100;
        CHECK_THROWS_AS(
            close_sublattice(dom, gspan, ClosureTarget<std::uint64_t>::fixpoint(), o),
            closure_budget_error);
        CHECK_THROWS_AS(close_sublattice_reference(
                            dom, gspan, ClosureTarget<std::uint64_t>::fixpoint(), o),
                        closure_budget_error);
    }
    {
        ClosureOptions o;
        o.time_limit_s = 1e-9;
        CHECK_THROWS_AS(
            close_sublattice(dom, gspan, ClosureTarget<std::uint64_t>::fixpoint(), o),
            closure_budget_error);
    }
}

TEST_CASE("contains_all reports witness indices and provenance replays") {
    PackedEquDomain dom(6);
    const auto gens = pack_all(dom, base6().generators());
    std::vector<std::uint64_t> required;
    std::vector<Partition> required_parts;
    for (int i = 0; i < 5; ++i) {
        required_parts.push_back(atom(6, i, i + 1));
        required.push_back(dom.pack(required_parts.back()));
    }
    const auto out = close_sublattice(dom, std::span<const std::uint64_t>(gens),
                                      ClosureTarget<std::uint64_t>::contains_all(required));
    REQUIRE(out.target_met);
    REQUIRE(out.required_index.size() == required.size());
    for (std::size_t k = 0; k < required.size(); ++k) {
        REQUIRE(out.required_index[k] >= 0);
        CHECK(out.elements[(std::size_t)out.required_index[k]] == required[k]);
    }

    // Witness expressions must re-evaluate to the witnessed elements.
    const std::vector<std::string> names = {"alpha", "beta", "gamma", "delta"};
    std::vector<std::uint32_t> widx;
    for (auto i : out.required_index) widx.push_back((std::uint32_t)i);
    const Script ws = emit_witness_script(
        "equ", 6, [&](std::uint32_t i) { return LatticeValue(dom.unpack(out.elements[i])); },
        out.parents, names, widx);
    const ReplayReport rep = replay(ws);
    CHECK(rep.pass);
    // The last |widx| bindings correspond to... not guaranteed; instead check
    // that every required element appears among the replayed values.
    std::set<Partition> vals;
    for (const auto& [name, v] : rep.values) vals.insert(std::get<Partition>(v));
    for (const auto& p : required_parts) CHECK(vals.count(p) == 1);
}

TEST_CASE("witness expressions match direct evaluation") {
    PackedEquDomain dom(6);
    const auto gens = pack_all(dom, base6().generators());
    const auto out = close_sublattice(dom, std::span<const std::uint64_t>(gens),
                                      ClosureTarget<std::uint64_t>::fixpoint());
    const std::vector<std::string> names = {"a", "b", "c", "d"};
    std::map<std::string, LatticeValue> env;
    for (std::size_t i = 0; i < 4; ++i) env.emplace(names[i], dom.unpack(gens[i]));
    std::mt19937_64 rng(51);
    std::uniform_int_distribution<std::uint32_t> d(0, (std::uint32_t)out.elements.size() - 1);
    for (int rep = 0; rep < 20; ++rep) {
        const std::uint32_t idx = d(rng);
        const std::string text = witness_expression(out.parents, names, idx);
        // Parse via a one-step throwaway script.
        std::string stext = "kind equ\nn=6\n";
        for (std::size_t i = 0; i < 4; ++i)
            stext += "gen " + names[i] + " = " + format_partition_eq(dom.unpack(gens[i])) + "\n";
        stext += "w := " + text + "\n";
        const Script s = parse_script(stext);
        const ReplayReport r = replay(s);
        REQUIRE(r.pass);
        CHECK(std::get<Partition>(r.values.back().second) == dom.unpack(out.elements[idx]));
    }
}

TEST_CASE("closure agrees with the value-type domain") {
    // Same generators through PackedEquDomain and EquDomain must give the
    // same element sets (orders coincide too since hashing differs only
    // in table layout... order is not guaranteed across domains, compare sets).
    const auto gens_p = base6().generators();
    PackedEquDomain pdom(6);
    EquDomain vdom(6);
    const auto packed = pack_all(pdom, gens_p);
    const auto a = close_sublattice(pdom, std::span<const std::uint64_t>(packed),
                                    ClosureTarget<std::uint64_t>::fixpoint());
    const auto b = close_sublattice(vdom, std::span<const Partition>(gens_p),
                                    ClosureTarget<Partition>::fixpoint());
    std::set<Partition> sa, sb(b.elements.begin(), b.elements.end());
    for (auto e : a.elements) sa.insert(pdom.unpack(e));
    CHECK(sa == sb);
}
