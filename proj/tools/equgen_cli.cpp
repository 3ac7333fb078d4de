// Command-line front end: construction, verification, closure runs,
// script replay, Zádori's construction, the exhaustive small-n search,
// and the quasiorder demonstration.
//
// Exit codes: 0 verdict/replay pass, 1 verdict false, 2 unsupported
// size, 3 budget exceeded, 4 file or parse error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "equgen/constructions.hpp"

namespace {

using namespace equgen;

constexpr int exit_pass = 0;
constexpr int exit_fail = 1;
constexpr int exit_unsupported = 2;
constexpr int exit_budget = 3;
constexpr int exit_io = 4;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::ios_base::failure("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string pretty(const Partition& p) {
    std::string out = format_partition(p);
    if (p.size() <= 9) out += "  [" + format_partition_eq(p) + "]";
    return out;
}

void print_certificate(const ClosureCertificate& cert, bool json) {
    if (json) {
        std::cout << certificate_to_json(cert).dump(2) << "\n";
        return;
    }
    std::cout << "mode: " << cert.mode << "\n";
    std::cout << "kind: " << cert.kind << ", n=" << cert.n << "\n";
    for (const auto& g : cert.generators) std::cout << "generator: " << g << "\n";
    std::cout << "generated elements: " << cert.generated_count << "\n";
    for (const auto& w : cert.witnesses)
        std::cout << "witness: " << w.target << " = " << w.expr << "\n";
    std::cout << "verdict: " << (cert.verdict ? "true" : "false") << "\n";
}

int finish(const ClosureCertificate& cert) { return cert.verdict ? exit_pass : exit_fail; }

ClosureOptions closure_options(int threads, std::size_t max_elements, double time_limit) {
    ClosureOptions opt;
    if (threads > 0) opt.threads = threads;
    if (max_elements > 0) opt.max_elements = max_elements;
    if (time_limit > 0) opt.time_limit_s = time_limit;
    return opt;
}

std::string fixture_path(const std::string& name) {
    if (const char* env = std::getenv("EQUGEN_FIXTURES"))
        return std::string(env) + "/" + name;
#ifdef EQUGEN_FIXTURE_DIR
    return std::string(EQUGEN_FIXTURE_DIR) + "/" + name;
#else
    return "fixtures/" + name;
#endif
}

int run_replay_text(const std::string& text, bool json) {
    const Script sc = parse_script(text);
    const ReplayReport rep = replay(sc);
    if (json) {
        nlohmann::ordered_json j;
        j["kind"] = sc.kind;
        j["n"] = sc.n;
        j["pass"] = rep.pass;
        nlohmann::ordered_json steps = nlohmann::ordered_json::array();
        for (const auto& st : rep.steps) {
            nlohmann::ordered_json s;
            s["name"] = st.name;
            s["ok"] = st.ok;
            s["computed"] = st.computed;
            if (!st.expected.empty()) s["expected"] = st.expected;
            steps.push_back(std::move(s));
        }
        j["steps"] = steps;
        std::cout << j.dump(2) << "\n";
    } else {
        int checked = 0, failed = 0;
        for (const auto& st : rep.steps) {
            if (st.expected.empty()) continue;
            ++checked;
            if (!st.ok) {
                ++failed;
                std::cout << "FAIL " << st.name << ": computed " << st.computed
                          << ", expected " << st.expected << "\n";
            }
        }
        std::cout << rep.steps.size() << " steps, " << checked << " checked, " << failed
                  << " failed\n";
        std::cout << "replay: " << (rep.pass ? "pass" : "fail") << "\n";
    }
    return rep.pass ? exit_pass : exit_fail;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Four-element generating sets of equivalence lattices with consecutive "
                 "block counts: construction, closure verification, and chain replay"};
    app.require_subcommand(1);

    bool json = false;
    int threads = 0;
    std::size_t max_elements = 0;
    double time_limit = 0;
    app.add_flag("--json", json, "structured output");
    app.add_option("--threads", threads, "closure worker count (0 = default)");
    app.add_option("--max-elements", max_elements, "closure element budget");
    app.add_option("--time-limit", time_limit, "closure wall-clock budget in seconds");

    int n = 0;
    std::string verify_mode = "none";
    std::string out_path, gens_path, script_path, mode;
    bool stats = false;
    double search_limit = 120.0;

    auto* c_construct = app.add_subcommand("construct", "build the consecutive-count set");
    c_construct->add_option("--n", n, "base set size")->required();
    c_construct->add_option("--verify", verify_mode, "full | certificate | none");
    c_construct->add_option("--out", out_path, "write the generator set to this file");

    auto* c_verify = app.add_subcommand("verify", "verify a generator set file");
    c_verify->add_option("--generators", gens_path, "generator set file")->required();
    c_verify->add_option("--mode", mode, "full | certificate")->required();

    auto* c_closure = app.add_subcommand("closure", "run the closure to a fixpoint");
    c_closure->add_option("--generators", gens_path, "generator set file")->required();
    c_closure->add_flag("--stats", stats, "print closure statistics");

    auto* c_replay = app.add_subcommand("replay", "replay a derivation script");
    c_replay->add_option("--script", script_path, "script file")->required();

    auto* c_zadori = app.add_subcommand("zadori", "Zádori's generating set for odd n");
    c_zadori->add_option("--n", n, "odd base set size >= 5")->required();
    c_zadori->add_option("--verify", verify_mode, "full | certificate | none");

    auto* c_search = app.add_subcommand("search", "exhaustive consecutive-count search");
    c_search->add_option("--n", n, "base set size (3..7)")->required();
    c_search->add_option("--search-time-limit", search_limit, "search budget in seconds");

    auto* c_bell = app.add_subcommand("bell", "number of partitions of an n-set");
    c_bell->add_option("--n", n, "base set size")->required();

    app.add_subcommand("quo-demo",
                       "six- and four-element quasiorder generating sets on 19 elements");

    // Let the global options (--json, --threads, budgets) appear after the
    // subcommand name as well as before it.
    for (CLI::App* sc : app.get_subcommands([](const CLI::App*) { return true; }))
        sc->fallthrough();

    CLI11_PARSE(app, argc, argv);
    const std::string cmd = app.get_subcommands().front()->get_name();
    const ClosureOptions opt = closure_options(threads, max_elements, time_limit);

    try {
        if (cmd == "construct") {
            GeneratorSet gs;
            try {
                gs = construct_consecutive(n);
            } catch (const unsupported_size_error& e) {
                std::cerr << "unsupported size: " << e.what() << "\n";
                return exit_unsupported;
            }
            if (!out_path.empty()) {
                std::ofstream out(out_path, std::ios::binary);
                if (!out) throw std::ios_base::failure("cannot write '" + out_path + "'");
                out << format_generator_set(gs);
            }
            if (!json) {
                std::cout << "n=" << gs.n << ", block counts:";
                for (int c : gs.block_counts) std::cout << " " << c;
                std::cout << "\n";
                for (const auto& g : gs.equ_gens) std::cout << pretty(g) << "\n";
            }
            if (verify_mode == "none") {
                if (json) {
                    nlohmann::ordered_json j;
                    j["n"] = gs.n;
                    j["block_counts"] = gs.block_counts;
                    j["generators"] = nlohmann::ordered_json::array();
                    for (const auto& g : gs.equ_gens) j["generators"].push_back(format_partition(g));
                    std::cout << j.dump(2) << "\n";
                }
                return exit_pass;
            }
            ClosureCertificate cert;
            if (verify_mode == "full") {
                cert = verify_generates_equ(gs.equ_gens, EquVerifyMode::full, opt);
            } else {
                const ConsecutiveConstruction cc = construct_consecutive_system(n);
                cert = verify_generates_equ(gs.equ_gens, EquVerifyMode::certificate, opt,
                                            &cc.chain);
            }
            print_certificate(cert, json);
            return finish(cert);
        }

        if (cmd == "verify" || cmd == "closure") {
            const GeneratorSet gs = parse_generator_set(read_file(gens_path));
            if (cmd == "closure") {
                ClosureOptions o = opt;
                o.record_parents = false;
                if (gs.kind == "equ" && gs.n <= PackedEquDomain::max_n) {
                    PackedEquDomain dom(gs.n);
                    std::vector<std::uint64_t> packed;
                    packed.reserve(gs.equ_gens.size());
                    for (const auto& g : gs.equ_gens) packed.push_back(dom.pack(g));
                    const auto res = close_sublattice(
                        dom, std::span<const std::uint64_t>(packed),
                        ClosureTarget<std::uint64_t>::fixpoint(), o);
                    std::cout << "closure size: " << res.elements.size() << "\n";
                    if (stats)
                        std::cout << "rounds: " << res.stats.rounds
                                  << ", elapsed_s: " << res.stats.elapsed_s << "\n";
                } else if (gs.kind == "equ") {
                    EquDomain dom(gs.n);
                    const auto res = close_sublattice(
                        dom, std::span<const Partition>(gs.equ_gens),
                        ClosureTarget<Partition>::fixpoint(), o);
                    std::cout << "closure size: " << res.elements.size() << "\n";
                    if (stats)
                        std::cout << "rounds: " << res.stats.rounds
                                  << ", elapsed_s: " << res.stats.elapsed_s << "\n";
                } else {
                    QuoDomain dom(gs.n);
                    const auto res = close_sublattice(
                        dom, std::span<const Quasiorder>(gs.quo_gens),
                        ClosureTarget<Quasiorder>::fixpoint(), o);
                    std::cout << "closure size: " << res.elements.size() << "\n";
                    if (stats)
                        std::cout << "rounds: " << res.stats.rounds
                                  << ", elapsed_s: " << res.stats.elapsed_s << "\n";
                }
                return exit_pass;
            }
            ClosureCertificate cert;
            if (gs.kind == "equ") {
                cert = verify_generates_equ(
                    gs.equ_gens, mode == "full" ? EquVerifyMode::full : EquVerifyMode::certificate,
                    opt);
            } else {
                cert = verify_generates_quo(
                    gs.quo_gens, mode == "full" ? QuoVerifyMode::full : QuoVerifyMode::cycle,
                    opt);
            }
            print_certificate(cert, json);
            return finish(cert);
        }

        if (cmd == "replay") return run_replay_text(read_file(script_path), json);

        if (cmd == "zadori") {
            GeneratorSet gs;
            try {
                gs = zadori(n);
            } catch (const std::invalid_argument& e) {
                std::cerr << "unsupported size: " << e.what() << "\n";
                return exit_unsupported;
            }
            if (!json)
                for (const auto& g : gs.equ_gens) std::cout << pretty(g) << "\n";
            if (verify_mode == "none") return exit_pass;
            ClosureCertificate cert;
            if (verify_mode == "full") {
                cert = verify_generates_equ(gs.equ_gens, EquVerifyMode::full, opt);
            } else {
                const CertificateChain chain = zadori_chain(n);
                cert = verify_generates_equ(gs.equ_gens, EquVerifyMode::certificate, opt, &chain);
            }
            print_certificate(cert, json);
            return finish(cert);
        }

        if (cmd == "search") {
            SearchOptions sopt;
            sopt.time_limit_s = search_limit;
            sopt.threads = threads;
            SearchReport rep;
            try {
                rep = search_consecutive(n, sopt);
            } catch (const std::invalid_argument& e) {
                std::cerr << "unsupported size: " << e.what() << "\n";
                return exit_unsupported;
            }
            if (json) {
                nlohmann::ordered_json j;
                j["n"] = rep.n;
                j["exhaustive"] = rep.exhaustive;
                j["orbits_examined"] = rep.orbits_examined;
                j["candidates_verified"] = rep.candidates_verified;
                j["found"] = nlohmann::ordered_json::array();
                for (const auto& gs : rep.found) {
                    nlohmann::ordered_json f;
                    f["block_counts"] = gs.block_counts;
                    f["generators"] = nlohmann::ordered_json::array();
                    for (const auto& g : gs.equ_gens) f["generators"].push_back(format_partition(g));
                    j["found"].push_back(std::move(f));
                }
                std::cout << j.dump(2) << "\n";
            } else {
                if (rep.found.empty()) {
                    std::cout << "no generating set; "
                              << (rep.exhaustive ? "exhaustive" : "NOT exhaustive (budget)")
                              << "\n";
                } else {
                    std::cout << rep.found.size() << " generating set(s) up to symmetry; "
                              << (rep.exhaustive ? "exhaustive" : "NOT exhaustive (budget)")
                              << "\n";
                    for (const auto& gs : rep.found) {
                        std::cout << "---\n";
                        for (const auto& g : gs.equ_gens) std::cout << pretty(g) << "\n";
                    }
                }
            }
            return rep.exhaustive ? exit_pass : exit_budget;
        }

        if (cmd == "bell") {
            std::cout << bell(n) << "\n";
            return exit_pass;
        }

        if (cmd == "quo-demo") {
            // 1. The six-quasiorder system and its derivation replay.
            std::string text;
            try {
                text = read_file(fixture_path("mc95.script"));
            } catch (const std::ios_base::failure&) {
                text = mc95_chain_text();
            }
            const int replay_rc = run_replay_text(text, false);
            // 2. The spanning-cycle certificate for the six generators.
            const CertificateChain chain = mc95_chain();
            const ClosureCertificate c6 =
                verify_generates_quo(mc95_system(), QuoVerifyMode::cycle, opt, &chain);
            std::cout << "six-generator cycle certificate: "
                      << (c6.verdict ? "true" : "false") << "\n";
            // 3. The four-quasiorder set via the symmetric-part argument.
            const CertificateChain kchain = quo_four_gen_chain();
            const ClosureCertificate c4 = verify_generates_quo(
                quo_four_gen().quo_gens, QuoVerifyMode::kulin, opt, &kchain);
            std::cout << "four-generator kulin certificate: "
                      << (c4.verdict ? "true" : "false") << "\n";
            return (replay_rc == exit_pass && c6.verdict && c4.verdict) ? exit_pass : exit_fail;
        }
    } catch (const closure_budget_error& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return exit_budget;
    } catch (const parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return exit_io;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return exit_io;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_fail;
    }
    return exit_fail;
}
