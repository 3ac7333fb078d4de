#ifndef EQUGEN_CONSTRUCTIONS_HPP
#define EQUGEN_CONSTRUCTIONS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "equgen/verify.hpp"

namespace equgen {

/// Requested size is outside what the consecutive-block-count
/// construction supports (n must be 6 or at least 8).
class unsupported_size_error : public std::invalid_argument {
public:
    explicit unsupported_size_error(const std::string& msg) : std::invalid_argument(msg) {}
};

/// A tuple (n; alpha, beta, gamma, delta; u, v) together with its
/// verification flags.  Eligibility means: the four partitions generate
/// the whole lattice and the pairs (alpha,delta),
/// (beta, gamma+at(u,v)), (beta+at(u,v), gamma) are complementary.
struct EligibleSystem {
    int n = 1;
    Partition alpha{1}, beta{1}, gamma{1}, delta{1};
    int u = 0, v = 1;
    bool complementarity_ok = false;
    bool generation_ok = false;
    std::string generation_mode; // "", "full", or "certificate"

    std::vector<Partition> generators() const { return {alpha, beta, gamma, delta}; }
};

/// A generating set with bookkeeping: sorted block counts (for the
/// consecutive-count constructions) and a human-readable construction
/// trace.
struct GeneratorSet {
    int n = 1;
    std::string kind = "equ"; // equ | quo
    std::vector<Partition> equ_gens;
    std::vector<Quasiorder> quo_gens;
    std::vector<int> block_counts; // sorted; empty for quo sets
    std::vector<std::string> provenance;
};

std::string format_generator_set(const GeneratorSet& gs);
GeneratorSet parse_generator_set(const std::string& text);

/// The two base eligible systems with consecutive block counts
/// (flags unset; use check_eligible to set them).
EligibleSystem base6();
EligibleSystem base9();

/// Derivation chains witnessing that the base systems generate: every
/// step is a meet or join of generators and earlier steps, and the
/// named atom steps cover a spanning cycle.
CertificateChain base6_chain();
CertificateChain base9_chain();

/// The verbatim script texts behind base6_chain/base9_chain; also
/// shipped as fixture files.
const std::string& base6_chain_text();
const std::string& base9_chain_text();

/// The two-point extension: appends fresh elements u' = n, v' = n+1,
/// sets alpha' = emb(alpha)+at(u,u'), beta' = emb(beta)+at(u,v'),
/// gamma' = emb(gamma)+at(v,v'), delta' = emb(delta)+at(u',v'), and
/// returns (n+2; ...; u', v').  Every block count grows by exactly 1.
/// Requires the input's complementarity flag (eligibility of the result
/// rests on the input being eligible).
EligibleSystem extend_step(const EligibleSystem& es);

/// Extends a derivation chain along extend_step: the old chain is
/// replayed inside the extended lattice (generators become kappa-meets),
/// the four linking atoms are derived by the extension recipe, and the
/// spanning cycle grows by u', v'.
CertificateChain extend_chain(const EligibleSystem& es, const CertificateChain& chain);

enum class EligibleCheckMode { complementarity, full, certificate };

/// Returns a copy of es with the requested flags computed.  full and
/// certificate modes also imply the complementarity check.  chain, when
/// given, backs certificate mode.
EligibleSystem check_eligible(const EligibleSystem& es, EligibleCheckMode mode,
                              const ClosureOptions& opt = {},
                              const CertificateChain* chain = nullptr);

/// Four-element generating set of the size-n equivalence lattice with
/// consecutive block counts: base6/base9 plus (n-6)/2 or (n-9)/2
/// extension steps.  Throws unsupported_size_error for n in {1,...,5,7}.
GeneratorSet construct_consecutive(int n);

/// Same construction, returning the eligible system and its derivation
/// chain (for certificate verification at sizes where full closure is
/// out of reach).
struct ConsecutiveConstruction {
    EligibleSystem system;
    CertificateChain chain;
};
ConsecutiveConstruction construct_consecutive_system(int n);

/// Zádori's generating set for odd n = 2k+1 >= 5 on elements
/// a_0..a_k -> 0..k, b_0..b_{k-1} -> k+1..2k: alpha = the two rows,
/// beta = the verticals (a_i,b_i), gamma = the slants (b_i,a_{i+1}),
/// delta = at(a_0,b_0) + at(a_k,b_{k-1}).
GeneratorSet zadori(int n);

/// The right-going sequences rho, rho', rho'' and their left-going
/// (beta/gamma-swapped) duals lam, lam', lam'', indices 0..k-1.
struct ZadoriSequences {
    int n = 5, k = 2;
    std::vector<Partition> rho, rho1, rho2, lam, lam1, lam2;
};
ZadoriSequences zadori_sequences(int n);

/// Derivation chain for zadori(n): the sequence recurrences followed by
/// the cycle atoms a_0,...,a_k,b_{k-1},...,b_0.
CertificateChain zadori_chain(int n);

/// The six-quasiorder generating set of the size-19 quasiorder lattice:
/// directed row/vertical relations alpha, beta with their inverses,
/// the undirected slants gamma, and the equivalence delta = at(a_0,b_0).
std::vector<Quasiorder> mc95_system();

/// Derivation chain for mc95_system: the thirteen opening steps, the
/// rightward continuation, and both directed atoms along the spanning
/// cycle a_0..a_9,b_8..b_0.
CertificateChain mc95_chain();
const std::string& mc95_chain_text();

/// Four quasiorders generating the size-19 quasiorder lattice:
/// Zádori's alpha, beta, gamma as symmetric quasiorders plus
/// delta + qu(a_1, a_2).
GeneratorSet quo_four_gen();

/// Chain backing the quo_four_gen verdict: Zádori's chain replayed in
/// the quasiorder lattice (the directed delta extension never meets a
/// step that uses delta), yielding the symmetric cycle atoms.
CertificateChain quo_four_gen_chain();

/// Exhaustive search for four-element generating sets with consecutive
/// block counts, up to base-set permutation (3 <= n <= 7).  Tuples are
/// canonicalized to the lexicographically least concatenated encoding
/// under all permutations, enumerated per block-count window via a
/// stabilizer chain.
struct SearchOptions {
    double time_limit_s = 120.0;
    int threads = 0; // 0 = library default
};
struct SearchReport {
    int n = 3;
    bool exhaustive = true;
    std::uint64_t orbits_examined = 0;
    std::uint64_t candidates_verified = 0;
    double elapsed_s = 0.0;
    std::vector<GeneratorSet> found; // canonical representatives
};
SearchReport search_consecutive(int n, const SearchOptions& opt = {});

/// Canonical form of a 4-tuple: the lexicographically least
/// permutation image of the concatenated encodings (brute force; used
/// to compare search results with known tuples).
std::vector<Partition> canonical_tuple(const std::vector<Partition>& tuple);

} // namespace equgen

#endif
