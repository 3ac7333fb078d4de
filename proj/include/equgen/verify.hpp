#ifndef EQUGEN_VERIFY_HPP
#define EQUGEN_VERIFY_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "equgen/closure.hpp"
#include "equgen/script.hpp"

#include "json.hpp"

namespace equgen {

struct CertWitness {
    std::string target; // element text
    std::string expr;   // derivation in the script DSL
};

/// Outcome of a generated-sublattice run or of a certificate check.
struct ClosureCertificate {
    std::string mode; // full-closure | cycle-atom-certificate | kulin-certificate
    std::string kind; // equ | quo
    int n = 1;
    std::vector<std::string> generators;
    std::uint64_t generated_count = 0;
    bool verdict = false;
    std::vector<CertWitness> witnesses;
    ClosureStats stats;
    /// The derivation chain backing a certificate verdict, when one was
    /// used (empty otherwise); replayable with the script tools.
    std::string chain_script;
};

/// Timing lives in a single field so consumers can compare documents
/// with it stripped.
nlohmann::ordered_json certificate_to_json(const ClosureCertificate& c);

/// Reconstructs the derivation expression of elements[idx] from the
/// parent DAG, over the given generator names.
std::string witness_expression(const std::vector<Provenance>& parents,
                               const std::vector<std::string>& gen_names, std::uint32_t idx);

/// Converts recorded closure witnesses into a replayable script: one step
/// per ancestor of a witnessed element, in derivation order.  element_at
/// maps a closure index to its value, so callers only materialize the
/// ancestors that actually appear.
Script emit_witness_script(const std::string& kind, int n,
                           const std::function<LatticeValue(std::uint32_t)>& element_at,
                           const std::vector<Provenance>& parents,
                           const std::vector<std::string>& gen_names,
                           const std::vector<std::uint32_t>& witness_indices);

enum class EquVerifyMode { full, certificate };
enum class QuoVerifyMode { full, cycle, kulin };

/// Derivation chain + the spanning cycle its atoms follow, produced by
/// the construction routines.  `atom_steps[j]` names the binding whose
/// value is the atom collapsing cycle[j] and cycle[(j+1) % n].
struct CertificateChain {
    Script chain;
    std::vector<int> cycle;
    std::vector<std::string> atom_steps;
};

/// full: the generated sublattice must contain every partition of the
/// n-set (refused for n > 13).  Without a chain this runs the closure
/// worklist until the element count reaches the Bell number; with a
/// chain, the chain is validated first and the count is then taken by
/// enumerating the lattice, checking that every partition is a join of
/// atoms already proven to lie in the sublattice (feasible at sizes the
/// quadratic worklist cannot reach).  certificate: all atoms along a
/// spanning cycle must appear in the generated sublattice; generation
/// then follows from the cycle-atom rule.  Without a chain, certificate
/// mode runs the closure worklist with a contains-all target; with a
/// chain, it replays the chain and checks the named atom steps.
ClosureCertificate verify_generates_equ(const std::vector<Partition>& generators,
                                        EquVerifyMode mode, const ClosureOptions& opt = {},
                                        const CertificateChain* chain = nullptr);

/// full: compare against the brute-force quasiorder enumeration (n <= 4).
/// cycle: both directed atoms along a spanning cycle.  kulin: all
/// equivalence cycle atoms (as symmetric elements) plus an asymmetric
/// generator; generation then follows from the sublattice-of-Quo rule.
ClosureCertificate verify_generates_quo(const std::vector<Quasiorder>& generators,
                                        QuoVerifyMode mode, const ClosureOptions& opt = {},
                                        const CertificateChain* chain = nullptr);

/// Number of quasiorders on an n-set, by enumeration (n <= 5, cached).
std::uint64_t quasiorder_count(int n);

} // namespace equgen

#endif
