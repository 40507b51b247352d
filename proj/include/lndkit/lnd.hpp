#pragma once

// Derivations of Q[x_1..x_n], commuting families of locally nilpotent ones,
// and the operators built from them.
//
// A derivation is determined by the images of the variables: by Leibniz,
// d(x^a) = sum_j a_j x^(a - e_j) d(x_j).  The same remark is why nilpotency
// and commutation are only checked on variables: if d^k(x_j) = 0 for all j
// then every monomial is killed by a finite power of d, and [a, b] vanishes
// on all of Q[x] once it vanishes on the generators.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lndkit/errors.hpp"
#include "lndkit/ideals.hpp"
#include "lndkit/polymap.hpp"
#include "lndkit/polynomial.hpp"

namespace lndkit {

class Derivation {
public:
    Derivation(Ring ring, std::vector<Polynomial> images);
    static Derivation zero(Ring ring);
    // d/dx_i
    static Derivation partial(Ring ring, std::size_t i);

    const Ring& ring() const noexcept { return ring_; }
    const std::vector<Polynomial>& images() const noexcept { return images_; }
    const Polynomial& image(std::size_t i) const { return images_.at(i); }
    bool is_zero() const;

    Polynomial apply(const Polynomial& p) const;
    Polynomial apply_power(const Polynomial& p, unsigned k) const;
    // Same derivation on a ring containing this ring's variables (matched by name);
    // the extra variables are treated as constants.
    Derivation extend_to(const Ring& bigger) const;

    // "x: 0; y: x; z: -2*y"
    std::string to_string() const;

private:
    Ring ring_;
    std::vector<Polynomial> images_;
};

Derivation bracket(const Derivation& a, const Derivation& b);
bool commutes(const Derivation& a, const Derivation& b);

struct NilpotencyReport {
    bool nilpotent = false;
    // orders[j] = least k with d^k(x_j) = 0; filled only when nilpotent.
    std::vector<unsigned> orders;
    // When not nilpotent: the first variable still alive after `bound` steps and its iterate.
    std::optional<std::size_t> witness_variable;
    std::optional<Polynomial> witness;
};

NilpotencyReport is_locally_nilpotent(const Derivation& d, unsigned bound = 256);

// An ordered family of derivations with the outcome of the commuting and
// nilpotency checks.  Flags are set only by certify().
class Distribution {
public:
    static Distribution certify(std::vector<Derivation> derivations, unsigned nilpotency_bound = 256);

    const Ring& ring() const noexcept { return ring_; }
    std::size_t size() const noexcept { return derivations_.size(); }
    const std::vector<Derivation>& derivations() const noexcept { return derivations_; }
    const Derivation& operator[](std::size_t i) const { return derivations_.at(i); }
    bool certified_commuting() const noexcept { return commuting_; }
    bool certified_lnd() const noexcept { return lnd_; }
    bool certified() const noexcept { return commuting_ && lnd_; }
    const std::vector<NilpotencyReport>& nilpotency() const noexcept { return nilpotency_; }
    // First non-commuting pair, if any.
    std::optional<std::pair<std::size_t, std::size_t>> non_commuting_pair() const noexcept { return bad_pair_; }

    // Throws Uncertified unless both flags are set.
    void require_certified(const std::string& where) const;

    // Parameters first (t for p = 1, t1..tp otherwise, freshened), then the source variables.
    const Ring& exp_ring() const noexcept { return exp_ring_; }
    std::size_t parameter_count() const noexcept { return derivations_.size(); }

    // True when every derivation kills p.
    bool is_invariant(const Polynomial& p) const;

private:
    Distribution() = default;

    Ring ring_;
    Ring exp_ring_;
    std::vector<Derivation> derivations_;
    std::vector<NilpotencyReport> nilpotency_;
    std::optional<std::pair<std::size_t, std::size_t>> bad_pair_;
    bool commuting_ = false;
    bool lnd_ = false;
};

std::vector<std::string> parameter_names(const Ring& source, std::size_t p);

// exp(t_1 d_1 + ... + t_p d_p)(p) over D.exp_ring().
Polynomial exp(const Distribution& D, const Polynomial& p);
// Images of all variables, as polynomials over D.exp_ring().
std::vector<Polynomial> exp_images(const Distribution& D);
// Total degree in the parameters; nullopt stands for -infinity (p = 0).
std::optional<unsigned> degree_rel(const Distribution& D, const Polynomial& p);
// Print an exp-ring polynomial grouped by ascending parameter degree.
std::string series_string(const Distribution& D, const Polynomial& e);

// det(d_i(R_j)), a p x p determinant.
Polynomial bracket_det(const Distribution& D, std::span<const Polynomial> R);

// Nonzero p x p minors of (d_i(x_j)), made monic, duplicates dropped.
std::vector<Polynomial> nl_locus_ideal(const Distribution& D);

struct LndConfig {
    unsigned nilpotency_bound = 256;
    unsigned slice_pool_degree = 2;
    unsigned random_probes = 8;
    GroebnerConfig groebner;
};

// Raised when the probes contradict [D] = E * J; the inputs violate the
// hypotheses (typically F does not generate the invariants).
class InconsistentProbes : public Error {
public:
    explicit InconsistentProbes(const std::string& what)
        : Error(ErrorCategory::InternalFault, "inconsistent probes: " + what) {}
};

struct ProbeRecord {
    std::vector<Polynomial> R;
    Polynomial bracket;
    Polynomial J;
    bool consistent = true;
};

struct EFactorResult {
    Polynomial E;
    std::size_t used_probe = 0;
    std::vector<ProbeRecord> probes;
    bool probes_consistent = true;
    bool invariant = true;
    // Probes with J != 0 that satisfy the cross identity.
    std::size_t consistent_nonzero_probes() const;
};

// Default pool: every p-subset of the variables, then config.random_probes
// seeded random tuples of low degree.
std::vector<std::vector<Polynomial>> default_probe_pool(const Distribution& D, const LndConfig& config = {});

EFactorResult e_factor(const Distribution& D, const PolyMap& F, const LndConfig& config = {});
EFactorResult e_factor(const Distribution& D, const PolyMap& F, std::span<const std::vector<Polynomial>> probes);

struct SliceSystem {
    std::vector<Polynomial> slices;
    std::vector<Polynomial> multipliers;  // over F.tags(); d_k(s_k) = P_k(F)
};

struct SliceDiagnostic {
    std::size_t k = 0;
    bool found = false;
    std::optional<Polynomial> seed;  // the pool element g
    unsigned order = 0;              // least m with d_k^m(g) = 0
    std::optional<Polynomial> slice;
    std::optional<Polynomial> multiplier;
    std::string note;
};

struct SliceSearch {
    std::optional<SliceSystem> system;
    std::vector<SliceDiagnostic> diagnostics;
};

std::vector<Polynomial> default_slice_pool(const Ring& ring, unsigned degree, std::span<const Polynomial> extra = {});

SliceSearch diagonal_slices(const Distribution& D, const PolyMap& F, std::span<const Polynomial> pool,
                            const LndConfig& config = {});
SliceSearch diagonal_slices(const Distribution& D, const PolyMap& F, const LndConfig& config = {});

}  // namespace lndkit
