#pragma once

// Trivialization of (Q^p, +)-actions given by a distribution D and a map F
// whose components are asserted to generate the invariant ring, plus
// automorphism and conjugation certificates and the decomposition of
// certified relative 1-forms.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lndkit/forms.hpp"
#include "lndkit/ideals.hpp"
#include "lndkit/lnd.hpp"

namespace lndkit {

struct ActionSpec {
    Distribution D;
    PolyMap F;  // n - p components
    // Generation of the invariant ring cannot be checked here; the caller asserts it.
    bool condition_H_asserted = true;
};

struct InvariantProbe {
    Polynomial probe;
    bool invariant = false;
    std::optional<Polynomial> preimage;  // A with A(F) = probe
};

struct ConditionHReport {
    bool dimensions_ok = false;             // q = n - p
    std::vector<bool> component_invariant;  // d_i(f_j) = 0 for every i
    bool algebraically_independent = false;
    std::optional<Polynomial> nonzero_minor;
    std::vector<InvariantProbe> probes;
    bool generation_asserted = false;

    bool all_invariant() const;
    bool probes_in_subalgebra() const;
    bool passed() const;
};

ConditionHReport check_condition_H_partial(const ActionSpec& spec, std::span<const Polynomial> invariant_probes = {},
                                           const GroebnerConfig& cfg = {});

struct Automorphism {
    std::vector<Polynomial> components;
    std::vector<Polynomial> inverse;
    Polynomial jacobian;
};

struct AutomorphismCheck {
    std::optional<Automorphism> automorphism;
    Polynomial jacobian;
    // Empty on success; otherwise "JacobianNotConstant", "InverseNotFound" or "CompositionFailed".
    std::string failure;
    std::optional<std::size_t> failing_component;
};

AutomorphismCheck verify_automorphism(const Ring& ring, std::span<const Polynomial> G, const GroebnerConfig& cfg = {});

struct ConjugationCheck {
    bool holds = false;
    std::optional<std::size_t> failing_component;
};

// G_k(exp(D)(x)) = G_k + t_k for k < p and G_k otherwise, over D.exp_ring().
ConjugationCheck verify_conjugation(std::span<const Polynomial> G, const Distribution& D);

enum class TrivStage { ConditionH, EFactor, Slices, EDivide, IdentityMatrix, Automorphism, Conjugation, Done };
std::string stage_name(TrivStage s);

struct TrivializeResult {
    bool success = false;
    TrivStage stage = TrivStage::ConditionH;  // the failing stage, or Done
    std::string diagnostic;
    ConditionHReport condition_h;
    std::optional<EFactorResult> e_factor;
    std::optional<SliceSearch> slices;
    std::vector<EDivision> divisions;
    std::optional<std::size_t> failed_division;
    bool identity_matrix = false;
    std::vector<Polynomial> G;
    std::optional<AutomorphismCheck> automorphism;
    std::optional<ConjugationCheck> conjugation;
};

// Extra slice candidates are appended to the default pool.
TrivializeResult trivialize(const ActionSpec& spec, std::span<const Polynomial> extra_pool = {},
                            const LndConfig& config = {});

// P(F) omega = dR + sum_i a_i df_i.  Not validated on construction; see ar_certificate_check.
struct ARCertificate {
    DiffForm omega;
    Polynomial P;  // over F.tags()
    Polynomial R;
    std::vector<Polynomial> a;
};

struct ARCheck {
    bool shapes_ok = false;
    bool identity_holds = false;
    bool wedge_condition = false;  // dR ^ omega_F = 0 mod P(F)
    bool valid() const { return shapes_ok && identity_holds && wedge_condition; }
};

ARCheck ar_certificate_check(const ARCertificate& c, const PolyMap& F);

class FormNotDivisible : public Error {
public:
    FormNotDivisible()
        : Error(ErrorCategory::InternalFault, "sum c_k df_k is not divisible by P(F); the certificate is invalid") {}
};

enum class ARStatus { Resolved, NotResolved, EDivisionFailed };
std::string status_name(ARStatus s);

struct ARDecomposition {
    ARStatus status = ARStatus::NotResolved;
    std::optional<Polynomial> A;  // over F.tags()
    std::optional<Polynomial> S;
    std::vector<Polynomial> c;
    std::optional<DiffForm> omega0;
    std::optional<std::vector<Polynomial>> d;  // omega0 = sum d_k df_k
    unsigned degree_bound = 0;
};

// deg_bound = 0 selects deg(omega0) + max deg F + 2.
ARDecomposition ar_exact_decompose(const ARCertificate& c, const PolyMap& F, unsigned deg_bound = 0,
                                   const GroebnerConfig& cfg = {});

// Polynomials d_k of degree <= bound with w = sum d_k df_k, by exact linear algebra.
std::optional<std::vector<Polynomial>> solve_in_differentials(const DiffForm& w, const PolyMap& F, unsigned bound);

}  // namespace lndkit
