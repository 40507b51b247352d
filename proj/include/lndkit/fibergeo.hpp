#pragma once

// Diagnostics on the fibers of a polynomial map F : Q^n -> Q^q.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lndkit/forms.hpp"
#include "lndkit/ideals.hpp"
#include "lndkit/polymap.hpp"

namespace lndkit {

struct SingularLocus {
    std::vector<Polynomial> minors;  // nonzero q-minors of dF, lexicographic column order
    std::vector<Polynomial> basis;   // reduced grevlex basis of the minor ideal
    int dimension = -1;              // -1 when empty
    bool codim1_nonsingular = false; // n - dimension >= 2, or empty
};

SingularLocus singular_ideal(const PolyMap& F, const GroebnerConfig& cfg = {});

// Generators over F.tags() of the ideal of the closure of F(Q^n); empty means dominant.
std::vector<Polynomial> image_closure(const PolyMap& F, const GroebnerConfig& cfg = {});

enum class Connectivity { ConnectedCertified, DisconnectedCertified, Inconclusive };
std::string connectivity_name(Connectivity c);

struct FiberProbe {
    std::vector<Rational> point;
    bool empty = false;
    std::vector<Polynomial> ideal;  // reduced grevlex basis of (f_i - y_i)
    int dimension = -1;
    Connectivity connectivity = Connectivity::Inconclusive;
    // Connected: dependent variables and their expressions in the remaining ones.
    std::vector<std::size_t> dependent;
    std::vector<Polynomial> graph;
    // Disconnected: a univariate member of the ideal and the two coprime pieces.
    std::optional<Polynomial> univariate;
    std::vector<Polynomial> split;
};

FiberProbe fiber_probe(const PolyMap& F, std::span<const Rational> point, const GroebnerConfig& cfg = {});

struct BlowDownCheck {
    Polynomial h;
    bool blowing_down = false;
    std::vector<Polynomial> closure;  // over F.tags()
    int closure_dimension = -1;
    bool irreducibility_asserted = true;  // whether the caller vouches for irreducibility of h
};

BlowDownCheck blowing_down_check(const PolyMap& F, const Polynomial& h, bool irreducibility_asserted = true,
                                 const GroebnerConfig& cfg = {});

// User candidates followed by the nonconstant squarefree-split factors of H
// (those are not known to be irreducible).
std::vector<Polynomial> blowdown_candidates(const PolyMap& F, std::span<const Polynomial> user = {});

struct PrimitivityCandidate {
    Polynomial R;
    bool wedge_zero = false;          // dR ^ omega_F = 0
    std::optional<bool> in_subalgebra;  // only computed when wedge_zero
};

struct PrimitivityProbe {
    std::optional<Polynomial> counterexample;
    std::vector<PrimitivityCandidate> candidates;
};

PrimitivityProbe primitivity_probe(const PolyMap& F, std::span<const Polynomial> candidates,
                                   const GroebnerConfig& cfg = {});

// Coprime factors of a squarefree univariate polynomial in variable `var`:
// rational linear factors, rational quadratic factors of a quartic remainder,
// and whatever is left as one piece.  Each piece is monic.
std::vector<Polynomial> coprime_pieces(const Polynomial& u, std::size_t var);

}  // namespace lndkit
