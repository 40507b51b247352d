#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lndkit/polymap.hpp"
#include "lndkit/polynomial.hpp"

namespace lndkit {

class MonomialOrder {
public:
    enum class Kind { Grevlex, Lex, BlockElimination };

    static MonomialOrder grevlex() { return MonomialOrder(Kind::Grevlex, {}); }
    static MonomialOrder lex() { return MonomialOrder(Kind::Lex, {}); }
    // Front block (mask true) compared first under grevlex, then the rest under grevlex.
    static MonomialOrder block(std::vector<bool> front) {
        return MonomialOrder(Kind::BlockElimination, std::move(front));
    }

    Kind kind() const noexcept { return kind_; }
    const std::vector<bool>& front() const noexcept { return front_; }
    int compare(const Monomial& a, const Monomial& b) const;
    std::string name(const RingContext& ring) const;

private:
    MonomialOrder(Kind kind, std::vector<bool> front) : kind_(kind), front_(std::move(front)) {}

    Kind kind_;
    std::vector<bool> front_;
};

struct GroebnerConfig {
    std::size_t max_pair_reductions = 200000;
};

class GroebnerBasis {
public:
    GroebnerBasis(Ring ring, MonomialOrder order, std::vector<Polynomial> generators);

    const Ring& ring() const noexcept { return ring_; }
    const MonomialOrder& order() const noexcept { return order_; }
    // Reduced, monic, sorted by increasing leading monomial.
    const std::vector<Polynomial>& generators() const noexcept { return gens_; }
    const std::vector<Monomial>& leading_monomials() const noexcept { return leads_; }

    bool is_unit() const;
    bool is_zero_ideal() const noexcept { return gens_.empty(); }
    Polynomial normal_form(const Polynomial& p) const;
    bool contains(const Polynomial& p) const { return normal_form(p).is_zero(); }

private:
    Ring ring_;
    MonomialOrder order_;
    std::vector<Polynomial> gens_;
    std::vector<Monomial> leads_;
};

// The leading monomial of p under `order`; p nonzero.
Monomial leading_monomial(const Polynomial& p, const MonomialOrder& order);

// Buchberger with the coprime and chain criteria, normal selection strategy.
// Throws ResourceExhausted when more than cfg.max_pair_reductions S-pairs are reduced.
GroebnerBasis groebner(std::span<const Polynomial> gens, const MonomialOrder& order,
                       const GroebnerConfig& cfg = {});
Polynomial normal_form(const Polynomial& p, const GroebnerBasis& G);

bool ideal_membership(const Polynomial& p, std::span<const Polynomial> gens, const GroebnerConfig& cfg = {});
// 1 in (gens, 1 - z p) with z a fresh variable.
bool radical_membership(const Polynomial& p, std::span<const Polynomial> gens, const GroebnerConfig& cfg = {});

// Generators of (gens) intersected with Q[keep], expressed in the original ring.
std::vector<Polynomial> elimination_ideal(std::span<const Polynomial> gens, const std::vector<bool>& keep,
                                          const GroebnerConfig& cfg = {});

// Krull dimension of the quotient ring; -1 for the unit ideal.
int dimension(const GroebnerBasis& G);

// A with A(F) = R, as a polynomial in F's tag ring, when R lies in Q[F].
std::optional<Polynomial> subalgebra_membership(const Polynomial& R, const PolyMap& F,
                                                const GroebnerConfig& cfg = {});

struct EDivision {
    Polynomial A;  // over the tag ring
    Polynomial S;  // over the source ring
};

// R = A(F) + P(F) S when R lies in Q[F] + (P(F)); A is the graph-ideal normal form.
// Throws InternalFault when A is found but R - A(F) is not divisible by P(F).
std::optional<EDivision> e_divide(const Polynomial& R, const Polynomial& P, const PolyMap& F,
                                  const GroebnerConfig& cfg = {});

// Drop the variables outside `keep_ring` from polynomials that only involve them.
Polynomial restrict_to(const Polynomial& p, const Ring& keep_ring);

}  // namespace lndkit
