#include "lndkit/ideals.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <utility>

namespace lndkit {

// ---------------------------------------------------------------------------
// Monomial orders

namespace {

int grevlex_on(const Monomial& a, const Monomial& b, const std::vector<bool>& mask, bool want) {
    std::uint64_t da = 0, db = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (mask[i] != want) continue;
        da += a[i];
        db += b[i];
    }
    if (da != db) return da < db ? -1 : 1;
    for (std::size_t i = a.size(); i-- > 0;) {
        if (mask[i] != want) continue;
        if (a[i] != b[i]) return a[i] < b[i] ? 1 : -1;
    }
    return 0;
}

}  // namespace

int MonomialOrder::compare(const Monomial& a, const Monomial& b) const {
    switch (kind_) {
        case Kind::Grevlex:
            return grevlex_compare(a, b);
        case Kind::Lex:
            for (std::size_t i = 0; i < a.size(); ++i)
                if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
            return 0;
        case Kind::BlockElimination: {
            if (front_.size() != a.size()) throw DimensionMismatch("block order mask length");
            if (int c = grevlex_on(a, b, front_, true)) return c;
            return grevlex_on(a, b, front_, false);
        }
    }
    return 0;
}

std::string MonomialOrder::name(const RingContext& ring) const {
    switch (kind_) {
        case Kind::Grevlex:
            return "grevlex";
        case Kind::Lex:
            return "lex";
        case Kind::BlockElimination: {
            std::string s = "elim(";
            bool first = true;
            for (std::size_t i = 0; i < front_.size(); ++i) {
                if (!front_[i]) continue;
                if (!first) s += ",";
                first = false;
                s += ring.name(i);
            }
            return s + ")";
        }
    }
    return "";
}

Monomial leading_monomial(const Polynomial& p, const MonomialOrder& order) {
    if (p.is_zero()) throw InputError("leading monomial of zero polynomial");
    const Monomial* best = nullptr;
    for (const auto& [m, c] : p.terms())
        if (!best || order.compare(m, *best) > 0) best = &m;
    return *best;
}

// ---------------------------------------------------------------------------
// Internal ordered representation

namespace {

struct OrderGreater {
    const MonomialOrder* order;
    bool operator()(const Monomial& a, const Monomial& b) const { return order->compare(a, b) > 0; }
};

using Term = std::pair<Monomial, Rational>;

// Terms sorted by decreasing monomial under the active order.
struct OPoly {
    std::vector<Term> terms;

    bool zero() const { return terms.empty(); }
    const Monomial& lead() const { return terms.front().first; }
};

OPoly to_ordered(const Polynomial& p, const MonomialOrder& order) {
    OPoly r;
    r.terms.assign(p.terms().begin(), p.terms().end());
    std::sort(r.terms.begin(), r.terms.end(),
              [&](const Term& a, const Term& b) { return order.compare(a.first, b.first) > 0; });
    return r;
}

Polynomial from_ordered(const OPoly& p, const Ring& ring) {
    Polynomial r(ring);
    for (const auto& [m, c] : p.terms) r.add_term(m, c);
    return r;
}

void make_monic(OPoly& p) {
    if (p.zero()) return;
    Rational inv = 1 / p.terms.front().second;
    for (auto& t : p.terms) t.second *= inv;
}

// Full reduction of p by `basis` (all monic).  When skip is set, that
// element of the basis is not used as a reducer.
OPoly reduce(const OPoly& p, const std::vector<OPoly>& basis, const MonomialOrder& order,
             std::optional<std::size_t> skip = std::nullopt) {
    std::map<Monomial, Rational, OrderGreater> acc(OrderGreater{&order});
    for (const auto& t : p.terms) acc.emplace(t.first, t.second);
    OPoly out;
    while (!acc.empty()) {
        auto it = acc.begin();
        const Monomial& m = it->first;
        const OPoly* reducer = nullptr;
        for (std::size_t k = 0; k < basis.size(); ++k) {
            if (skip && *skip == k) continue;
            if (!basis[k].zero() && basis[k].lead().divides(m)) {
                reducer = &basis[k];
                break;
            }
        }
        if (!reducer) {
            out.terms.emplace_back(it->first, it->second);
            acc.erase(it);
            continue;
        }
        Monomial shift = m / reducer->lead();
        Rational factor = it->second;
        acc.erase(it);
        for (std::size_t k = 1; k < reducer->terms.size(); ++k) {
            const auto& [rm, rc] = reducer->terms[k];
            Monomial target = rm * shift;
            auto [pos, inserted] = acc.try_emplace(target, -factor * rc);
            if (!inserted) {
                pos->second -= factor * rc;
                if (pos->second == 0) acc.erase(pos);
            }
        }
    }
    return out;
}

OPoly s_polynomial(const OPoly& f, const OPoly& g, const MonomialOrder& order) {
    Monomial l = Monomial::lcm(f.lead(), g.lead());
    Monomial uf = l / f.lead();
    Monomial ug = l / g.lead();
    std::map<Monomial, Rational, OrderGreater> acc(OrderGreater{&order});
    for (std::size_t k = 1; k < f.terms.size(); ++k) acc[f.terms[k].first * uf] += f.terms[k].second;
    for (std::size_t k = 1; k < g.terms.size(); ++k) acc[g.terms[k].first * ug] -= g.terms[k].second;
    OPoly r;
    for (auto& [m, c] : acc)
        if (c != 0) r.terms.emplace_back(m, c);
    return r;
}

struct PendingPair {
    Monomial lcm;
    std::size_t i, j;
};

}  // namespace

// ---------------------------------------------------------------------------
// GroebnerBasis

GroebnerBasis::GroebnerBasis(Ring ring, MonomialOrder order, std::vector<Polynomial> generators)
    : ring_(std::move(ring)), order_(std::move(order)), gens_(std::move(generators)) {
    for (const auto& g : gens_) leads_.push_back(leading_monomial(g, order_));
}

bool GroebnerBasis::is_unit() const {
    return gens_.size() == 1 && gens_.front().is_constant() && !gens_.front().is_zero();
}

Polynomial GroebnerBasis::normal_form(const Polynomial& p) const {
    if (!same_ring(p.ring(), ring_)) throw ContextMismatch("normal_form");
    std::vector<OPoly> basis;
    basis.reserve(gens_.size());
    for (const auto& g : gens_) basis.push_back(to_ordered(g, order_));
    return from_ordered(reduce(to_ordered(p, order_), basis, order_), ring_);
}

Polynomial normal_form(const Polynomial& p, const GroebnerBasis& G) { return G.normal_form(p); }

GroebnerBasis groebner(std::span<const Polynomial> gens, const MonomialOrder& order, const GroebnerConfig& cfg) {
    if (gens.empty()) throw InputError("groebner: empty generator list");
    Ring ring = gens.front().ring();
    for (const auto& g : gens)
        if (!same_ring(g.ring(), ring)) throw ContextMismatch("groebner generators");
    if (order.kind() == MonomialOrder::Kind::BlockElimination && order.front().size() != ring->size())
        throw DimensionMismatch("block order mask length differs from ring size");

    std::vector<OPoly> basis;
    for (const auto& g : gens) {
        if (g.is_zero()) continue;
        OPoly o = to_ordered(g, order);
        make_monic(o);
        basis.push_back(std::move(o));
    }
    if (basis.empty()) return GroebnerBasis(ring, order, {});

    auto pair_less = [&order](const PendingPair& a, const PendingPair& b) {
        if (int c = order.compare(a.lcm, b.lcm)) return c < 0;
        if (a.j != b.j) return a.j < b.j;
        return a.i < b.i;
    };
    std::set<PendingPair, decltype(pair_less)> queue(pair_less);
    std::set<std::pair<std::size_t, std::size_t>> pending;

    auto add_pairs_for = [&](std::size_t k) {
        for (std::size_t i = 0; i < k; ++i) {
            if (basis[i].zero()) continue;
            if (Monomial::coprime(basis[i].lead(), basis[k].lead())) continue;
            queue.insert({Monomial::lcm(basis[i].lead(), basis[k].lead()), i, k});
            pending.emplace(i, k);
        }
    };
    auto is_pending = [&](std::size_t a, std::size_t b) {
        return pending.count({std::min(a, b), std::max(a, b)}) != 0;
    };

    for (std::size_t k = 0; k < basis.size(); ++k) add_pairs_for(k);

    std::size_t reductions = 0;
    bool unit = std::any_of(basis.begin(), basis.end(), [](const OPoly& p) { return p.lead().is_one(); });
    while (!queue.empty() && !unit) {
        PendingPair pr = *queue.begin();
        queue.erase(queue.begin());
        pending.erase({pr.i, pr.j});

        bool chain = false;
        for (std::size_t k = 0; k < basis.size() && !chain; ++k) {
            if (k == pr.i || k == pr.j || basis[k].zero()) continue;
            if (basis[k].lead().divides(pr.lcm) && !is_pending(pr.i, k) && !is_pending(pr.j, k)) chain = true;
        }
        if (chain) continue;

        if (++reductions > cfg.max_pair_reductions)
            throw ResourceExhausted("Groebner basis needed more than " + std::to_string(cfg.max_pair_reductions) +
                                    " S-pair reductions");
        OPoly h = reduce(s_polynomial(basis[pr.i], basis[pr.j], order), basis, order);
        if (h.zero()) continue;
        make_monic(h);
        if (h.lead().is_one()) unit = true;
        basis.push_back(std::move(h));
        add_pairs_for(basis.size() - 1);
    }

    if (unit) return GroebnerBasis(ring, order, {Polynomial(ring, 1)});

    // Minimal basis: drop elements whose leading monomial is divisible by another's.
    std::vector<OPoly> minimal;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        bool redundant = false;
        for (std::size_t j = 0; j < basis.size() && !redundant; ++j) {
            if (i == j) continue;
            if (basis[j].lead().divides(basis[i].lead())) {
                // For equal leads keep the earliest.
                redundant = !(basis[j].lead() == basis[i].lead()) || j < i;
            }
        }
        if (!redundant) minimal.push_back(basis[i]);
    }
    // Interreduce tails.
    for (std::size_t i = 0; i < minimal.size(); ++i) {
        OPoly r = reduce(minimal[i], minimal, order, i);
        make_monic(r);
        minimal[i] = std::move(r);
    }
    std::sort(minimal.begin(), minimal.end(),
              [&](const OPoly& a, const OPoly& b) { return order.compare(a.lead(), b.lead()) < 0; });
    std::vector<Polynomial> out;
    for (const auto& p : minimal) out.push_back(from_ordered(p, ring));
    return GroebnerBasis(ring, order, std::move(out));
}

// ---------------------------------------------------------------------------
// Decisions built on bases

bool ideal_membership(const Polynomial& p, std::span<const Polynomial> gens, const GroebnerConfig& cfg) {
    if (gens.empty()) return p.is_zero();
    return groebner(gens, MonomialOrder::grevlex(), cfg).contains(p);
}

bool radical_membership(const Polynomial& p, std::span<const Polynomial> gens, const GroebnerConfig& cfg) {
    const Ring& ring = p.ring();
    std::vector<std::string> names = ring->names();
    names.push_back(fresh_name(ring, "z"));
    Ring ext = make_ring(names);
    std::vector<Polynomial> ext_gens;
    for (const auto& g : gens) {
        if (!same_ring(g.ring(), ring)) throw ContextMismatch("radical_membership");
        ext_gens.push_back(rebase(g, ext));
    }
    Polynomial z = Polynomial::variable(ext, ext->size() - 1);
    ext_gens.push_back(Polynomial(ext, 1) - z * rebase(p, ext));
    return groebner(ext_gens, MonomialOrder::grevlex(), cfg).is_unit();
}

std::vector<Polynomial> elimination_ideal(std::span<const Polynomial> gens, const std::vector<bool>& keep,
                                          const GroebnerConfig& cfg) {
    if (gens.empty()) return {};
    const Ring& ring = gens.front().ring();
    if (keep.size() != ring->size()) throw DimensionMismatch("elimination keep-mask length");
    std::vector<bool> front(keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i) front[i] = !keep[i];
    GroebnerBasis G = groebner(gens, MonomialOrder::block(front), cfg);
    std::vector<Polynomial> out;
    for (const auto& g : G.generators()) {
        auto sup = g.support_variables();
        bool inside = true;
        for (std::size_t i = 0; i < sup.size(); ++i)
            if (sup[i] && !keep[i]) inside = false;
        if (inside) out.push_back(g);
    }
    return out;
}

int dimension(const GroebnerBasis& G) {
    std::size_t n = G.ring()->size();
    if (G.is_unit()) return -1;
    if (G.is_zero_ideal()) return static_cast<int>(n);
    const auto& leads = G.leading_monomials();
    int best = 0;
    // Largest set U of variables with no leading monomial supported inside U.
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        int size = __builtin_popcountll(mask);
        if (size <= best) continue;
        bool independent = true;
        for (const auto& m : leads) {
            bool inside = true;
            for (std::size_t i = 0; i < n && inside; ++i)
                if (m[i] && !(mask >> i & 1u)) inside = false;
            if (inside) {
                independent = false;
                break;
            }
        }
        if (independent) best = size;
    }
    return best;
}

Polynomial restrict_to(const Polynomial& p, const Ring& keep_ring) { return rebase(p, keep_ring); }

namespace {

bool only_tags(const Polynomial& p, std::size_t nsource) {
    auto sup = p.support_variables();
    for (std::size_t i = 0; i < nsource; ++i)
        if (sup[i]) return false;
    return true;
}

}  // namespace

std::optional<Polynomial> subalgebra_membership(const Polynomial& R, const PolyMap& F, const GroebnerConfig& cfg) {
    if (!same_ring(R.ring(), F.source())) throw ContextMismatch("subalgebra_membership");
    auto gens = F.graph_ideal();
    GroebnerBasis G = groebner(gens, MonomialOrder::block(F.source_mask()), cfg);
    Polynomial nf = G.normal_form(rebase(R, F.graph_ring()));
    if (!only_tags(nf, F.source()->size())) return std::nullopt;
    return restrict_to(nf, F.tags());
}

std::optional<EDivision> e_divide(const Polynomial& R, const Polynomial& P, const PolyMap& F,
                                  const GroebnerConfig& cfg) {
    if (!same_ring(R.ring(), F.source())) throw ContextMismatch("e_divide: R");
    if (!same_ring(P.ring(), F.tags())) throw ContextMismatch("e_divide: P must be over the tag ring");
    if (P.is_zero()) throw DivisionByZero();
    auto gens = F.graph_ideal();
    gens.push_back(rebase(P, F.graph_ring()));
    GroebnerBasis G = groebner(gens, MonomialOrder::block(F.source_mask()), cfg);
    Polynomial nf = G.normal_form(rebase(R, F.graph_ring()));
    if (!only_tags(nf, F.source()->size())) return std::nullopt;
    Polynomial A = restrict_to(nf, F.tags());
    Polynomial rest = R - F.pullback(A);
    auto S = try_divide(rest, F.pullback(P));
    if (!S)
        throw InternalFault("e_divide: normal form " + A.to_string() + " found but R - A(F) is not divisible by P(F)");
    return EDivision{A, *S};
}

}  // namespace lndkit
