#include "lndkit/fibergeo.hpp"

#include <algorithm>
#include <gmpxx.h>

namespace lndkit {

namespace {

DiffForm top_form(const PolyMap& F) {
    std::vector<DiffForm> ds;
    for (const auto& f : F.components()) ds.push_back(differential(f));
    return wedge_all(ds, F.source());
}

bool is_unit_ideal(std::span<const Polynomial> gens, const GroebnerConfig& cfg) {
    return groebner(gens, MonomialOrder::grevlex(), cfg).is_unit();
}

std::vector<bool> tag_mask(const PolyMap& F) {
    auto m = F.source_mask();
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = !m[i];
    return m;
}

std::vector<Polynomial> eliminate_to_tags(std::vector<Polynomial> gens, const PolyMap& F, const GroebnerConfig& cfg) {
    std::vector<Polynomial> out;
    for (const auto& g : elimination_ideal(gens, tag_mask(F), cfg)) out.push_back(restrict_to(g, F.tags()));
    return out;
}

int tag_dimension(const std::vector<Polynomial>& closure, const PolyMap& F, const GroebnerConfig& cfg) {
    if (closure.empty()) return static_cast<int>(F.size());
    return dimension(groebner(closure, MonomialOrder::grevlex(), cfg));
}

}  // namespace

SingularLocus singular_ideal(const PolyMap& F, const GroebnerConfig& cfg) {
    SingularLocus out;
    int n = static_cast<int>(F.source()->size());
    DiffForm top = top_form(F);
    for (const auto& [idx, c] : top.coefficients()) out.minors.push_back(c);
    if (out.minors.empty()) {
        out.dimension = n;
        out.codim1_nonsingular = false;
        return out;
    }
    GroebnerBasis G = groebner(out.minors, MonomialOrder::grevlex(), cfg);
    out.basis = G.generators();
    out.dimension = dimension(G);
    out.codim1_nonsingular = out.dimension < 0 || n - out.dimension >= 2;
    return out;
}

std::vector<Polynomial> image_closure(const PolyMap& F, const GroebnerConfig& cfg) {
    return eliminate_to_tags(F.graph_ideal(), F, cfg);
}

std::string connectivity_name(Connectivity c) {
    switch (c) {
    case Connectivity::ConnectedCertified: return "connected-certified";
    case Connectivity::DisconnectedCertified: return "disconnected-certified";
    case Connectivity::Inconclusive: return "inconclusive";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------
// Univariate splitting

namespace {

std::vector<Rational> univariate_coeffs(const Polynomial& u, std::size_t var) {
    std::vector<Rational> out;
    for (const auto& c : coefficients_in(u, var)) out.push_back(c.is_zero() ? Rational(0) : c.constant_value());
    return out;
}

// Integer coefficients with the same roots (denominators cleared).
std::vector<mpz_class> integer_coeffs(const std::vector<Rational>& c) {
    mpz_class l = 1;
    for (const auto& q : c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
    std::vector<mpz_class> out;
    for (const auto& q : c) out.push_back(mpz_class(q * l));
    return out;
}

// Positive divisors of |v|, or nullopt when |v| is too large to enumerate.
std::optional<std::vector<mpz_class>> divisors(const mpz_class& v) {
    mpz_class a = abs(v);
    if (a == 0 || a > mpz_class("1000000000000")) return std::nullopt;
    std::vector<mpz_class> small, large;
    for (mpz_class d = 1; d * d <= a; ++d)
        if (a % d == 0) {
            small.push_back(d);
            if (d * d != a) large.push_back(a / d);
        }
    small.insert(small.end(), large.rbegin(), large.rend());
    return small;
}

Rational evaluate(const std::vector<Rational>& c, const Rational& x) {
    Rational v = 0;
    for (std::size_t i = c.size(); i-- > 0;) v = v * x + c[i];
    return v;
}

Polynomial univariate(const Ring& r, std::size_t var, const std::vector<Rational>& c) {
    Polynomial p(r);
    for (std::size_t i = 0; i < c.size(); ++i) {
        Monomial m(r->size());
        m[var] = static_cast<std::uint32_t>(i);
        p.add_term(m, c[i]);
    }
    return p;
}

std::optional<Polynomial> quadratic_factor(const Polynomial& g, std::size_t var) {
    auto c = integer_coeffs(univariate_coeffs(g, var));
    auto value = [&](long x) {
        mpz_class v = 0;
        for (std::size_t i = c.size(); i-- > 0;) v = v * x + c[i];
        return v;
    };
    auto d0 = divisors(value(0)), d1 = divisors(value(1)), d2 = divisors(value(-1));
    if (!d0 || !d1 || !d2) return std::nullopt;
    const Ring& r = g.ring();
    for (const auto& a0 : *d0)
        for (const auto& b1 : *d1)
            for (int s1 : {1, -1})
                for (const auto& b2 : *d2)
                    for (int s2 : {1, -1}) {
                        mpz_class v1 = b1 * s1, v2 = b2 * s2;
                        // q(0) = a0, q(1) = v1, q(-1) = v2
                        Rational a = Rational(v1 + v2, 2) - Rational(a0);
                        Rational b = Rational(v1 - v2, 2);
                        if (a == 0) continue;
                        Polynomial q = univariate(r, var, {Rational(a0), b, a});
                        if (try_divide(g, q)) return q.monic();
                    }
    return std::nullopt;
}

}  // namespace

std::vector<Polynomial> coprime_pieces(const Polynomial& u, std::size_t var) {
    std::vector<Polynomial> pieces;
    if (u.is_zero() || u.is_constant()) return pieces;
    for (std::size_t j = 0; j < u.ring()->size(); ++j)
        if (j != var && u.involves(j)) throw InputError("coprime_pieces expects a univariate polynomial");
    const Ring& r = u.ring();
    Polynomial rest = squarefree_part(u);

    // Rational roots p/q with p | a_0 and q | a_d.
    auto c = univariate_coeffs(rest, var);
    if (c.front() == 0) {
        pieces.push_back(Polynomial::variable(r, var));
        rest = divide_exact(rest, pieces.back());
    }
    c = univariate_coeffs(rest, var);
    auto z = integer_coeffs(c);
    auto dp = divisors(z.front()), dq = divisors(z.back());
    if (dp && dq && rest.total_degree() > 1) {
        for (const auto& p : *dp)
            for (const auto& q : *dq)
                for (int s : {1, -1}) {
                    Rational root(p * s, q);
                    root.canonicalize();
                    if (rest.total_degree() <= 1) break;
                    if (evaluate(univariate_coeffs(rest, var), root) != 0) continue;
                    Polynomial lin = Polynomial::variable(r, var) - Polynomial(r, root);
                    if (std::find(pieces.begin(), pieces.end(), lin) != pieces.end()) continue;
                    pieces.push_back(lin);
                    rest = divide_exact(rest, lin);
                }
    }
    if (rest.total_degree() == 4) {
        if (auto q = quadratic_factor(rest, var)) {
            pieces.push_back(*q);
            rest = divide_exact(rest, *q);
        }
    }
    if (!rest.is_constant()) pieces.push_back(rest.monic());
    return pieces;
}

// ---------------------------------------------------------------------------
// Fibers

namespace {

std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t k) {
    std::vector<std::vector<std::size_t>> out;
    if (k > n) return out;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    for (;;) {
        out.push_back(idx);
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    return out;
}

// Fiber is the graph {x_D = g(x_rest)} for some set D of n - dim variables.
bool certify_graph(const std::vector<Polynomial>& ideal, int dim, FiberProbe& out, const GroebnerConfig& cfg) {
    const Ring& r = ideal.front().ring();
    std::size_t n = r->size();
    for (const auto& dep : subsets(n, n - static_cast<std::size_t>(dim))) {
        std::vector<bool> front(n, false);
        for (std::size_t j : dep) front[j] = true;
        auto order = MonomialOrder::block(front);
        GroebnerBasis G = groebner(ideal, order, cfg);
        if (G.generators().size() != dep.size()) continue;
        std::vector<Polynomial> graph(dep.size(), Polynomial(r));
        bool ok = true;
        for (const auto& g : G.generators()) {
            const Monomial& lm = leading_monomial(g, order);
            std::optional<std::size_t> slot;
            for (std::size_t k = 0; k < dep.size(); ++k) {
                Monomial xj(n);
                xj[dep[k]] = 1;
                if (lm == xj) slot = k;
            }
            if (!slot) {
                ok = false;
                break;
            }
            Polynomial expr = Polynomial::variable(r, dep[*slot]) - g;
            for (std::size_t j : dep)
                if (expr.involves(j)) ok = false;
            if (!ok) break;
            graph[*slot] = expr;
        }
        if (!ok) continue;
        out.dependent = dep;
        out.graph = std::move(graph);
        return true;
    }
    return false;
}

bool certify_split(const std::vector<Polynomial>& ideal, FiberProbe& out, const GroebnerConfig& cfg) {
    const Ring& r = ideal.front().ring();
    std::size_t n = r->size();
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<bool> keep(n, false);
        keep[j] = true;
        auto elim = elimination_ideal(ideal, keep, cfg);
        if (elim.empty()) continue;
        const Polynomial& u = elim.front();
        if (u.is_constant()) continue;
        auto pieces = coprime_pieces(u, j);
        if (pieces.size() < 2 || pieces.size() > 12) continue;
        std::size_t k = pieces.size();
        // Piece 0 always goes to the first side.
        for (std::uint64_t mask = 0; mask + 1 < (std::uint64_t{1} << (k - 1)); ++mask) {
            Polynomial g1 = pieces[0], g2(r, 1);
            for (std::size_t i = 1; i < k; ++i) {
                if (mask >> (i - 1) & 1u) g1 *= pieces[i];
                else g2 *= pieces[i];
            }
            std::vector<Polynomial> a = ideal, b = ideal;
            a.push_back(g1);
            b.push_back(g2);
            if (is_unit_ideal(a, cfg) || is_unit_ideal(b, cfg)) continue;
            out.univariate = u;
            out.split = {g1, g2};
            return true;
        }
    }
    return false;
}

}  // namespace

FiberProbe fiber_probe(const PolyMap& F, std::span<const Rational> point, const GroebnerConfig& cfg) {
    if (point.size() != F.size())
        throw DimensionMismatch("fiber point needs " + std::to_string(F.size()) + " coordinates");
    FiberProbe out;
    out.point.assign(point.begin(), point.end());
    std::vector<Polynomial> gens;
    for (std::size_t i = 0; i < F.size(); ++i) gens.push_back(F[i] - Polynomial(F.source(), point[i]));
    GroebnerBasis G = groebner(gens, MonomialOrder::grevlex(), cfg);
    out.ideal = G.generators();
    if (G.is_unit()) {
        out.empty = true;
        out.dimension = -1;
        return out;
    }
    out.dimension = dimension(G);
    if (out.ideal.empty()) {
        out.connectivity = Connectivity::ConnectedCertified;  // the whole space
        return out;
    }
    if (certify_graph(out.ideal, out.dimension, out, cfg)) out.connectivity = Connectivity::ConnectedCertified;
    else if (certify_split(out.ideal, out, cfg)) out.connectivity = Connectivity::DisconnectedCertified;
    return out;
}

// ---------------------------------------------------------------------------
// Blowing-downs and primitivity

BlowDownCheck blowing_down_check(const PolyMap& F, const Polynomial& h, bool irreducibility_asserted,
                                 const GroebnerConfig& cfg) {
    if (!same_ring(h.ring(), F.source())) throw ContextMismatch("blowing_down_check");
    if (h.is_constant()) throw InputError("blowing-down candidate must be nonconstant");
    auto gens = F.graph_ideal();
    gens.push_back(rebase(h, F.graph_ring()));
    BlowDownCheck out{h, false, eliminate_to_tags(std::move(gens), F, cfg), -1, irreducibility_asserted};
    out.closure_dimension = tag_dimension(out.closure, F, cfg);
    out.blowing_down = out.closure_dimension <= static_cast<int>(F.size()) - 2;
    return out;
}

std::vector<Polynomial> blowdown_candidates(const PolyMap& F, std::span<const Polynomial> user) {
    std::vector<Polynomial> out(user.begin(), user.end());
    Polynomial H = omega_F(F).H;
    for (const auto& f : squarefree_factors(H)) {
        if (f.factor.is_constant()) continue;
        if (std::find(out.begin(), out.end(), f.factor) == out.end()) out.push_back(f.factor);
    }
    return out;
}

PrimitivityProbe primitivity_probe(const PolyMap& F, std::span<const Polynomial> candidates,
                                   const GroebnerConfig& cfg) {
    DiffForm omega = omega_F(F).omega;
    PrimitivityProbe out;
    for (const auto& R : candidates) {
        if (!same_ring(R.ring(), F.source())) throw ContextMismatch("primitivity candidates");
        PrimitivityCandidate c{R, wedge(differential(R), omega).is_zero(), std::nullopt};
        if (c.wedge_zero) c.in_subalgebra = subalgebra_membership(R, F, cfg).has_value();
        bool witness = c.wedge_zero && !*c.in_subalgebra;
        out.candidates.push_back(std::move(c));
        if (witness) {
            out.counterexample = R;
            break;
        }
    }
    return out;
}

}  // namespace lndkit
