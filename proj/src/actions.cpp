#include "lndkit/actions.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace lndkit {

// ---------------------------------------------------------------------------
// Condition (H), partial checks

bool ConditionHReport::all_invariant() const {
    return std::all_of(component_invariant.begin(), component_invariant.end(), [](bool b) { return b; });
}

bool ConditionHReport::probes_in_subalgebra() const {
    return std::all_of(probes.begin(), probes.end(), [](const InvariantProbe& p) { return p.preimage.has_value(); });
}

bool ConditionHReport::passed() const {
    return dimensions_ok && all_invariant() && algebraically_independent && probes_in_subalgebra();
}

namespace {

DiffForm top_form(const PolyMap& F) {
    std::vector<DiffForm> ds;
    for (const auto& f : F.components()) ds.push_back(differential(f));
    return wedge_all(ds, F.source());
}

}  // namespace

ConditionHReport check_condition_H_partial(const ActionSpec& spec, std::span<const Polynomial> invariant_probes,
                                           const GroebnerConfig& cfg) {
    if (!same_ring(spec.F.source(), spec.D.ring())) throw ContextMismatch("condition (H): map and distribution");
    ConditionHReport rep;
    rep.dimensions_ok = spec.D.size() + spec.F.size() == spec.D.ring()->size();
    for (const auto& f : spec.F.components()) rep.component_invariant.push_back(spec.D.is_invariant(f));
    DiffForm top = top_form(spec.F);
    if (!top.is_zero()) {
        rep.algebraically_independent = true;
        rep.nonzero_minor = top.coefficients().begin()->second;
    }
    for (const auto& q : invariant_probes) {
        InvariantProbe probe{q, spec.D.is_invariant(q), std::nullopt};
        probe.preimage = subalgebra_membership(q, spec.F, cfg);
        rep.probes.push_back(std::move(probe));
    }
    rep.generation_asserted = spec.condition_H_asserted;
    return rep;
}

// ---------------------------------------------------------------------------
// Automorphisms and conjugation

AutomorphismCheck verify_automorphism(const Ring& ring, std::span<const Polynomial> G, const GroebnerConfig& cfg) {
    std::size_t n = ring->size();
    if (G.size() != n) throw DimensionMismatch("an automorphism needs n components");
    for (const auto& g : G)
        if (!same_ring(g.ring(), ring)) throw ContextMismatch("automorphism components");

    PolyMatrix jac(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) jac[i].push_back(partial_derivative(G[i], j));
    AutomorphismCheck out{std::nullopt, determinant(jac, ring), "", std::nullopt};
    if (!out.jacobian.is_constant() || out.jacobian.is_zero()) {
        out.failure = "JacobianNotConstant";
        return out;
    }

    PolyMap map(ring, std::vector<Polynomial>(G.begin(), G.end()));
    // Tag polynomial H_j with H_j(G) = x_j, rewritten over the source variables.
    std::vector<Polynomial> rename;
    for (std::size_t i = 0; i < n; ++i) rename.push_back(Polynomial::variable(ring, i));
    std::vector<Polynomial> inverse;
    for (std::size_t j = 0; j < n; ++j) {
        auto h = subalgebra_membership(Polynomial::variable(ring, j), map, cfg);
        if (!h) {
            out.failure = "InverseNotFound";
            out.failing_component = j;
            return out;
        }
        inverse.push_back(compose(*h, rename));
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (compose(G[j], inverse) != Polynomial::variable(ring, j) ||
            compose(inverse[j], G) != Polynomial::variable(ring, j)) {
            out.failure = "CompositionFailed";
            out.failing_component = j;
            return out;
        }
    }
    out.automorphism = Automorphism{std::vector<Polynomial>(G.begin(), G.end()), std::move(inverse), out.jacobian};
    return out;
}

ConjugationCheck verify_conjugation(std::span<const Polynomial> G, const Distribution& D) {
    D.require_certified("conjugation");
    if (G.size() != D.ring()->size()) throw DimensionMismatch("conjugation needs n components");
    const Ring& er = D.exp_ring();
    auto images = exp_images(D);
    ConjugationCheck out;
    for (std::size_t k = 0; k < G.size(); ++k) {
        Polynomial lhs = compose(G[k], images);
        Polynomial rhs = rebase(G[k], er);
        if (k < D.size()) rhs += Polynomial::variable(er, k);
        if (lhs != rhs) {
            out.failing_component = k;
            return out;
        }
    }
    out.holds = true;
    return out;
}

// ---------------------------------------------------------------------------
// Trivialization pipeline

std::string stage_name(TrivStage s) {
    switch (s) {
    case TrivStage::ConditionH: return "condition-h";
    case TrivStage::EFactor: return "e-factor";
    case TrivStage::Slices: return "slices";
    case TrivStage::EDivide: return "e-divide";
    case TrivStage::IdentityMatrix: return "identity-matrix";
    case TrivStage::Automorphism: return "automorphism";
    case TrivStage::Conjugation: return "conjugation";
    case TrivStage::Done: return "done";
    }
    return "unknown";
}

TrivializeResult trivialize(const ActionSpec& spec, std::span<const Polynomial> extra_pool, const LndConfig& config) {
    const Distribution& D = spec.D;
    const PolyMap& F = spec.F;
    D.require_certified("trivialize");
    TrivializeResult out;

    out.stage = TrivStage::ConditionH;
    out.condition_h = check_condition_H_partial(spec, {}, config.groebner);
    if (!out.condition_h.passed()) {
        out.diagnostic = !out.condition_h.dimensions_ok ? "F must have n - p components"
                         : !out.condition_h.all_invariant() ? "a component of F is not invariant"
                                                            : "components of F are algebraically dependent";
        return out;
    }

    out.stage = TrivStage::EFactor;
    try {
        out.e_factor = e_factor(D, F, config);
    } catch (const NoProbeFound& e) {
        out.diagnostic = e.what();
        return out;
    }
    if (!out.e_factor->E.is_constant()) {
        out.diagnostic = "E = " + out.e_factor->E.to_string() + " is not constant";
        return out;
    }

    out.stage = TrivStage::Slices;
    auto pool = default_slice_pool(D.ring(), config.slice_pool_degree, extra_pool);
    out.slices = diagonal_slices(D, F, pool, config);
    if (!out.slices->system) {
        for (const auto& d : out.slices->diagnostics)
            if (!d.found) {
                out.diagnostic = "no slice for derivation " + std::to_string(d.k + 1) + ": " + d.note;
                break;
            }
        return out;
    }
    const SliceSystem& sys = *out.slices->system;

    out.stage = TrivStage::EDivide;
    for (std::size_t i = 0; i < D.size(); ++i) {
        auto div = e_divide(sys.slices[i], sys.multipliers[i], F, config.groebner);
        if (!div) {
            out.failed_division = i;
            out.diagnostic = "slice " + sys.slices[i].to_string() + " is not in Q[F] + (P(F)) for P = " +
                             sys.multipliers[i].to_string() + "; consistent with F not being quasi-fibered";
            return out;
        }
        out.divisions.push_back(std::move(*div));
    }

    out.stage = TrivStage::IdentityMatrix;
    out.identity_matrix = true;
    for (std::size_t i = 0; i < D.size() && out.identity_matrix; ++i)
        for (std::size_t j = 0; j < D.size(); ++j) {
            Polynomial e = D[i].apply(out.divisions[j].S);
            if (e != Polynomial(D.ring(), i == j ? 1 : 0)) {
                out.identity_matrix = false;
                break;
            }
        }
    if (!out.identity_matrix) {
        out.diagnostic = "(d_i(S_j)) is not the identity matrix";
        return out;
    }

    for (const auto& d : out.divisions) out.G.push_back(d.S);
    for (const auto& f : F.components()) out.G.push_back(f);

    out.stage = TrivStage::Automorphism;
    out.automorphism = verify_automorphism(D.ring(), out.G, config.groebner);
    if (!out.automorphism->automorphism) {
        out.diagnostic = out.automorphism->failure;
        return out;
    }

    out.stage = TrivStage::Conjugation;
    out.conjugation = verify_conjugation(out.G, D);
    if (!out.conjugation->holds) {
        out.diagnostic = "conjugation identity fails in component " + std::to_string(*out.conjugation->failing_component);
        return out;
    }
    out.stage = TrivStage::Done;
    out.success = true;
    return out;
}

// ---------------------------------------------------------------------------
// Relative 1-forms

ARCheck ar_certificate_check(const ARCertificate& c, const PolyMap& F) {
    ARCheck out;
    const Ring& r = F.source();
    out.shapes_ok = c.omega.degree() == 1 && same_ring(c.omega.ring(), r) && same_ring(c.R.ring(), r) &&
                    same_ring(c.P.ring(), F.tags()) && !c.P.is_zero() && c.a.size() == F.size() &&
                    std::all_of(c.a.begin(), c.a.end(), [&](const Polynomial& a) { return same_ring(a.ring(), r); });
    if (!out.shapes_ok) return out;
    Polynomial PF = F.pullback(c.P);
    DiffForm rhs = differential(c.R);
    for (std::size_t i = 0; i < F.size(); ++i) rhs += c.a[i] * differential(F[i]);
    out.identity_holds = PF * c.omega == rhs;
    try {
        DiffForm w = wedge(differential(c.R), omega_F(F).omega);
        out.wedge_condition = form_divisible(PF, w).has_value();
    } catch (const DegenerateMap&) {
        out.wedge_condition = false;
    }
    return out;
}

std::string status_name(ARStatus s) {
    switch (s) {
    case ARStatus::Resolved: return "resolved";
    case ARStatus::NotResolved: return "not-resolved";
    case ARStatus::EDivisionFailed: return "e-division-failed";
    }
    return "unknown";
}

namespace {

using SparseRow = std::map<std::size_t, Rational>;

// Solves A x = b with rows given sparsely; free unknowns are set to zero.
std::optional<std::vector<Rational>> solve_sparse(std::vector<SparseRow> rows, std::vector<Rational> rhs,
                                                  std::size_t unknowns) {
    std::map<std::size_t, std::pair<SparseRow, Rational>> pivots;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        SparseRow row = std::move(rows[r]);
        Rational b = rhs[r];
        // Eliminate existing pivots in increasing column order.
        auto it = row.begin();
        while (it != row.end()) {
            auto p = pivots.find(it->first);
            if (p == pivots.end()) {
                ++it;
                continue;
            }
            Rational f = it->second;
            std::size_t col = it->first;
            for (const auto& [c, v] : p->second.first) {
                Rational& slot = row[c];
                slot -= f * v;
            }
            b -= f * p->second.second;
            for (auto z = row.begin(); z != row.end();) z = z->second == 0 ? row.erase(z) : std::next(z);
            it = row.upper_bound(col);
        }
        if (row.empty()) {
            if (b != 0) return std::nullopt;
            continue;
        }
        Rational inv = 1 / row.begin()->second;
        for (auto& [c, v] : row) v *= inv;
        b *= inv;
        std::size_t lead = row.begin()->first;
        pivots.emplace(lead, std::make_pair(std::move(row), b));
    }
    std::vector<Rational> x(unknowns, Rational(0));
    for (auto it = pivots.rbegin(); it != pivots.rend(); ++it) {
        Rational v = it->second.second;
        for (const auto& [c, a] : it->second.first)
            if (c != it->first) v -= a * x[c];
        x[it->first] = v;
    }
    return x;
}

std::vector<Monomial> monomials_up_to(std::size_t nvars, unsigned degree) {
    std::vector<Monomial> out{Monomial(nvars)};
    std::vector<Monomial> layer{Monomial(nvars)};
    for (unsigned d = 1; d <= degree; ++d) {
        std::set<Monomial> next;
        for (const auto& m : layer)
            for (std::size_t j = 0; j < nvars; ++j) {
                Monomial e = m;
                e[j] += 1;
                next.insert(e);
            }
        layer.assign(next.begin(), next.end());
        out.insert(out.end(), layer.begin(), layer.end());
    }
    return out;
}

}  // namespace

std::optional<std::vector<Polynomial>> solve_in_differentials(const DiffForm& w, const PolyMap& F, unsigned bound) {
    const Ring& r = F.source();
    std::size_t n = r->size(), q = F.size();
    if (w.degree() != 1 || !same_ring(w.ring(), r)) throw DimensionMismatch("expected a 1-form over the source ring");
    if (w.is_zero()) return std::vector<Polynomial>(q, Polynomial(r));

    auto monos = monomials_up_to(n, bound);
    std::vector<std::vector<Polynomial>> grads(q);
    for (std::size_t k = 0; k < q; ++k)
        for (std::size_t j = 0; j < n; ++j) grads[k].push_back(partial_derivative(F[k], j));

    // Equation index per (component j, monomial).
    std::map<std::pair<std::size_t, Monomial>, std::size_t> eq_of;
    std::vector<SparseRow> rows;
    std::vector<Rational> rhs;
    auto equation = [&](std::size_t j, const Monomial& m) {
        auto [it, fresh] = eq_of.try_emplace({j, m}, rows.size());
        if (fresh) {
            rows.emplace_back();
            rhs.emplace_back(0);
        }
        return it->second;
    };
    for (std::size_t k = 0; k < q; ++k)
        for (std::size_t u = 0; u < monos.size(); ++u) {
            std::size_t col = k * monos.size() + u;
            for (std::size_t j = 0; j < n; ++j)
                for (const auto& [m, c] : grads[k][j].terms()) rows[equation(j, m * monos[u])][col] += c;
        }
    for (std::size_t j = 0; j < n; ++j) {
        Polynomial wj = w.component(j);
        for (const auto& [m, c] : wj.terms()) rhs[equation(j, m)] += c;
    }

    auto x = solve_sparse(std::move(rows), std::move(rhs), q * monos.size());
    if (!x) return std::nullopt;
    std::vector<Polynomial> d(q, Polynomial(r));
    for (std::size_t k = 0; k < q; ++k)
        for (std::size_t u = 0; u < monos.size(); ++u) {
            const Rational& v = (*x)[k * monos.size() + u];
            if (v != 0) d[k].add_term(monos[u], v);
        }
    DiffForm check(r, 1);
    for (std::size_t k = 0; k < q; ++k) check += d[k] * differential(F[k]);
    if (check != w) throw InternalFault("linear solve returned a non-solution");
    return d;
}

ARDecomposition ar_exact_decompose(const ARCertificate& c, const PolyMap& F, unsigned deg_bound,
                                   const GroebnerConfig& cfg) {
    const Ring& r = F.source();
    if (c.omega.degree() != 1 || !same_ring(c.omega.ring(), r) || c.a.size() != F.size())
        throw DimensionMismatch("certificate shape does not match the map");
    ARDecomposition out;
    auto div = e_divide(c.R, c.P, F, cfg);
    if (!div) {
        out.status = ARStatus::EDivisionFailed;
        return out;
    }
    out.A = div->A;
    out.S = div->S;
    DiffForm sum(r, 1);
    for (std::size_t k = 0; k < F.size(); ++k) {
        Polynomial ck = c.a[k] + div->S * F.pullback(partial_derivative(c.P, k)) +
                        F.pullback(partial_derivative(div->A, k));
        sum += ck * differential(F[k]);
        out.c.push_back(std::move(ck));
    }
    auto w0 = form_divisible(F.pullback(c.P), sum);
    if (!w0) throw FormNotDivisible();
    if (differential(div->S) + *w0 != c.omega)
        throw InternalFault("omega != dS + omega0; the certificate identity does not hold");
    DiffForm top = top_form(F);
    if (!wedge(*w0, top).is_zero()) throw InternalFault("omega0 ^ df_1 ^ ... ^ df_q != 0");
    out.omega0 = *w0;

    if (deg_bound == 0) {
        long maxf = 0;
        for (const auto& f : F.components()) maxf = std::max(maxf, f.total_degree());
        deg_bound = static_cast<unsigned>(std::max(0L, w0->max_coefficient_degree()) + maxf + 2);
    }
    out.degree_bound = deg_bound;
    out.d = solve_in_differentials(*w0, F, deg_bound);
    out.status = out.d ? ARStatus::Resolved : ARStatus::NotResolved;
    return out;
}

}  // namespace lndkit
