#include "lndkit/lnd.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "lndkit/forms.hpp"

namespace lndkit {

// ---------------------------------------------------------------------------
// Derivation

Derivation::Derivation(Ring ring, std::vector<Polynomial> images) : ring_(std::move(ring)), images_(std::move(images)) {
    if (images_.size() != ring_->size())
        throw DimensionMismatch("a derivation needs one image per variable (" + std::to_string(ring_->size()) +
                                "), got " + std::to_string(images_.size()));
    for (const auto& img : images_)
        if (!same_ring(img.ring(), ring_)) throw ContextMismatch("derivation images");
}

Derivation Derivation::zero(Ring ring) {
    std::vector<Polynomial> images(ring->size(), Polynomial(ring));
    return Derivation(ring, std::move(images));
}

Derivation Derivation::partial(Ring ring, std::size_t i) {
    std::vector<Polynomial> images(ring->size(), Polynomial(ring));
    images.at(i) = Polynomial(ring, 1);
    return Derivation(ring, std::move(images));
}

bool Derivation::is_zero() const {
    return std::all_of(images_.begin(), images_.end(), [](const Polynomial& p) { return p.is_zero(); });
}

Polynomial Derivation::apply(const Polynomial& p) const {
    if (!same_ring(p.ring(), ring_)) throw ContextMismatch("derivation apply");
    Polynomial out(ring_);
    auto support = p.support_variables();
    for (std::size_t j = 0; j < images_.size(); ++j) {
        if (!support[j] || images_[j].is_zero()) continue;
        out += partial_derivative(p, j) * images_[j];
    }
    return out;
}

Polynomial Derivation::apply_power(const Polynomial& p, unsigned k) const {
    Polynomial q = p;
    for (unsigned i = 0; i < k && !q.is_zero(); ++i) q = apply(q);
    return q;
}

Derivation Derivation::extend_to(const Ring& bigger) const {
    std::vector<Polynomial> images(bigger->size(), Polynomial(bigger));
    for (std::size_t j = 0; j < ring_->size(); ++j)
        images[bigger->require(ring_->name(j))] = rebase(images_[j], bigger);
    return Derivation(bigger, std::move(images));
}

std::string Derivation::to_string() const {
    std::string out;
    for (std::size_t j = 0; j < images_.size(); ++j) {
        if (j) out += "; ";
        out += ring_->name(j) + ": " + images_[j].to_string();
    }
    return out;
}

Derivation bracket(const Derivation& a, const Derivation& b) {
    if (!same_ring(a.ring(), b.ring())) throw ContextMismatch("bracket");
    std::vector<Polynomial> images;
    for (std::size_t j = 0; j < a.ring()->size(); ++j)
        images.push_back(a.apply(b.image(j)) - b.apply(a.image(j)));
    return Derivation(a.ring(), std::move(images));
}

bool commutes(const Derivation& a, const Derivation& b) { return bracket(a, b).is_zero(); }

NilpotencyReport is_locally_nilpotent(const Derivation& d, unsigned bound) {
    if (bound == 0) throw InputError("nilpotency bound must be at least 1");
    NilpotencyReport report;
    const Ring& r = d.ring();
    for (std::size_t j = 0; j < r->size(); ++j) {
        Polynomial q = Polynomial::variable(r, j);
        unsigned k = 0;
        while (!q.is_zero() && k < bound) {
            q = d.apply(q);
            ++k;
        }
        if (!q.is_zero()) {
            report.nilpotent = false;
            report.orders.clear();
            report.witness_variable = j;
            report.witness = q;
            return report;
        }
        report.orders.push_back(k);
    }
    report.nilpotent = true;
    return report;
}

// ---------------------------------------------------------------------------
// Distribution

std::vector<std::string> parameter_names(const Ring& source, std::size_t p) { return default_tag_names(source, p); }

Distribution Distribution::certify(std::vector<Derivation> derivations, unsigned nilpotency_bound) {
    if (derivations.empty()) throw InputError("a distribution needs at least one derivation");
    Distribution D;
    D.ring_ = derivations.front().ring();
    for (const auto& d : derivations)
        if (!same_ring(d.ring(), D.ring_)) throw ContextMismatch("distribution members");
    D.derivations_ = std::move(derivations);
    std::size_t p = D.derivations_.size();

    D.lnd_ = true;
    for (const auto& d : D.derivations_) {
        D.nilpotency_.push_back(is_locally_nilpotent(d, nilpotency_bound));
        if (!D.nilpotency_.back().nilpotent) D.lnd_ = false;
    }
    D.commuting_ = true;
    for (std::size_t a = 0; a < p && D.commuting_; ++a)
        for (std::size_t b = a + 1; b < p; ++b)
            if (!commutes(D.derivations_[a], D.derivations_[b])) {
                D.commuting_ = false;
                D.bad_pair_ = std::make_pair(a, b);
                break;
            }

    std::vector<std::string> names = parameter_names(D.ring_, p);
    names.insert(names.end(), D.ring_->names().begin(), D.ring_->names().end());
    D.exp_ring_ = make_ring(std::move(names));
    return D;
}

void Distribution::require_certified(const std::string& where) const {
    if (!lnd_) throw Uncertified(where + ": not every derivation was certified locally nilpotent");
    if (!commuting_) throw Uncertified(where + ": derivations were not certified to commute");
}

bool Distribution::is_invariant(const Polynomial& p) const {
    return std::all_of(derivations_.begin(), derivations_.end(),
                       [&](const Derivation& d) { return d.apply(p).is_zero(); });
}

// ---------------------------------------------------------------------------
// exp and the degree function

Polynomial exp(const Distribution& D, const Polynomial& p) {
    D.require_certified("exp");
    if (!same_ring(p.ring(), D.ring())) throw ContextMismatch("exp");
    const Ring& er = D.exp_ring();
    unsigned max_order = 1;
    for (const auto& rep : D.nilpotency())
        for (unsigned o : rep.orders) max_order = std::max(max_order, o);

    Polynomial result = rebase(p, er);
    // Commuting derivations: exp(sum t_i d_i) is the product of the exp(t_i d_i).
    for (std::size_t i = 0; i < D.size(); ++i) {
        Derivation d = D[i].extend_to(er);
        // d^k kills a polynomial of degree e once k > e * (max_order - 1).
        long deg = std::max(0L, result.total_degree());
        unsigned cap = static_cast<unsigned>(deg) * (max_order - 1) + 1;
        Polynomial t = Polynomial::variable(er, i);
        Polynomial sum(er), iterate = result, tpow(er, 1);
        Rational factorial = 1;
        unsigned k = 0;
        while (!iterate.is_zero()) {
            if (k > cap) throw InternalFault("exp series did not terminate for a certified derivation");
            sum += tpow * iterate * (Rational(1) / factorial);
            ++k;
            iterate = d.apply(iterate);
            tpow *= t;
            factorial *= k;
        }
        result = std::move(sum);
    }
    return result;
}

std::vector<Polynomial> exp_images(const Distribution& D) {
    std::vector<Polynomial> out;
    for (std::size_t j = 0; j < D.ring()->size(); ++j) out.push_back(exp(D, Polynomial::variable(D.ring(), j)));
    return out;
}

namespace {

unsigned parameter_degree(const Monomial& m, std::size_t p) {
    unsigned d = 0;
    for (std::size_t i = 0; i < p; ++i) d += m[i];
    return d;
}

}  // namespace

std::optional<unsigned> degree_rel(const Distribution& D, const Polynomial& p) {
    if (p.is_zero()) {
        D.require_certified("degree");
        return std::nullopt;
    }
    Polynomial e = exp(D, p);
    unsigned d = 0;
    for (const auto& [m, c] : e.terms()) d = std::max(d, parameter_degree(m, D.parameter_count()));
    return d;
}

std::string series_string(const Distribution& D, const Polynomial& e) {
    if (e.is_zero()) return "0";
    std::map<unsigned, Polynomial> groups;
    for (const auto& [m, c] : e.terms()) {
        unsigned d = parameter_degree(m, D.parameter_count());
        groups.try_emplace(d, e.ring()).first->second.add_term(m, c);
    }
    std::string out;
    for (const auto& [d, g] : groups) {
        std::string s = g.to_string();
        if (out.empty()) out = s;
        else if (s.front() == '-') out += " - " + s.substr(1);
        else out += " + " + s;
    }
    return out;
}

// ---------------------------------------------------------------------------
// [D] and the non-free locus

Polynomial bracket_det(const Distribution& D, std::span<const Polynomial> R) {
    if (R.size() != D.size())
        throw DimensionMismatch("[D] takes " + std::to_string(D.size()) + " polynomials, got " +
                                std::to_string(R.size()));
    PolyMatrix m(D.size());
    for (std::size_t i = 0; i < D.size(); ++i)
        for (std::size_t j = 0; j < R.size(); ++j) m[i].push_back(D[i].apply(R[j]));
    return determinant(m, D.ring());
}

namespace {

// All k-subsets of {0..n-1} in lexicographic order.
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

}  // namespace

std::vector<Polynomial> nl_locus_ideal(const Distribution& D) {
    D.require_certified("nl-locus");
    std::size_t p = D.size(), n = D.ring()->size();
    std::vector<Polynomial> out;
    for (const auto& cols : subsets(n, p)) {
        PolyMatrix m(p);
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t c : cols) m[i].push_back(D[i].image(c));
        Polynomial minor = determinant(m, D.ring());
        if (minor.is_zero()) continue;
        minor = minor.monic();
        if (std::find(out.begin(), out.end(), minor) == out.end()) out.push_back(minor);
    }
    return out;
}

// ---------------------------------------------------------------------------
// The invariant factor E

std::size_t EFactorResult::consistent_nonzero_probes() const {
    return static_cast<std::size_t>(std::count_if(probes.begin(), probes.end(), [](const ProbeRecord& r) {
        return r.consistent && !r.J.is_zero();
    }));
}

std::vector<std::vector<Polynomial>> default_probe_pool(const Distribution& D, const LndConfig& config) {
    const Ring& r = D.ring();
    std::size_t p = D.size(), n = r->size();
    std::vector<std::vector<Polynomial>> pool;
    for (const auto& idx : subsets(n, p)) {
        std::vector<Polynomial> tuple;
        for (std::size_t i : idx) tuple.push_back(Polynomial::variable(r, i));
        pool.push_back(std::move(tuple));
    }
    // Raw engine output keeps the pool identical across standard libraries.
    std::mt19937_64 rng(0x6c6e646b6974ULL);
    auto below = [&](std::uint64_t k) { return rng() % k; };
    for (unsigned t = 0; t < config.random_probes; ++t) {
        std::vector<Polynomial> tuple;
        for (std::size_t j = 0; j < p; ++j) {
            Polynomial q(r);
            std::uint64_t terms = 1 + below(3);
            for (std::uint64_t k = 0; k < terms; ++k) {
                Monomial m(n);
                std::uint64_t deg = 1 + below(2);
                for (std::uint64_t e = 0; e < deg; ++e) m[below(n)] += 1;
                long c = static_cast<long>(below(7)) - 3;
                if (c == 0) c = 1;
                q.add_term(m, Rational(c));
            }
            if (q.is_zero()) q = Polynomial::variable(r, below(n));
            tuple.push_back(std::move(q));
        }
        pool.push_back(std::move(tuple));
    }
    return pool;
}

EFactorResult e_factor(const Distribution& D, const PolyMap& F, const LndConfig& config) {
    auto pool = default_probe_pool(D, config);
    return e_factor(D, F, pool);
}

EFactorResult e_factor(const Distribution& D, const PolyMap& F, std::span<const std::vector<Polynomial>> probes) {
    D.require_certified("e-factor");
    if (!same_ring(F.source(), D.ring())) throw ContextMismatch("e-factor: map and distribution rings differ");
    if (D.size() + F.size() != D.ring()->size())
        throw DimensionMismatch("e-factor needs p + q = n");

    std::vector<ProbeRecord> records;
    std::optional<std::size_t> first;
    for (const auto& R : probes) {
        ProbeRecord rec{R, bracket_det(D, R), jacobian_J(R, F), true};
        if (!first && !rec.J.is_zero()) first = records.size();
        records.push_back(std::move(rec));
    }
    if (!first) throw NoProbeFound();

    const ProbeRecord& base = records[*first];
    auto E = try_divide(base.bracket, base.J);
    if (!E)
        throw InconsistentProbes("[D](R) is not divisible by J(R) at probe " + std::to_string(*first));

    EFactorResult result{*E, *first, {}, true, true};
    for (std::size_t k = 0; k < records.size(); ++k) {
        auto& rec = records[k];
        rec.consistent = rec.bracket * base.J == base.bracket * rec.J;
        if (!rec.consistent)
            throw InconsistentProbes("cross identity [D](R)J(R') = [D](R')J(R) fails at probe " + std::to_string(k));
    }
    if (!D.is_invariant(*E)) throw InconsistentProbes("E = " + E->to_string() + " is not invariant");
    result.probes = std::move(records);
    return result;
}

// ---------------------------------------------------------------------------
// Diagonal slices

std::vector<Polynomial> default_slice_pool(const Ring& ring, unsigned degree, std::span<const Polynomial> extra) {
    std::vector<Polynomial> pool;
    auto push = [&](const Polynomial& q) {
        if (std::find(pool.begin(), pool.end(), q) == pool.end()) pool.push_back(q);
    };
    for (std::size_t j = 0; j < ring->size(); ++j) push(Polynomial::variable(ring, j));
    for (unsigned d = 2; d <= degree; ++d) {
        std::set<Monomial, GrevlexGreater> layer;
        std::vector<Monomial> frontier{Monomial(ring->size())};
        for (unsigned k = 0; k < d; ++k) {
            std::set<Monomial, GrevlexGreater> next;
            for (const auto& m : frontier)
                for (std::size_t j = 0; j < ring->size(); ++j) {
                    Monomial e = m;
                    e[j] += 1;
                    next.insert(e);
                }
            frontier.assign(next.begin(), next.end());
        }
        for (const auto& m : frontier) push(Polynomial::term(ring, m, 1));
    }
    for (const auto& q : extra) {
        if (!same_ring(q.ring(), ring)) throw ContextMismatch("slice candidates");
        push(q);
    }
    return pool;
}

SliceSearch diagonal_slices(const Distribution& D, const PolyMap& F, const LndConfig& config) {
    auto pool = default_slice_pool(D.ring(), config.slice_pool_degree);
    return diagonal_slices(D, F, pool, config);
}

SliceSearch diagonal_slices(const Distribution& D, const PolyMap& F, std::span<const Polynomial> pool,
                            const LndConfig& config) {
    D.require_certified("slices");
    if (!same_ring(F.source(), D.ring())) throw ContextMismatch("slices: map and distribution rings differ");
    std::size_t p = D.size();
    SliceSearch out;
    SliceSystem sys;
    bool complete = true;
    for (std::size_t k = 0; k < p; ++k) {
        SliceDiagnostic diag;
        diag.k = k;
        for (const auto& g : pool) {
            if (!same_ring(g.ring(), D.ring())) throw ContextMismatch("slice pool");
            bool others_kill = true;
            for (std::size_t i = 0; i < p && others_kill; ++i)
                if (i != k && !D[i].apply(g).is_zero()) others_kill = false;
            if (!others_kill) continue;
            std::vector<Polynomial> iterates{g};
            while (!iterates.back().is_zero() && iterates.size() <= config.nilpotency_bound)
                iterates.push_back(D[k].apply(iterates.back()));
            if (!iterates.back().is_zero() || iterates.size() < 3) continue;  // need d_k(g) != 0
            unsigned m = static_cast<unsigned>(iterates.size() - 1);
            const Polynomial& s = iterates[m - 2];
            const Polynomial& ds = iterates[m - 1];
            auto P = subalgebra_membership(ds, F, config.groebner);
            diag.seed = g;
            diag.order = m;
            diag.slice = s;
            if (!P) {
                diag.note = "d_k(s_k) = " + ds.to_string() + " is invariant but not in Q[F]; condition (H) suspect";
                continue;
            }
            diag.found = true;
            diag.multiplier = *P;
            diag.note.clear();
            break;
        }
        if (!diag.found) {
            complete = false;
            if (diag.note.empty()) diag.note = "pool exhausted (inconclusive, not a proof of nonexistence)";
        } else {
            sys.slices.push_back(*diag.slice);
            sys.multipliers.push_back(*diag.multiplier);
        }
        out.diagnostics.push_back(std::move(diag));
    }
    if (!complete) return out;
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j) {
            Polynomial e = D[i].apply(sys.slices[j]);
            if (i == j ? (e.is_zero() || e != F.pullback(sys.multipliers[j])) : !e.is_zero())
                throw InternalFault("slice matrix is not diagonal with the recorded multipliers");
        }
    out.system = std::move(sys);
    return out;
}

}  // namespace lndkit
