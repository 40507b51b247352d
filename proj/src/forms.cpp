#include "lndkit/forms.hpp"

#include <algorithm>
#include <sstream>

namespace lndkit {

DiffForm::DiffForm(Ring ring, std::size_t degree) : ring_(std::move(ring)), degree_(degree) {
    if (degree_ > ring_->size()) throw DimensionMismatch("form degree exceeds ring dimension");
}

DiffForm DiffForm::function(const Polynomial& f) {
    DiffForm w(f.ring(), 0);
    w.add_term({}, f);
    return w;
}

DiffForm DiffForm::basis(Ring ring, std::size_t i) {
    DiffForm w(ring, 1);
    w.add_term({i}, Polynomial(ring, 1));
    return w;
}

DiffForm DiffForm::one_form(Ring ring, std::span<const Polynomial> coeffs) {
    if (coeffs.size() != ring->size()) throw DimensionMismatch("one coefficient per variable");
    DiffForm w(ring, 1);
    for (std::size_t j = 0; j < coeffs.size(); ++j) w.add_term({j}, coeffs[j]);
    return w;
}

Polynomial DiffForm::coefficient(const IndexSet& idx) const {
    auto it = coeffs_.find(idx);
    return it == coeffs_.end() ? Polynomial(ring_) : it->second;
}

Polynomial DiffForm::component(std::size_t j) const {
    if (degree_ != 1) throw DimensionMismatch("component() needs a 1-form");
    return coefficient({j});
}

long DiffForm::max_coefficient_degree() const {
    long d = -1;
    for (const auto& [idx, c] : coeffs_) d = std::max(d, c.total_degree());
    return d;
}

void DiffForm::add_term(const IndexSet& idx, const Polynomial& c) {
    if (c.is_zero()) return;
    if (!same_ring(c.ring(), ring_)) throw ContextMismatch("form coefficient");
    if (idx.size() != degree_) throw DimensionMismatch("index set size differs from form degree");
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (idx[i] >= ring_->size() || (i > 0 && idx[i - 1] >= idx[i]))
            throw InputError("form index sets must be strictly increasing variable indices");
    }
    auto [it, inserted] = coeffs_.try_emplace(idx, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) coeffs_.erase(it);
    }
}

void DiffForm::check(const DiffForm& other, const char* where) const {
    if (!same_ring(ring_, other.ring_)) throw ContextMismatch(where);
    if (degree_ != other.degree_) throw DimensionMismatch(std::string(where) + ": form degrees differ");
}

DiffForm& DiffForm::operator+=(const DiffForm& other) {
    check(other, "form addition");
    for (const auto& [idx, c] : other.coeffs_) add_term(idx, c);
    return *this;
}

DiffForm& DiffForm::operator-=(const DiffForm& other) {
    check(other, "form subtraction");
    for (const auto& [idx, c] : other.coeffs_) add_term(idx, -c);
    return *this;
}

DiffForm operator*(const Polynomial& f, const DiffForm& w) {
    if (!same_ring(f.ring(), w.ring_)) throw ContextMismatch("form scaling");
    DiffForm r(w.ring_, w.degree_);
    if (f.is_zero()) return r;
    for (const auto& [idx, c] : w.coeffs_) r.add_term(idx, f * c);
    return r;
}

bool operator==(const DiffForm& a, const DiffForm& b) {
    return same_ring(a.ring_, b.ring_) && a.degree_ == b.degree_ && a.coeffs_ == b.coeffs_;
}

std::string DiffForm::to_string() const {
    if (coeffs_.empty()) return "0";
    if (degree_ == 0) return coeffs_.begin()->second.to_string();
    std::ostringstream out;
    bool first = true;
    for (const auto& [idx, c] : coeffs_) {
        if (!first) out << " + ";
        first = false;
        out << "(" << c.to_string() << ")*";
        for (std::size_t i = 0; i < idx.size(); ++i) {
            if (i) out << "^";
            out << "d" << ring_->name(idx[i]);
        }
    }
    return out.str();
}

DiffForm wedge(const DiffForm& a, const DiffForm& b) {
    if (!same_ring(a.ring(), b.ring())) throw ContextMismatch("wedge");
    std::size_t n = a.ring()->size();
    std::size_t deg = a.degree() + b.degree();
    if (deg > n) {
        // Beyond the top degree every form vanishes; report the zero top form.
        return DiffForm(a.ring(), n);
    }
    DiffForm r(a.ring(), deg);
    for (const auto& [ia, ca] : a.coefficients()) {
        for (const auto& [ib, cb] : b.coefficients()) {
            IndexSet merged;
            merged.reserve(deg);
            std::set_union(ia.begin(), ia.end(), ib.begin(), ib.end(), std::back_inserter(merged));
            if (merged.size() != deg) continue;
            // Sign of the shuffle: count pairs (i in ia, j in ib) with i > j.
            std::size_t inversions = 0;
            for (auto i : ia)
                for (auto j : ib)
                    if (i > j) ++inversions;
            Polynomial c = ca * cb;
            r.add_term(merged, inversions % 2 ? -c : c);
        }
    }
    return r;
}

DiffForm wedge_all(std::span<const DiffForm> forms, const Ring& ring) {
    DiffForm acc = DiffForm::function(Polynomial(ring, 1));
    for (const auto& w : forms) acc = wedge(acc, w);
    return acc;
}

DiffForm differential(const Polynomial& f) {
    DiffForm w(f.ring(), 1);
    for (std::size_t j = 0; j < f.ring()->size(); ++j) w.add_term({j}, partial_derivative(f, j));
    return w;
}

DiffForm exterior_derivative(const DiffForm& w) {
    std::size_t n = w.ring()->size();
    if (w.degree() >= n) return DiffForm(w.ring(), n);
    DiffForm r(w.ring(), w.degree() + 1);
    for (const auto& [idx, c] : w.coefficients()) {
        DiffForm dx_idx(w.ring(), w.degree());
        dx_idx.add_term(idx, Polynomial(w.ring(), 1));
        r += wedge(differential(c), dx_idx);
    }
    return r;
}

RelativeFormData omega_F(const PolyMap& F) {
    std::vector<DiffForm> dfs;
    for (const auto& f : F.components()) dfs.push_back(differential(f));
    DiffForm top = wedge_all(dfs, F.source());
    if (top.is_zero()) throw DegenerateMap();
    std::vector<Polynomial> minors;
    for (const auto& [idx, c] : top.coefficients()) minors.push_back(c);
    Polynomial H = gcd(minors);
    DiffForm omega(F.source(), top.degree());
    for (const auto& [idx, c] : top.coefficients()) omega.add_term(idx, divide_exact(c, H));
    return {H, omega, top};
}

Polynomial jacobian_J(std::span<const Polynomial> R, const PolyMap& F) {
    std::size_t n = F.source()->size();
    if (R.size() + F.size() != n)
        throw DimensionMismatch("J needs p + q = n (p = " + std::to_string(R.size()) +
                                ", q = " + std::to_string(F.size()) + ", n = " + std::to_string(n) + ")");
    std::vector<DiffForm> rows;
    for (const auto& r : R) {
        if (!same_ring(r.ring(), F.source())) throw ContextMismatch("jacobian_J");
        rows.push_back(differential(r));
    }
    for (const auto& f : F.components()) rows.push_back(differential(f));
    DiffForm top = wedge_all(rows, F.source());
    IndexSet all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    return top.coefficient(all);
}

std::optional<DiffForm> form_divisible(const Polynomial& p, const DiffForm& w) {
    if (p.is_zero()) throw DivisionByZero();
    DiffForm r(w.ring(), w.degree());
    for (const auto& [idx, c] : w.coefficients()) {
        auto q = try_divide(c, p);
        if (!q) return std::nullopt;
        r.add_term(idx, *q);
    }
    return r;
}

}  // namespace lndkit
