#include "lndkit/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <numeric>
#include <sstream>

namespace lndkit {

std::string to_string(const Rational& q) { return q.get_str(); }

// ---------------------------------------------------------------------------
// RingContext

RingContext::RingContext(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.empty()) throw InputError("a ring needs at least one variable");
    for (std::size_t i = 0; i < names_.size(); ++i) {
        if (!valid_identifier(names_[i]))
            throw InputError("invalid variable name '" + names_[i] + "'");
        if (!index_.emplace(names_[i], i).second)
            throw InputError("duplicate variable name '" + names_[i] + "'");
    }
}

std::optional<std::size_t> RingContext::index_of(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::size_t RingContext::require(std::string_view name) const {
    if (auto i = index_of(name)) return *i;
    throw UnknownVariable(std::string(name));
}

bool RingContext::valid_identifier(std::string_view name) {
    if (name.empty() || !std::isalpha(static_cast<unsigned char>(name[0]))) return false;
    return std::all_of(name.begin() + 1, name.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    });
}

Ring make_ring(std::vector<std::string> names) {
    return std::make_shared<const RingContext>(std::move(names));
}

bool same_ring(const Ring& a, const Ring& b) {
    return a == b || (a && b && a->names() == b->names());
}

Ring join_rings(const Ring& front, const Ring& back) {
    std::vector<std::string> names = front->names();
    names.insert(names.end(), back->names().begin(), back->names().end());
    return make_ring(std::move(names));
}

std::string fresh_name(const Ring& ring, const std::string& base) {
    std::string name = base;
    while (ring->index_of(name)) name += "_";
    return name;
}

// ---------------------------------------------------------------------------
// Monomial

std::uint64_t Monomial::total_degree() const {
    return std::accumulate(exps_.begin(), exps_.end(), std::uint64_t{0});
}

bool Monomial::is_one() const {
    return std::all_of(exps_.begin(), exps_.end(), [](auto e) { return e == 0; });
}

bool Monomial::divides(const Monomial& other) const {
    for (std::size_t i = 0; i < exps_.size(); ++i)
        if (exps_[i] > other.exps_[i]) return false;
    return true;
}

Monomial Monomial::operator*(const Monomial& other) const {
    Monomial r(*this);
    for (std::size_t i = 0; i < exps_.size(); ++i) r.exps_[i] += other.exps_[i];
    return r;
}

Monomial Monomial::operator/(const Monomial& other) const {
    Monomial r(*this);
    for (std::size_t i = 0; i < exps_.size(); ++i) r.exps_[i] -= other.exps_[i];
    return r;
}

Monomial Monomial::lcm(const Monomial& a, const Monomial& b) {
    Monomial r(a);
    for (std::size_t i = 0; i < a.exps_.size(); ++i) r.exps_[i] = std::max(a.exps_[i], b.exps_[i]);
    return r;
}

bool Monomial::coprime(const Monomial& a, const Monomial& b) {
    for (std::size_t i = 0; i < a.exps_.size(); ++i)
        if (a.exps_[i] != 0 && b.exps_[i] != 0) return false;
    return true;
}

int grevlex_compare(const Monomial& a, const Monomial& b) {
    auto da = a.total_degree(), db = b.total_degree();
    if (da != db) return da < db ? -1 : 1;
    for (std::size_t i = a.size(); i-- > 0;) {
        if (a[i] != b[i]) return a[i] < b[i] ? 1 : -1;
    }
    return 0;
}

// ---------------------------------------------------------------------------
// Polynomial

Polynomial::Polynomial(Ring ring) : ring_(std::move(ring)) {}

Polynomial::Polynomial(Ring ring, const Rational& constant) : ring_(std::move(ring)) {
    if (constant != 0) terms_.emplace(Monomial(ring_->size()), constant);
}

Polynomial Polynomial::variable(Ring ring, std::size_t index) {
    if (index >= ring->size()) throw InputError("variable index out of range");
    Monomial m(ring->size());
    m[index] = 1;
    return term(std::move(ring), std::move(m), 1);
}

Polynomial Polynomial::variable(Ring ring, std::string_view name) {
    auto i = ring->require(name);
    return variable(std::move(ring), i);
}

Polynomial Polynomial::term(Ring ring, Monomial mono, const Rational& coeff) {
    Polynomial p(std::move(ring));
    p.add_term(mono, coeff);
    return p;
}

bool Polynomial::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
}

Rational Polynomial::constant_value() const {
    if (!is_constant()) throw InputError("polynomial " + to_string() + " is not constant");
    return terms_.empty() ? Rational(0) : terms_.begin()->second;
}

long Polynomial::total_degree() const {
    // Descending grevlex: the first term has the largest total degree.
    return terms_.empty() ? -1 : static_cast<long>(terms_.begin()->first.total_degree());
}

long Polynomial::degree_in(std::size_t var) const {
    long d = -1;
    for (const auto& [m, c] : terms_) d = std::max<long>(d, m[var]);
    return d;
}

bool Polynomial::involves(std::size_t var) const {
    return std::any_of(terms_.begin(), terms_.end(), [&](const auto& t) { return t.first[var] != 0; });
}

std::vector<bool> Polynomial::support_variables() const {
    std::vector<bool> s(ring_->size(), false);
    for (const auto& [m, c] : terms_)
        for (std::size_t i = 0; i < m.size(); ++i)
            if (m[i]) s[i] = true;
    return s;
}

const Monomial& Polynomial::leading_monomial() const {
    if (terms_.empty()) throw InputError("leading monomial of zero polynomial");
    return terms_.begin()->first;
}

const Rational& Polynomial::leading_coefficient() const {
    if (terms_.empty()) throw InputError("leading coefficient of zero polynomial");
    return terms_.begin()->second;
}

Rational Polynomial::coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
    if (c == 0) return;
    if (m.size() != ring_->size()) throw DimensionMismatch("monomial length differs from ring size");
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

void Polynomial::check_ring(const Polynomial& other, const char* where) const {
    if (!same_ring(ring_, other.ring_)) throw ContextMismatch(where);
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
    check_ring(other, "add");
    for (const auto& [m, c] : other.terms_) add_term(m, c);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
    check_ring(other, "subtract");
    for (const auto& [m, c] : other.terms_) add_term(m, -c);
    return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check_ring(b, "multiply");
    Polynomial r(a.ring_);
    for (const auto& [ma, ca] : a.terms_)
        for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
    return r;
}

Polynomial& Polynomial::operator*=(const Polynomial& other) {
    *this = *this * other;
    return *this;
}

Polynomial& Polynomial::operator*=(const Rational& scalar) {
    if (scalar == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, c] : terms_) c *= scalar;
    return *this;
}

Polynomial Polynomial::operator-() const {
    Polynomial r(*this);
    for (auto& [m, c] : r.terms_) c = -c;
    return r;
}

bool operator==(const Polynomial& a, const Polynomial& b) {
    return same_ring(a.ring_, b.ring_) && a.terms_ == b.terms_;
}

Polynomial Polynomial::monic() const {
    if (terms_.empty()) return *this;
    Rational inv = 1 / leading_coefficient();
    return *this * inv;
}

Polynomial Polynomial::mul_monomial(const Monomial& m, const Rational& c) const {
    Polynomial r(ring_);
    if (c == 0) return r;
    for (const auto& [mt, ct] : terms_) r.terms_.emplace_hint(r.terms_.end(), mt * m, ct * c);
    return r;
}

std::string Polynomial::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        bool negative = c < 0;
        if (first) {
            if (negative) out << "-";
        } else {
            out << (negative ? " - " : " + ");
        }
        first = false;
        Rational mag = abs(c);
        bool unit = (mag == 1);
        if (m.is_one()) {
            out << mag.get_str();
            continue;
        }
        if (!unit) out << mag.get_str() << "*";
        bool first_var = true;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i] == 0) continue;
            if (!first_var) out << "*";
            first_var = false;
            out << ring_->name(i);
            if (m[i] > 1) out << "^" << m[i];
        }
    }
    return out.str();
}

Polynomial add(const Polynomial& p, const Polynomial& q) { return p + q; }
Polynomial mul(const Polynomial& p, const Polynomial& q) { return p * q; }

Polynomial pow(const Polynomial& p, unsigned k) {
    Polynomial result(p.ring(), 1);
    Polynomial base = p;
    while (k) {
        if (k & 1u) result *= base;
        k >>= 1u;
        if (k) base = base * base;
    }
    return result;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

constexpr unsigned kMaxExponent = 1u << 16;

class ExprParser {
public:
    ExprParser(std::string_view text, const Ring& ring) : text_(text), ring_(ring) {}

    Polynomial run() {
        Polynomial p = expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return p;
    }

private:
    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Polynomial expr() {
        bool negate = accept('-');
        Polynomial acc = term();
        if (negate) acc = -acc;
        for (;;) {
            if (accept('+')) {
                acc += term();
            } else if (accept('-')) {
                acc -= term();
            } else {
                return acc;
            }
        }
    }

    Polynomial term() {
        Polynomial acc = factor();
        while (accept('*')) acc *= factor();
        return acc;
    }

    Polynomial factor() {
        Polynomial b = base();
        if (accept('^')) {
            skip_ws();
            if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
                fail("exponent must be a non-negative integer literal");
            std::size_t start = pos_;
            std::string digits = read_digits();
            mpz_class e(digits);
            if (e > kMaxExponent) {
                pos_ = start;
                fail("exponent too large");
            }
            b = pow(b, static_cast<unsigned>(e.get_ui()));
        }
        return b;
    }

    std::string read_digits() {
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        return std::string(text_.substr(start, pos_ - start));
    }

    Polynomial base() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            mpz_class num(read_digits());
            mpz_class den(1);
            skip_ws();
            if (pos_ < text_.size() && text_[pos_] == '/') {
                ++pos_;
                skip_ws();
                if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
                    fail("denominator must be an unsigned integer literal");
                std::size_t start = pos_;
                den = mpz_class(read_digits());
                if (den == 0) {
                    pos_ = start;
                    fail("zero denominator");
                }
            }
            Rational q(num, den);
            q.canonicalize();
            return Polynomial(ring_, q);
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            std::string name(text_.substr(start, pos_ - start));
            auto idx = ring_->index_of(name);
            if (!idx) throw UnknownVariable(name);
            return Polynomial::variable(ring_, *idx);
        }
        if (c == '(') {
            ++pos_;
            Polynomial inner = expr();
            if (!accept(')')) fail("expected ')'");
            return inner;
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    std::string_view text_;
    const Ring& ring_;
    std::size_t pos_ = 0;
};

}  // namespace

Polynomial parse(std::string_view text, const Ring& ring) { return ExprParser(text, ring).run(); }

// ---------------------------------------------------------------------------
// Calculus and substitution

Polynomial partial_derivative(const Polynomial& p, std::size_t var) {
    if (var >= p.ring()->size()) throw InputError("variable index out of range");
    Polynomial r(p.ring());
    for (const auto& [m, c] : p.terms()) {
        if (m[var] == 0) continue;
        Monomial d(m);
        d[var] -= 1;
        r.add_term(d, c * m[var]);
    }
    return r;
}

Polynomial partial_derivative(const Polynomial& p, std::string_view var) {
    return partial_derivative(p, p.ring()->require(var));
}

Polynomial substitute(const Polynomial& p, const std::map<std::size_t, Polynomial>& images,
                      const Ring& target) {
    for (const auto& [i, img] : images)
        if (!same_ring(img.ring(), target)) throw ContextMismatch("substitute images");
    std::size_t n = p.ring()->size();
    std::vector<std::vector<Polynomial>> powers(n);
    auto power_of = [&](std::size_t var, std::uint32_t e) -> const Polynomial& {
        auto& cache = powers[var];
        if (cache.empty()) {
            auto it = images.find(var);
            if (it == images.end())
                throw InputError("substitute: no image for variable '" + p.ring()->name(var) + "'");
            cache.emplace_back(target, 1);
            cache.push_back(it->second);
        }
        while (cache.size() <= e) cache.push_back(cache.back() * cache[1]);
        return cache[e];
    };
    Polynomial result(target);
    for (const auto& [m, c] : p.terms()) {
        Polynomial t(target, c);
        for (std::size_t i = 0; i < n; ++i)
            if (m[i]) t *= power_of(i, m[i]);
        result += t;
    }
    return result;
}

Polynomial compose(const Polynomial& p, std::span<const Polynomial> images) {
    if (images.size() != p.ring()->size())
        throw DimensionMismatch("compose needs one image per variable");
    if (images.empty()) return p;
    std::map<std::size_t, Polynomial> m;
    for (std::size_t i = 0; i < images.size(); ++i) m.emplace(i, images[i]);
    return substitute(p, m, images[0].ring());
}

Polynomial rebase(const Polynomial& p, const Ring& target) {
    if (same_ring(p.ring(), target)) return p;
    std::size_t n = p.ring()->size();
    std::vector<std::optional<std::size_t>> where(n);
    auto support = p.support_variables();
    for (std::size_t i = 0; i < n; ++i)
        if (support[i]) where[i] = target->require(p.ring()->name(i));
    Polynomial r(target);
    for (const auto& [m, c] : p.terms()) {
        Monomial t(target->size());
        for (std::size_t i = 0; i < n; ++i)
            if (m[i]) t[*where[i]] = m[i];
        r.add_term(t, c);
    }
    return r;
}

// ---------------------------------------------------------------------------
// Division and GCD

std::optional<Polynomial> try_divide(const Polynomial& p, const Polynomial& q) {
    if (!same_ring(p.ring(), q.ring())) throw ContextMismatch("divide");
    if (q.is_zero()) throw DivisionByZero();
    Polynomial rem = p;
    Polynomial quot(p.ring());
    const Monomial& lq = q.leading_monomial();
    const Rational& cq = q.leading_coefficient();
    while (!rem.is_zero()) {
        const Monomial& lr = rem.leading_monomial();
        if (!lq.divides(lr)) return std::nullopt;
        Monomial m = lr / lq;
        Rational c = rem.leading_coefficient() / cq;
        quot.add_term(m, c);
        rem -= q.mul_monomial(m, c);
    }
    return quot;
}

Polynomial divide_exact(const Polynomial& p, const Polynomial& q) {
    auto r = try_divide(p, q);
    if (!r) throw NotDivisible(p.to_string() + " is not divisible by " + q.to_string());
    return *r;
}

std::vector<Polynomial> coefficients_in(const Polynomial& p, std::size_t var) {
    long d = p.degree_in(var);
    std::vector<Polynomial> coeffs;
    if (d < 0) return coeffs;
    coeffs.assign(static_cast<std::size_t>(d) + 1, Polynomial(p.ring()));
    for (const auto& [m, c] : p.terms()) {
        Monomial r(m);
        r[var] = 0;
        coeffs[m[var]].add_term(r, c);
    }
    return coeffs;
}

namespace {

std::optional<std::size_t> main_variable(const Polynomial& a, const Polynomial& b) {
    auto sa = a.support_variables();
    auto sb = b.support_variables();
    for (std::size_t i = sa.size(); i-- > 0;)
        if (sa[i] || sb[i]) return i;
    return std::nullopt;
}

Polynomial gcd_nonzero(const Polynomial& a, const Polynomial& b);

// Content with respect to `var`: gcd of the coefficients, monic.
Polynomial content_in(const Polynomial& p, std::size_t var) {
    Polynomial g(p.ring());
    for (const auto& c : coefficients_in(p, var)) {
        if (c.is_zero()) continue;
        g = g.is_zero() ? c.monic() : gcd_nonzero(g, c);
        if (g.is_constant()) return Polynomial(p.ring(), 1);
    }
    return g;
}

Polynomial leading_coeff_in(const Polynomial& p, std::size_t var) {
    return coefficients_in(p, var).back();
}

Polynomial pseudo_remainder(const Polynomial& a, const Polynomial& b, std::size_t var) {
    long db = b.degree_in(var);
    Polynomial lb = leading_coeff_in(b, var);
    Polynomial r = a;
    while (!r.is_zero() && r.degree_in(var) >= db) {
        long dr = r.degree_in(var);
        Polynomial lr = leading_coeff_in(r, var);
        Monomial shift(a.ring()->size());
        shift[var] = static_cast<std::uint32_t>(dr - db);
        r = lb * r - (lr * b.mul_monomial(shift, 1));
    }
    return r;
}

Polynomial primitive_part(const Polynomial& p, std::size_t var) {
    return divide_exact(p, content_in(p, var)).monic();
}

// Both arguments nonzero; result monic.
Polynomial gcd_nonzero(const Polynomial& a, const Polynomial& b) {
    if (a.is_constant() || b.is_constant()) return Polynomial(a.ring(), 1);
    if (auto q = try_divide(a, b)) return b.monic();
    if (auto q = try_divide(b, a)) return a.monic();
    std::size_t v = *main_variable(a, b);
    Polynomial ca = content_in(a, v);
    Polynomial cb = content_in(b, v);
    Polynomial c = gcd_nonzero(ca, cb);
    Polynomial pa = divide_exact(a, ca);
    Polynomial pb = divide_exact(b, cb);
    if (!pa.involves(v) || !pb.involves(v)) return c;
    if (pa.degree_in(v) < pb.degree_in(v)) std::swap(pa, pb);
    while (!pb.is_zero()) {
        Polynomial r = pseudo_remainder(pa, pb, v);
        pa = std::move(pb);
        pb = r.is_zero() ? Polynomial(a.ring()) : (r.involves(v) ? primitive_part(r, v) : Polynomial(a.ring(), 1));
        if (!pb.is_zero() && !pb.involves(v)) {
            // A v-free remainder of primitive inputs means the v-part is trivial.
            return c;
        }
    }
    Polynomial g = primitive_part(pa, v);
    return (c * g).monic();
}

std::vector<SquarefreeFactor> yun(const Polynomial& f, std::size_t v) {
    // f primitive with respect to v and involving v.
    std::vector<SquarefreeFactor> out;
    Polynomial df = partial_derivative(f, v);
    Polynomial a = gcd_nonzero(f, df);
    Polynomial b = divide_exact(f, a);
    Polynomial c = divide_exact(df, a);
    Polynomial d = c - partial_derivative(b, v);
    unsigned i = 1;
    while (!b.is_constant()) {
        Polynomial ai = d.is_zero() ? b.monic() : gcd_nonzero(b, d);
        Polynomial bn = divide_exact(b, ai);
        Polynomial cn = d.is_zero() ? Polynomial(f.ring()) : divide_exact(d, ai);
        if (!ai.is_constant()) out.push_back({ai.monic(), i});
        b = bn;
        d = cn - partial_derivative(b, v);
        ++i;
    }
    return out;
}

}  // namespace

Polynomial gcd(const Polynomial& p, const Polynomial& q) {
    if (!same_ring(p.ring(), q.ring())) throw ContextMismatch("gcd");
    if (p.is_zero()) return q.monic();
    if (q.is_zero()) return p.monic();
    return gcd_nonzero(p, q).monic();
}

Polynomial gcd(std::span<const Polynomial> ps) {
    if (ps.empty()) throw InputError("gcd of an empty list");
    Polynomial g(ps.front().ring());
    for (const auto& p : ps) {
        g = gcd(g, p);
        if (!g.is_zero() && g.is_constant()) break;
    }
    return g;
}

std::vector<SquarefreeFactor> squarefree_factors(const Polynomial& p) {
    std::vector<SquarefreeFactor> out;
    if (p.is_constant()) return out;
    auto sup = p.support_variables();
    std::size_t v = 0;
    for (std::size_t i = sup.size(); i-- > 0;)
        if (sup[i]) {
            v = i;
            break;
        }
    Polynomial cont = content_in(p, v);
    Polynomial prim = divide_exact(p, cont);
    out = squarefree_factors(cont);
    auto more = yun(prim, v);
    out.insert(out.end(), more.begin(), more.end());
    return out;
}

Polynomial squarefree_part(const Polynomial& p) {
    if (p.is_zero()) return p;
    Polynomial r(p.ring(), 1);
    for (const auto& f : squarefree_factors(p)) r *= f.factor;
    return r.monic();
}

Polynomial determinant(const PolyMatrix& input, const Ring& ring) {
    std::size_t n = input.size();
    for (const auto& row : input)
        if (row.size() != n) throw DimensionMismatch("determinant of a non-square matrix");
    if (n == 0) return Polynomial(ring, 1);
    PolyMatrix m = input;
    bool negate = false;
    Polynomial prev(ring, 1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k].is_zero()) {
            std::size_t swap_row = k + 1;
            while (swap_row < n && m[swap_row][k].is_zero()) ++swap_row;
            if (swap_row == n) return Polynomial(ring);
            std::swap(m[k], m[swap_row]);
            negate = !negate;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                Polynomial v = m[i][j] * m[k][k] - m[i][k] * m[k][j];
                m[i][j] = divide_exact(v, prev);
            }
            m[i][k] = Polynomial(ring);
        }
        prev = m[k][k];
    }
    Polynomial det = m[n - 1][n - 1];
    return negate ? -det : det;
}

}  // namespace lndkit
