#pragma once

// Sparse multivariate polynomials with exact rational coefficients.
//
// A polynomial lives in a ring context: an ordered list of variable names.
// Terms are kept in a map ordered by descending graded reverse lexicographic
// order, so iteration order is the canonical printing order.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lndkit/errors.hpp"

namespace lndkit {

using Rational = mpq_class;

std::string to_string(const Rational& q);

class RingContext {
public:
    explicit RingContext(std::vector<std::string> names);

    std::size_t size() const noexcept { return names_.size(); }
    const std::string& name(std::size_t i) const { return names_.at(i); }
    const std::vector<std::string>& names() const noexcept { return names_; }
    std::optional<std::size_t> index_of(std::string_view name) const;
    // Throws UnknownVariable.
    std::size_t require(std::string_view name) const;

    static bool valid_identifier(std::string_view name);

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, std::size_t> index_;
};

using Ring = std::shared_ptr<const RingContext>;

Ring make_ring(std::vector<std::string> names);
bool same_ring(const Ring& a, const Ring& b);
// Concatenation of two rings with disjoint names.
Ring join_rings(const Ring& front, const Ring& back);
// A name not present in `ring`, derived from `base` by appending underscores.
std::string fresh_name(const Ring& ring, const std::string& base);

class Monomial {
public:
    Monomial() = default;
    explicit Monomial(std::size_t nvars) : exps_(nvars, 0) {}
    explicit Monomial(std::vector<std::uint32_t> exps) : exps_(std::move(exps)) {}

    std::size_t size() const noexcept { return exps_.size(); }
    std::uint32_t operator[](std::size_t i) const { return exps_[i]; }
    std::uint32_t& operator[](std::size_t i) { return exps_[i]; }
    const std::vector<std::uint32_t>& exponents() const noexcept { return exps_; }

    std::uint64_t total_degree() const;
    bool is_one() const;
    bool divides(const Monomial& other) const;

    Monomial operator*(const Monomial& other) const;
    // Requires divides(other).
    Monomial operator/(const Monomial& other) const;
    static Monomial lcm(const Monomial& a, const Monomial& b);
    static bool coprime(const Monomial& a, const Monomial& b);

    friend bool operator==(const Monomial&, const Monomial&) = default;
    friend auto operator<=>(const Monomial& a, const Monomial& b) { return a.exps_ <=> b.exps_; }

private:
    std::vector<std::uint32_t> exps_;
};

// Negative, zero or positive as a <, =, > b in graded reverse lexicographic order
// (variable 0 is the largest).
int grevlex_compare(const Monomial& a, const Monomial& b);

struct GrevlexGreater {
    bool operator()(const Monomial& a, const Monomial& b) const { return grevlex_compare(a, b) > 0; }
};

class Polynomial {
public:
    using TermMap = std::map<Monomial, Rational, GrevlexGreater>;

    explicit Polynomial(Ring ring);
    Polynomial(Ring ring, const Rational& constant);

    static Polynomial variable(Ring ring, std::size_t index);
    static Polynomial variable(Ring ring, std::string_view name);
    static Polynomial term(Ring ring, Monomial mono, const Rational& coeff);

    const Ring& ring() const noexcept { return ring_; }
    const TermMap& terms() const noexcept { return terms_; }
    std::size_t term_count() const noexcept { return terms_.size(); }

    bool is_zero() const noexcept { return terms_.empty(); }
    bool is_constant() const;
    // Value of a constant polynomial; throws InputError otherwise.
    Rational constant_value() const;
    // -1 for the zero polynomial.
    long total_degree() const;
    long degree_in(std::size_t var) const;
    bool involves(std::size_t var) const;
    std::vector<bool> support_variables() const;

    // Grevlex leading term; requires !is_zero().
    const Monomial& leading_monomial() const;
    const Rational& leading_coefficient() const;
    Rational coefficient(const Monomial& m) const;

    void add_term(const Monomial& m, const Rational& c);

    Polynomial& operator+=(const Polynomial& other);
    Polynomial& operator-=(const Polynomial& other);
    Polynomial& operator*=(const Polynomial& other);
    Polynomial& operator*=(const Rational& scalar);

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(Polynomial a, const Rational& s) { return a *= s; }
    friend Polynomial operator*(const Rational& s, Polynomial a) { return a *= s; }
    Polynomial operator-() const;

    friend bool operator==(const Polynomial& a, const Polynomial& b);

    // Monic in the grevlex leading coefficient; zero stays zero.
    Polynomial monic() const;
    Polynomial mul_monomial(const Monomial& m, const Rational& c) const;

    // Canonical text: descending grevlex, reduced fractions, "1*" and "^1" elided.
    std::string to_string() const;

private:
    void check_ring(const Polynomial& other, const char* where) const;

    Ring ring_;
    TermMap terms_;
};

Polynomial add(const Polynomial& p, const Polynomial& q);
Polynomial mul(const Polynomial& p, const Polynomial& q);
Polynomial pow(const Polynomial& p, unsigned k);

// Expression grammar:
//   expr := ['-'] term (('+'|'-') term)*
//   term := factor ('*' factor)*     factor := base ('^' uint)?
//   base := rational | ident | '(' expr ')'    rational := int ('/' uint)?
Polynomial parse(std::string_view text, const Ring& ring);

Polynomial partial_derivative(const Polynomial& p, std::size_t var);
Polynomial partial_derivative(const Polynomial& p, std::string_view var);

// Ring homomorphism sending variable i of p's ring to images.at(i); every
// variable occurring in p must have an image.  Images share `target`.
Polynomial substitute(const Polynomial& p, const std::map<std::size_t, Polynomial>& images,
                      const Ring& target);
// Full substitution: images.size() must equal the ring size.
Polynomial compose(const Polynomial& p, std::span<const Polynomial> images);
// Re-express p in `target`, mapping variables by name.
Polynomial rebase(const Polynomial& p, const Ring& target);

// GCD over Q, monic in the grevlex leading coefficient; gcd(0, 0) = 0.
Polynomial gcd(const Polynomial& p, const Polynomial& q);
Polynomial gcd(std::span<const Polynomial> ps);

// p / q when q divides p exactly.  Throws DivisionByZero or NotDivisible.
Polynomial divide_exact(const Polynomial& p, const Polynomial& q);
std::optional<Polynomial> try_divide(const Polynomial& p, const Polynomial& q);

struct SquarefreeFactor {
    Polynomial factor;  // monic, nonconstant, squarefree
    unsigned multiplicity;
};
// Pairwise coprime factors with p = c * prod factor^multiplicity.
std::vector<SquarefreeFactor> squarefree_factors(const Polynomial& p);
// Product of the squarefree factors (monic); constants map to 1, zero to zero.
Polynomial squarefree_part(const Polynomial& p);

// Coefficients of p viewed as a polynomial in variable `var`; entry k is the
// coefficient of var^k (free of var).
std::vector<Polynomial> coefficients_in(const Polynomial& p, std::size_t var);

using PolyMatrix = std::vector<std::vector<Polynomial>>;
// Fraction-free (Bareiss) determinant of a square matrix over a common ring.
Polynomial determinant(const PolyMatrix& m, const Ring& ring);

}  // namespace lndkit
