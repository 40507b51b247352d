#pragma once

// Polynomial differential forms on Q^n.
//
// A k-form is stored as a map from strictly increasing index sets I (|I| = k)
// to coefficient polynomials, meaning sum_I c_I dx_I.

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "lndkit/polymap.hpp"
#include "lndkit/polynomial.hpp"

namespace lndkit {

using IndexSet = std::vector<std::size_t>;

class DiffForm {
public:
    using CoeffMap = std::map<IndexSet, Polynomial>;

    DiffForm(Ring ring, std::size_t degree);
    // The 0-form f.
    static DiffForm function(const Polynomial& f);
    // dx_i.
    static DiffForm basis(Ring ring, std::size_t i);
    // coeffs[j] * dx_j summed; coeffs.size() must equal the ring size.
    static DiffForm one_form(Ring ring, std::span<const Polynomial> coeffs);

    const Ring& ring() const noexcept { return ring_; }
    std::size_t degree() const noexcept { return degree_; }
    const CoeffMap& coefficients() const noexcept { return coeffs_; }
    Polynomial coefficient(const IndexSet& idx) const;
    // Coefficient of dx_j for a 1-form.
    Polynomial component(std::size_t j) const;
    bool is_zero() const noexcept { return coeffs_.empty(); }
    long max_coefficient_degree() const;

    void add_term(const IndexSet& idx, const Polynomial& c);

    DiffForm& operator+=(const DiffForm& other);
    DiffForm& operator-=(const DiffForm& other);
    friend DiffForm operator+(DiffForm a, const DiffForm& b) { return a += b; }
    friend DiffForm operator-(DiffForm a, const DiffForm& b) { return a -= b; }
    friend DiffForm operator*(const Polynomial& f, const DiffForm& w);
    friend bool operator==(const DiffForm& a, const DiffForm& b);

    std::string to_string() const;

private:
    void check(const DiffForm& other, const char* where) const;

    Ring ring_;
    std::size_t degree_;
    CoeffMap coeffs_;
};

DiffForm wedge(const DiffForm& a, const DiffForm& b);
DiffForm wedge_all(std::span<const DiffForm> forms, const Ring& ring);
DiffForm exterior_derivative(const DiffForm& w);
// df as a 1-form.
DiffForm differential(const Polynomial& f);

struct RelativeFormData {
    Polynomial H;       // gcd of the q-minors of dF (normalized)
    DiffForm omega;     // (df_1 ^ ... ^ df_q) / H
    DiffForm top;       // df_1 ^ ... ^ df_q
};

// Throws DegenerateMap when df_1 ^ ... ^ df_q = 0.
RelativeFormData omega_F(const PolyMap& F);

// det(dR_1, ..., dR_p, df_1, ..., df_{n-p}), rows in that order.
Polynomial jacobian_J(std::span<const Polynomial> R, const PolyMap& F);

// w / p when every coefficient is divisible by p; nullopt otherwise.
std::optional<DiffForm> form_divisible(const Polynomial& p, const DiffForm& w);

}  // namespace lndkit
