#include <doctest.h>

#include "lndkit/fibergeo.hpp"
#include "support/random_poly.hpp"

using namespace lndkit;
using lndkit::testing::PolyGen;

namespace {

std::vector<Polynomial> polys(const Ring& r, std::initializer_list<const char*> texts) {
    std::vector<Polynomial> out;
    for (const char* t : texts) out.push_back(parse(t, r));
    return out;
}

std::vector<Rational> point(std::initializer_list<int> xs) {
    std::vector<Rational> out;
    for (int x : xs) out.emplace_back(x);
    return out;
}

}  // namespace

TEST_CASE("singular ideal") {
    Ring r = make_ring({"x", "y", "z"});
    PolyMap F1(r, polys(r, {"x", "x*z+y^2"}));
    auto s1 = singular_ideal(F1);
    CHECK(s1.minors == polys(r, {"2*y", "x"}));
    CHECK(s1.basis == polys(r, {"y", "x"}));
    CHECK(s1.dimension == 1);
    CHECK(s1.codim1_nonsingular);

    Ring r4 = make_ring({"x", "y", "u", "v"});
    PolyMap F2(r4, polys(r4, {"u", "v", "x*v - y*u"}));
    auto s2 = singular_ideal(F2);
    CHECK(s2.basis == polys(r4, {"v", "u"}));
    CHECK(s2.dimension == 2);
    CHECK(s2.codim1_nonsingular);
    // The computed locus is V(u, v), not V(x, y).
    GroebnerBasis G(r4, MonomialOrder::grevlex(), s2.basis);
    CHECK_FALSE(G.contains(parse("x", r4)));

    Ring xy = make_ring({"x", "y"});
    auto s3 = singular_ideal(PolyMap(xy, polys(xy, {"x^2"})));
    CHECK(s3.minors == polys(xy, {"2*x"}));
    CHECK(s3.basis == polys(xy, {"x"}));
    CHECK_FALSE(s3.codim1_nonsingular);

    auto s4 = singular_ideal(PolyMap(xy, polys(xy, {"x"})));
    CHECK(s4.dimension == -1);
    CHECK(s4.codim1_nonsingular);
}

TEST_CASE("image closure") {
    Ring r = make_ring({"x", "y", "z"});
    CHECK(image_closure(PolyMap(r, polys(r, {"x", "x*z+y^2"}))).empty());
    Ring r4 = make_ring({"x", "y", "u", "v"});
    CHECK(image_closure(PolyMap(r4, polys(r4, {"u", "v", "x*v - y*u"}))).empty());
    Ring xy = make_ring({"x", "y"});
    PolyMap diag(xy, polys(xy, {"x", "x"}));
    auto c = image_closure(diag);
    REQUIRE(c.size() == 1);
    CHECK(c[0] == parse("t1 - t2", diag.tags()));
    PolyMap para(xy, polys(xy, {"x", "x^2"}));
    auto cp = image_closure(para);
    REQUIRE(cp.size() == 1);
    CHECK(cp[0] == parse("t1^2 - t2", para.tags()).monic());
}

TEST_CASE("fiber probes") {
    Ring r = make_ring({"x", "y", "z"});
    PolyMap F1(r, polys(r, {"x", "x*z+y^2"}));
    auto a = fiber_probe(F1, point({0, 1}));
    CHECK_FALSE(a.empty);
    CHECK(a.dimension == 1);
    CHECK(a.connectivity == Connectivity::DisconnectedCertified);
    REQUIRE(a.univariate.has_value());
    CHECK(*a.univariate == parse("y^2 - 1", r));
    CHECK(a.split == polys(r, {"y - 1", "y + 1"}));

    auto b = fiber_probe(F1, point({1, 1}));
    CHECK(b.dimension == 1);
    CHECK(b.connectivity == Connectivity::ConnectedCertified);
    CHECK(b.dependent == std::vector<std::size_t>{0, 2});
    CHECK(b.graph == polys(r, {"1", "-y^2 + 1"}));

    Ring r4 = make_ring({"x", "y", "u", "v"});
    PolyMap F2(r4, polys(r4, {"u", "v", "x*v - y*u"}));
    auto e = fiber_probe(F2, point({0, 0, 1}));
    CHECK(e.empty);
    auto ne = fiber_probe(F2, point({1, 0, 0}));
    CHECK_FALSE(ne.empty);
    CHECK(ne.connectivity == Connectivity::ConnectedCertified);

    // Two points.
    Ring xy = make_ring({"x", "y"});
    PolyMap pts(xy, polys(xy, {"x^2 - 2*x", "y"}));
    auto two = fiber_probe(pts, point({0, 0}));
    CHECK(two.dimension == 0);
    CHECK(two.connectivity == Connectivity::DisconnectedCertified);

    // An irreducible conic over Q with no rational split stays inconclusive.
    PolyMap circ(xy, polys(xy, {"x^2 + y^2"}));
    CHECK(fiber_probe(circ, point({1})).connectivity == Connectivity::Inconclusive);

    CHECK_THROWS_AS(fiber_probe(F1, point({1})), DimensionMismatch);
}

TEST_CASE("fiber emptiness agrees with radical membership of 1") {
    PolyGen gen(307);
    Ring r = make_ring({"x", "y", "z"});
    for (int k = 0; k < 25; ++k) {
        PolyMap F(r, {gen.nonconstant(r, 2, 2), gen.nonconstant(r, 2, 2)});
        std::vector<Rational> y{Rational(gen.uniform(-2, 2)), Rational(gen.uniform(-2, 2))};
        auto probe = fiber_probe(F, y);
        std::vector<Polynomial> gens{F[0] - Polynomial(r, y[0]), F[1] - Polynomial(r, y[1])};
        CHECK(probe.empty == radical_membership(Polynomial(r, 1), gens));
    }
}

TEST_CASE("connectivity certificates are sound") {
    PolyGen gen(311);
    Ring r = make_ring({"x", "y"});
    for (int k = 0; k < 20; ++k) {
        PolyMap F(r, {gen.nonconstant(r, 2, 3)});
        auto probe = fiber_probe(F, point({gen.uniform(-2, 2)}));
        if (probe.connectivity == Connectivity::ConnectedCertified && !probe.dependent.empty()) {
            // Substituting the graph back kills every ideal generator.
            std::vector<Polynomial> images;
            for (std::size_t j = 0; j < 2; ++j) images.push_back(Polynomial::variable(r, j));
            for (std::size_t k2 = 0; k2 < probe.dependent.size(); ++k2) images[probe.dependent[k2]] = probe.graph[k2];
            for (const auto& g : probe.ideal) CHECK(compose(g, images).is_zero());
        }
        if (probe.connectivity == Connectivity::DisconnectedCertified) {
            REQUIRE(probe.split.size() == 2);
            CHECK(gcd(probe.split[0], probe.split[1]) == Polynomial(r, 1));
            CHECK(radical_membership(probe.split[0] * probe.split[1], probe.ideal));
        }
    }
}

TEST_CASE("coprime pieces of univariate polynomials") {
    Ring r = make_ring({"x", "y"});
    CHECK(coprime_pieces(parse("y^2 - 1", r), 1) == polys(r, {"y - 1", "y + 1"}));
    CHECK(coprime_pieces(parse("x^3 - x", r), 0) == polys(r, {"x", "x - 1", "x + 1"}));
    CHECK(coprime_pieces(parse("4*x^2 - 1", r), 0) == polys(r, {"x - 1/2", "x + 1/2"}));
    CHECK(coprime_pieces(parse("x^2 + 1", r), 0) == polys(r, {"x^2 + 1"}));
    auto quartic = coprime_pieces(parse("(x^2 + 1)*(x^2 - 2)", r), 0);
    CHECK(quartic.size() == 2);
    Polynomial prod(r, 1);
    for (const auto& p : quartic) prod *= p;
    CHECK(prod == parse("(x^2 + 1)*(x^2 - 2)", r));
    CHECK(coprime_pieces(parse("(x - 3)^2*(x + 2)", r), 0) == polys(r, {"x + 2", "x - 3"}));
    CHECK_THROWS_AS(coprime_pieces(parse("x*y", r), 0), InputError);
}

TEST_CASE("blowing-down checks") {
    Ring r = make_ring({"x", "y", "z"});
    PolyMap G(r, polys(r, {"x*y", "z*y"}));
    auto b = blowing_down_check(G, parse("y", r));
    CHECK(b.blowing_down);
    CHECK(b.closure == polys(G.tags(), {"t2", "t1"}));
    CHECK(b.closure_dimension == 0);

    PolyMap F1(r, polys(r, {"x", "x*z+y^2"}));
    auto n1 = blowing_down_check(F1, parse("x", r));
    CHECK_FALSE(n1.blowing_down);
    CHECK(n1.closure == polys(F1.tags(), {"t1"}));
    CHECK(n1.closure_dimension == 1);

    Ring xy = make_ring({"x", "y"});
    auto n2 = blowing_down_check(PolyMap(xy, polys(xy, {"x"})), parse("x - 1", xy));
    CHECK_FALSE(n2.blowing_down);
    CHECK(n2.closure_dimension == 0);
    CHECK_THROWS_AS(blowing_down_check(F1, Polynomial(r, 3)), InputError);

    // Every q-minor of dF lies in the radical of (h) for a blowing-down h.
    auto cands = blowdown_candidates(G);
    CHECK(cands == polys(r, {"y"}));
    for (const auto& h : cands) {
        auto chk = blowing_down_check(G, h, false);
        REQUIRE(chk.blowing_down);
        CHECK_FALSE(chk.irreducibility_asserted);
        std::vector<Polynomial> hv{h};
        for (const auto& m : singular_ideal(G).minors) CHECK(radical_membership(m, hv));
    }
    PolyMap G2(r, polys(r, {"x*y^2", "z*y^2 + x"}));
    for (const auto& h : blowdown_candidates(G2)) {
        auto chk = blowing_down_check(G2, h, false);
        if (!chk.blowing_down) continue;
        std::vector<Polynomial> hv{h};
        for (const auto& m : singular_ideal(G2).minors) CHECK(radical_membership(m, hv));
    }
}

TEST_CASE("primitivity probes") {
    Ring xy = make_ring({"x", "y"});
    auto p1 = primitivity_probe(PolyMap(xy, polys(xy, {"x^2"})), polys(xy, {"x", "y"}));
    REQUIRE(p1.counterexample.has_value());
    CHECK(*p1.counterexample == parse("x", xy));

    Ring r = make_ring({"x", "y", "z"});
    auto p2 = primitivity_probe(PolyMap(r, polys(r, {"x", "x*y"})), polys(r, {"y"}));
    REQUIRE(p2.counterexample.has_value());
    CHECK(*p2.counterexample == parse("y", r));

    auto p3 = primitivity_probe(PolyMap(r, polys(r, {"x*y", "z*y"})), polys(r, {"x", "y", "z"}));
    CHECK_FALSE(p3.counterexample.has_value());
    REQUIRE(p3.candidates.size() == 3);
    for (const auto& c : p3.candidates) CHECK_FALSE(c.wedge_zero);

    // Members of Q[F] never count as witnesses.
    auto p4 = primitivity_probe(PolyMap(r, polys(r, {"x", "x*z+y^2"})), polys(r, {"x^2 + (x*z+y^2)"}));
    CHECK_FALSE(p4.counterexample.has_value());
    CHECK(p4.candidates[0].wedge_zero);
    CHECK(*p4.candidates[0].in_subalgebra);
}
