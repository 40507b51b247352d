#include <doctest.h>

#include "lndkit/forms.hpp"
#include "lndkit/lnd.hpp"
#include "support/random_poly.hpp"

using namespace lndkit;
using lndkit::testing::PolyGen;

namespace {

Derivation make_derivation(const Ring& r, std::initializer_list<const char*> images) {
    std::vector<Polynomial> v;
    for (const char* s : images) v.push_back(parse(s, r));
    return Derivation(r, std::move(v));
}

struct Example {
    Ring ring;
    Distribution D;
    PolyMap F;
};

Example example_one() {
    Ring r = make_ring({"x", "y", "z"});
    return {r, Distribution::certify({make_derivation(r, {"0", "x", "-2*y"})}),
            PolyMap(r, {parse("x", r), parse("x*z+y^2", r)})};
}

Example example_two() {
    Ring r = make_ring({"x", "y", "u", "v"});
    return {r, Distribution::certify({make_derivation(r, {"u", "v", "0", "0"})}),
            PolyMap(r, {parse("u", r), parse("v", r), parse("x*v - y*u", r)})};
}

Example example_parabola() {
    Ring r = make_ring({"x", "y"});
    return {r, Distribution::certify({make_derivation(r, {"1", "2*x"})}), PolyMap(r, {parse("y - x^2", r)})};
}

Example example_plane() {
    Ring r = make_ring({"x", "y", "z"});
    return {r, Distribution::certify({make_derivation(r, {"1", "0", "0"}), make_derivation(r, {"0", "1", "2*y"})}),
            PolyMap(r, {parse("z - y^2", r)})};
}

}  // namespace

TEST_CASE("apply examples") {
    auto ex1 = example_one();
    CHECK(ex1.D[0].apply(parse("x*z+y^2", ex1.ring)).is_zero());
    CHECK(ex1.D[0].apply(Polynomial(ex1.ring, 5)).is_zero());
    CHECK(ex1.D[0].apply(parse("y", ex1.ring)) == parse("x", ex1.ring));
    auto ex2 = example_two();
    CHECK(ex2.D[0].apply(parse("x*v - y*u", ex2.ring)).is_zero());

    Ring other = make_ring({"a"});
    CHECK_THROWS_AS(ex1.D[0].apply(parse("a", other)), ContextMismatch);
    CHECK_THROWS_AS(make_derivation(ex1.ring, {"0", "1"}), DimensionMismatch);

    // Leibniz and linearity on random inputs.
    PolyGen gen(101);
    for (int k = 0; k < 30; ++k) {
        Polynomial p = gen.poly(ex1.ring, 3, 4), q = gen.poly(ex1.ring, 3, 4);
        const auto& d = ex1.D[0];
        CHECK(d.apply(p * q) == d.apply(p) * q + p * d.apply(q));
        CHECK(d.apply(p + q) == d.apply(p) + d.apply(q));
    }
}

TEST_CASE("local nilpotency") {
    auto ex1 = example_one();
    auto rep = is_locally_nilpotent(ex1.D[0]);
    CHECK(rep.nilpotent);
    CHECK(rep.orders == std::vector<unsigned>{1, 2, 3});

    Ring r = make_ring({"x"});
    auto semisimple = is_locally_nilpotent(make_derivation(r, {"x"}), 50);
    CHECK_FALSE(semisimple.nilpotent);
    REQUIRE(semisimple.witness.has_value());
    CHECK(*semisimple.witness == parse("x", r));

    auto zero = is_locally_nilpotent(Derivation::zero(ex1.ring));
    CHECK(zero.nilpotent);
    CHECK(zero.orders == std::vector<unsigned>{1, 1, 1});

    auto D = Distribution::certify({make_derivation(r, {"x"})}, 10);
    CHECK_FALSE(D.certified_lnd());
    CHECK_THROWS_AS(exp(D, parse("x", r)), Uncertified);
    CHECK_THROWS_AS(is_locally_nilpotent(ex1.D[0], 0), InputError);
}

TEST_CASE("commutation") {
    Ring r = make_ring({"x", "y"});
    CHECK(commutes(Derivation::partial(r, 0), Derivation::partial(r, 1)));
    auto ex1 = example_one();
    CHECK(commutes(ex1.D[0], ex1.D[0]));
    Derivation a = make_derivation(r, {"0", "x"}), b = make_derivation(r, {"y", "0"});
    CHECK_FALSE(commutes(a, b));
    Derivation br = bracket(a, b);
    CHECK(br.image(0) == parse("x", r));
    CHECK(br.image(1) == parse("-y", r));

    auto D = Distribution::certify({a, b});
    CHECK(D.certified_lnd());
    CHECK_FALSE(D.certified_commuting());
    CHECK_THROWS_AS(D.require_certified("test"), Uncertified);
    CHECK(example_plane().D.certified());
}

TEST_CASE("exp examples") {
    auto ex1 = example_one();
    const Ring& er = ex1.D.exp_ring();
    CHECK(er->names() == std::vector<std::string>{"t", "x", "y", "z"});
    CHECK(exp(ex1.D, parse("y", ex1.ring)) == parse("y + t*x", er));
    Polynomial ez = exp(ex1.D, parse("z", ex1.ring));
    CHECK(ez == parse("z - 2*t*y - t^2*x", er));
    CHECK(series_string(ex1.D, ez) == "z - 2*t*y - t^2*x");
    CHECK(exp(ex1.D, parse("x*z+y^2", ex1.ring)) == parse("x*z+y^2", er));

    auto ex4 = example_plane();
    CHECK(ex4.D.exp_ring()->names() == std::vector<std::string>{"t1", "t2", "x", "y", "z"});
    CHECK(exp(ex4.D, parse("z", ex4.ring)) == parse("z + 2*t2*y + t2^2", ex4.D.exp_ring()));

    // Parameter names avoid the source variables.
    Ring tr = make_ring({"t", "x"});
    auto D = Distribution::certify({make_derivation(tr, {"0", "t"})});
    CHECK(D.exp_ring()->name(0) == "t_");
}

TEST_CASE("exp is a ring homomorphism and restricts to the identity at t = 0") {
    PolyGen gen(103);
    for (auto ex : {example_one(), example_two(), example_parabola(), example_plane()}) {
        const Ring& er = ex.D.exp_ring();
        std::map<std::size_t, Polynomial> at_zero;
        for (std::size_t i = 0; i < er->size(); ++i)
            at_zero.emplace(i, i < ex.D.size() ? Polynomial(ex.ring) : Polynomial::variable(ex.ring, i - ex.D.size()));
        for (int k = 0; k < 10; ++k) {
            Polynomial p = gen.poly(ex.ring, 3, 4), q = gen.poly(ex.ring, 3, 4);
            CHECK(exp(ex.D, p * q) == exp(ex.D, p) * exp(ex.D, q));
            CHECK(exp(ex.D, p + q) == exp(ex.D, p) + exp(ex.D, q));
            CHECK(substitute(exp(ex.D, p), at_zero, ex.ring) == p);
        }
    }
}

TEST_CASE("one-parameter additivity exp(s d) exp(t d) = exp((s + t) d)") {
    for (auto ex : {example_one(), example_two(), example_parabola()}) {
        const Ring& er = ex.D.exp_ring();
        std::size_t n = ex.ring->size();
        std::vector<std::string> names{"s_"};
        names.insert(names.end(), er->names().begin(), er->names().end());
        Ring st = make_ring(names);  // (s, t, x...)
        auto images = exp_images(ex.D);
        // exp(s d) of each variable, written over st.
        std::map<std::size_t, Polynomial> s_images, shift;
        shift.emplace(0, Polynomial::variable(st, 0) + Polynomial::variable(st, 1));
        for (std::size_t j = 0; j < n; ++j) {
            std::map<std::size_t, Polynomial> rename{{0, Polynomial::variable(st, 0)}};
            for (std::size_t i = 0; i < n; ++i) rename.emplace(1 + i, Polynomial::variable(st, 2 + i));
            s_images.emplace(1 + j, substitute(images[j], rename, st));
            shift.emplace(1 + j, Polynomial::variable(st, 2 + j));
        }
        s_images.emplace(0, Polynomial::variable(st, 1));
        for (std::size_t j = 0; j < n; ++j) {
            Polynomial composed = substitute(images[j], s_images, st);
            Polynomial summed = substitute(images[j], shift, st);
            CHECK(composed == summed);
        }
    }
}

TEST_CASE("degree function") {
    auto ex1 = example_one();
    CHECK(degree_rel(ex1.D, parse("z", ex1.ring)) == 2u);
    CHECK(degree_rel(ex1.D, parse("x*z+y^2", ex1.ring)) == 0u);
    CHECK(degree_rel(ex1.D, parse("7", ex1.ring)) == 0u);
    CHECK_FALSE(degree_rel(ex1.D, Polynomial(ex1.ring)).has_value());

    PolyGen gen(107);
    for (auto ex : {example_one(), example_two(), example_parabola()}) {
        for (int k = 0; k < 25; ++k) {
            Polynomial p = gen.nonzero(ex.ring, 3, 3), q = gen.nonzero(ex.ring, 3, 3);
            CHECK(*degree_rel(ex.D, p * q) == *degree_rel(ex.D, p) + *degree_rel(ex.D, q));
        }
    }
    // Factorial closedness through degrees: factors of a nonzero invariant are invariant.
    for (int k = 0; k < 20; ++k) {
        Polynomial a = ex1.F.pullback(gen.nonzero(ex1.F.tags(), 2, 3));
        Polynomial b = ex1.F.pullback(gen.nonzero(ex1.F.tags(), 2, 3));
        Polynomial prod = a * b;
        CHECK(degree_rel(ex1.D, prod) == 0u);
        for (const auto& f : squarefree_factors(prod)) {
            CHECK(degree_rel(ex1.D, f.factor) == 0u);
            CHECK(ex1.D.is_invariant(f.factor));
        }
        CHECK(ex1.D.is_invariant(a));
    }
}

TEST_CASE("bracket determinant and non-free locus") {
    auto ex1 = example_one();
    std::vector<Polynomial> y{parse("y", ex1.ring)}, z{parse("z", ex1.ring)}, inv{parse("x*z+y^2", ex1.ring)};
    CHECK(bracket_det(ex1.D, y) == parse("x", ex1.ring));
    CHECK(bracket_det(ex1.D, z) == parse("-2*y", ex1.ring));
    CHECK(bracket_det(ex1.D, inv).is_zero());
    std::vector<Polynomial> two{y[0], z[0]};
    CHECK_THROWS_AS(bracket_det(ex1.D, two), DimensionMismatch);

    auto ex4 = example_plane();
    std::vector<Polynomial> a{parse("x", ex4.ring), parse("z", ex4.ring)}, b{parse("z", ex4.ring), parse("x", ex4.ring)};
    CHECK(bracket_det(ex4.D, a) == parse("2*y", ex4.ring));
    CHECK(bracket_det(ex4.D, b) == parse("-2*y", ex4.ring));

    auto ex2 = example_two();
    auto nl = nl_locus_ideal(ex2.D);
    REQUIRE(nl.size() == 2);
    CHECK(nl[0] == parse("u", ex2.ring));
    CHECK(nl[1] == parse("v", ex2.ring));
    auto partial = Distribution::certify({Derivation::partial(ex1.ring, 0)});
    CHECK(nl_locus_ideal(partial) == std::vector<Polynomial>{Polynomial(ex1.ring, 1)});
    auto nl1 = nl_locus_ideal(ex1.D);
    REQUIRE(nl1.size() == 2);
    CHECK(nl1[0] == parse("x", ex1.ring));
    CHECK(nl1[1] == parse("y", ex1.ring));
}

TEST_CASE("E factor examples") {
    auto ex1 = example_one();
    auto e1 = e_factor(ex1.D, ex1.F);
    CHECK(e1.E == Polynomial(ex1.ring, -1));
    CHECK(e1.probes_consistent);
    CHECK(e1.consistent_nonzero_probes() >= 3);

    auto ex2 = example_two();
    auto e2 = e_factor(ex2.D, ex2.F);
    CHECK(e2.E == Polynomial(ex2.ring, -1));
    CHECK(e2.probes[e2.used_probe].R[0] == parse("x", ex2.ring));
    CHECK(e2.probes[e2.used_probe].bracket == parse("u", ex2.ring));
    CHECK(e2.probes[e2.used_probe].J == parse("-u", ex2.ring));

    Ring r4 = make_ring({"a", "b", "c", "d"});
    auto d1 = Distribution::certify({Derivation::partial(r4, 0)});
    PolyMap rest(r4, {parse("b", r4), parse("c", r4), parse("d", r4)});
    CHECK(e_factor(d1, rest).E == Polynomial(r4, 1));

    CHECK(e_factor(example_parabola().D, example_parabola().F).E == Polynomial(example_parabola().ring, 1));

    // F too short for p + q = n.
    PolyMap short_map(ex1.ring, {parse("x", ex1.ring)});
    CHECK_THROWS_AS(e_factor(ex1.D, short_map), DimensionMismatch);

    // A pool where every J vanishes.
    std::vector<std::vector<Polynomial>> bad{{parse("x", ex1.ring)}, {parse("x*z+y^2", ex1.ring)}};
    CHECK_THROWS_AS(e_factor(ex1.D, ex1.F, bad), NoProbeFound);

    // F that does not generate the invariants: [D](y) = 1 is not divisible by J(y) = -2x.
    Ring xy = make_ring({"x", "y"});
    auto dy = Distribution::certify({Derivation::partial(xy, 1)});
    CHECK_THROWS_AS(e_factor(dy, PolyMap(xy, {parse("x^2", xy)})), InconsistentProbes);
}

TEST_CASE("Jacobian formula [D] = E J on random probes") {
    PolyGen gen(109);
    for (auto ex : {example_one(), example_two(), example_parabola(), example_plane()}) {
        auto ef = e_factor(ex.D, ex.F);
        for (int k = 0; k < 15; ++k) {
            std::vector<Polynomial> R;
            for (std::size_t i = 0; i < ex.D.size(); ++i) R.push_back(gen.poly(ex.ring, 3, 4));
            CHECK(bracket_det(ex.D, R) == ef.E * jacobian_J(R, ex.F));
        }
    }
}

TEST_CASE("diagonal slices") {
    auto ex3 = example_parabola();
    std::vector<Polynomial> pool{parse("x", ex3.ring), parse("y", ex3.ring)};
    auto s3 = diagonal_slices(ex3.D, ex3.F, pool);
    REQUIRE(s3.system.has_value());
    CHECK(s3.system->slices[0] == parse("x", ex3.ring));
    CHECK(s3.system->multipliers[0] == Polynomial(ex3.F.tags(), 1));

    auto ex1 = example_one();
    auto s1 = diagonal_slices(ex1.D, ex1.F);
    REQUIRE(s1.system.has_value());
    CHECK(s1.system->slices[0] == parse("y", ex1.ring));
    CHECK(s1.system->multipliers[0] == parse("t1", ex1.F.tags()));
    CHECK(s1.diagnostics[0].order == 2);

    Ring r = make_ring({"a", "b"});
    auto da = Distribution::certify({Derivation::partial(r, 0)});
    auto sa = diagonal_slices(da, PolyMap(r, {parse("b", r)}));
    REQUIRE(sa.system.has_value());
    CHECK(sa.system->slices[0] == parse("a", r));

    auto ex4 = example_plane();
    auto s4 = diagonal_slices(ex4.D, ex4.F);
    REQUIRE(s4.system.has_value());
    CHECK(s4.system->slices == std::vector<Polynomial>{parse("x", ex4.ring), parse("y", ex4.ring)});

    // An empty pool is reported, not guessed.
    std::vector<Polynomial> none{parse("x*z+y^2", ex1.ring)};
    auto miss = diagonal_slices(ex1.D, ex1.F, none);
    CHECK_FALSE(miss.system.has_value());
    REQUIRE(miss.diagnostics.size() == 1);
    CHECK_FALSE(miss.diagnostics[0].found);
}

TEST_CASE("slice identities") {
    PolyGen gen(113);
    for (auto ex : {example_one(), example_two(), example_parabola(), example_plane()}) {
        auto search = diagonal_slices(ex.D, ex.F);
        REQUIRE(search.system.has_value());
        const auto& s = search.system->slices;
        Polynomial diag(ex.ring, 1);
        for (std::size_t k = 0; k < s.size(); ++k) diag *= ex.D[k].apply(s[k]);
        Polynomial Js = jacobian_J(s, ex.F);
        CHECK(ex.D.is_invariant(Js));
        for (int k = 0; k < 10; ++k) {
            std::vector<Polynomial> R;
            for (std::size_t i = 0; i < ex.D.size(); ++i) R.push_back(gen.poly(ex.ring, 3, 4));
            CHECK(diag * jacobian_J(R, ex.F) == Js * bracket_det(ex.D, R));
        }
    }
}
