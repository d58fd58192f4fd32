#include <doctest.h>

#include <cmath>

#include "batemanlab/bateman_model.hpp"
#include "batemanlab/opalg.hpp"

using namespace batemanlab;
using cd = std::complex<double>;
using Poly = OperatorPolynomial;

namespace {

Poly g(Tag t, AlgebraId id) { return Poly::generator(t, id); }
Poly one(AlgebraId id, cd c = 1.0) { return Poly::identity(c, id); }

}  // namespace

TEST_CASE("multiply concatenates words without reordering") {
  const auto id = AlgebraId::boson;
  const Poly a1 = g(Tag::a1, id), a1d = g(Tag::a1d, id);

  CHECK(max_abs_coefficient(multiply(one(AlgebraId::free_algebra), a1) - a1) == 0.0);

  const Poly w = multiply(a1, a1d);
  REQUIRE(w.size() == 1);
  CHECK(w.coefficient({Tag::a1, Tag::a1d}) == cd(1.0));

  const auto ps = AlgebraId::phase_space;
  const Poly x1 = g(Tag::x1, ps), x2 = g(Tag::x2, ps);
  const Poly prod = (x1 + x2) * (x1 - x2);
  CHECK(prod.size() == 4);
  CHECK(prod.coefficient({Tag::x1, Tag::x1}) == cd(1.0));
  CHECK(prod.coefficient({Tag::x1, Tag::x2}) == cd(-1.0));
  CHECK(prod.coefficient({Tag::x2, Tag::x1}) == cd(1.0));
  CHECK(prod.coefficient({Tag::x2, Tag::x2}) == cd(-1.0));
  const Poly ordered = normal_order(prod, phase_space_table());
  CHECK(ordered.size() == 2);
  CHECK(ordered.coefficient({Tag::x1, Tag::x1}) == cd(1.0));
  CHECK(ordered.coefficient({Tag::x2, Tag::x2}) == cd(-1.0));
}

TEST_CASE("mixing generator sets is an algebra mismatch") {
  const Poly a1 = g(Tag::a1, AlgebraId::boson);
  const Poly x1 = g(Tag::x1, AlgebraId::phase_space);
  CHECK_THROWS_AS(multiply(a1, x1), AlgebraMismatch);
  CHECK_THROWS_AS(a1 + x1, AlgebraMismatch);
  CHECK_THROWS_AS(normal_order(a1, phase_space_table()), AlgebraMismatch);
  // A free polynomial naming a tag outside the table is also rejected.
  CHECK_THROWS_AS(normal_order(Poly::generator(Tag::A1, AlgebraId::free_algebra), boson_table()),
                  AlgebraMismatch);
}

TEST_CASE("normal ordering applies the central rules") {
  SUBCASE("a1 a1d -> a1d a1 + 1") {
    const auto id = AlgebraId::boson;
    const Poly r = normal_order(g(Tag::a1, id) * g(Tag::a1d, id), boson_table());
    CHECK(r.size() == 2);
    CHECK(r.coefficient({Tag::a1d, Tag::a1}) == cd(1.0));
    CHECK(r.coefficient({}) == cd(1.0));
  }
  SUBCASE("A1 B1 -> B1 A1 + 1") {
    const auto id = AlgebraId::pseudo;
    const Poly r = normal_order(g(Tag::A1, id) * g(Tag::B1, id), pseudo_table());
    CHECK(r.coefficient({Tag::B1, Tag::A1}) == cd(1.0));
    CHECK(r.coefficient({}) == cd(1.0));
  }
  SUBCASE("p1 x1 -> x1 p1 - i") {
    const auto id = AlgebraId::phase_space;
    const Poly r = normal_order(g(Tag::p1, id) * g(Tag::x1, id), phase_space_table());
    CHECK(r.coefficient({Tag::x1, Tag::p1}) == cd(1.0));
    CHECK(r.coefficient({}) == cd(0.0, -1.0));
  }
  SUBCASE("a a a^dag a^dag") {
    // a² a†² = a†² a² + 4 a† a + 2
    const auto id = AlgebraId::boson;
    const Poly a = g(Tag::a1, id), ad = g(Tag::a1d, id);
    const Poly r = normal_order(a * a * ad * ad, boson_table());
    CHECK(r.coefficient({Tag::a1d, Tag::a1d, Tag::a1, Tag::a1}) == cd(1.0));
    CHECK(r.coefficient({Tag::a1d, Tag::a1}) == cd(4.0));
    CHECK(r.coefficient({}) == cd(2.0));
    CHECK(r.size() == 3);
  }
  SUBCASE("result is a fixed point") {
    const auto id = AlgebraId::boson;
    const Poly p = g(Tag::a2, id) * g(Tag::a1, id) * g(Tag::a2d, id) * g(Tag::a1d, id);
    const auto t = boson_table();
    const Poly once = normal_order(p, t);
    CHECK(is_normal_ordered(once));
    CHECK(max_abs_coefficient(normal_order(once, t) - once) == 0.0);
  }
}

TEST_CASE("normal ordering is scalar-generic") {
  using cl = std::complex<long double>;
  const auto id = AlgebraId::boson;
  const auto t = boson_table<cl>();
  const auto a = Polynomial<cl>::generator(Tag::a1, id), ad = Polynomial<cl>::generator(Tag::a1d, id);
  const auto r = normal_order(a * ad, t);
  CHECK(r.coefficient({}) == cl(1.0L));
}

TEST_CASE("commutator examples") {
  const auto bid = AlgebraId::boson;
  CHECK(commutator(g(Tag::a1, bid), g(Tag::a2d, bid), boson_table()).empty());
  const auto pid = AlgebraId::pseudo;
  CHECK(commutator(g(Tag::A1, pid), g(Tag::B2, pid), pseudo_table()).empty());
  const auto xid = AlgebraId::phase_space;
  const Poly c = commutator(g(Tag::x1, xid), g(Tag::p1, xid), phase_space_table());
  CHECK(c.size() == 1);
  CHECK(c.coefficient({}) == cd(0.0, 1.0));
}

TEST_CASE("adjoint") {
  const auto bid = AlgebraId::boson;
  const auto t = boson_table();
  const Poly a1d = adjoint(g(Tag::a1, bid));
  CHECK(a1d.coefficient({Tag::a1d}) == cd(1.0));

  const Poly p = cd(2.0, 3.0) * (g(Tag::a1, bid) * g(Tag::a2d, bid));
  const Poly pd = adjoint(p);
  CHECK(pd.coefficient({Tag::a2, Tag::a1d}) == cd(2.0, -3.0));
  CHECK(max_abs_coefficient(adjoint(pd) - p) == 0.0);

  SUBCASE("A1 = -A2^dag in the ladder generators") {
    const auto ops = build_pseudo_ops({1.0, 0.4, 1.0});
    CHECK(max_abs_coefficient(normal_order(adjoint(ops.lowering[0]) + ops.lowering[1], t)) < 1e-15);
  }
  SUBCASE("H_I is formally self-adjoint") {
    // (iγ/2m)(a1a2 − a1†a2†)† = (−iγ/2m)(a2†a1† − a2a1), which normal-orders
    // back to the same operator.
    const cd c(0.0, 0.2);
    const Poly hi = c * (g(Tag::a1, bid) * g(Tag::a2, bid) - g(Tag::a1d, bid) * g(Tag::a2d, bid));
    CHECK(residual(adjoint(hi), hi, t) == 0.0);
  }
}

TEST_CASE("substitution") {
  SUBCASE("identity substitution") {
    const auto id = AlgebraId::boson;
    Substitution<cd> s(id, id);
    for (Tag tg : {Tag::a1, Tag::a2, Tag::a1d, Tag::a2d}) s.set(tg, g(tg, id));
    const Poly p = g(Tag::a2, id) * g(Tag::a1d, id) + cd(0, 1) * g(Tag::a1, id);
    const auto t = boson_table();
    CHECK(residual(substitute(p, s, t), p, t) == 0.0);
  }
  SUBCASE("missing image") {
    Substitution<cd> s(AlgebraId::boson, AlgebraId::phase_space);
    s.set(Tag::a1, g(Tag::x1, AlgebraId::phase_space));
    CHECK_THROWS_AS(substitute(g(Tag::a2, AlgebraId::boson), s, phase_space_table()), SubstitutionIncomplete);
  }
  SUBCASE("rotation of x*y") {
    const auto s = rotation_to_normal_modes();
    const Poly xy = g(Tag::x, AlgebraId::bateman) * g(Tag::y, AlgebraId::bateman);
    const Poly r = substitute(xy, s, phase_space_table());
    CHECK(r.size() == 2);
    CHECK(std::abs(r.coefficient({Tag::x1, Tag::x1}) - 0.5) < 1e-15);
    CHECK(std::abs(r.coefficient({Tag::x2, Tag::x2}) + 0.5) < 1e-15);
  }
  SUBCASE("ladder Hamiltonian expands to the phase-space Hamiltonian") {
    // Hand expansion at m=1, γ=0.4, k=1 (ω² = 0.96): the a†a ordering
    // constants cancel between modes and a1a2 − a1†a2† = i(p1x2 + p2x1).
    const ModelParameters params{1.0, 0.4, 1.0};
    const auto pairs = build_ladder_pairs(params);
    const Poly h = substitute(build_ladder_hamiltonian(params), pairs.to_phase_space, phase_space_table());
    CHECK(h.size() == 6);
    CHECK(std::abs(h.coefficient({Tag::p1, Tag::p1}) - 0.5) < 1e-12);
    CHECK(std::abs(h.coefficient({Tag::x1, Tag::x1}) - 0.48) < 1e-12);
    CHECK(std::abs(h.coefficient({Tag::p2, Tag::p2}) + 0.5) < 1e-12);
    CHECK(std::abs(h.coefficient({Tag::x2, Tag::x2}) + 0.48) < 1e-12);
    CHECK(std::abs(h.coefficient({Tag::x2, Tag::p1}) + 0.2) < 1e-12);
    CHECK(std::abs(h.coefficient({Tag::x1, Tag::p2}) + 0.2) < 1e-12);
    CHECK(std::abs(h.coefficient({})) < 1e-12);
  }
}

TEST_CASE("right-ideal reduction") {
  const auto id = AlgebraId::pseudo;
  const auto t = pseudo_table();
  const TagSet ann = make_tag_set({Tag::A1, Tag::A2});

  CHECK(reduce_mod_right_ideal(normal_order(g(Tag::B1, id) * g(Tag::A1, id), t), ann, t).empty());

  const Poly r = reduce_mod_right_ideal(normal_order(g(Tag::A1, id) * g(Tag::B1, id), t), ann, t);
  CHECK(r.size() == 1);
  CHECK(r.coefficient({}) == cd(1.0));

  SUBCASE("H B1 reduces to E_10 B1") {
    const ModelParameters params{1.0, 0.4, 1.0};
    const auto forms = pseudo_form(params);
    const Poly hb = normal_order(forms.pseudo() * g(Tag::B1, id), t);
    const Poly red = reduce_mod_right_ideal(hb, ann, t);
    const cd expected(std::sqrt(0.96), 0.4);  // ω + iγ/2m + iγ/2m
    CHECK(red.size() == 1);
    CHECK(std::abs(red.coefficient({Tag::B1}) - expected) < 1e-12);
  }

  SUBCASE("errors") {
    CHECK_THROWS_AS(reduce_mod_right_ideal(g(Tag::A1, id) * g(Tag::B1, id), ann, t), OrderViolation);
    // B tags are not rightmost in the order, so they cannot play annihilators.
    CHECK_THROWS_AS(reduce_mod_right_ideal(g(Tag::B1, id), make_tag_set({Tag::B1, Tag::B2}), t),
                    OrderViolation);
  }
}

TEST_CASE("terms below the drop tolerance vanish") {
  const auto id = AlgebraId::boson;
  Poly p = g(Tag::a1, id);
  p.add_term({Tag::a2}, cd(1e-15));
  CHECK(p.size() == 1);
  p += cd(-1.0) * g(Tag::a1, id);
  CHECK(p.empty());
}

TEST_CASE("standard tables are star-consistent") {
  CHECK(phase_space_table().is_star_consistent());
  CHECK(boson_table().is_star_consistent());
  CHECK(universal_table().is_star_consistent());
  CommutationTable<cd> bad(AlgebraId::universal, make_tag_set({Tag::a1, Tag::a1d}));
  bad.add_rule(Tag::a1, Tag::a1d, cd(0, 1));
  CHECK_FALSE(bad.is_star_consistent());
}

TEST_CASE("generator metadata") {
  for (std::size_t i = 0; i < tag_count; ++i) {
    const Tag t = static_cast<Tag>(i);
    CHECK(adjoint(adjoint(t)) == t);
    CHECK(tag_from_name(name(t)) == t);
  }
  CHECK(order_rank(Tag::a1d) < order_rank(Tag::a1));
  CHECK(order_rank(Tag::x1) < order_rank(Tag::p1));
  CHECK(order_rank(Tag::x1) < order_rank(Tag::x2));
  CHECK(order_rank(Tag::a1d) < order_rank(Tag::a2d));
  CHECK(order_rank(Tag::B2) < order_rank(Tag::A1));
}
