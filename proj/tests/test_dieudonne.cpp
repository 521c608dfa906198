#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "dmkit/dieudonne.hpp"

using namespace dmkit;

namespace {

// Psi = F^c + V^d plus optional p-power interior terms
CyclicPresentation simple_psi(const RingPtr& ring, int c, int d,
                              const std::vector<std::pair<int, int>>& a_extra = {},
                              const std::vector<std::pair<int, int>>& b_extra = {}) {
    CyclicPresentation psi;
    psi.ring = ring;
    psi.c = c;
    psi.d = d;
    psi.a.assign(static_cast<std::size_t>(c) + 1, WittScalar::zero(ring));
    psi.b.assign(static_cast<std::size_t>(d), WittScalar::zero(ring));
    psi.a[0] = WittScalar::one(ring);
    psi.b[static_cast<std::size_t>(d) - 1] = WittScalar::one(ring);
    for (auto [i, e] : a_extra) psi.a[static_cast<std::size_t>(i)] = WittScalar::one(ring).mul_pow_p(e);
    for (auto [i, e] : b_extra) psi.b[static_cast<std::size_t>(i) - 1] = WittScalar::one(ring).mul_pow_p(e);
    return psi;
}

// all bi-nilpotent polygons (strictly increasing slopes in (0,1),
// integral breakpoints) of height at most hmax
void enum_polygons(int h_left, Rational last, std::vector<Segment>& cur,
                   std::vector<NewtonPolygon>& out) {
    if (!cur.empty()) out.push_back(NewtonPolygon::from_segments(cur));
    for (int dx = 2; dx <= h_left; ++dx)
        for (int dy = 1; dy < dx; ++dy) {
            Rational s(dy, dx);
            if (!(last < s)) continue;
            cur.push_back({s, dx});
            enum_polygons(h_left - dx, s, cur, out);
            cur.pop_back();
        }
}

std::vector<NewtonPolygon> all_binilpotent_polygons(int hmax) {
    std::vector<NewtonPolygon> out;
    std::vector<Segment> cur;
    enum_polygons(hmax, Rational(-1), cur, out);
    // remove duplicates arising from reducible (dx, dy) pairs
    std::vector<NewtonPolygon> uniq;
    for (const auto& nu : out)
        if (std::find(uniq.begin(), uniq.end(), nu) == uniq.end()) uniq.push_back(nu);
    return uniq;
}

}  // namespace

TEST_CASE("from_cyclic F+V: supersingular basics") {
    auto ring = WittRing::create(2, 1, 10);
    auto psi = simple_psi(ring, 1, 1);
    auto M = from_cyclic(psi);
    CHECK(M.rank() == 2);
    CHECK(M.cdim() == 1);
    CHECK(M.ddim() == 1);
    CHECK(a_number(M) == 1);
    CHECK(M.is_binilpotent());

    // F^{c+d} M = p^d M
    auto L = Lattice::standard(ring, 2);
    auto FL = apply_map(M.F(), apply_map(M.F(), L));
    CHECK(FL == L.scaled(1));
}

TEST_CASE("from_cyclic F^2+V^2 and F^6+pF^2+V^2") {
    auto ring = WittRing::create(3, 1, 12);
    auto M = from_cyclic(simple_psi(ring, 2, 2));
    CHECK(M.rank() == 4);
    CHECK(M.is_binilpotent());
    CHECK(a_number(M) == 1);

    auto big = from_cyclic(simple_psi(ring, 6, 2, {{2, 1}}));
    CHECK(big.rank() == 8);
    CHECK(big.cdim() == 6);
    CHECK(big.ddim() == 2);
    CHECK(a_number(big) == 1);
}

TEST_CASE("newton_from_psi") {
    auto ring = WittRing::create(2, 1, 12);
    for (int c = 1; c <= 4; ++c)
        for (int d = 1; d <= 3; ++d) {
            auto nu = newton_from_psi(simple_psi(ring, c, d));
            int g = std::gcd(c + d, d);
            CHECK(nu == NewtonPolygon::isoclinic(d / g, (c + d) / g, g));
        }

    auto nu1 = newton_from_psi(simple_psi(ring, 6, 2, {{2, 1}}));
    CHECK(nu1 == NewtonPolygon::isoclinic(1, 4, 2));

    auto nu2 = newton_from_psi(simple_psi(ring, 3, 3, {{3, 1}}));
    CHECK(nu2 == NewtonPolygon::from_segments({{Rational(1, 3), 3}, {Rational(2, 3), 3}}));
}

TEST_CASE("newton_from_module") {
    auto ring = WittRing::create(2, 1, 12);
    auto M = from_cyclic(simple_psi(ring, 1, 1));
    CHECK(newton_from_module(M) == NewtonPolygon::isoclinic(1, 2));

    auto H12 = minimal_module(ring, 1, 2, 1);
    CHECK(newton_from_module(H12) == NewtonPolygon::isoclinic(2, 3));
}

TEST_CASE("newton_from_module matches newton_from_psi on random presentations") {
    auto polys = all_binilpotent_polygons(5);
    std::mt19937_64 rng(555);
    int done = 0;
    for (auto [p, n, N] : {std::tuple<std::uint64_t, int, int>{2, 1, 16}, {3, 1, 12}, {2, 2, 14}}) {
        auto ring = WittRing::create(p, n, N);
        for (int it = 0; it < 17; ++it) {
            const auto& nu = polys[rng() % polys.size()];
            auto psi = psi_with_polygon(ring, nu, rng());
            CHECK(newton_from_psi(psi) == nu);
            auto M = from_cyclic(psi);
            CHECK(newton_from_module(M) == nu);
            ++done;
        }
    }
    CHECK(done >= 50);
}

TEST_CASE("minimal modules") {
    auto ring = WittRing::create(2, 1, 10);
    auto M1 = minimal_module(ring, 1, 1, 1);
    CHECK(M1.rank() == 2);
    CHECK(a_number(M1) == 1);

    auto M2 = minimal_module(ring, 2, 3, 1);
    CHECK(M2.rank() == 5);
    CHECK(a_number(M2) == 2);

    auto M3 = minimal_module(ring, 1, 2, 2);
    CHECK(M3.rank() == 6);
    CHECK(newton_from_module(M3) == NewtonPolygon::isoclinic(2, 3, 2));
    CHECK(a_number(M3) == 2);

    CHECK_THROWS_AS(minimal_module(ring, 2, 4, 1), input_error);

    // F^h M = p^d M for the simple minimal module
    for (auto [c, d] : {std::pair<int, int>{1, 1}, {2, 3}, {1, 2}, {3, 1}}) {
        auto M = minimal_module(ring, c, d, 1);
        auto L = Lattice::standard(ring, c + d);
        auto FL = L;
        for (int i = 0; i < c + d; ++i) FL = apply_map(M.F(), FL);
        CHECK(FL == L.scaled(d));
    }
}

TEST_CASE("direct sum and dual") {
    auto ring = WittRing::create(2, 1, 12);
    auto A = from_cyclic(simple_psi(ring, 1, 1));
    auto B = from_cyclic(simple_psi(ring, 2, 3));

    CHECK(a_number(direct_sum(A, B)) == 2);
    CHECK(newton_from_module(direct_sum(A, B)) ==
          direct_sum(newton_from_module(A), newton_from_module(B)));

    auto C = from_cyclic(simple_psi(ring, 2, 3));
    auto Cd = dual(C);
    CHECK(Cd.cdim() == 3);
    CHECK(Cd.ddim() == 2);
    CHECK(dual(Cd).F().A == C.F().A);
    CHECK(dual(Cd).V().A == C.V().A);
    CHECK(newton_from_module(Cd) == newton_from_module(C).dual());
    CHECK(a_number(Cd) == a_number(C));
}

TEST_CASE("nilpotency and isoclinicity checks") {
    auto ring = WittRing::create(2, 1, 10);
    auto ss = from_cyclic(simple_psi(ring, 1, 1));
    CHECK(ss.is_binilpotent());
    CHECK(newton_from_module(ss).is_isoclinic());

    auto et = minimal_module(ring, 1, 0, 1);
    CHECK(!et.is_binilpotent());

    auto mixed = from_cyclic(simple_psi(ring, 3, 3, {{3, 1}}));
    CHECK(mixed.is_binilpotent());
    CHECK(!newton_from_module(mixed).is_isoclinic());
}

TEST_CASE("psi_with_polygon") {
    auto ring = WittRing::create(2, 1, 12);
    auto ss = psi_with_polygon(ring, NewtonPolygon::isoclinic(1, 2));
    CHECK(ss.c == 1);
    CHECK(ss.d == 1);
    CHECK(ss.a[0] == WittScalar::one(ring));
    CHECK(ss.a[1].is_zero());
    CHECK(ss.b[0] == WittScalar::one(ring));

    auto mix = psi_with_polygon(
        ring, NewtonPolygon::from_segments({{Rational(1, 3), 3}, {Rational(2, 3), 3}}));
    CHECK(mix.c == 3);
    CHECK(mix.d == 3);
    CHECK(mix.a[3] == WittScalar::one(ring).mul_pow_p(1));  // the F^0 term p
    CHECK(mix.b[2] == WittScalar::one(ring));

    CHECK_THROWS_AS(
        psi_with_polygon(ring, NewtonPolygon::from_segments({{Rational(0), 2}})),
        input_error);
}

TEST_CASE("psi_with_polygon round trip, all polygons of height <= 8") {
    auto ring = WittRing::create(2, 1, 16);
    auto polys = all_binilpotent_polygons(8);
    CHECK(polys.size() > 20);
    for (const auto& nu : polys) {
        auto psi = psi_with_polygon(ring, nu);
        CHECK(newton_from_psi(psi) == nu);
    }
}
