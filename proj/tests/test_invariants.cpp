#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "dmkit/invariants.hpp"

using namespace dmkit;

namespace {

// Psi = F^c + V^d plus optional extra terms: a_extra (i, e) sets a_i = p^e,
// so the term is p^e F^{c-i}.
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
    std::vector<NewtonPolygon> uniq;
    for (const auto& nu : out)
        if (std::find(uniq.begin(), uniq.end(), nu) == uniq.end()) uniq.push_back(nu);
    return uniq;
}

// diagonal lattice span{p^{e_i} u_i} in the standard basis
Lattice diag_lattice(const RingPtr& ring, const std::vector<int>& e) {
    int h = static_cast<int>(e.size());
    int off = *std::min_element(e.begin(), e.end());
    WMatrix B(ring, h, h);
    for (int i = 0; i < h; ++i)
        B.at(i, i) = WittScalar::one(ring).mul_pow_p(e[static_cast<std::size_t>(i)] - off);
    return Lattice::from_columns(B, off);
}

}  // namespace

TEST_CASE("m_minus pinned examples") {
    auto ring = WittRing::create(2, 1, 20);

    // F^3 + p + V^3: basis rows (Fz, F^2 z, F^3 z, z, Vz, V^2 z)
    auto psi = simple_psi(ring, 3, 3, {{3, 1}});
    auto L = m_minus(psi);
    CHECK(L == diag_lattice(ring, {0, 0, 0, 1, 0, 0}));
    CHECK(quotient_p_exponent(Lattice::standard(ring, 6), L) == 1);
    CHECK(minimal_height(psi) == 1);

    // F + V: M_minus = M
    auto ss = simple_psi(ring, 1, 1);
    CHECK(m_minus(ss) == Lattice::standard(ring, 2));
    CHECK(minimal_height(ss) == 0);

    // F^2 + V^2: span{F^2 z, Fz, pz, Vz}
    auto s2 = simple_psi(ring, 2, 2);
    CHECK(m_minus(s2) == diag_lattice(ring, {0, 0, 1, 0}));
    CHECK(minimal_height(s2) == 1);

    // non-bi-nilpotent input refused (F + 1 + V has slopes 0 and 1)
    auto et = simple_psi(ring, 1, 1);
    et.a[1] = WittScalar::one(ring);
    CHECK_THROWS_AS(m_minus(et), input_error);
}

TEST_CASE("m_plus pinned examples") {
    auto ring = WittRing::create(2, 1, 20);

    // F^2 + V^2, slope 1/2: span{p^{-1} F^2 z, Fz, z, Vz}
    auto s2 = simple_psi(ring, 2, 2);
    auto P = m_plus_isoclinic(s2);
    CHECK(P == diag_lattice(ring, {0, -1, 0, 0}));
    CHECK(quotient_p_exponent(P, Lattice::standard(ring, 4)) == 1);

    // F + V: M_plus = M
    CHECK(m_plus_isoclinic(simple_psi(ring, 1, 1)) == Lattice::standard(ring, 2));

    // F^6 + pF^2 + V^2, slope 1/4
    auto tra = simple_psi(ring, 6, 2, {{4, 1}});
    auto ex = extremal_lattices(tra);
    REQUIRE(ex.M_plus.has_value());
    CHECK(*ex.exp_plus_minus == 1);

    // non-isoclinic input refused
    CHECK_THROWS_AS(m_plus_isoclinic(simple_psi(ring, 3, 3, {{3, 1}})), input_error);
}

TEST_CASE("extremal lattices: equal p-exponents and length identity") {
    auto ring = WittRing::create(2, 1, 22);
    std::mt19937_64 rng(4242);
    int isoclinic_seen = 0;
    for (const auto& nu : all_binilpotent_polygons(6)) {
        if (!nu.is_isoclinic()) continue;
        auto psi = psi_with_polygon(ring, nu, rng());
        auto ex = extremal_lattices(psi);
        REQUIRE(ex.M_plus.has_value());
        auto M = Lattice::standard(ring, static_cast<int>(nu.height()));
        CHECK(lattice_contains(M, ex.M_minus));
        CHECK(lattice_contains(*ex.M_plus, M));
        CHECK(ex.exp_m_minus == nu.minimal_height_value());
        CHECK(*ex.exp_plus_m == ex.exp_m_minus);
        CHECK(*ex.exp_plus_minus == ex.exp_m_minus);
        CHECK(quotient_length(*ex.M_plus, ex.M_minus) ==
              2 * quotient_length(M, ex.M_minus));
        ++isoclinic_seen;
    }
    CHECK(isoclinic_seen >= 5);
}

TEST_CASE("minimal height equals floor nu(c) on all polygons of height <= 8") {
    auto ring = WittRing::create(2, 1, 24);
    std::mt19937_64 rng(99);
    int done = 0;
    for (const auto& nu : all_binilpotent_polygons(8)) {
        auto psi = psi_with_polygon(ring, nu, rng());
        CHECK(minimal_height(psi) == nu.minimal_height_value());
        ++done;
    }
    CHECK(done >= 20);
}

TEST_CASE("level torsion: F^c + V^d gives min(c,d)") {
    for (std::uint64_t p : {2ull, 3ull}) {
        auto ring = WittRing::create(p, 1, 22);
        for (auto [c, d] : {std::pair<int, int>{1, 1}, {2, 1}, {2, 3}, {3, 2}, {4, 2}, {3, 4}}) {
            auto M = from_cyclic(simple_psi(ring, c, d));
            auto tr = level_torsion_isoclinic(M);
            CHECK(tr.ell == std::min(c, d));
            for (const auto& row : tr.delta_table) {
                CHECK(row.delta == row.beta - row.alpha);
                CHECK(row.delta >= 0);
                if (row.q <= c) CHECK(row.alpha == 0);
                if (row.q <= d) CHECK(row.beta == row.q);
                // F^{c+d} M = p^d M
                if (row.q == c + d) {
                    CHECK(row.alpha == d);
                    CHECK(row.beta == d);
                }
            }
        }
    }
}

TEST_CASE("level torsion: Traverso counterexample and intermediate family") {
    auto ring = WittRing::create(2, 1, 22);

    // F^6 + pF^2 + V^2: ell = 3 > min(c,d) = 2
    auto tra = from_cyclic(simple_psi(ring, 6, 2, {{4, 1}}));
    CHECK(level_torsion_isoclinic(tra).ell == 3);

    // F^6 + p^2 F^2 + V^2: ell = 2
    auto mid = from_cyclic(simple_psi(ring, 6, 2, {{4, 2}}));
    CHECK(level_torsion_isoclinic(mid).ell == 2);

    // same over p = 3
    auto ring3 = WittRing::create(3, 1, 18);
    CHECK(level_torsion_isoclinic(from_cyclic(simple_psi(ring3, 6, 2, {{4, 1}}))).ell == 3);

    // alpha/beta shift by the p-shift over one full period
    auto tr = level_torsion_isoclinic(tra);
    int q0 = tr.cycle_start, T = tr.period;
    REQUIRE(q0 + T < static_cast<int>(tr.delta_table.size()));
    CHECK(tr.delta_table[static_cast<std::size_t>(q0 + T)].alpha ==
          tr.delta_table[static_cast<std::size_t>(q0)].alpha + tr.p_shift);
    CHECK(tr.delta_table[static_cast<std::size_t>(q0 + T)].beta ==
          tr.delta_table[static_cast<std::size_t>(q0)].beta + tr.p_shift);

    // non-isoclinic refused
    CHECK_THROWS_AS(
        level_torsion_isoclinic(from_cyclic(simple_psi(ring, 3, 3, {{3, 1}}))),
        input_error);
}

TEST_CASE("witness check") {
    auto ring = WittRing::create(2, 1, 20);

    // Traverso: x = -(pF^2 + V^2) z with F^6 x = p^3 z
    auto tra = simple_psi(ring, 6, 2, {{4, 1}});
    auto x = standard_witness(tra, 3);
    CHECK(witness_check(x, tra, 3));
    CHECK(!witness_check(x, tra, 2));

    // F^2 + V^2: x = V^2 z, F^2 V^2 z = p^2 z
    auto s2 = simple_psi(ring, 2, 2);
    auto M = from_cyclic(s2);
    std::vector<WittScalar> z(4, WittScalar::zero(ring));
    z[2] = WittScalar::one(ring);
    auto v2z = M.V().apply(M.V().apply(z));
    CHECK(witness_check(v2z, s2, 2));

    // x = pz fails the x not-in-pM clause
    std::vector<WittScalar> pz(4, WittScalar::zero(ring));
    pz[2] = WittScalar::one(ring).mul_pow_p(1);
    CHECK(!witness_check(pz, s2, 2));
    CHECK(!witness_check(pz, s2, 3));
}

TEST_CASE("isogeny cutoff with polygon-changing witness") {
    auto ring = WittRing::create(2, 1, 20);

    // F^3 + p + V^3: breakpoint at (3,1), value 2, witness removes the p term
    auto psi = simple_psi(ring, 3, 3, {{3, 1}});
    auto cut = isogeny_cutoff_exact(psi);
    CHECK(cut.value == 2);
    REQUIRE(cut.witness.has_value());
    CHECK(cut.witness->a[3].is_zero());
    CHECK(newton_from_psi(*cut.witness) == NewtonPolygon::isoclinic(1, 2, 3));

    // F^6 + pF^2 + V^2: nu(6) = 3/2, value 2, witness adds p at a_6
    auto tra = simple_psi(ring, 6, 2, {{4, 1}});
    auto cut2 = isogeny_cutoff_exact(tra);
    CHECK(cut2.value == 2);
    REQUIRE(cut2.witness.has_value());
    CHECK(cut2.witness->a[6] == WittScalar::one(ring).mul_pow_p(1));
    CHECK(newton_from_psi(*cut2.witness) != newton_from_psi(tra));
    CHECK(newton_from_psi(*cut2.witness).breakpoints().size() == 3);

    // F + V: value 1, no witness
    auto cut3 = isogeny_cutoff_exact(simple_psi(ring, 1, 1));
    CHECK(cut3.value == 1);
    CHECK(!cut3.witness.has_value());
}

TEST_CASE("isogeny cutoff witness properties on all polygons of height <= 7") {
    auto ring = WittRing::create(2, 1, 22);
    std::mt19937_64 rng(7);
    for (const auto& nu : all_binilpotent_polygons(7)) {
        auto psi = psi_with_polygon(ring, nu, rng());
        auto cut = isogeny_cutoff_exact(psi);
        CHECK(cut.value == nu.isogeny_cutoff_bound());
        CHECK(cut.value >= 1);
        CHECK(cut.value <= nu.minimal_height_value() + 1);
        if (cut.value > 1) {
            REQUIRE(cut.witness.has_value());
            CHECK(newton_from_psi(*cut.witness) != nu);
            for (std::size_t i = 0; i < psi.a.size(); ++i) {
                auto dv = (cut.witness->a[i] - psi.a[i]).valuation();
                if (dv) CHECK(*dv >= cut.value - 1);
            }
        } else {
            CHECK(!cut.witness.has_value());
        }
    }
}

TEST_CASE("report: Traverso, simple families, precision rules") {
    auto ring = WittRing::create(2, 1, 24);

    auto r = report(simple_psi(ring, 6, 2, {{4, 1}}));
    CHECK(r.b_exact == 2);
    CHECK(r.q_exact == 1);
    CHECK(r.n_upper == 3);
    CHECK(r.isoclinic);
    CHECK(r.ell.exact);
    CHECK(r.ell.value == 3);
    CHECK(r.traverso_min_cd == 2);
    CHECK(r.traverso_violated);
    CHECK(!r.citations.empty());

    // F^c + V^d with |c - d| <= 2: ell = min(c,d) exactly
    for (auto [c, d] : {std::pair<int, int>{1, 1}, {2, 1}, {3, 2}, {2, 4}, {3, 3}}) {
        auto rr = report(simple_psi(ring, c, d));
        CHECK(rr.ell.exact);
        CHECK(rr.ell.value == std::min(c, d));
        CHECK(!rr.traverso_violated);
        CHECK((rr.b_exact <= rr.n_upper || rr.n_upper == 0));
    }

    // supersingular F + V: b = 1, ell = 1
    auto ss = report(simple_psi(ring, 1, 1));
    CHECK(ss.b_exact == 1);
    CHECK(ss.ell.value == 1);
    CHECK(ss.q_exact == 0);

    // non-isoclinic: interval [1, floor(2 nu(c))]
    auto mix = report(simple_psi(ring, 3, 3, {{3, 1}}));
    CHECK(!mix.ell.exact);
    CHECK(mix.ell.lo == 1);
    CHECK(mix.ell.hi == mix.n_upper);

    // too little working precision is refused up front
    auto low = WittRing::create(2, 1, 6);
    CHECK_THROWS_AS(report(simple_psi(low, 6, 2, {{4, 1}})), precision_error);
}

TEST_CASE("isoclinic bound sandwich min(c,d) <= ell <= floor(2 nu(c))") {
    auto ring = WittRing::create(2, 1, 24);
    std::mt19937_64 rng(31337);
    int done = 0;
    for (const auto& nu : all_binilpotent_polygons(7)) {
        if (!nu.is_isoclinic()) continue;
        auto psi = psi_with_polygon(ring, nu, rng());
        auto M = from_cyclic(psi);
        int ell = level_torsion_isoclinic(M).ell;
        CHECK(ell >= std::min(psi.c, psi.d));
        CHECK(ell <= nu.isomorphism_bound());
        ++done;
    }
    CHECK(done >= 6);
}
