#include "dmkit/invariants.hpp"

#include <algorithm>
#include <map>

namespace dmkit {

namespace {

// exponent and row of p^k F^{c-i} z in the basis (F z,...,F^c z, z, V z,...):
// F^{-j} z = p^{-j} V^j z for j > 0.
std::pair<int, int> f_power_vector(int c, int i) {
    if (i < c) return {0, c - i - 1};
    if (i == c) return {0, c};
    return {-(i - c), i};
}

Lattice diagonal_lattice(const RingPtr& ring, int h, const std::vector<int>& exps,
                         const std::vector<int>& rows) {
    int off = *std::min_element(exps.begin(), exps.end());
    WMatrix B(ring, h, h);
    for (int i = 0; i < h; ++i)
        B.at(rows[static_cast<std::size_t>(i)], i) =
            WittScalar::one(ring).mul_pow_p(exps[static_cast<std::size_t>(i)] - off);
    return Lattice::from_columns(B, off);
}

NewtonPolygon psi_polygon_checked(const CyclicPresentation& psi) {
    auto nu = newton_from_psi(psi);
    if (!nu.is_binilpotent())
        throw input_error("operation requires a bi-nilpotent presentation");
    return nu;
}

}  // namespace

Lattice m_minus(const CyclicPresentation& psi) {
    auto nu = psi_polygon_checked(psi);
    int c = psi.c, h = psi.c + psi.d;
    std::vector<int> exps, rows;
    for (int i = 0; i < h; ++i) {
        int mi = static_cast<int>(rational_floor(nu.evaluate(Rational(i)))) + 1;
        auto [sh, row] = f_power_vector(c, i);
        exps.push_back(mi - 1 + sh);
        rows.push_back(row);
    }
    Lattice L = diagonal_lattice(psi.ring, h, exps, rows);
    if (!lattice_contains(Lattice::standard(psi.ring, h), L))
        throw internal_error("M_minus not contained in M");
    return L;
}

Lattice m_plus_isoclinic(const CyclicPresentation& psi) {
    auto nu = psi_polygon_checked(psi);
    if (!nu.is_isoclinic())
        throw input_error("M_plus needs an isoclinic presentation");
    Rational lambda = nu.segments().front().slope;
    int c = psi.c, h = psi.c + psi.d;
    std::vector<int> exps, rows;
    for (int i = 0; i < h; ++i) {
        auto [sh, row] = f_power_vector(c, i);
        exps.push_back(static_cast<int>(rational_ceil(Rational(i - c) * lambda)) + sh);
        rows.push_back(row);
    }
    Lattice L = diagonal_lattice(psi.ring, h, exps, rows);
    if (!lattice_contains(L, Lattice::standard(psi.ring, h)))
        throw internal_error("M not contained in M_plus");
    return L;
}

ExtremalLattices extremal_lattices(const CyclicPresentation& psi) {
    auto nu = psi_polygon_checked(psi);
    Lattice M = Lattice::standard(psi.ring, psi.c + psi.d);
    ExtremalLattices out{m_minus(psi), {}, {}, 0, {}};
    out.exp_m_minus = quotient_p_exponent(M, out.M_minus);
    if (nu.is_isoclinic()) {
        out.M_plus = m_plus_isoclinic(psi);
        out.exp_plus_m = quotient_p_exponent(*out.M_plus, M);
        out.exp_plus_minus = quotient_p_exponent(*out.M_plus, out.M_minus);
    }
    return out;
}

int minimal_height(const CyclicPresentation& psi) {
    auto nu = psi_polygon_checked(psi);
    Lattice M = Lattice::standard(psi.ring, psi.c + psi.d);
    int q = quotient_p_exponent(M, m_minus(psi));
    long long expected = nu.minimal_height_value();
    if (q != expected)
        throw internal_error("minimal height disagrees with floor(nu(c))");
    return q;
}

LevelTorsionTrace level_torsion_isoclinic(const DieudonneModule& M, int q_max) {
    int h = M.rank();
    auto nu = newton_from_module(M);
    if (!nu.is_isoclinic()) throw input_error("level torsion needs an isoclinic module");
    if (q_max <= 0) q_max = 4 * h;
    if (q_max < h) throw input_error("q_max must be at least the rank");

    Lattice base = Lattice::standard(M.ring(), h);
    Lattice L = base;
    LevelTorsionTrace trace;
    // state key: canonical basis coefficients (offset dropped) and q mod h
    std::map<std::pair<std::vector<std::uint64_t>, int>, std::pair<int, int>> seen;
    for (int q = 0; q <= q_max; ++q) {
        auto [a, b] = lattice_exponents(L, base);
        trace.delta_table.push_back({q, a, b, b - a});

        std::vector<std::uint64_t> key;
        for (int j = 0; j < h; ++j)
            for (int i = 0; i < h; ++i)
                for (auto v : L.basis().at(i, j).coeffs()) key.push_back(v);
        auto it = seen.find({key, q % h});
        if (it != seen.end()) {
            trace.cycle_start = it->second.first;
            trace.period = q - it->second.first;
            trace.p_shift = L.p_offset() - it->second.second;
            int ell = 0;
            for (const auto& row : trace.delta_table) ell = std::max(ell, row.delta);
            trace.ell = ell;
            return trace;
        }
        seen[{std::move(key), q % h}] = {q, L.p_offset()};
        L = apply_map(M.F(), L);
    }
    throw budget_error("no cycle of F-images found; raise q_max or precision");
}

bool witness_check(const std::vector<WittScalar>& x, const CyclicPresentation& psi,
                   int m) {
    auto M = from_cyclic(psi);
    int h = psi.c + psi.d;
    if (static_cast<int>(x.size()) != h) return false;
    // x not in pM
    bool unit_coord = false;
    for (const auto& v : x) {
        auto w = v.valuation();
        if (w && *w == 0) unit_coord = true;
    }
    if (!unit_coord) return false;
    std::vector<WittScalar> y = x;
    for (int i = 0; i < psi.c; ++i) y = M.F().apply(y);
    // compare with p^m z, z = basis vector c
    for (int i = 0; i < h; ++i) {
        WittScalar want = (i == psi.c)
                              ? WittScalar::one(psi.ring).mul_pow_p(m)
                              : WittScalar::zero(psi.ring);
        if (!(y[static_cast<std::size_t>(i)] == want)) return false;
    }
    return true;
}

std::vector<WittScalar> standard_witness(const CyclicPresentation& psi, int m) {
    if (m < psi.d) throw input_error("witness needs m >= d");
    auto M = from_cyclic(psi);
    int h = psi.c + psi.d;
    std::vector<WittScalar> z(static_cast<std::size_t>(h), WittScalar::zero(psi.ring));
    z[static_cast<std::size_t>(psi.c)] = WittScalar::one(psi.ring);
    auto fd = z, vd = z;
    for (int i = 0; i < psi.d; ++i) {
        fd = M.F().apply(fd);
        vd = M.V().apply(vd);
    }
    std::vector<WittScalar> x(static_cast<std::size_t>(h), WittScalar::zero(psi.ring));
    for (int i = 0; i < h; ++i)
        x[static_cast<std::size_t>(i)] =
            -(fd[static_cast<std::size_t>(i)].mul_pow_p(m - psi.d) +
              vd[static_cast<std::size_t>(i)]);
    return x;
}

IsogenyCutoff isogeny_cutoff_exact(const CyclicPresentation& psi) {
    auto nu = psi_polygon_checked(psi);
    IsogenyCutoff out;
    out.value = nu.isogeny_cutoff_bound();
    if (out.value <= 1) return out;
    int m = static_cast<int>(out.value) - 1;
    Rational nuc = nu.evaluate(Rational(nu.codimension()));

    CyclicPresentation w = psi;
    if (Rational(m) < nuc) {
        // perturb below the polygon at abscissa c
        w.a[static_cast<std::size_t>(w.c)] =
            w.a[static_cast<std::size_t>(w.c)] + WittScalar::one(w.ring).mul_pow_p(m);
    } else {
        // (c, nu(c)) is a breakpoint, so v(a_c) = nu(c) = m; remove the
        // supporting coefficient
        w.a[static_cast<std::size_t>(w.c)] = WittScalar::zero(w.ring);
    }
    auto nu2 = newton_from_psi(w);
    if (nu2 == nu) throw internal_error("cutoff witness did not change the polygon");
    for (std::size_t i = 0; i < w.a.size(); ++i) {
        auto dv = (w.a[i] - psi.a[i]).valuation();
        if (dv && *dv < m) throw internal_error("cutoff witness differs below level j-1");
    }
    out.witness = std::move(w);
    return out;
}

CyclicPresentation lift_presentation(const CyclicPresentation& psi, int extra) {
    RingPtr R = WittRing::create(psi.ring->p(), psi.ring->degree(),
                                 psi.ring->precision() + extra);
    CyclicPresentation out;
    out.ring = R;
    out.c = psi.c;
    out.d = psi.d;
    for (const auto& x : psi.a) out.a.emplace_back(R, x.coeffs());
    for (const auto& x : psi.b) out.b.emplace_back(R, x.coeffs());
    return out;
}

namespace {

struct CoreValues {
    NewtonPolygon polygon;
    int a = 0;
    long long b = 0, q = 0;
    std::optional<int> ell;
};

CoreValues core_values(const CyclicPresentation& psi, bool isoclinic, int q_max) {
    CoreValues v{newton_from_psi(psi), 0, 0, 0, {}};
    auto M = from_cyclic(psi);
    v.a = a_number(M);
    v.b = isogeny_cutoff_exact(psi).value;
    v.q = minimal_height(psi);
    if (isoclinic) v.ell = level_torsion_isoclinic(M, q_max).ell;
    return v;
}

}  // namespace

InvariantReport report(const CyclicPresentation& psi, int q_max) {
    psi.validate();
    auto nu = psi_polygon_checked(psi);
    InvariantReport r;
    r.polygon = nu;
    r.c = psi.c;
    r.d = psi.d;
    r.h = psi.c + psi.d;
    r.binilpotent = true;
    r.isoclinic = nu.is_isoclinic();
    r.n_upper = nu.isomorphism_bound();

    int need = static_cast<int>(r.n_upper) + psi.d + r.h + 2;
    if (psi.ring->precision() < need)
        throw precision_error("report needs higher working precision", need + 4);

    auto v1 = core_values(psi, r.isoclinic, q_max);
    auto v2 = core_values(lift_presentation(psi, 4), r.isoclinic, q_max);
    if (v1.polygon != v2.polygon || v1.a != v2.a || v1.b != v2.b || v1.q != v2.q ||
        v1.ell != v2.ell)
        throw precision_error("differential precision test failed", need + 8);

    r.a = v1.a;
    r.b_exact = v1.b;
    r.q_exact = v1.q;
    r.b_witness = isogeny_cutoff_exact(psi).witness;
    r.traverso_min_cd = std::min(psi.c, psi.d);
    if (r.isoclinic) {
        r.ell = {true, *v1.ell, *v1.ell, *v1.ell};
        r.traverso_violated = *v1.ell > r.traverso_min_cd;
        r.citations = {"rule:isogeny-cutoff-j", "rule:minimal-height-floor",
                       "rule:isomorphism-upper-2nu", "rule:level-torsion-delta-max",
                       "rule:traverso-min-cd"};
    } else {
        r.ell = {false, 0, 1, r.n_upper};
        r.traverso_violated = false;
        r.citations = {"rule:isogeny-cutoff-j", "rule:minimal-height-floor",
                       "rule:isomorphism-upper-2nu", "rule:level-torsion-interval"};
    }
    if (r.b_exact > r.n_upper)
        throw internal_error("isogeny cutoff exceeds the isomorphism bound");
    return r;
}

}  // namespace dmkit
