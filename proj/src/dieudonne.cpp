#include "dmkit/dieudonne.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace dmkit {

namespace {

bool val_at_least(const WittScalar& x, int v) {
    auto w = x.valuation();
    return !w || *w >= v;
}

WMatrix p_identity(const RingPtr& ring, int h) {
    return WMatrix::identity(ring, h).mul_pow_p(1);
}

}  // namespace

void CyclicPresentation::validate() const {
    if (c < 1 || d < 1) throw input_error("presentation needs c >= 1 and d >= 1");
    if (static_cast<int>(a.size()) != c + 1 || static_cast<int>(b.size()) != d)
        throw input_error("presentation coefficient counts do not match c, d");
    if (!a.front().is_unit()) throw input_error("a_0 must be a unit");
    if (!b.back().is_unit()) throw input_error("b_d must be a unit");
    for (int i = 1; i <= c; ++i)
        if (!val_at_least(a[static_cast<std::size_t>(i)], 1))
            throw input_error("a_i must have valuation >= 1 for i >= 1");
    for (int i = 1; i < d; ++i)
        if (!val_at_least(b[static_cast<std::size_t>(i - 1)], 1))
            throw input_error("b_i must have valuation >= 1 for i < d");
    if (ring->precision() < d + 2)
        throw precision_error("presentation needs higher working precision", d + 2);
}

DieudonneModule::DieudonneModule(SemilinearMap F, SemilinearMap V,
                                 std::optional<CyclicPresentation> provenance)
    : F_(std::move(F)), V_(std::move(V)), provenance_(std::move(provenance)) {
    if (F_.twist != 1 || V_.twist != -1)
        throw input_error("F must have twist +1 and V twist -1");
    int h = F_.A.rows();
    if (F_.A.cols() != h || V_.A.rows() != h || V_.A.cols() != h)
        throw input_error("F and V must be square of equal rank");
    const RingPtr& R = F_.A.ring();
    WMatrix pid = p_identity(R, h);
    if (!(F_.compose(V_).A == pid) || !(V_.compose(F_).A == pid))
        throw internal_error("FV = VF = p violated");
}

int DieudonneModule::cdim() const { return residue_rank(F_.A); }
int DieudonneModule::ddim() const { return residue_rank(V_.A); }

bool DieudonneModule::is_binilpotent() const {
    int h = rank();
    SemilinearMap Fp = F_, Vp = V_;
    for (int i = 1; i < h; ++i) {
        Fp = F_.compose(Fp);
        Vp = V_.compose(Vp);
    }
    auto mod_p_zero = [&](const WMatrix& m) {
        for (int j = 0; j < m.cols(); ++j)
            for (int i = 0; i < m.rows(); ++i)
                if (!val_at_least(m.at(i, j), 1)) return false;
        return true;
    };
    return mod_p_zero(Fp.A) && mod_p_zero(Vp.A);
}

int residue_rank(const WMatrix& m) {
    const RingPtr& R = m.ring();
    RingPtr k = WittRing::create(R->p(), R->degree(), 1);
    WMatrix r(k, m.rows(), m.cols());
    for (int j = 0; j < m.cols(); ++j)
        for (int i = 0; i < m.rows(); ++i)
            r.at(i, j) = WittScalar(k, m.at(i, j).coeffs_mod(1));
    // gaussian elimination over the residue field
    int rank = 0;
    for (int j = 0; j < r.cols() && rank < r.rows(); ++j) {
        int pivot = -1;
        for (int i = rank; i < r.rows(); ++i)
            if (!r.at(i, j).is_zero()) {
                pivot = i;
                break;
            }
        if (pivot < 0) continue;
        r.swap_rows(rank, pivot);
        WittScalar inv = r.at(rank, j).inverse();
        r.scale_row(rank, inv);
        for (int i = 0; i < r.rows(); ++i) {
            if (i == rank || r.at(i, j).is_zero()) continue;
            r.addmul_row(i, rank, r.at(i, j));
        }
        ++rank;
    }
    return rank;
}

DieudonneModule from_cyclic(const CyclicPresentation& psi) {
    psi.validate();
    const RingPtr& R = psi.ring;
    int c = psi.c, d = psi.d, h = c + d;
    // basis u_0..u_{h-1} = (F z, ..., F^c z, z, V z, ..., V^{d-1} z)
    WMatrix AF(R, h, h), AV(R, h, h);
    auto a = [&](int i) { return psi.a[static_cast<std::size_t>(i)]; };
    auto b = [&](int i) { return psi.b[static_cast<std::size_t>(i - 1)]; };

    // F columns
    for (int k = 0; k + 1 < c; ++k) AF.at(k + 1, k) = WittScalar::one(R);
    {
        // F(F^c z) = F^{c+1} z solved from F applied to Psi z = 0
        WittScalar lead = -a(0).frobenius(1).inverse();
        for (int i = 1; i <= c; ++i)
            AF.at(c - i, c - 1) = AF.at(c - i, c - 1) + lead * a(i).frobenius(1);
        for (int i = 1; i <= d; ++i) {
            int row = (i == 1) ? c : c + i - 1;  // p z or p V^{i-1} z
            AF.at(row, c - 1) = AF.at(row, c - 1) + lead * b(i).frobenius(1).mul_pow_p(1);
        }
    }
    AF.at(0, c) = WittScalar::one(R);  // F z
    for (int j = 1; j < d; ++j)
        AF.at(c + j - 1, c + j) = WittScalar::one(R).mul_pow_p(1);  // F V^j z = p V^{j-1} z

    // V columns
    for (int k = 0; k < c; ++k) {
        int row = (k == 0) ? c : k - 1;  // V F^{k+1} z = p F^k z
        AV.at(row, k) = WittScalar::one(R).mul_pow_p(1);
    }
    for (int j = 0; j + 1 < d; ++j)
        AV.at(c + j + 1, c + j) = WittScalar::one(R);  // V(V^j z) = V^{j+1} z
    {
        // V(V^{d-1} z) = V^d z solved from Psi z = 0
        int col = c + d - 1;
        WittScalar lead = -b(d).inverse();
        for (int i = 0; i < c; ++i)
            AV.at(c - i - 1, col) = AV.at(c - i - 1, col) + lead * a(i);
        AV.at(c, col) = AV.at(c, col) + lead * a(c);
        for (int i = 1; i < d; ++i)
            AV.at(c + i, col) = AV.at(c + i, col) + lead * b(i);
    }

    DieudonneModule M(SemilinearMap{AF, 1}, SemilinearMap{AV, -1}, psi);
    if (M.ddim() != d || M.cdim() != c)
        throw internal_error("cyclic module rank conditions violated");
    return M;
}

NewtonPolygon newton_from_psi(const CyclicPresentation& psi) {
    psi.validate();
    std::vector<std::pair<long long, std::optional<long long>>> pts;
    for (int j = 0; j <= psi.c; ++j) {
        auto v = psi.a[static_cast<std::size_t>(j)].valuation();
        pts.emplace_back(j - psi.c,
                         v ? std::optional<long long>(*v) : std::nullopt);
    }
    for (int i = 1; i <= psi.d; ++i) {
        auto v = psi.b[static_cast<std::size_t>(i - 1)].valuation();
        pts.emplace_back(i, v ? std::optional<long long>(*v + i) : std::nullopt);
    }
    return NewtonPolygon::from_hull(PiecewiseLinear::hull(pts).shifted(psi.c));
}

namespace {

// characteristic polynomial of det(xI - A) by the division-free Berkowitz
// scheme; coefficients returned lowest degree first, leading 1.
std::vector<WittScalar> char_poly(const WMatrix& A) {
    const RingPtr& R = A.ring();
    int n = A.rows();
    std::vector<WittScalar> C{WittScalar::one(R), -A.at(0, 0)};  // highest first
    for (int i = 1; i < n; ++i) {
        // entries of the Toeplitz factor: 1, -a_ii, -(R B^k Cc) for k >= 0
        std::vector<WittScalar> ent;
        ent.push_back(WittScalar::one(R));
        ent.push_back(-A.at(i, i));
        std::vector<WittScalar> v(static_cast<std::size_t>(i), WittScalar::zero(R));
        for (int t = 0; t < i; ++t) v[static_cast<std::size_t>(t)] = A.at(t, i);
        for (int k = 0; k < i; ++k) {
            WittScalar dot = WittScalar::zero(R);
            for (int t = 0; t < i; ++t) dot = dot + A.at(i, t) * v[static_cast<std::size_t>(t)];
            ent.push_back(-dot);
            if (k + 1 < i) {
                std::vector<WittScalar> nv(static_cast<std::size_t>(i), WittScalar::zero(R));
                for (int r2 = 0; r2 < i; ++r2) {
                    WittScalar acc = WittScalar::zero(R);
                    for (int t = 0; t < i; ++t) acc = acc + A.at(r2, t) * v[static_cast<std::size_t>(t)];
                    nv[static_cast<std::size_t>(r2)] = acc;
                }
                v = std::move(nv);
            }
        }
        // C <- T * C, T Toeplitz (i+2)x(i+1) with T[r][c] = ent[r-c]
        std::vector<WittScalar> nc(static_cast<std::size_t>(i + 2), WittScalar::zero(R));
        for (int r2 = 0; r2 < i + 2; ++r2)
            for (int c2 = 0; c2 < i + 1; ++c2) {
                int k = r2 - c2;
                if (k < 0 || k >= static_cast<int>(ent.size())) continue;
                nc[static_cast<std::size_t>(r2)] =
                    nc[static_cast<std::size_t>(r2)] +
                    ent[static_cast<std::size_t>(k)] * C[static_cast<std::size_t>(c2)];
            }
        C = std::move(nc);
    }
    std::reverse(C.begin(), C.end());  // lowest degree first
    return C;
}

}  // namespace

NewtonPolygon newton_from_module(const DieudonneModule& M) {
    const RingPtr& R = M.ring();
    int n = R->degree(), h = M.rank();
    // F^n is sigma^n-twisted, i.e. plain linear
    SemilinearMap Phi = M.F();
    for (int i = 1; i < n; ++i) Phi = M.F().compose(Phi);
    auto coeffs = char_poly(Phi.A);
    std::vector<std::pair<long long, std::optional<long long>>> pts;
    for (int i = 0; i <= h; ++i) {
        auto v = coeffs[static_cast<std::size_t>(i)].valuation();
        pts.emplace_back(i, v ? std::optional<long long>(*v) : std::nullopt);
    }
    if (!pts.front().second)
        throw precision_error("constant coefficient vanishes at working precision",
                              n * M.ddim() + h + 4);
    auto hull = PiecewiseLinear::hull(pts);
    const auto& vx = hull.vertices();
    std::vector<Segment> runs;
    for (std::size_t s = 0; s + 1 < vx.size(); ++s) {
        long long dx = vx[s + 1].first - vx[s].first;
        long long dy = vx[s].second - vx[s + 1].second;  // root valuation * dx
        runs.push_back({Rational(dy, dx * n), dx});
    }
    // char-poly slopes descend left to right; module slopes ascend
    std::reverse(runs.begin(), runs.end());
    return NewtonPolygon::from_slope_runs(std::move(runs));
}

DieudonneModule minimal_module(const RingPtr& ring, int cj, int dj, int mult) {
    if (cj < 0 || dj < 0 || cj + dj < 1 || mult < 1)
        throw input_error("invalid minimal module parameters");
    if (std::gcd(cj, dj) != 1) throw input_error("slope parameters must be coprime");
    int h0 = cj + dj;
    WMatrix AF0(ring, h0, h0), AV0(ring, h0, h0);
    for (int i = 0; i < h0; ++i) {
        int fr = i + dj, vr = i + cj;
        if (fr < h0)
            AF0.at(fr, i) = WittScalar::one(ring);
        else
            AF0.at(fr - h0, i) = WittScalar::one(ring).mul_pow_p(1);
        if (vr < h0)
            AV0.at(vr, i) = WittScalar::one(ring);
        else
            AV0.at(vr - h0, i) = WittScalar::one(ring).mul_pow_p(1);
    }
    DieudonneModule M(SemilinearMap{AF0, 1}, SemilinearMap{AV0, -1});
    for (int i = 1; i < mult; ++i)
        M = direct_sum(M, DieudonneModule(SemilinearMap{AF0, 1}, SemilinearMap{AV0, -1}));
    return M;
}

int a_number(const DieudonneModule& M) {
    return M.rank() - residue_rank(WMatrix::hcat(M.F().A, M.V().A));
}

DieudonneModule direct_sum(const DieudonneModule& M1, const DieudonneModule& M2) {
    if (!M1.ring()->same(*M2.ring())) throw input_error("ring mismatch");
    const RingPtr& R = M1.ring();
    int h1 = M1.rank(), h2 = M2.rank();
    WMatrix AF(R, h1 + h2, h1 + h2), AV(R, h1 + h2, h1 + h2);
    for (int j = 0; j < h1; ++j)
        for (int i = 0; i < h1; ++i) {
            AF.at(i, j) = M1.F().A.at(i, j);
            AV.at(i, j) = M1.V().A.at(i, j);
        }
    for (int j = 0; j < h2; ++j)
        for (int i = 0; i < h2; ++i) {
            AF.at(h1 + i, h1 + j) = M2.F().A.at(i, j);
            AV.at(h1 + i, h1 + j) = M2.V().A.at(i, j);
        }
    return DieudonneModule(SemilinearMap{AF, 1}, SemilinearMap{AV, -1});
}

DieudonneModule dual(const DieudonneModule& M) {
    return DieudonneModule(SemilinearMap{M.V().A.transpose(), 1},
                           SemilinearMap{M.F().A.transpose(), -1});
}

CyclicPresentation psi_with_polygon(const RingPtr& ring, const NewtonPolygon& nu,
                                    std::optional<std::uint64_t> unit_seed) {
    if (!nu.is_binilpotent() || nu.height() < 2)
        throw input_error("presentation synthesis needs a bi-nilpotent polygon");
    long long c = nu.codimension(), d = nu.dimension();
    CyclicPresentation psi;
    psi.ring = ring;
    psi.c = static_cast<int>(c);
    psi.d = static_cast<int>(d);
    psi.a.assign(static_cast<std::size_t>(c) + 1, WittScalar::zero(ring));
    psi.b.assign(static_cast<std::size_t>(d), WittScalar::zero(ring));

    std::mt19937_64 rng(unit_seed.value_or(0));
    auto unit = [&]() {
        if (!unit_seed) return WittScalar::one(ring);
        std::uniform_int_distribution<std::uint64_t> dist(0, ring->pN() - 1);
        for (;;) {
            std::vector<std::uint64_t> cs(static_cast<std::size_t>(ring->degree()));
            for (auto& x : cs) x = dist(rng);
            WittScalar u(ring, std::move(cs));
            if (u.is_unit()) return u;
        }
    };

    for (const auto& [t, y] : nu.breakpoints()) {
        if (t <= c) {
            psi.a[static_cast<std::size_t>(t)] =
                unit().mul_pow_p(static_cast<int>(y));
        } else {
            psi.b[static_cast<std::size_t>(t - c) - 1] =
                unit().mul_pow_p(static_cast<int>(y - (t - c)));
        }
    }
    // endpoints force a_0 and b_d to be units; keep them deterministic
    psi.a[0] = unit();
    psi.b[static_cast<std::size_t>(d) - 1] = unit();
    psi.validate();
    return psi;
}

}  // namespace dmkit
