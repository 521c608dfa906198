#include "dmkit/verify.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>

#include "dmkit/cli.hpp"
#include "dmkit/truncated_hom.hpp"

namespace dmkit {

namespace {

CyclicPresentation simple_psi(const RingPtr& ring, int c, int d,
                              const std::vector<std::pair<int, int>>& a_extra = {}) {
    CyclicPresentation psi;
    psi.ring = ring;
    psi.c = c;
    psi.d = d;
    psi.a.assign(static_cast<std::size_t>(c) + 1, WittScalar::zero(ring));
    psi.b.assign(static_cast<std::size_t>(d), WittScalar::zero(ring));
    psi.a[0] = WittScalar::one(ring);
    psi.b[static_cast<std::size_t>(d) - 1] = WittScalar::one(ring);
    for (auto [i, e] : a_extra)
        psi.a[static_cast<std::size_t>(i)] = WittScalar::one(ring).mul_pow_p(e);
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

NewtonPolygon random_polygon(std::mt19937_64& rng, int hmax) {
    std::vector<Segment> segs;
    int h = 0;
    Rational last(-1);
    for (int guard = 0; h < hmax && guard < 60; ++guard) {
        int dx = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(hmax - h));
        int dy = static_cast<int>(rng() % static_cast<std::uint64_t>(dx + 1));
        Rational s(dy, dx);
        if (!(last < s)) continue;
        segs.push_back({s, dx});
        last = s;
        h += dx;
        if (rng() % 3 == 0) break;
    }
    if (segs.empty()) segs.push_back({Rational(1, 2), 2});
    return NewtonPolygon::from_slope_runs(segs);
}

struct Checker {
    int failures = 0;
    int checks = 0;
    std::string first;

    void expect(bool cond, const std::string& what) {
        ++checks;
        if (!cond) {
            ++failures;
            if (first.empty()) first = what;
        }
    }
};

CriterionResult finish(int id, const std::string& name, Checker& ck) {
    CriterionResult r{id, name, ck.failures == 0 ? "pass" : "fail", ""};
    std::ostringstream os;
    if (ck.failures == 0)
        os << ck.checks << " checks";
    else
        os << ck.failures << "/" << ck.checks << " checks failed; first: " << ck.first;
    r.detail = os.str();
    return r;
}

CriterionResult criterion_simple_family_ledger() {
    Checker ck;
    for (std::uint64_t p : {2ull, 3ull}) {
        auto ring = WittRing::create(p, 1, 18);
        for (auto [c, d] : {std::pair<int, int>{1, 1}, {1, 2}, {2, 2}, {2, 3}, {3, 3}, {2, 4}}) {
            auto tr = level_torsion_isoclinic(from_cyclic(simple_psi(ring, c, d)));
            ck.expect(tr.ell == std::min(c, d), "ell != min(c,d)");
            bool saw_full = false;
            for (const auto& row : tr.delta_table) {
                if (row.q <= c) ck.expect(row.alpha == 0, "alpha_q != 0 for q <= c");
                if (row.q <= d) ck.expect(row.beta == row.q, "beta_q != q for q <= d");
                if (row.q == c + d) {
                    saw_full = true;
                    ck.expect(row.alpha == d && row.beta == d,
                              "F^{c+d} M != p^d M in the trace");
                }
            }
            ck.expect(saw_full, "trace too short to reach q = c + d");
        }
    }
    return finish(1, "simple-family level torsion ledger", ck);
}

CriterionResult criterion_counterexample() {
    Checker ck;
    for (std::uint64_t p : {2ull, 3ull}) {
        auto ring = WittRing::create(p, 1, 16);
        auto psi = simple_psi(ring, 6, 2, {{4, 1}});
        auto tr = level_torsion_isoclinic(from_cyclic(psi));
        ck.expect(tr.ell == 3, "ell != 3");
        ck.expect(std::min(psi.c, psi.d) == 2, "min(c,d) != 2");
        auto x = standard_witness(psi, 3);
        ck.expect(witness_check(x, psi, 3), "witness fails F^6 x = p^3 z or x in pM");
    }
    return finish(2, "truncation-bound counterexample at (c,d)=(6,2)", ck);
}

CriterionResult criterion_intermediate() {
    Checker ck;
    auto ring = WittRing::create(2, 1, 16);
    auto tr = level_torsion_isoclinic(from_cyclic(simple_psi(ring, 6, 2, {{4, 2}})));
    ck.expect(tr.ell == 2, "ell != 2 for the intermediate operator");
    return finish(3, "intermediate level-torsion value", ck);
}

CriterionResult criterion_minimal_height() {
    Checker ck;
    auto ring = WittRing::create(2, 1, 24);
    std::mt19937_64 rng(2024);
    int count = 0;
    for (const auto& nu : all_binilpotent_polygons(8)) {
        auto psi = psi_with_polygon(ring, nu, rng());
        ck.expect(minimal_height(psi) == nu.minimal_height_value(),
                  "p-exponent(M/M-) != floor(nu(c))");
        ++count;
    }
    ck.expect(count >= 20, "pinned list smaller than 20");
    return finish(4, "minimal-height equality on the pinned list", ck);
}

CriterionResult criterion_extremal_lattices() {
    Checker ck;
    auto ring = WittRing::create(2, 1, 24);
    std::mt19937_64 rng(2025);
    int count = 0;
    for (const auto& nu : all_binilpotent_polygons(8)) {
        if (!nu.is_isoclinic()) continue;
        auto psi = psi_with_polygon(ring, nu, rng());
        auto ex = extremal_lattices(psi);
        ck.expect(ex.M_plus.has_value(), "missing M+");
        long long want = nu.minimal_height_value();
        ck.expect(ex.exp_m_minus == want, "p-exp(M/M-) != floor(nu(c))");
        ck.expect(ex.exp_plus_m && *ex.exp_plus_m == want, "p-exp(M+/M) differs");
        ck.expect(ex.exp_plus_minus && *ex.exp_plus_minus == want,
                  "p-exp(M+/M-) differs");
        auto M = Lattice::standard(ring, static_cast<int>(nu.height()));
        ck.expect(quotient_length(*ex.M_plus, ex.M_minus) ==
                      2 * quotient_length(M, ex.M_minus),
                  "length(M+/M-) != 2 length(M/M-)");
        ++count;
    }
    ck.expect(count >= 10, "pinned isoclinic list smaller than 10");
    return finish(5, "extremal-lattice identities", ck);
}

std::vector<CyclicPresentation> cutoff_pinned_list(const RingPtr& ring) {
    std::mt19937_64 rng(2026);
    std::vector<CyclicPresentation> out;
    for (const auto& nu : all_binilpotent_polygons(8))
        out.push_back(psi_with_polygon(ring, nu, rng()));
    out.push_back(simple_psi(ring, 6, 2, {{4, 1}}));
    out.push_back(simple_psi(ring, 3, 3, {{3, 1}}));
    out.push_back(simple_psi(ring, 2, 2, {{1, 1}}));
    out.push_back(simple_psi(ring, 4, 2, {{4, 1}}));
    return out;
}

CriterionResult criterion_isogeny_cutoff() {
    Checker ck;
    auto ring = WittRing::create(2, 1, 24);
    for (const auto& psi : cutoff_pinned_list(ring)) {
        auto nu = newton_from_psi(psi);
        auto cut = isogeny_cutoff_exact(psi);
        ck.expect(cut.value == nu.isogeny_cutoff_bound(), "value != j(nu)");
        if (cut.value > 1) {
            ck.expect(cut.witness.has_value(), "missing witness");
            if (cut.witness) {
                ck.expect(newton_from_psi(*cut.witness) != nu,
                          "witness polygon did not change");
                for (std::size_t i = 0; i < psi.a.size(); ++i) {
                    auto dv = (cut.witness->a[i] - psi.a[i]).valuation();
                    if (dv)
                        ck.expect(*dv >= cut.value - 1,
                                  "witness differs below level j-1");
                }
            }
        } else {
            ck.expect(!cut.witness.has_value(), "unexpected witness at j = 1");
        }
    }
    return finish(6, "isogeny cutoff with polygon-changing witnesses", ck);
}

CriterionResult criterion_formula_layer() {
    Checker ck;
    for (long long h = 0; h <= 20; ++h)
        ck.expect(Nh(h) == h / 2, "Nh(h) != floor(h/2)");

    std::mt19937_64 rng(771);
    for (int it = 0; it < 100; ++it) {
        auto nu = random_polygon(rng, 10);
        auto mu = random_polygon(rng, 10);
        auto hb = hom_number_bound(nu, mu);
        for (std::size_t i = 0; i + 1 < hb.chain.size(); ++i)
            ck.expect(hb.chain[i] <= hb.chain[i + 1], "bound chain not monotone");

        // support-line additivity under direct sum, evaluated at the
        // codimensions (same-slope maximal-line identity)
        auto plus = direct_sum(nu, mu);
        for (const auto& seg : plus.segments()) {
            Rational lam = seg.slope;
            Rational lhs = nu.support_line_at(lam).at(Rational(nu.codimension())) +
                           mu.support_line_at(lam).at(Rational(mu.codimension()));
            ck.expect(lhs == plus.support_line_at(lam).at(Rational(plus.codimension())),
                      "support-line identity fails");
        }

        if (nu.is_ordinary() || mu.is_ordinary())
            ck.expect(hb.bound == 0, "ordinary factor must give bound 0");
    }
    auto ord = NewtonPolygon::from_slope_runs({{Rational(0), 2}, {Rational(1), 2}});
    auto ss = NewtonPolygon::isoclinic(1, 2);
    ck.expect(hom_number_bound(ord, ss).bound == 0, "ordinary bound != 0");
    return finish(7, "closed-form bound layer", ck);
}

CriterionResult criterion_newton_cross_validation() {
    Checker ck;
    std::mt19937_64 rng(888);
    auto polys = all_binilpotent_polygons(6);
    int done = 0;
    for (auto [p, n] : {std::pair<std::uint64_t, int>{2, 1}, {2, 2}, {3, 1}, {3, 2}}) {
        auto ring = WittRing::create(p, n, 16);
        for (int it = 0; it < 13; ++it) {
            const auto& nu = polys[rng() % polys.size()];
            auto psi = psi_with_polygon(ring, nu, rng());
            ck.expect(newton_from_psi(psi) == nu, "coefficient route polygon differs");
            ck.expect(newton_from_module(from_cyclic(psi)) == nu,
                      "characteristic-polynomial route polygon differs");
            ++done;
        }
    }
    ck.expect(done >= 50, "sample smaller than 50");
    return finish(8, "Newton polygon cross-validation", ck);
}

CriterionResult criterion_gamma_experiment(bool low_budget) {
    Checker ck;
    long long bound = low_budget ? 64 : 4096;
    auto ring = WittRing::create(2, 1, 12);
    bool inconclusive = false;
    for (int cd : {1, 2}) {
        auto psi = simple_psi(ring, cd, cd);
        try {
            auto prof = gamma_profile(psi, from_cyclic(psi), 3, 6, bound);
            for (std::size_t i = 1; i < prof.gamma.size(); ++i)
                if (prof.gamma[i - 1] && prof.gamma[i])
                    ck.expect(*prof.gamma[i] >= *prof.gamma[i - 1],
                              "gamma not non-decreasing");
            if (!prof.f_detected) {
                inconclusive = true;
                continue;
            }
            ck.expect(*prof.f_detected == cd, "f_detected != min(c,d)");
            auto tr = level_torsion_isoclinic(from_cyclic(psi));
            ck.expect(*prof.f_detected == tr.ell, "f_detected != ell");
        } catch (const budget_error&) {
            inconclusive = true;
        }
    }
    auto r = finish(9, "kernel-count growth experiment", ck);
    if (r.status == "pass" && inconclusive) r.status = "inconclusive";
    return r;
}

long long enumerate_kernel_log(const TwistedOperator& op, int m) {
    const auto& ring = op.summands.front().A.ring();
    int h = op.summands.front().A.rows();
    int n = ring->degree();
    std::uint64_t p = ring->p();
    std::uint64_t pm = 1;
    for (int i = 0; i < m; ++i) pm *= p;

    std::vector<std::uint64_t> digits(static_cast<std::size_t>(h * n), 0);
    long long count = 0;
    while (true) {
        std::vector<WittScalar> x;
        for (int j = 0; j < h; ++j)
            x.emplace_back(ring, std::vector<std::uint64_t>(
                                     digits.begin() + j * n, digits.begin() + (j + 1) * n));
        auto y = op.apply(x);
        bool ker = true;
        for (const auto& c : y)
            for (auto v : c.coeffs_mod(m))
                if (v != 0) ker = false;
        if (ker) ++count;
        std::size_t i = 0;
        while (i < digits.size() && ++digits[i] == pm) digits[i++] = 0;
        if (i == digits.size()) break;
    }
    long long log = 0;
    while (count % static_cast<long long>(p) == 0) {
        count /= static_cast<long long>(p);
        ++log;
    }
    return count == 1 ? log : -1;  // -1: kernel size not a p-power (bug)
}

CriterionResult criterion_kernel_count_oracle() {
    Checker ck;
    std::mt19937_64 rng(31415);
    int done = 0;
    while (done < 210) {
        std::uint64_t p = (rng() % 2 == 0) ? 2 : 3;
        int n = 1 + static_cast<int>(rng() % 2);
        int h = 1 + static_cast<int>(rng() % 3);
        int m = 1 + static_cast<int>(rng() % 2);
        int r = (n == 1 && rng() % 3 == 0) ? 2 : 1;
        // keep the enumeration state space small: p^(m n r h) <= 2^14
        double bits = m * n * r * h * (p == 2 ? 1.0 : 1.585);
        if (bits > 14) continue;

        auto ring = WittRing::create(p, n, 8);
        TwistedOperator op;
        int terms = 1 + static_cast<int>(rng() % 3);
        for (int t = 0; t < terms; ++t) {
            WMatrix A(ring, h, h);
            for (int j = 0; j < h; ++j)
                for (int i = 0; i < h; ++i) {
                    std::vector<std::uint64_t> cs;
                    for (int k = 0; k < n; ++k) cs.push_back(rng() % ring->pow_p(8));
                    A.at(i, j) = WittScalar(ring, cs);
                }
            op.summands.push_back({A, static_cast<int>(rng() % 5) - 2});
        }

        long long fast = semilinear_kernel_count(op, m, r);
        long long slow;
        if (r == 1) {
            slow = enumerate_kernel_log(op, m);
        } else {
            // rebuild the prime-field operator over the degree-r field;
            // constants embed coefficientwise
            auto big = WittRing::create(p, r, 8);
            TwistedOperator op2;
            for (const auto& f : op.summands) {
                WMatrix A(big, h, h);
                for (int j = 0; j < h; ++j)
                    for (int i = 0; i < h; ++i) {
                        std::vector<std::uint64_t> cs(static_cast<std::size_t>(r), 0);
                        cs[0] = f.A.at(i, j).coeff(0);
                        A.at(i, j) = WittScalar(big, cs);
                    }
                op2.summands.push_back({A, f.twist});
            }
            slow = enumerate_kernel_log(op2, m);
        }
        ck.expect(slow >= 0, "enumerated kernel size is not a p-power");
        ck.expect(fast == slow, "count disagrees with enumeration");
        ++done;
    }
    return finish(10, "kernel-count enumeration oracle", ck);
}

CriterionResult criterion_precision_robustness() {
    Checker ck;

    // level torsion of the pinned operators at N and N+4
    for (std::uint64_t p : {2ull, 3ull}) {
        auto ring = WittRing::create(p, 1, 16);
        std::vector<CyclicPresentation> ops;
        for (auto [c, d] : {std::pair<int, int>{1, 1}, {2, 3}, {3, 3}, {2, 4}})
            ops.push_back(simple_psi(ring, c, d));
        ops.push_back(simple_psi(ring, 6, 2, {{4, 1}}));
        ops.push_back(simple_psi(ring, 6, 2, {{4, 2}}));
        for (const auto& psi : ops) {
            auto hi = lift_presentation(psi, 4);
            ck.expect(level_torsion_isoclinic(from_cyclic(psi)).ell ==
                          level_torsion_isoclinic(from_cyclic(hi)).ell,
                      "ell changed at N+4");
        }
    }

    // polygon, minimal height and cutoff across the pinned polygon list
    auto ring = WittRing::create(2, 1, 24);
    std::mt19937_64 rng(2024);
    for (const auto& nu : all_binilpotent_polygons(8)) {
        auto psi = psi_with_polygon(ring, nu, rng());
        auto hi = lift_presentation(psi, 4);
        ck.expect(newton_from_psi(hi) == nu, "polygon changed at N+4");
        ck.expect(minimal_height(psi) == minimal_height(hi),
                  "minimal height changed at N+4");
        ck.expect(isogeny_cutoff_exact(psi).value == isogeny_cutoff_exact(hi).value,
                  "cutoff changed at N+4");
    }
    return finish(11, "differential precision robustness", ck);
}

CriterionResult criterion_bound_sandwich() {
    Checker ck;
    auto rows = run_sweep(2, 1, 5, 2);
    ck.expect(!rows.empty(), "sweep produced no rows");
    for (const auto& row : rows) {
        ck.expect(row.status == "ok", "row not ok: " + row.status);
        if (row.status != "ok") continue;
        ck.expect(row.b >= 1, "b < 1");
        ck.expect(row.b <= row.q + 1, "b > floor(nu(c)) + 1");
        if (row.isoclinic && row.ell_exact) {
            ck.expect(row.ell_lo >= row.min_cd, "ell < min(c,d)");
            ck.expect(row.ell_hi <= row.two_nu_floor, "ell > floor(2 nu(c))");
        }
    }
    return finish(12, "bound sandwich over the h <= 5 sweep", ck);
}

}  // namespace

std::vector<CriterionResult> run_acceptance(bool low_budget, const std::string& only) {
    std::vector<std::pair<std::string, std::function<CriterionResult()>>> items = {
        {"simple-family level torsion ledger", criterion_simple_family_ledger},
        {"truncation-bound counterexample at (c,d)=(6,2)", criterion_counterexample},
        {"intermediate level-torsion value", criterion_intermediate},
        {"minimal-height equality on the pinned list", criterion_minimal_height},
        {"extremal-lattice identities", criterion_extremal_lattices},
        {"isogeny cutoff with polygon-changing witnesses", criterion_isogeny_cutoff},
        {"closed-form bound layer", criterion_formula_layer},
        {"Newton polygon cross-validation", criterion_newton_cross_validation},
        {"kernel-count growth experiment",
         [low_budget] { return criterion_gamma_experiment(low_budget); }},
        {"kernel-count enumeration oracle", criterion_kernel_count_oracle},
        {"differential precision robustness", criterion_precision_robustness},
        {"bound sandwich over the h <= 5 sweep", criterion_bound_sandwich},
    };
    std::vector<CriterionResult> out;
    int id = 0;
    for (auto& [name, item] : items) {
        ++id;
        if (!only.empty() && name.find(only) == std::string::npos) continue;
        CriterionResult r;
        try {
            r = item();
        } catch (const std::exception& e) {
            r.id = id;
            r.name = name;
            r.status = "fail";
            r.detail = std::string("exception: ") + e.what();
        }
        out.push_back(r);
    }
    return out;
}

}  // namespace dmkit
