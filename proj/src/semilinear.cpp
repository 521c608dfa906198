#include "dmkit/semilinear.hpp"

#include <algorithm>
#include <cmath>

namespace dmkit {

namespace {

int precision_guard(const RingPtr& ring, int h) {
    return ring->precision() - (h + 2);
}

[[noreturn]] void fail_precision(const RingPtr& ring, int h) {
    throw precision_error("working precision exhausted during lattice reduction",
                          ring->precision() + h + 4);
}

// coefficientwise floor division by p^e: the canonical quotient used to
// reduce Hermite-form entries mod p^e.
WittScalar coeff_div(const WittScalar& x, int e) {
    const auto& ring = x.ring();
    std::uint64_t pe = ring->pow_p(e);
    std::vector<std::uint64_t> c = x.coeffs();
    for (auto& v : c) v /= pe;
    return WittScalar(ring, std::move(c));
}

}  // namespace

WMatrix::WMatrix(RingPtr ring, int rows, int cols)
    : ring_(std::move(ring)), rows_(rows), cols_(cols),
      e_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols),
         WittScalar::zero(ring_)) {}

WMatrix WMatrix::identity(const RingPtr& ring, int n) {
    WMatrix m(ring, n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = WittScalar::one(ring);
    return m;
}

WMatrix WMatrix::operator*(const WMatrix& o) const {
    if (cols_ != o.rows_) throw input_error("matrix dimension mismatch");
    WMatrix r(ring_, rows_, o.cols_);
    for (int j = 0; j < o.cols_; ++j)
        for (int k = 0; k < cols_; ++k) {
            const WittScalar& b = o.at(k, j);
            if (b.is_zero()) continue;
            for (int i = 0; i < rows_; ++i)
                r.at(i, j) = r.at(i, j) + at(i, k) * b;
        }
    return r;
}

std::vector<WittScalar> WMatrix::operator*(const std::vector<WittScalar>& v) const {
    if (static_cast<int>(v.size()) != cols_) throw input_error("vector dimension mismatch");
    std::vector<WittScalar> r(static_cast<std::size_t>(rows_), WittScalar::zero(ring_));
    for (int k = 0; k < cols_; ++k) {
        if (v[static_cast<std::size_t>(k)].is_zero()) continue;
        for (int i = 0; i < rows_; ++i)
            r[static_cast<std::size_t>(i)] =
                r[static_cast<std::size_t>(i)] + at(i, k) * v[static_cast<std::size_t>(k)];
    }
    return r;
}

WMatrix WMatrix::operator+(const WMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw input_error("matrix dimension mismatch");
    WMatrix r(ring_, rows_, cols_);
    for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i] + o.e_[i];
    return r;
}

WMatrix WMatrix::operator-(const WMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw input_error("matrix dimension mismatch");
    WMatrix r(ring_, rows_, cols_);
    for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i] - o.e_[i];
    return r;
}

WMatrix WMatrix::transpose() const {
    WMatrix r(ring_, cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
}

WMatrix WMatrix::frobenius(int s) const {
    WMatrix r(ring_, rows_, cols_);
    for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i].frobenius(s);
    return r;
}

WMatrix WMatrix::scaled(const WittScalar& c) const {
    WMatrix r(ring_, rows_, cols_);
    for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i] * c;
    return r;
}

WMatrix WMatrix::mul_pow_p(int k) const {
    WMatrix r(ring_, rows_, cols_);
    for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i].mul_pow_p(k);
    return r;
}

WMatrix WMatrix::columns(int j0, int cnt) const {
    WMatrix r(ring_, rows_, cnt);
    for (int j = 0; j < cnt; ++j)
        for (int i = 0; i < rows_; ++i) r.at(i, j) = at(i, j0 + j);
    return r;
}

WMatrix WMatrix::hcat(const WMatrix& a, const WMatrix& b) {
    if (a.rows_ != b.rows_) throw input_error("matrix dimension mismatch");
    WMatrix r(a.ring_, a.rows_, a.cols_ + b.cols_);
    for (int j = 0; j < a.cols_; ++j)
        for (int i = 0; i < a.rows_; ++i) r.at(i, j) = a.at(i, j);
    for (int j = 0; j < b.cols_; ++j)
        for (int i = 0; i < a.rows_; ++i) r.at(i, a.cols_ + j) = b.at(i, j);
    return r;
}

bool WMatrix::operator==(const WMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_;
}

void WMatrix::swap_rows(int a, int b) {
    if (a == b) return;
    for (int j = 0; j < cols_; ++j) std::swap(at(a, j), at(b, j));
}

void WMatrix::swap_cols(int a, int b) {
    if (a == b) return;
    for (int i = 0; i < rows_; ++i) std::swap(at(i, a), at(i, b));
}

void WMatrix::scale_col(int j, const WittScalar& c) {
    for (int i = 0; i < rows_; ++i) at(i, j) = at(i, j) * c;
}

void WMatrix::scale_row(int i, const WittScalar& c) {
    for (int j = 0; j < cols_; ++j) at(i, j) = at(i, j) * c;
}

void WMatrix::addmul_col(int j, int k, const WittScalar& q) {
    for (int i = 0; i < rows_; ++i) at(i, j) = at(i, j) - q * at(i, k);
}

void WMatrix::addmul_row(int i, int k, const WittScalar& q) {
    for (int j = 0; j < cols_; ++j) at(i, j) = at(i, j) - q * at(k, j);
}

// ---------------------------------------------------------------------------

std::vector<WittScalar> SemilinearMap::apply(const std::vector<WittScalar>& x) const {
    std::vector<WittScalar> tw(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) tw[i] = x[i].frobenius(twist);
    return A * tw;
}

WMatrix SemilinearMap::apply_cols(const WMatrix& m) const { return A * m.frobenius(twist); }

SemilinearMap SemilinearMap::compose(const SemilinearMap& g) const {
    return {A * g.A.frobenius(twist), twist + g.twist};
}

std::vector<WittScalar> TwistedOperator::apply(const std::vector<WittScalar>& x) const {
    if (summands.empty()) throw input_error("empty operator");
    std::vector<WittScalar> acc = summands.front().apply(x);
    for (std::size_t k = 1; k < summands.size(); ++k) {
        auto t = summands[k].apply(x);
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] = acc[i] + t[i];
    }
    return acc;
}

// ---------------------------------------------------------------------------

namespace {

SmithResult smith_reduce_impl(const WMatrix& mat) {
    const RingPtr& ring = mat.ring();
    int r = mat.rows(), c = mat.cols();
    WMatrix M = mat;
    SmithResult res{{}, WMatrix::identity(ring, r), WMatrix::identity(ring, c)};
    int steps = std::min(r, c);

    for (int k = 0; k < steps; ++k) {
        // pivot: lowest valuation, then lowest row, then lowest column
        std::optional<int> best;
        int pi = -1, pj = -1;
        for (int j = k; j < c; ++j)
            for (int i = k; i < r; ++i) {
                auto v = M.at(i, j).valuation();
                if (!v) continue;
                if (!best || *v < *best ||
                    (*v == *best && (i < pi || (i == pi && j < pj)))) {
                    best = v;
                    pi = i;
                    pj = j;
                }
            }
        if (!best) {
            // remaining block is zero at working precision
            for (int t = k; t < steps; ++t) res.exponents.push_back(std::nullopt);
            return res;
        }
        int e = *best;
        M.swap_rows(k, pi);
        res.U.swap_rows(k, pi);
        M.swap_cols(k, pj);
        res.V.swap_cols(k, pj);
        // normalize pivot to exactly p^e via the unit part
        WittScalar unit_inv = M.at(k, k).div_pow_p(e).inverse();
        M.scale_col(k, unit_inv);
        res.V.scale_col(k, unit_inv);
        // clear column below, then row to the right
        for (int i = k + 1; i < r; ++i) {
            if (M.at(i, k).is_zero()) continue;
            WittScalar q = M.at(i, k).div_pow_p(e);
            M.addmul_row(i, k, q);
            res.U.addmul_row(i, k, q);
        }
        for (int j = k + 1; j < c; ++j) {
            if (M.at(k, j).is_zero()) continue;
            WittScalar q = M.at(k, j).div_pow_p(e);
            M.addmul_col(j, k, q);
            res.V.addmul_col(j, k, q);
        }
        res.exponents.push_back(e);
    }
    return res;
}

}  // namespace

SmithResult smith_reduce(const WMatrix& mat) { return smith_reduce_impl(mat); }

// ---------------------------------------------------------------------------

Lattice Lattice::standard(const RingPtr& ring, int h) {
    Lattice L;
    L.basis_ = WMatrix::identity(ring, h);
    return L;
}

Lattice Lattice::from_columns(const WMatrix& gens, int p_offset) {
    const RingPtr& ring = gens.ring();
    int h = gens.rows(), k = gens.cols();
    if (k < h) throw input_error("not enough generators for a full-rank lattice");
    WMatrix M = gens;
    int guard = precision_guard(ring, h);
    std::vector<int> diag(static_cast<std::size_t>(h), 0);

    for (int i = 0; i < h; ++i) {
        std::optional<int> best;
        int pj = -1;
        for (int j = i; j < k; ++j) {
            auto v = M.at(i, j).valuation();
            if (!v) continue;
            if (!best || *v < *best) {
                best = v;
                pj = j;
            }
        }
        if (!best) throw input_error("generators do not span a full-rank lattice");
        int e = *best;
        if (e > guard) fail_precision(ring, h);
        M.swap_cols(i, pj);
        M.scale_col(i, M.at(i, i).div_pow_p(e).inverse());
        for (int j = i + 1; j < k; ++j) {
            if (M.at(i, j).is_zero()) continue;
            M.addmul_col(j, i, M.at(i, j).div_pow_p(e));
        }
        diag[static_cast<std::size_t>(i)] = e;
    }
    // reduce entries left of each pivot coefficientwise mod p^{e_i}
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < i; ++j) {
            WittScalar q = coeff_div(M.at(i, j), diag[static_cast<std::size_t>(i)]);
            if (!q.is_zero()) M.addmul_col(j, i, q);
        }

    WMatrix B = M.columns(0, h);
    // factor the common power of p into the offset
    int vmin = ring->precision();
    for (int j = 0; j < h; ++j)
        for (int i = 0; i < h; ++i) {
            auto v = B.at(i, j).valuation();
            if (v) vmin = std::min(vmin, *v);
        }
    if (vmin > 0)
        for (int j = 0; j < h; ++j)
            for (int i = 0; i < h; ++i) B.at(i, j) = B.at(i, j).div_pow_p(vmin);
    Lattice L;
    L.basis_ = B;
    L.p_offset_ = p_offset + vmin;
    return L;
}

Lattice Lattice::scaled(int k) const {
    Lattice L(*this);
    L.p_offset_ += k;
    return L;
}

bool Lattice::operator==(const Lattice& o) const {
    return p_offset_ == o.p_offset_ && basis_ == o.basis_;
}

// ---------------------------------------------------------------------------

namespace {

// B^{-1} * X, computed through the Smith transforms of B with a uniform
// p^E shift so everything stays integral: returns (p^E B^{-1} X, E).
std::pair<WMatrix, int> shifted_inverse_apply(const WMatrix& B, const WMatrix& X) {
    auto sm = smith_reduce(B);
    int E = 0;
    for (const auto& e : sm.exponents) {
        if (!e) fail_precision(B.ring(), B.rows());
        E = std::max(E, *e);
    }
    if (E > precision_guard(B.ring(), B.rows())) fail_precision(B.ring(), B.rows());
    WMatrix T = sm.U * X;
    for (int i = 0; i < T.rows(); ++i) {
        int shift = E - *sm.exponents[static_cast<std::size_t>(i)];
        if (shift > 0)
            for (int j = 0; j < T.cols(); ++j)
                T.at(i, j) = T.at(i, j).mul_pow_p(shift);
    }
    return {sm.V * T, E};
}

}  // namespace

std::pair<int, int> lattice_exponents(const Lattice& L1, const Lattice& L2) {
    if (L1.rank() != L2.rank()) throw input_error("ambient rank mismatch");
    auto [C, E] = shifted_inverse_apply(L2.basis(), L1.basis());
    auto sm = smith_reduce(C);
    int lo = 0, hi = 0;
    bool first = true;
    for (const auto& e : sm.exponents) {
        if (!e) fail_precision(C.ring(), C.rows());
        int v = *e - E + (L1.p_offset() - L2.p_offset());
        if (first || v < lo) lo = v;
        if (first || v > hi) hi = v;
        first = false;
    }
    return {lo, hi};
}

Lattice apply_map(const SemilinearMap& f, const Lattice& L) {
    return Lattice::from_columns(f.apply_cols(L.basis()), L.p_offset());
}

Lattice lattice_sum(const Lattice& L1, const Lattice& L2) {
    if (L1.rank() != L2.rank()) throw input_error("ambient rank mismatch");
    const RingPtr& ring = L1.ring();
    int o = std::min(L1.p_offset(), L2.p_offset());
    int s1 = L1.p_offset() - o, s2 = L2.p_offset() - o;
    int guard = precision_guard(ring, L1.rank());
    if (s1 > guard || s2 > guard) fail_precision(ring, L1.rank());
    return Lattice::from_columns(
        WMatrix::hcat(L1.basis().mul_pow_p(s1), L2.basis().mul_pow_p(s2)), o);
}

Lattice lattice_dual(const Lattice& L) {
    auto sm = smith_reduce(L.basis());
    int E = 0;
    for (const auto& e : sm.exponents) {
        if (!e) fail_precision(L.ring(), L.rank());
        E = std::max(E, *e);
    }
    if (E > precision_guard(L.ring(), L.rank())) fail_precision(L.ring(), L.rank());
    // p^E B^{-T} = U^T diag(p^{E-e_i}) V^T
    WMatrix D(L.ring(), L.rank(), L.rank());
    for (int i = 0; i < L.rank(); ++i)
        D.at(i, i) = WittScalar::one(L.ring()).mul_pow_p(E - *sm.exponents[static_cast<std::size_t>(i)]);
    WMatrix Binvt = sm.U.transpose() * D * sm.V.transpose();
    return Lattice::from_columns(Binvt, -L.p_offset() - E);
}

Lattice lattice_intersection(const Lattice& L1, const Lattice& L2) {
    return lattice_dual(lattice_sum(lattice_dual(L1), lattice_dual(L2)));
}

bool lattice_contains(const Lattice& outer, const Lattice& inner) {
    return lattice_exponents(inner, outer).first >= 0;
}

int quotient_p_exponent(const Lattice& L1, const Lattice& L2) {
    auto [a, b] = lattice_exponents(L2, L1);
    if (a < 0) throw input_error("quotient requires an inclusion of lattices");
    return b;
}

long long quotient_length(const Lattice& L1, const Lattice& L2) {
    auto [C, E] = shifted_inverse_apply(L1.basis(), L2.basis());
    auto sm = smith_reduce(C);
    long long total = 0;
    for (const auto& e : sm.exponents) {
        if (!e) fail_precision(C.ring(), C.rows());
        int v = *e - E + (L2.p_offset() - L1.p_offset());
        if (v < 0) throw input_error("quotient requires an inclusion of lattices");
        total += v;
    }
    return total;
}

// ---------------------------------------------------------------------------

long long semilinear_kernel_count(const TwistedOperator& f, int m, int r,
                                  long long work_bound) {
    if (f.summands.empty()) throw input_error("empty operator");
    const RingPtr& ring = f.summands.front().A.ring();
    int h = f.summands.front().A.rows();
    for (const auto& s : f.summands)
        if (s.A.rows() != h || s.A.cols() != h || !s.A.ring()->same(*ring))
            throw input_error("inconsistent operator summands");
    if (m < 0 || m > ring->precision()) throw input_error("reduction level out of range");
    if (r < 1) throw input_error("extension multiplier must be >= 1");
    if (m == 0) return 0;

    std::uint64_t p = ring->p();
    int n = ring->degree();
    int logp = 0;
    for (std::uint64_t t = 1; t < p; t <<= 1) ++logp;
    long long work = static_cast<long long>(n) * r * h * m * std::max(logp, 1);
    if (work > work_bound) throw budget_error("kernel count exceeds the work bound");

    int nr = n * r;
    RingPtr big = WittRing::create(p, nr, m);

    // embed W_m(F_{p^n}) into W_m(F_{p^{nr}}): send the generator to a root
    // of the small modulus, found in the residue field then lifted.
    WittScalar gamma = WittScalar::zero(big);
    if (n > 1) {
        long double space = std::pow(static_cast<long double>(p), nr);
        if (space > (1ll << 22))
            throw budget_error("residue field too large for embedding search");
        auto eval_small = [&](const WittScalar& t) {
            WittScalar acc = WittScalar::one(big);
            for (int j = n - 1; j >= 0; --j) {
                acc = acc * t;
                acc = acc + WittScalar::from_int(big, static_cast<long long>(ring->modulus()[static_cast<std::size_t>(j)]));
            }
            return acc;
        };
        bool found = false;
        std::vector<std::uint64_t> digits(static_cast<std::size_t>(nr), 0);
        std::uint64_t total = 1;
        for (int i = 0; i < nr; ++i) total *= p;
        for (std::uint64_t k = 0; k < total && !found; ++k) {
            std::uint64_t t = k;
            for (int i = 0; i < nr; ++i) {
                digits[static_cast<std::size_t>(i)] = t % p;
                t /= p;
            }
            WittScalar cand(big, digits);
            auto v = eval_small(cand).valuation();
            if (!v || *v >= 1) {
                // residue-field root; Hensel-lift to precision m
                WittScalar root = cand;
                for (int it = 0; it < 2 * m + 2; ++it) {
                    auto val = eval_small(root);
                    if (val.is_zero()) break;
                    // derivative of the small modulus at root
                    WittScalar der = WittScalar::from_int(big, n);
                    for (int j = n - 1; j >= 1; --j) {
                        der = der * root;
                        der = der + WittScalar::from_int(
                                        big, static_cast<long long>(j) *
                                                 static_cast<long long>(ring->modulus()[static_cast<std::size_t>(j)]));
                    }
                    root = root - val * der.inverse();
                }
                if (!eval_small(root).is_zero())
                    throw internal_error("embedding root failed to lift");
                gamma = root;
                found = true;
            }
        }
        if (!found) throw internal_error("no embedding root found");
    }

    auto embed = [&](const WittScalar& x) {
        if (n == 1)
            return WittScalar::from_int(big, static_cast<long long>(x.coeffs()[0] % big->pN()));
        WittScalar acc = WittScalar::zero(big);
        WittScalar pw = WittScalar::one(big);
        for (int j = 0; j < n; ++j) {
            acc = acc + pw * WittScalar::from_int(big, static_cast<long long>(x.coeffs()[static_cast<std::size_t>(j)] % big->pN()));
            pw = pw * WittScalar::generator(big);
        }
        return acc;
    };

    // embedded operator
    TwistedOperator F;
    for (const auto& s : f.summands) {
        WMatrix A(big, h, h);
        for (int j = 0; j < h; ++j)
            for (int i = 0; i < h; ++i) A.at(i, j) = embed(s.A.at(i, j));
        F.summands.push_back({std::move(A), s.twist});
    }

    // the operator is Z/p^m-linear on (W_m(F_{p^{nr}}))^h, a free module of
    // rank K = h*nr; assemble its matrix over Z/p^m and Smith-reduce.
    int K = h * nr;
    RingPtr flat = WittRing::create(p, 1, m);
    WMatrix lin(flat, K, K);
    for (int coord = 0; coord < h; ++coord)
        for (int t = 0; t < nr; ++t) {
            std::vector<WittScalar> x(static_cast<std::size_t>(h), WittScalar::zero(big));
            std::vector<std::uint64_t> c(static_cast<std::size_t>(nr), 0);
            c[static_cast<std::size_t>(t)] = 1;
            x[static_cast<std::size_t>(coord)] = WittScalar(big, std::move(c));
            auto y = F.apply(x);
            int col = coord * nr + t;
            for (int i = 0; i < h; ++i) {
                const auto& cy = y[static_cast<std::size_t>(i)].coeffs();
                for (int u = 0; u < nr; ++u)
                    lin.at(i * nr + u, col) = WittScalar::from_int(
                        flat, static_cast<long long>(cy[static_cast<std::size_t>(u)]));
            }
        }

    auto sm = smith_reduce_impl(lin);
    long long log_count = 0;
    for (const auto& e : sm.exponents) log_count += e ? std::min(*e, m) : m;
    log_count += static_cast<long long>(m) * (K - static_cast<long long>(sm.exponents.size()));
    return log_count;
}

}  // namespace dmkit
