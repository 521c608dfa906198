#include "dmkit/witt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dmkit {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

// ---- arithmetic over F_p on coefficient vectors (used only at ring setup) --

std::vector<u64> fp_poly_trim(std::vector<u64> a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
    return a;
}

std::vector<u64> fp_poly_mod(std::vector<u64> a, const std::vector<u64>& m, u64 p) {
    // m monic.
    while (a.size() >= m.size() && !a.empty()) {
        u64 lead = a.back();
        if (lead != 0) {
            std::size_t shift = a.size() - m.size();
            for (std::size_t i = 0; i < m.size(); ++i) {
                u64 sub = static_cast<u64>(static_cast<u128>(lead) * m[i] % p);
                a[i + shift] = (a[i + shift] + p - sub) % p;
            }
        }
        a.pop_back();
    }
    return fp_poly_trim(std::move(a));
}

std::vector<u64> fp_poly_mulmod(const std::vector<u64>& a, const std::vector<u64>& b,
                                const std::vector<u64>& m, u64 p) {
    if (a.empty() || b.empty()) return {};
    std::vector<u64> c(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            c[i + j] = static_cast<u64>((c[i + j] + static_cast<u128>(a[i]) * b[j]) % p);
    return fp_poly_mod(std::move(c), m, p);
}

std::vector<u64> fp_poly_powmod(std::vector<u64> base, u128 e,
                                const std::vector<u64>& m, u64 p) {
    std::vector<u64> r{1};
    while (e > 0) {
        if (e & 1) r = fp_poly_mulmod(r, base, m, p);
        base = fp_poly_mulmod(base, base, m, p);
        e >>= 1;
    }
    return r;
}

std::vector<u64> fp_poly_gcd(std::vector<u64> a, std::vector<u64> b, u64 p) {
    a = fp_poly_trim(std::move(a));
    b = fp_poly_trim(std::move(b));
    while (!b.empty()) {
        // make b monic for fp_poly_mod
        u64 lead = b.back();
        if (lead != 1) {
            // lead^{-1} mod p by Fermat
            u64 inv = 1, base = lead, e = p - 2;
            while (e) {
                if (e & 1) inv = static_cast<u64>(static_cast<u128>(inv) * base % p);
                base = static_cast<u64>(static_cast<u128>(base) * base % p);
                e >>= 1;
            }
            for (auto& x : b) x = static_cast<u64>(static_cast<u128>(x) * inv % p);
        }
        auto r = fp_poly_mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

bool fp_poly_irreducible(const std::vector<u64>& f_low, u64 p, int n) {
    // f_low: coefficients c_0..c_{n-1}; full poly is x^n + sum c_j x^j.
    std::vector<u64> m(f_low);
    m.push_back(1);
    std::vector<u64> x{0, 1};
    // x^{p^n} == x mod f
    u128 pn = 1;
    for (int i = 0; i < n; ++i) pn *= p;
    auto xp = fp_poly_powmod(x, pn, m, p);
    auto diff = xp;
    diff.resize(std::max<std::size_t>(diff.size(), 2), 0);
    diff[1] = (diff[1] + p - 1) % p;
    if (!fp_poly_trim(diff).empty()) return false;
    // gcd(x^{p^{n/q}} - x, f) == 1 for every prime q | n
    std::vector<int> primes;
    int nn = n;
    for (int q = 2; q * q <= nn; ++q) {
        if (nn % q) continue;
        primes.push_back(q);
        while (nn % q == 0) nn /= q;
    }
    if (nn > 1) primes.push_back(nn);
    for (int q : primes) {
        u128 e = 1;
        for (int i = 0; i < n / q; ++i) e *= p;
        auto y = fp_poly_powmod(x, e, m, p);
        auto d = y;
        d.resize(std::max<std::size_t>(d.size(), 2), 0);
        d[1] = (d[1] + p - 1) % p;
        auto g = fp_poly_gcd(m, fp_poly_trim(d), p);
        if (g.size() != 1) return false;
    }
    return true;
}

}  // namespace

bool is_prime_u64(u64 x) {
    if (x < 2) return false;
    for (u64 d = 2; d * d <= x; ++d)
        if (x % d == 0) return false;
    return true;
}

u64 WittRing::pow_p(int e) const {
    if (e < 0 || e > N_) throw internal_error("pow_p exponent out of range");
    return pow_p_[static_cast<std::size_t>(e)];
}

u64 WittRing::addm(u64 a, u64 b) const {
    u64 s = a + b;
    return s >= pN_ ? s - pN_ : s;
}

u64 WittRing::subm(u64 a, u64 b) const { return a >= b ? a - b : a + pN_ - b; }

u64 WittRing::mulm(u64 a, u64 b) const {
    return static_cast<u64>(static_cast<u128>(a) * b % pN_);
}

std::vector<u64> WittRing::poly_mul(const std::vector<u64>& a,
                                    const std::vector<u64>& b) const {
    std::size_t n = static_cast<std::size_t>(n_);
    std::vector<u64> full(2 * n - 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (b[j] == 0) continue;
            full[i + j] = addm(full[i + j], mulm(a[i], b[j]));
        }
    }
    std::vector<u64> out(full.begin(), full.begin() + static_cast<std::ptrdiff_t>(n));
    for (std::size_t k = 0; k + n < full.size() + 0; ++k) {
        u64 hi = full[n + k];
        if (hi == 0) continue;
        const auto& red = reduction_[k];
        for (std::size_t j = 0; j < n; ++j)
            out[j] = addm(out[j], mulm(hi, red[j]));
        if (n + k + 1 >= full.size()) break;
    }
    return out;
}

const std::vector<u64>& WittRing::sigma_matrix(int s) const {
    int m = ((s % n_) + n_) % n_;
    return sigma_[static_cast<std::size_t>(m)];
}

RingPtr WittRing::create(u64 p, int n, int N) {
    if (!is_prime_u64(p)) throw input_error("p must be prime");
    if (n < 1) throw input_error("field degree must be >= 1");
    if (N < 1) throw input_error("precision must be >= 1");
    // p^N must fit comfortably in 64 bits for exact products via __int128.
    long double bits = static_cast<long double>(N) * std::log2(static_cast<long double>(p));
    if (bits > 62.0L) throw input_error("p^N too large for the scalar representation");

    auto ring = std::shared_ptr<WittRing>(new WittRing());
    ring->p_ = p;
    ring->n_ = n;
    ring->N_ = N;
    ring->pow_p_.resize(static_cast<std::size_t>(N) + 1);
    ring->pow_p_[0] = 1;
    for (int e = 1; e <= N; ++e) ring->pow_p_[static_cast<std::size_t>(e)] = ring->pow_p_[static_cast<std::size_t>(e - 1)] * p;
    ring->pN_ = ring->pow_p_[static_cast<std::size_t>(N)];

    // Lexicographically least monic irreducible modulus: enumerate the low
    // coefficient vectors as base-p integers, constant term least significant.
    {
        u128 limit = 1;
        for (int i = 0; i < n; ++i) limit *= p;
        bool found = false;
        for (u128 k = 0; k < limit; ++k) {
            std::vector<u64> low(static_cast<std::size_t>(n), 0);
            u128 t = k;
            for (int j = 0; j < n; ++j) {
                low[static_cast<std::size_t>(j)] = static_cast<u64>(t % p);
                t /= p;
            }
            if (n == 1 || fp_poly_irreducible(low, p, n)) {
                ring->modulus_ = low;
                found = true;
                break;
            }
        }
        if (!found) throw internal_error("no irreducible modulus found");
    }

    // Reduction table: g^{n+k} mod modulus for k = 0..n-2, over Z/p^N
    // (modulus lifted coefficientwise).
    {
        std::size_t un = static_cast<std::size_t>(n);
        ring->reduction_.assign(un > 1 ? un - 1 : 0, {});
        std::vector<u64> gn(un, 0);
        for (std::size_t j = 0; j < un; ++j) gn[j] = ring->subm(0, ring->modulus_[j] % ring->pN_);
        std::vector<u64> cur = gn;  // g^n
        for (std::size_t k = 0; k + 1 < un; ++k) {
            ring->reduction_[k] = cur;
            std::vector<u64> nxt(un, 0);
            u64 hi = cur[un - 1];
            for (std::size_t j = un - 1; j > 0; --j) nxt[j] = cur[j - 1];
            nxt[0] = 0;
            if (hi != 0)
                for (std::size_t j = 0; j < un; ++j)
                    nxt[j] = ring->addm(nxt[j], ring->mulm(hi, gn[j]));
            cur = std::move(nxt);
        }
    }

    // Frobenius lift: the unique root t of the modulus with t = g^p mod p,
    // refined to precision N by successive approximation.
    {
        std::size_t un = static_cast<std::size_t>(n);
        std::vector<std::vector<u64>>& sig = ring->sigma_;
        sig.assign(un, std::vector<u64>(un * un, 0));
        // identity for s = 0
        for (std::size_t j = 0; j < un; ++j) sig[0][j * un + j] = 1;
        if (n > 1) {
            auto poly_pow = [&](std::vector<u64> base, u128 e) {
                std::vector<u64> r(un, 0);
                r[0] = 1;
                while (e > 0) {
                    if (e & 1) r = ring->poly_mul(r, base);
                    base = ring->poly_mul(base, base);
                    e >>= 1;
                }
                return r;
            };
            auto eval_modulus = [&](const std::vector<u64>& t) {
                // modulus(t) = t^n + sum c_j t^j, computed by Horner with
                // monic leading coefficient.
                std::vector<u64> acc(un, 0);
                acc[0] = 1;  // leading 1
                std::vector<u64> res(un, 0);
                // Horner: ((1*t + c_{n-1})*t + ... + c_0)
                res = acc;
                for (int j = n - 1; j >= 0; --j) {
                    res = ring->poly_mul(res, t);
                    res[0] = ring->addm(res[0], ring->modulus_[static_cast<std::size_t>(j)] % ring->pN_);
                }
                return res;
            };
            auto eval_modulus_deriv = [&](const std::vector<u64>& t) {
                // modulus'(x) = n x^{n-1} + sum_{j>=1} j c_j x^{j-1}
                std::vector<u64> res(un, 0);
                res[0] = static_cast<u64>(n) % ring->pN_;
                for (int j = n - 1; j >= 1; --j) {
                    res = ring->poly_mul(res, t);
                    res[0] = ring->addm(res[0], ring->mulm(static_cast<u64>(j) % ring->pN_,
                                                           ring->modulus_[static_cast<std::size_t>(j)] % ring->pN_));
                }
                return res;
            };
            auto unit_inverse = [&](const std::vector<u64>& u) {
                // inverse mod p via extended Euclid in F_p[x], then lifted.
                std::vector<u64> um(un);
                for (std::size_t j = 0; j < un; ++j) um[j] = u[j] % p;
                std::vector<u64> m(ring->modulus_);
                m.push_back(1);
                // extended gcd over F_p
                std::vector<u64> r0 = m, r1 = fp_poly_trim(um);
                std::vector<u64> s0{}, s1{1};  // coefficients for um
                auto fp_sub = [&](std::vector<u64> a2, const std::vector<u64>& b2) {
                    if (a2.size() < b2.size()) a2.resize(b2.size(), 0);
                    for (std::size_t i2 = 0; i2 < b2.size(); ++i2)
                        a2[i2] = (a2[i2] + p - b2[i2]) % p;
                    return fp_poly_trim(std::move(a2));
                };
                auto fp_shift_mul = [&](const std::vector<u64>& v, u64 c, std::size_t sh) {
                    std::vector<u64> out(v.size() + sh, 0);
                    for (std::size_t i2 = 0; i2 < v.size(); ++i2)
                        out[i2 + sh] = static_cast<u64>(static_cast<u128>(v[i2]) * c % p);
                    return out;
                };
                while (!r1.empty() && r1.size() > 1) {
                    // divide r0 by r1
                    u64 lead = r1.back();
                    u64 inv = 1, base = lead, e = p - 2;
                    while (e) {
                        if (e & 1) inv = static_cast<u64>(static_cast<u128>(inv) * base % p);
                        base = static_cast<u64>(static_cast<u128>(base) * base % p);
                        e >>= 1;
                    }
                    while (r0.size() >= r1.size() && !r0.empty()) {
                        u64 c = static_cast<u64>(static_cast<u128>(r0.back()) * inv % p);
                        std::size_t sh = r0.size() - r1.size();
                        r0 = fp_sub(std::move(r0), fp_shift_mul(r1, c, sh));
                        s0 = fp_sub(std::move(s0), fp_shift_mul(s1, c, sh));
                        if (fp_poly_trim(r0).size() == r0.size() && !r0.empty() && r0.back() == 0)
                            r0 = fp_poly_trim(std::move(r0));
                        r0 = fp_poly_trim(std::move(r0));
                    }
                    std::swap(r0, r1);
                    std::swap(s0, s1);
                }
                if (r1.empty()) throw input_error("inverting a non-unit");
                // r1 is a nonzero constant; normalize
                u64 cst = r1[0];
                u64 inv = 1, base = cst, e = p - 2;
                while (e) {
                    if (e & 1) inv = static_cast<u64>(static_cast<u128>(inv) * base % p);
                    base = static_cast<u64>(static_cast<u128>(base) * base % p);
                    e >>= 1;
                }
                std::vector<u64> y(un, 0);
                for (std::size_t i2 = 0; i2 < s1.size() && i2 < un; ++i2)
                    y[i2] = static_cast<u64>(static_cast<u128>(s1[i2]) * inv % p);
                // Lift: y <- y (2 - u y), doubling precision each step.
                for (int it = 0; it < 8; ++it) {
                    auto uy = ring->poly_mul(u, y);
                    std::vector<u64> two_minus(un, 0);
                    two_minus[0] = 2 % ring->pN_;
                    for (std::size_t j = 0; j < un; ++j)
                        two_minus[j] = ring->subm(two_minus[j], uy[j]);
                    y = ring->poly_mul(y, two_minus);
                }
                return y;
            };

            std::vector<u64> g(un, 0);
            g[1] = 1;
            std::vector<u64> t = poly_pow(g, p);  // g^p, first approximation
            for (int it = 0; it < 2 * N + 4; ++it) {
                auto val = eval_modulus(t);
                bool zero = std::all_of(val.begin(), val.end(), [](u64 x) { return x == 0; });
                if (zero) break;
                auto dinv = unit_inverse(eval_modulus_deriv(t));
                auto corr = ring->poly_mul(val, dinv);
                for (std::size_t j = 0; j < un; ++j) t[j] = ring->subm(t[j], corr[j]);
            }
            {
                auto val = eval_modulus(t);
                bool zero = std::all_of(val.begin(), val.end(), [](u64 x) { return x == 0; });
                if (!zero) throw internal_error("Frobenius root refinement did not converge");
            }
            // sigma matrix: column j = t^j
            std::vector<u64> cur(un, 0);
            cur[0] = 1;
            for (std::size_t j = 0; j < un; ++j) {
                for (std::size_t i = 0; i < un; ++i) sig[1][j * un + i] = cur[i];
                cur = ring->poly_mul(cur, t);
            }
            // powers of the matrix by substitution composition
            for (std::size_t s = 2; s < un; ++s) {
                // sig[s] = sig[1] * sig[s-1]
                for (std::size_t j = 0; j < un; ++j)
                    for (std::size_t i = 0; i < un; ++i) {
                        u64 acc = 0;
                        for (std::size_t k = 0; k < un; ++k)
                            acc = ring->addm(acc, ring->mulm(sig[1][k * un + i], sig[s - 1][j * un + k]));
                        sig[s][j * un + i] = acc;
                    }
            }
            // sanity: sigma^n = id
            {
                std::vector<u64> id(un * un, 0);
                for (std::size_t j = 0; j < un; ++j) id[j * un + j] = 1;
                std::vector<u64> prod(un * un, 0);
                for (std::size_t j = 0; j < un; ++j)
                    for (std::size_t i = 0; i < un; ++i) {
                        u64 acc = 0;
                        for (std::size_t k = 0; k < un; ++k)
                            acc = ring->addm(acc, ring->mulm(sig[1][k * un + i], sig[un - 1][j * un + k]));
                        prod[j * un + i] = acc;
                    }
                if (prod != id) throw internal_error("sigma^n != id");
            }
        }
    }
    return ring;
}

// ---------------------------------------------------------------------------

WittScalar::WittScalar(RingPtr ring, std::vector<u64> coeffs)
    : ring_(std::move(ring)), c_(std::move(coeffs)) {
    if (static_cast<int>(c_.size()) != ring_->degree())
        throw input_error("scalar coefficient count does not match ring degree");
    for (auto& x : c_) x %= ring_->pN();
}

WittScalar WittScalar::zero(const RingPtr& ring) {
    return WittScalar(ring, std::vector<u64>(static_cast<std::size_t>(ring->degree()), 0));
}

WittScalar WittScalar::one(const RingPtr& ring) {
    std::vector<u64> c(static_cast<std::size_t>(ring->degree()), 0);
    c[0] = 1 % ring->pN();
    return WittScalar(ring, std::move(c));
}

WittScalar WittScalar::from_int(const RingPtr& ring, long long value) {
    std::vector<u64> c(static_cast<std::size_t>(ring->degree()), 0);
    long long m = static_cast<long long>(ring->pN());
    long long v = value % m;
    if (v < 0) v += m;
    c[0] = static_cast<u64>(v);
    return WittScalar(ring, std::move(c));
}

WittScalar WittScalar::generator(const RingPtr& ring) {
    std::vector<u64> c(static_cast<std::size_t>(ring->degree()), 0);
    if (ring->degree() > 1) c[1] = 1;
    return WittScalar(ring, std::move(c));
}

void WittScalar::check_same_ring(const WittScalar& o) const {
    if (!ring_ || !o.ring_ || !ring_->same(*o.ring_))
        throw input_error("scalars belong to different rings");
}

WittScalar WittScalar::operator+(const WittScalar& o) const {
    check_same_ring(o);
    std::vector<u64> c(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) c[i] = ring_->addm(c_[i], o.c_[i]);
    return WittScalar(ring_, std::move(c));
}

WittScalar WittScalar::operator-(const WittScalar& o) const {
    check_same_ring(o);
    std::vector<u64> c(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) c[i] = ring_->subm(c_[i], o.c_[i]);
    return WittScalar(ring_, std::move(c));
}

WittScalar WittScalar::operator*(const WittScalar& o) const {
    check_same_ring(o);
    return WittScalar(ring_, ring_->poly_mul(c_, o.c_));
}

WittScalar WittScalar::operator-() const {
    std::vector<u64> c(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) c[i] = ring_->subm(0, c_[i]);
    return WittScalar(ring_, std::move(c));
}

bool WittScalar::operator==(const WittScalar& o) const {
    return ring_ && o.ring_ && ring_->same(*o.ring_) && c_ == o.c_;
}

WittScalar WittScalar::frobenius(int s) const {
    int n = ring_->degree();
    if (n == 1) return *this;
    const auto& mat = ring_->sigma_matrix(s);
    std::size_t un = static_cast<std::size_t>(n);
    std::vector<u64> out(un, 0);
    for (std::size_t j = 0; j < un; ++j) {
        if (c_[j] == 0) continue;
        for (std::size_t i = 0; i < un; ++i)
            out[i] = ring_->addm(out[i], ring_->mulm(mat[j * un + i], c_[j]));
    }
    return WittScalar(ring_, std::move(out));
}

std::optional<int> WittScalar::valuation() const {
    int best = ring_->precision();
    u64 p = ring_->p();
    for (u64 c : c_) {
        if (c == 0) continue;
        int v = 0;
        while (c % p == 0) {
            c /= p;
            ++v;
        }
        best = std::min(best, v);
        if (best == 0) return 0;
    }
    if (best >= ring_->precision()) return std::nullopt;
    return best;
}

bool WittScalar::is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](u64 x) { return x == 0; });
}

bool WittScalar::is_unit() const {
    auto v = valuation();
    return v && *v == 0;
}

WittScalar WittScalar::inverse() const {
    if (!is_unit()) throw input_error("inverting a non-unit");
    int n = ring_->degree();
    std::size_t un = static_cast<std::size_t>(n);
    u64 p = ring_->p();
    // start from the inverse mod p, then lift y <- y(2 - xy).
    WittScalar y = zero(ring_);
    if (n == 1) {
        u64 a = c_[0] % p;
        u64 inv = 1, base = a, e = p - 2;
        while (e) {
            if (e & 1) inv = static_cast<u64>(static_cast<u128>(inv) * base % p);
            base = static_cast<u64>(static_cast<u128>(base) * base % p);
            e >>= 1;
        }
        std::vector<u64> c(1, inv);
        y = WittScalar(ring_, std::move(c));
    } else {
        // extended Euclid in F_p[x] against the modulus
        std::vector<u64> m(ring_->modulus());
        m.push_back(1);
        std::vector<u64> um(un);
        for (std::size_t j = 0; j < un; ++j) um[j] = c_[j] % p;
        std::vector<u64> r0 = m, r1 = fp_poly_trim(um);
        std::vector<u64> s0{}, s1{1};
        auto fp_sub = [&](std::vector<u64> a2, const std::vector<u64>& b2) {
            if (a2.size() < b2.size()) a2.resize(b2.size(), 0);
            for (std::size_t i2 = 0; i2 < b2.size(); ++i2)
                a2[i2] = (a2[i2] + p - b2[i2]) % p;
            return fp_poly_trim(std::move(a2));
        };
        auto fp_shift_mul = [&](const std::vector<u64>& v, u64 cc, std::size_t sh) {
            std::vector<u64> out(v.size() + sh, 0);
            for (std::size_t i2 = 0; i2 < v.size(); ++i2)
                out[i2 + sh] = static_cast<u64>(static_cast<u128>(v[i2]) * cc % p);
            return out;
        };
        auto inv_mod_p = [&](u64 a) {
            u64 inv = 1, base = a, e = p - 2;
            while (e) {
                if (e & 1) inv = static_cast<u64>(static_cast<u128>(inv) * base % p);
                base = static_cast<u64>(static_cast<u128>(base) * base % p);
                e >>= 1;
            }
            return inv;
        };
        while (r1.size() > 1) {
            u64 linv = inv_mod_p(r1.back());
            while (r0.size() >= r1.size() && !r0.empty()) {
                u64 cc = static_cast<u64>(static_cast<u128>(r0.back()) * linv % p);
                std::size_t sh = r0.size() - r1.size();
                r0 = fp_sub(std::move(r0), fp_shift_mul(r1, cc, sh));
                s0 = fp_sub(std::move(s0), fp_shift_mul(s1, cc, sh));
            }
            std::swap(r0, r1);
            std::swap(s0, s1);
        }
        if (r1.empty()) throw input_error("inverting a non-unit");
        u64 cinv = inv_mod_p(r1[0]);
        std::vector<u64> c(un, 0);
        for (std::size_t i = 0; i < s1.size() && i < un; ++i)
            c[i] = static_cast<u64>(static_cast<u128>(s1[i]) * cinv % p);
        y = WittScalar(ring_, std::move(c));
    }
    WittScalar two = from_int(ring_, 2);
    for (int it = 0; it < 8; ++it) y = y * (two - *this * y);
    if (!((*this) * y == one(ring_))) throw internal_error("unit inverse failed to lift");
    return y;
}

WittScalar WittScalar::mul_pow_p(int k) const {
    if (k == 0) return *this;
    if (k < 0) return div_pow_p(-k);
    if (k >= ring_->precision()) return zero(ring_);
    u64 f = ring_->pow_p(k);
    std::vector<u64> c(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) c[i] = ring_->mulm(c_[i], f);
    return WittScalar(ring_, std::move(c));
}

WittScalar WittScalar::div_pow_p(int k) const {
    if (k == 0) return *this;
    if (k < 0) return mul_pow_p(-k);
    auto v = valuation();
    if (is_zero()) return zero(ring_);
    if (!v || *v < k)
        throw precision_error("exact division by p^" + std::to_string(k) + " of an element of smaller valuation",
                              ring_->precision() + k);
    u64 f = ring_->pow_p(k);
    std::vector<u64> c(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) c[i] = c_[i] / f;
    return WittScalar(ring_, std::move(c));
}

std::vector<u64> WittScalar::coeffs_mod(int m) const {
    if (m > ring_->precision()) throw internal_error("coeffs_mod beyond working precision");
    u64 pm = ring_->pow_p(m);
    std::vector<u64> out(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) out[i] = c_[i] % pm;
    return out;
}

}  // namespace dmkit
