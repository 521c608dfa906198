#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "dmkit/errors.hpp"

namespace dmkit {

class WittRing;
using RingPtr = std::shared_ptr<const WittRing>;

/// The truncated unramified ring W_N(F_{p^n}) = Z_{p^n} / p^N, realized as
/// (Z/p^N)[g] / (modulus) where the modulus is the lexicographically least
/// monic irreducible polynomial of degree n over F_p, lifted coefficientwise.
/// The Frobenius is precomputed as the substitution g -> t where t is the
/// unique root of the modulus with t = g^p mod p.
class WittRing : public std::enable_shared_from_this<WittRing> {
public:
    static RingPtr create(std::uint64_t p, int n, int N);

    std::uint64_t p() const { return p_; }
    int degree() const { return n_; }
    int precision() const { return N_; }
    std::uint64_t pN() const { return pN_; }

    /// p^e for 0 <= e <= N.
    std::uint64_t pow_p(int e) const;

    /// Monic modulus: coefficients c_0..c_{n-1} of x^n + sum c_j x^j,
    /// each in [0, p).
    const std::vector<std::uint64_t>& modulus() const { return modulus_; }

    /// Column-major n x n matrix of sigma^s on the polynomial basis,
    /// entries mod p^N. s is taken mod n.
    const std::vector<std::uint64_t>& sigma_matrix(int s) const;

    bool same(const WittRing& other) const { return this == &other; }

    // Scalar coefficient arithmetic mod p^N.
    std::uint64_t addm(std::uint64_t a, std::uint64_t b) const;
    std::uint64_t subm(std::uint64_t a, std::uint64_t b) const;
    std::uint64_t mulm(std::uint64_t a, std::uint64_t b) const;

    /// Product of two coefficient vectors reduced by the modulus.
    std::vector<std::uint64_t> poly_mul(const std::vector<std::uint64_t>& a,
                                        const std::vector<std::uint64_t>& b) const;

private:
    WittRing() = default;

    std::uint64_t p_ = 0;
    int n_ = 0;
    int N_ = 0;
    std::uint64_t pN_ = 0;
    std::vector<std::uint64_t> pow_p_;           // p^0..p^N
    std::vector<std::uint64_t> modulus_;         // c_0..c_{n-1}
    // g^{n+k} mod modulus for k = 0..n-2, each a length-n vector.
    std::vector<std::vector<std::uint64_t>> reduction_;
    // sigma^s matrices for s = 0..n-1, column-major n x n.
    std::vector<std::vector<std::uint64_t>> sigma_;
};

/// An element of W_N(F_{p^n}): n coefficients in [0, p^N), constant first.
/// Values are immutable in spirit; all operations return new scalars in
/// canonical (fully reduced) form, so equality is coefficient equality.
class WittScalar {
public:
    WittScalar() = default;
    WittScalar(RingPtr ring, std::vector<std::uint64_t> coeffs);

    static WittScalar zero(const RingPtr& ring);
    static WittScalar one(const RingPtr& ring);
    static WittScalar from_int(const RingPtr& ring, long long value);
    static WittScalar generator(const RingPtr& ring);

    const RingPtr& ring() const { return ring_; }
    const std::vector<std::uint64_t>& coeffs() const { return c_; }
    std::uint64_t coeff(int j) const { return c_[static_cast<std::size_t>(j)]; }

    WittScalar operator+(const WittScalar& o) const;
    WittScalar operator-(const WittScalar& o) const;
    WittScalar operator*(const WittScalar& o) const;
    WittScalar operator-() const;
    bool operator==(const WittScalar& o) const;
    bool operator!=(const WittScalar& o) const { return !(*this == o); }

    /// sigma^s, any integer s (negative allowed).
    WittScalar frobenius(int s = 1) const;

    /// p-adic valuation in {0..N-1}; nullopt when the element is 0 mod p^N
    /// (valuation saturated at the working precision).
    std::optional<int> valuation() const;
    bool is_zero() const;
    bool is_unit() const;

    /// Multiplicative inverse; requires valuation 0.
    WittScalar inverse() const;

    WittScalar mul_pow_p(int k) const;
    /// Exact division by p^k; throws precision_error if valuation < k.
    WittScalar div_pow_p(int k) const;
    /// Reduction of the coefficients mod p^m, m <= N.
    std::vector<std::uint64_t> coeffs_mod(int m) const;

private:
    void check_same_ring(const WittScalar& o) const;

    RingPtr ring_;
    std::vector<std::uint64_t> c_;
};

bool is_prime_u64(std::uint64_t x);

}  // namespace dmkit
