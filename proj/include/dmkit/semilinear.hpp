#pragma once

#include <optional>
#include <vector>

#include "dmkit/witt.hpp"

namespace dmkit {

/// Dense matrix of WittScalar, column-major.
class WMatrix {
public:
    WMatrix() = default;
    WMatrix(RingPtr ring, int rows, int cols);

    static WMatrix identity(const RingPtr& ring, int n);

    const RingPtr& ring() const { return ring_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }

    WittScalar& at(int i, int j) { return e_[static_cast<std::size_t>(i + j * rows_)]; }
    const WittScalar& at(int i, int j) const {
        return e_[static_cast<std::size_t>(i + j * rows_)];
    }

    WMatrix operator*(const WMatrix& o) const;
    std::vector<WittScalar> operator*(const std::vector<WittScalar>& v) const;
    WMatrix operator+(const WMatrix& o) const;
    WMatrix operator-(const WMatrix& o) const;
    WMatrix transpose() const;
    /// sigma^s applied to every entry.
    WMatrix frobenius(int s) const;
    WMatrix scaled(const WittScalar& c) const;
    WMatrix mul_pow_p(int k) const;

    /// Columns [j0, j0+cnt).
    WMatrix columns(int j0, int cnt) const;
    /// Horizontal concatenation.
    static WMatrix hcat(const WMatrix& a, const WMatrix& b);

    bool operator==(const WMatrix& o) const;

    void swap_rows(int a, int b);
    void swap_cols(int a, int b);
    void scale_col(int j, const WittScalar& c);
    void scale_row(int i, const WittScalar& c);
    /// col_j -= q * col_k
    void addmul_col(int j, int k, const WittScalar& q);
    /// row_i -= q * row_k
    void addmul_row(int i, int k, const WittScalar& q);

private:
    RingPtr ring_;
    int rows_ = 0, cols_ = 0;
    std::vector<WittScalar> e_;
};

/// x -> A * sigma^s(x).
struct SemilinearMap {
    WMatrix A;
    int twist = 0;

    std::vector<WittScalar> apply(const std::vector<WittScalar>& x) const;
    WMatrix apply_cols(const WMatrix& m) const;
    SemilinearMap compose(const SemilinearMap& g) const;  // this after g
};

/// A finite sum of semilinear maps of possibly different twists, such as
/// a polynomial in F and V.
struct TwistedOperator {
    std::vector<SemilinearMap> summands;

    std::vector<WittScalar> apply(const std::vector<WittScalar>& x) const;
};

struct SmithResult {
    /// e_1 <= ... <= e_min(r,c); nullopt when a whole remaining block is
    /// zero at working precision.
    std::vector<std::optional<int>> exponents;
    WMatrix U, V;  // U * mat * V = diag(p^{e_i})
};

/// Diagonalization over the local ring, deterministic pivoting (lowest
/// valuation, then lowest row, then lowest column). Guard: a finite pivot
/// valuation above N - (rows + 2) raises precision_error.
SmithResult smith_reduce(const WMatrix& mat);

/// Full-rank lattice p^{p_offset} * column-span(basis) in the ambient
/// rank-h space over Frac(W). The basis is kept in canonical column
/// Hermite form: lower triangular, diagonal p^{e_i}, entries left of the
/// diagonal reduced coefficientwise mod p^{e_i}, and min entry valuation 0
/// (powers of p are carried by p_offset).
class Lattice {
public:
    static Lattice standard(const RingPtr& ring, int h);
    /// Canonicalize the column span of gens (h x k, k >= h, full rank).
    static Lattice from_columns(const WMatrix& gens, int p_offset = 0);

    const RingPtr& ring() const { return basis_.ring(); }
    int rank() const { return basis_.rows(); }
    const WMatrix& basis() const { return basis_; }
    int p_offset() const { return p_offset_; }

    Lattice scaled(int k) const;  // p^k * L

    bool operator==(const Lattice& o) const;

private:
    Lattice() = default;
    WMatrix basis_;
    int p_offset_ = 0;
};

/// alpha = max a with L1 <= p^a L2, beta = min b with p^b L2 <= L1.
/// Always alpha <= beta; exponents(L2, L1) = (-beta, -alpha).
std::pair<int, int> lattice_exponents(const Lattice& L1, const Lattice& L2);

Lattice apply_map(const SemilinearMap& f, const Lattice& L);
Lattice lattice_sum(const Lattice& L1, const Lattice& L2);
Lattice lattice_dual(const Lattice& L);
Lattice lattice_intersection(const Lattice& L1, const Lattice& L2);
bool lattice_contains(const Lattice& outer, const Lattice& inner);
/// Smallest m with p^m (L1/L2) = 0; requires L2 <= L1.
int quotient_p_exponent(const Lattice& L1, const Lattice& L2);
/// Length of L1/L2 over W; requires L2 <= L1.
long long quotient_length(const Lattice& L1, const Lattice& L2);

/// log_p of the number of solutions x in (W_m(F_{p^{n r}}))^h of
/// f(x) = 0 mod p^m, where f is defined over W_N(F_{p^n}), N >= m.
/// work_bound caps n*r*h*m*log2(p).
long long semilinear_kernel_count(const TwistedOperator& f, int m, int r,
                                  long long work_bound = 4096);

}  // namespace dmkit
