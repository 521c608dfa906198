#pragma once

#include <optional>

#include "dmkit/newton.hpp"
#include "dmkit/semilinear.hpp"

namespace dmkit {

/// The cyclic operator Psi = sum_{i=0}^{c} a_i F^{c-i} + sum_{i=1}^{d} b_i V^i
/// presenting a module with a-number 1. a_0 and b_d are units; all interior
/// coefficients have valuation >= 1 (zero coefficients allowed).
struct CyclicPresentation {
    RingPtr ring;
    int c = 0, d = 0;
    std::vector<WittScalar> a;  // a_0 .. a_c
    std::vector<WittScalar> b;  // b_1 .. b_d

    void validate() const;
};

/// Module with sigma-linear F, sigma^{-1}-linear V, FV = VF = p, on an
/// explicit rank-h basis.
class DieudonneModule {
public:
    DieudonneModule(SemilinearMap F, SemilinearMap V,
                    std::optional<CyclicPresentation> provenance = {});

    const RingPtr& ring() const { return F_.A.ring(); }
    int rank() const { return F_.A.rows(); }
    const SemilinearMap& F() const { return F_; }
    const SemilinearMap& V() const { return V_; }
    const std::optional<CyclicPresentation>& provenance() const { return provenance_; }

    /// dim M/VM (codimension c) and dim M/FM (dimension d).
    int cdim() const;
    int ddim() const;

    bool is_binilpotent() const;

private:
    SemilinearMap F_, V_;
    std::optional<CyclicPresentation> provenance_;
};

/// Module on the basis (F z, ..., F^c z, z, V z, ..., V^{d-1} z), with the
/// two boundary columns solved from Psi z = 0.
DieudonneModule from_cyclic(const CyclicPresentation& psi);

/// Newton polygon read off the coefficient valuations of Psi: the a_j term
/// gives the point (j - c, v(a_j)), the b_i term gives (i, v(b_i) + i);
/// lower hull, domain shifted by +c.
NewtonPolygon newton_from_psi(const CyclicPresentation& psi);

/// Independent route: characteristic polynomial of the linearization F^n,
/// Newton polygon of its coefficient valuations, slopes divided by n.
NewtonPolygon newton_from_module(const DieudonneModule& M);

/// mult-fold sum of the simple minimal module of slope dj/(cj+dj):
/// basis e_0..e_{h-1} with F e_i = e_{i+d}, V e_i = e_{i+c}, e_{i+h} = p e_i.
DieudonneModule minimal_module(const RingPtr& ring, int cj, int dj, int mult);

/// dim_k of M / (FM + VM + pM).
int a_number(const DieudonneModule& M);

DieudonneModule direct_sum(const DieudonneModule& M1, const DieudonneModule& M2);
DieudonneModule dual(const DieudonneModule& M);

/// Deterministic presentation whose coefficient valuations realize nu
/// exactly at its breakpoints: a_0 = 1, b_d = 1, one p-power coefficient per
/// interior breakpoint, zero elsewhere. With unit_seed set, each p-power is
/// multiplied by a seeded random unit (same polygon, generic coefficients).
CyclicPresentation psi_with_polygon(const RingPtr& ring, const NewtonPolygon& nu,
                                    std::optional<std::uint64_t> unit_seed = {});

/// Rank over the residue field F_{p^n} of a matrix reduced mod p.
int residue_rank(const WMatrix& m);

}  // namespace dmkit
