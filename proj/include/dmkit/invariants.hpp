#pragma once

#include <string>

#include "dmkit/dieudonne.hpp"

namespace dmkit {

/// The extremal minimal lattices around M: the largest minimal submodule
/// M_minus, and (isoclinic only) the smallest minimal overmodule M_plus,
/// with the three quotient p-exponents.
struct ExtremalLattices {
    Lattice M_minus;
    std::optional<Lattice> M_plus;
    std::optional<int> exp_plus_minus;  // p-exponent of M+/M-
    int exp_m_minus = 0;                // p-exponent of M/M-
    std::optional<int> exp_plus_m;      // p-exponent of M+/M
};

struct DeltaRow {
    int q = 0;
    int alpha = 0, beta = 0, delta = 0;
};

struct LevelTorsionTrace {
    std::vector<DeltaRow> delta_table;
    int cycle_start = 0;  // q0 with F^{q0+T} M = p^e F^{q0} M
    int period = 0;       // T
    int p_shift = 0;      // e
    int ell = 0;          // max delta over the recorded range
};

/// Lattice spanned by p^{m_i - 1} F^{c-i} z for i = 0..h-1, where m_i is
/// the least integer strictly above nu(i). Satisfies M_minus <= M.
Lattice m_minus(const CyclicPresentation& psi);

/// Isoclinic slope-lambda case: lattice spanned by p^{ceil((i-c) lambda)}
/// F^{c-i} z. Satisfies M <= M_plus.
Lattice m_plus_isoclinic(const CyclicPresentation& psi);

ExtremalLattices extremal_lattices(const CyclicPresentation& psi);

/// p-exponent of M/M_minus; equals floor(nu(c)) exactly (a-number 1),
/// verified internally.
int minimal_height(const CyclicPresentation& psi);

/// Iterate L <- F L from M, recording (alpha_q, beta_q, delta_q) against M,
/// until a p-normalized lattice repeats at matching q mod h.
/// q_max = 0 means the default 4h.
LevelTorsionTrace level_torsion_isoclinic(const DieudonneModule& M, int q_max = 0);

/// True iff F^c x = p^m z exactly and x is not in pM.
bool witness_check(const std::vector<WittScalar>& x, const CyclicPresentation& psi,
                   int m);

/// x = -(p^{m-d} F^d + V^d) z, the standard certificate for beta_c >= m.
std::vector<WittScalar> standard_witness(const CyclicPresentation& psi, int m);

struct IsogenyCutoff {
    long long value = 0;  // j(nu)
    std::optional<CyclicPresentation> witness;
};

/// j(nu), plus a presentation agreeing with psi modulo p^{j-1} whose
/// polygon differs (absent when j = 1).
IsogenyCutoff isogeny_cutoff_exact(const CyclicPresentation& psi);

struct EllValue {
    bool exact = false;
    long long value = 0;     // when exact
    long long lo = 0, hi = 0;  // when interval
};

struct InvariantReport {
    NewtonPolygon polygon;
    int c = 0, d = 0, h = 0, a = 0;
    bool binilpotent = false, isoclinic = false;
    long long b_exact = 0;   // isogeny cutoff j(nu)
    long long q_exact = 0;   // minimal height floor(nu(c))
    long long n_upper = 0;   // floor(2 nu(c))
    EllValue ell;
    long long traverso_min_cd = 0;
    bool traverso_violated = false;
    std::vector<std::string> citations;
    std::optional<CyclicPresentation> b_witness;
};

/// Full report; every exact value is recomputed at precision N+4 and must
/// agree (differential precision test).
InvariantReport report(const CyclicPresentation& psi, int q_max = 0);

/// The same presentation over a ring of higher precision (canonical
/// coefficient lift).
CyclicPresentation lift_presentation(const CyclicPresentation& psi, int extra);

}  // namespace dmkit
