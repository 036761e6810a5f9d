#pragma once

#include <string>
#include <variant>
#include <vector>

#include "sov/numkit.hpp"

namespace sov {

enum class Kind { rational, trigonometric };

struct BoundaryRank1 {
    cplx zeta_plus = 1.0, zeta_minus = 1.0;
    cplx kappa_plus = 0.0, kappa_minus = 0.0;
    cplx tau_plus = 0.0, tau_minus = 0.0;
};

// K-matrices I -/+ x/zeta * Mcal with Mcal = W diag(+1 x p, -1 x (n-p)) W^-1 when r = 1,
// and the nilpotent W E_{0,n-1} W^-1 when r = 0
struct BoundaryRankN {
    cplx zeta_plus = 1.0, zeta_minus = 1.0;
    int r_plus = 1, r_minus = 1;
    int p_plus = 1, p_minus = 1;
    CMatrix W_plus, W_minus;
};

using Boundary = std::variant<BoundaryRank1, BoundaryRankN>;

struct ModelSpec {
    int rank_n = 2;
    Kind kind = Kind::rational;
    int N = 1;
    cplx eta = 1.0;
    std::vector<cplx> xi;
    Boundary boundary = BoundaryRank1{};

    std::size_t hilbert_dim() const;
    bool is_rank1() const { return std::holds_alternative<BoundaryRank1>(boundary); }
    const BoundaryRank1& b1() const;
    const BoundaryRankN& bn() const;

    // gl2 shifted nodes xi_a + eta/2 - h eta
    cplx xi_h(int a, int h) const { return xi[a] + eta / 2.0 - double(h) * eta; }
};

// the boundary matrix Mcal for one side, built from (W, p, r)
CMatrix boundary_mcal(int n, const CMatrix& W, int p, int r);
CMatrix mcal_plus(const ModelSpec& s);
CMatrix mcal_minus(const ModelSpec& s);

// throws ParameterError describing the first violated condition
void validate(const ModelSpec& s, double delta_gen = 1e-3);

// gl2: a(l) = prod (l - xi + eta/2), d(l) = a(l - eta); sinh-products for the trigonometric kind
cplx fn_a(const ModelSpec& s, cplx l);
cplx fn_d(const ModelSpec& s, cplx l);
// gl3/gln: d(l) = prod (l - xi)(l + xi)
cplx fn_dn(const ModelSpec& s, cplx l);
// r(l) = -l (l + 3 eta)
cplx fn_r3(const ModelSpec& s, cplx l);

// K_- and K_+ commute (rank 1)
bool boundaries_commute(const BoundaryRank1& b, double tol = 1e-12);

std::string kind_name(Kind k);

}  // namespace sov
