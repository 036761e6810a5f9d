#pragma once

#include "sov/model.hpp"

namespace fx {

using sov::cplx;

inline sov::BoundaryRank1 gl2_boundary(bool diagonal = false) {
    sov::BoundaryRank1 b;
    b.zeta_plus = {0.7, 0.3};
    b.zeta_minus = {-0.55, 0.4};
    if (!diagonal) {
        b.kappa_plus = {0.45, -0.2};
        b.kappa_minus = {0.35, 0.15};
        b.tau_plus = {0.3, 0.1};
        b.tau_minus = {-0.2, 0.25};
    }
    return b;
}

inline sov::ModelSpec gl2(sov::Kind k, int N, bool diagonal = false) {
    sov::ModelSpec s;
    s.kind = k;
    s.N = N;
    s.eta = {0.83, 0.21};
    for (int a = 0; a < N; ++a) s.xi.push_back(cplx(0.5, 0.173) * double(a + 1) + 0.11 * a * a);
    s.boundary = gl2_boundary(diagonal);
    return s;
}

inline sov::CMatrix w_plus() {
    return {{{1.05, -0.506}, {-0.053, -0.249}, {0.256, 0.017}},
            {{0.042, -0.93}, {0.786, -0.088}, {0.145, -0.498}},
            {{0.522, -0.293}, {0.379, -0.218}, {0.719, -0.127}}};
}
inline sov::CMatrix w_minus() {
    return {{{1.165, -0.369}, {0.417, -0.183}, {-0.051, 0.088}},
            {{0.547, -0.404}, {0.734, -0.084}, {0.141, -0.064}},
            {{0.361, 0.216}, {0.038, 0.086}, {0.703, 0.142}}};
}

inline sov::ModelSpec gl3(int N, bool commuting = false) {
    sov::ModelSpec s;
    s.rank_n = 3;
    s.N = N;
    s.eta = {0.83, 0.21};
    for (int a = 0; a < N; ++a) s.xi.push_back(cplx(1.0, 0.173) * double(a + 1));
    sov::BoundaryRankN b;
    b.zeta_plus = {0.7, 0.3};
    b.zeta_minus = {-0.55, 0.4};
    b.p_plus = 1;
    b.p_minus = 2;
    b.W_plus = w_plus();
    b.W_minus = commuting ? w_plus() : w_minus();
    s.boundary = b;
    return s;
}

inline sov::ModelSpec gl4(int N) {
    sov::ModelSpec s;
    s.rank_n = 4;
    s.N = N;
    s.eta = {0.83, 0.21};
    for (int a = 0; a < N; ++a) s.xi.push_back(cplx(1.0, 0.173) * double(a + 1));
    sov::BoundaryRankN b;
    b.zeta_plus = {0.7, 0.3};
    b.zeta_minus = {-0.55, 0.4};
    b.p_plus = 1;
    b.p_minus = 2;
    sov::CMatrix wp = sov::CMatrix::identity(4), wm = sov::CMatrix::identity(4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            wp(i, j) += cplx(0.1 * ((i + 2 * j) % 5) - 0.2, 0.07 * ((3 * i + j) % 4) - 0.1);
            wm(i, j) += cplx(0.09 * ((2 * i + j) % 5) - 0.15, 0.05 * ((i + 3 * j) % 4) - 0.08);
        }
    b.W_plus = wp;
    b.W_minus = wm;
    s.boundary = b;
    return s;
}

}  // namespace fx
