#include "sov/model.hpp"

#include <cmath>

namespace sov {

std::size_t ModelSpec::hilbert_dim() const {
    std::size_t d = 1;
    for (int i = 0; i < N; ++i) {
        d *= static_cast<std::size_t>(rank_n);
        if (d > kron_dim_cap()) throw DimensionError("model: Hilbert space dimension exceeds cap");
    }
    return d;
}

const BoundaryRank1& ModelSpec::b1() const {
    if (!is_rank1()) throw ParameterError("model: rank-1 boundary data requested on a rank-n model");
    return std::get<BoundaryRank1>(boundary);
}

const BoundaryRankN& ModelSpec::bn() const {
    if (is_rank1()) throw ParameterError("model: rank-n boundary data requested on a rank-1 model");
    return std::get<BoundaryRankN>(boundary);
}

CMatrix boundary_mcal(int n, const CMatrix& W, int p, int r) {
    CMatrix core(n, n);
    if (r == 1) {
        for (int j = 0; j < n; ++j) core(j, j) = j < p ? 1.0 : -1.0;
    } else {
        core(0, n - 1) = 1.0;
    }
    if (W.empty()) return core;
    return W * core * inverse(W);
}

CMatrix mcal_plus(const ModelSpec& s) {
    const auto& b = s.bn();
    return boundary_mcal(s.rank_n, b.W_plus, b.p_plus, b.r_plus);
}

CMatrix mcal_minus(const ModelSpec& s) {
    const auto& b = s.bn();
    return boundary_mcal(s.rank_n, b.W_minus, b.p_minus, b.r_minus);
}

namespace {

// distance to the nearest point of z + i pi Z for the trigonometric kind
double dist0(const ModelSpec& s, cplx z) {
    if (s.kind == Kind::rational) return std::abs(z);
    const double k = std::round(z.imag() / M_PI);
    return std::abs(z - cplx(0.0, k * M_PI));
}

}  // namespace

void validate(const ModelSpec& s, double dg) {
    if (s.rank_n < 2) throw ParameterError("model: rank must be at least 2");
    if (s.kind == Kind::trigonometric && s.rank_n != 2)
        throw ParameterError("model: trigonometric kind is only available for rank 2");
    if (s.N < 1) throw ParameterError("model: at least one site required");
    if (static_cast<int>(s.xi.size()) != s.N) throw ParameterError("model: inhomogeneity count differs from N");
    if (std::abs(s.eta) == 0.0) throw ParameterError("model: eta must be nonzero");
    if (s.rank_n == 2 && !s.is_rank1()) throw ParameterError("model: rank 2 takes kappa/tau boundary data");
    if (s.rank_n > 2 && s.is_rank1()) throw ParameterError("model: rank n > 2 takes matrix boundary data");
    (void)s.hilbert_dim();
    const cplx e = s.eta;
    for (int a = 0; a < s.N; ++a) {
        const cplx x = s.xi[a];
        if (dist0(s, x) <= dg) throw ParameterError("model: inhomogeneity too close to zero");
        if (dist0(s, 2.0 * x - e) <= dg || dist0(s, 2.0 * x + e) <= dg)
            throw ParameterError("model: 2 xi +/- eta too close to zero");
        for (int b = 0; b < s.N; ++b) {
            if (a == b) continue;
            for (int eps = -1; eps <= 1; ++eps) {
                if (dist0(s, s.xi[a] - s.xi[b] - double(eps) * e) <= dg)
                    throw ParameterError("model: inhomogeneities not generic (xi_a - xi_b - eps eta)");
                if (dist0(s, s.xi[a] + s.xi[b] + double(eps) * e) <= dg)
                    throw ParameterError("model: inhomogeneities not generic (xi_a + xi_b + eps eta)");
            }
        }
    }
    if (s.is_rank1()) {
        const auto& b = s.b1();
        if (std::abs(b.zeta_plus) == 0.0 || std::abs(b.zeta_minus) == 0.0)
            throw ParameterError("model: zeta must be nonzero");
        if (s.kind == Kind::trigonometric && (dist0(s, b.zeta_plus) == 0.0 || dist0(s, b.zeta_minus) == 0.0))
            throw ParameterError("model: sinh(zeta) vanishes");
    } else {
        const auto& b = s.bn();
        if (std::abs(b.zeta_plus) == 0.0 || std::abs(b.zeta_minus) == 0.0)
            throw ParameterError("model: zeta must be nonzero");
        for (int side = 0; side < 2; ++side) {
            const int p = side ? b.p_plus : b.p_minus, r = side ? b.r_plus : b.r_minus;
            const CMatrix& W = side ? b.W_plus : b.W_minus;
            if (r != 0 && r != 1) throw ParameterError("model: r must be 0 or 1");
            if (p < 0 || p > s.rank_n) throw ParameterError("model: p out of range");
            if (!W.empty() && (W.rows() != std::size_t(s.rank_n) || !W.square()))
                throw ParameterError("model: similarity W has wrong shape");
            if (!W.empty() && std::abs(det(W)) < 1e-10) throw ParameterError("model: similarity W is singular");
            const CMatrix m = boundary_mcal(s.rank_n, W, p, r);
            const CMatrix sq = m * m - double(r) * CMatrix::identity(s.rank_n);
            if (sq.max_abs() > 1e-12 * std::max(1.0, m.max_abs() * m.max_abs()))
                throw ParameterError("model: boundary matrix does not square to r I");
        }
    }
}

cplx fn_a(const ModelSpec& s, cplx l) {
    cplx v = 1.0;
    for (const auto& x : s.xi) {
        const cplx z = l - x + s.eta / 2.0;
        v *= s.kind == Kind::rational ? z : std::sinh(z);
    }
    return v;
}

cplx fn_d(const ModelSpec& s, cplx l) { return fn_a(s, l - s.eta); }

cplx fn_dn(const ModelSpec& s, cplx l) {
    cplx v = 1.0;
    for (const auto& x : s.xi) v *= (l - x) * (l + x);
    return v;
}

cplx fn_r3(const ModelSpec& s, cplx l) { return -l * (l + 3.0 * s.eta); }

bool boundaries_commute(const BoundaryRank1& b, double tol) {
    const cplx p1 = b.kappa_minus * std::exp(b.tau_minus) - b.kappa_plus * std::exp(b.tau_plus);
    const cplx p2 = b.kappa_minus * std::exp(-b.tau_minus) - b.kappa_plus * std::exp(-b.tau_plus);
    const double sc = std::max({1.0, std::abs(b.kappa_minus), std::abs(b.kappa_plus)});
    return std::abs(p1) <= tol * sc && std::abs(p2) <= tol * sc;
}

std::string kind_name(Kind k) { return k == Kind::rational ? "rational" : "trigonometric"; }

}  // namespace sov
