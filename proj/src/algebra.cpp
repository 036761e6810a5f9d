#include "sov/algebra.hpp"

#include <cmath>
#include <limits>

#include "sov/sovbasis.hpp"

namespace sov {

CMatrix r_matrix(const ModelSpec& s, cplx l) {
    const int n = s.rank_n;
    if (s.kind == Kind::rational) {
        CMatrix r = CMatrix::identity(n * n) * l;
        r += s.eta * swap_matrix(n);
        return r;
    }
    const cplx a = std::sinh(l + s.eta), b = std::sinh(l), c = std::sinh(s.eta);
    return CMatrix{{a, 0, 0, 0}, {0, b, c, 0}, {0, c, b, 0}, {0, 0, 0, a}};
}

namespace {

CMatrix k_rank1(const ModelSpec& s, cplx l, cplx z, cplx k, cplx t) {
    const cplx e = s.eta;
    if (s.kind == Kind::rational) {
        const cplx u = l - e / 2.0;
        CMatrix m{{z + u, 2.0 * k * std::exp(t) * u}, {2.0 * k * std::exp(-t) * u, z - u}};
        return m * (1.0 / z);
    }
    const cplx sh2 = std::sinh(2.0 * l - e);
    CMatrix m{{std::sinh(l - e / 2.0 + z), k * std::exp(t) * sh2}, {k * std::exp(-t) * sh2, std::sinh(z - l + e / 2.0)}};
    return m * (1.0 / std::sinh(z));
}

}  // namespace

CMatrix k_matrix(const ModelSpec& s, Side side, cplx l) {
    if (s.is_rank1()) {
        const auto& b = s.b1();
        if (side == Side::minus) return k_rank1(s, l, b.zeta_minus, b.kappa_minus, b.tau_minus);
        return k_rank1(s, l + s.eta, b.zeta_plus, b.kappa_plus, b.tau_plus);
    }
    const auto& b = s.bn();
    const int n = s.rank_n;
    if (side == Side::minus) {
        if (b.zeta_minus == cplx(0.0)) throw ParameterError("k_matrix: zeta_- is zero");
        return CMatrix::identity(n) + mcal_minus(s) * (l / b.zeta_minus);
    }
    if (b.zeta_plus == cplx(0.0)) throw ParameterError("k_matrix: zeta_+ is zero");
    return CMatrix::identity(n) - mcal_plus(s) * ((l + double(n) * s.eta / 2.0) / b.zeta_plus);
}

namespace {

// gl2 uses shifted nodes, higher rank the bare ones
cplx bulk_node(const ModelSpec& s, int a) { return s.rank_n == 2 ? s.xi_h(a, 0) : s.xi[a]; }
cplx hat_node(const ModelSpec& s, int a) { return s.rank_n == 2 ? s.xi_h(a, 1) : s.xi[a]; }

// x * M_aux(l): R_{aux,N}(l - x_N) ... R_{aux,1}(l - x_1); sites follow naux auxiliary factors
CMatrix mul_bulk(const ModelSpec& s, const TensorSpace& ts, CMatrix x, int aux, int naux, cplx l) {
    for (int q = s.N - 1; q >= 0; --q) x = apply_right(ts, x, {aux, naux + q}, r_matrix(s, l - bulk_node(s, q)));
    return x;
}

// x * Mhat_aux(l): R_{aux,1}(l + y_1) ... R_{aux,N}(l + y_N)
CMatrix mul_hat(const ModelSpec& s, const TensorSpace& ts, CMatrix x, int aux, int naux, cplx l) {
    for (int q = 0; q < s.N; ++q) x = apply_right(ts, x, {aux, naux + q}, r_matrix(s, l + hat_node(s, q)));
    return x;
}

CMatrix partial_transpose_first(const CMatrix& m, std::size_t n) {
    const std::size_t d = m.rows() / n;
    CMatrix t(m.rows(), m.cols());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t p = 0; p < d; ++p)
                for (std::size_t q = 0; q < d; ++q) t(j * d + p, i * d + q) = m(i * d + p, j * d + q);
    return t;
}

}  // namespace

CMatrix monodromy(const ModelSpec& s, cplx l, MonoVariant v, HatConstruction hc) {
    const TensorSpace ts{s.rank_n, 1 + s.N};
    const CMatrix id = CMatrix::identity(ts.dim());
    if (v == MonoVariant::bulk) return mul_bulk(s, ts, id, 0, 1, l);
    if (hc == HatConstruction::product) return mul_hat(s, ts, id, 0, 1, l);
    if (s.rank_n != 2) throw ParameterError("monodromy: transpose construction of the hat variant is rank 2 only");
    // (-1)^N sigma^y M^{t_0}(-l) sigma^y
    const CMatrix m = partial_transpose_first(mul_bulk(s, ts, id, 0, 1, -l), 2);
    const CMatrix sy{{0, cplx(0, -1)}, {cplx(0, 1), 0}};
    const CMatrix y = kron(sy, CMatrix::identity(s.hilbert_dim()));
    return (s.N % 2 ? -1.0 : 1.0) * (y * m * y);
}

CMatrix boundary_monodromy_k(const ModelSpec& s, cplx l, const CMatrix& kminus) {
    const TensorSpace ts{s.rank_n, 1 + s.N};
    CMatrix x = mul_bulk(s, ts, CMatrix::identity(ts.dim()), 0, 1, l);
    x = apply_right(ts, x, {0}, kminus);
    return mul_hat(s, ts, x, 0, 1, l);
}

CMatrix boundary_monodromy(const ModelSpec& s, cplx l) {
    return boundary_monodromy_k(s, l, k_matrix(s, Side::minus, l));
}

CMatrix transfer_matrix(const ModelSpec& s, cplx l) {
    const TensorSpace ts{s.rank_n, 1 + s.N};
    CMatrix x = embed(ts, {0}, k_matrix(s, Side::plus, l));
    x = mul_bulk(s, ts, x, 0, 1, l);
    x = apply_right(ts, x, {0}, k_matrix(s, Side::minus, l));
    x = mul_hat(s, ts, x, 0, 1, l);
    return partial_trace_first(x, s.rank_n);
}

CMatrix antisym_projector(int n, int m) {
    if (m < 1 || m > 3) throw ParameterError("antisym_projector: m must be 1, 2 or 3");
    const TensorSpace ts{n, m};
    const std::size_t D = ts.dim();
    CMatrix p(D, D);
    std::vector<int> perm(m);
    for (int i = 0; i < m; ++i) perm[i] = i;
    double fact = 1.0;
    for (int i = 2; i <= m; ++i) fact *= i;
    do {
        int inv = 0;
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j)
                if (perm[i] > perm[j]) ++inv;
        const double sgn = inv % 2 ? -1.0 : 1.0;
        for (std::size_t idx = 0; idx < D; ++idx) {
            std::vector<int> dig(m);
            std::size_t r = idx;
            for (int i = m - 1; i >= 0; --i) {
                dig[i] = static_cast<int>(r % n);
                r /= n;
            }
            std::size_t out = 0;
            for (int i = 0; i < m; ++i) out = out * n + dig[perm[i]];
            p(out, idx) += sgn / fact;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return p;
}

CMatrix projector_image(const CMatrix& p) {
    // Gram-Schmidt on the columns, twice for stability
    std::vector<std::vector<cplx>> basis;
    const double tol = 1e-10 * std::max(1.0, p.max_abs());
    for (std::size_t j = 0; j < p.cols(); ++j) {
        auto v = p.col_vec(j);
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& b : basis) {
                const cplx c = vdot(b, v);
                for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * b[i];
            }
        const double nv = norm2(v);
        if (nv > tol) {
            for (auto& z : v) z /= nv;
            basis.push_back(std::move(v));
        }
    }
    CMatrix q(p.rows(), basis.size());
    for (std::size_t j = 0; j < basis.size(); ++j) q.set_col(j, basis[j]);
    return q;
}

namespace {

// sum_r (q_r^H (x) I) X (q_r (x) I) with aux space of dimension q.rows()
CMatrix trace_over_image(const CMatrix& x, const CMatrix& q) {
    const std::size_t A = q.rows(), D = x.rows() / A;
    CMatrix out(D, D);
    for (std::size_t r = 0; r < q.cols(); ++r)
        for (std::size_t al = 0; al < A; ++al) {
            const cplx ca = std::conj(q(al, r));
            if (ca == cplx(0.0)) continue;
            for (std::size_t be = 0; be < A; ++be) {
                const cplx w = ca * q(be, r);
                if (w == cplx(0.0)) continue;
                for (std::size_t i = 0; i < D; ++i)
                    for (std::size_t j = 0; j < D; ++j) out(i, j) += w * x(al * D + i, be * D + j);
            }
        }
    return out;
}

void require_gl3_like(const ModelSpec& s, const char* what) {
    if (s.rank_n < 3 || s.is_rank1()) throw ParameterError(std::string(what) + ": requires rank n >= 3");
}

}  // namespace

CMatrix fused_transfer_2(const ModelSpec& s, cplx l) {
    require_gl3_like(s, "fused_transfer_2");
    const int n = s.rank_n;
    const cplx e = s.eta;
    const TensorSpace ts{n, 2 + s.N};
    const CMatrix p2 = antisym_projector(n, 2);
    CMatrix x = embed(ts, {0, 1}, p2);
    x = apply_right(ts, x, {1}, k_matrix(s, Side::plus, l - e));
    x = apply_right(ts, x, {0, 1}, r_matrix(s, -2.0 * l - 2.0 * e));
    x = apply_right(ts, x, {0}, k_matrix(s, Side::plus, l));
    x = apply_right(ts, x, {0, 1}, p2);
    x = mul_bulk(s, ts, x, 0, 2, l);
    x = mul_bulk(s, ts, x, 1, 2, l - e);
    x = apply_right(ts, x, {0, 1}, p2);
    x = apply_right(ts, x, {0}, k_matrix(s, Side::minus, l));
    x = apply_right(ts, x, {1, 0}, r_matrix(s, 2.0 * l - e));
    x = apply_right(ts, x, {1}, k_matrix(s, Side::minus, l - e));
    x = apply_right(ts, x, {0, 1}, p2);
    x = mul_hat(s, ts, x, 0, 2, l);
    x = mul_hat(s, ts, x, 1, 2, l - e);
    x = apply_right(ts, x, {0, 1}, p2);
    return trace_over_image(x, projector_image(p2));
}

CMatrix fused_transfer_3(const ModelSpec& s, cplx l) {
    require_gl3_like(s, "fused_transfer_3");
    const int n = s.rank_n;
    const cplx e = s.eta;
    const TensorSpace ts{n, 3 + s.N};
    const CMatrix p2 = antisym_projector(n, 2), p3 = antisym_projector(n, 3);
    CMatrix x = embed(ts, {0, 1, 2}, p3);
    // K+ block: K+_<bc>(l - eta) R_ac(-2l - eta) R_ab(-2l - 2eta) K+_a(l)
    x = apply_right(ts, x, {1, 2}, p2);
    x = apply_right(ts, x, {2}, k_matrix(s, Side::plus, l - 2.0 * e));
    x = apply_right(ts, x, {1, 2}, r_matrix(s, -2.0 * l));
    x = apply_right(ts, x, {1}, k_matrix(s, Side::plus, l - e));
    x = apply_right(ts, x, {1, 2}, p2);
    x = apply_right(ts, x, {0, 2}, r_matrix(s, -2.0 * l - e));
    x = apply_right(ts, x, {0, 1}, r_matrix(s, -2.0 * l - 2.0 * e));
    x = apply_right(ts, x, {0}, k_matrix(s, Side::plus, l));
    x = apply_right(ts, x, {0, 1, 2}, p3);
    x = mul_bulk(s, ts, x, 0, 3, l);
    x = mul_bulk(s, ts, x, 1, 3, l - e);
    x = mul_bulk(s, ts, x, 2, 3, l - 2.0 * e);
    x = apply_right(ts, x, {0, 1, 2}, p3);
    // K- block: K-_a(l) R_ba(2l - eta) R_ca(2l - 2eta) K-_<bc>(l - eta)
    x = apply_right(ts, x, {0}, k_matrix(s, Side::minus, l));
    x = apply_right(ts, x, {1, 0}, r_matrix(s, 2.0 * l - e));
    x = apply_right(ts, x, {2, 0}, r_matrix(s, 2.0 * l - 2.0 * e));
    x = apply_right(ts, x, {1, 2}, p2);
    x = apply_right(ts, x, {1}, k_matrix(s, Side::minus, l - e));
    x = apply_right(ts, x, {2, 1}, r_matrix(s, 2.0 * l - 3.0 * e));
    x = apply_right(ts, x, {2}, k_matrix(s, Side::minus, l - 2.0 * e));
    x = apply_right(ts, x, {1, 2}, p2);
    x = apply_right(ts, x, {0, 1, 2}, p3);
    x = mul_hat(s, ts, x, 0, 3, l);
    x = mul_hat(s, ts, x, 1, 3, l - e);
    x = mul_hat(s, ts, x, 2, 3, l - 2.0 * e);
    x = apply_right(ts, x, {0, 1, 2}, p3);
    return trace_over_image(x, projector_image(p3));
}

cplx quantum_determinant_t3(const ModelSpec& s, cplx x) {
    if (s.rank_n != 3 || s.is_rank1()) throw ParameterError("quantum_determinant_t3: rank 3 only");
    const auto& b = s.bn();
    if (b.r_plus != 1 || b.r_minus != 1) throw ParameterError("quantum_determinant_t3: needs r_+ = r_- = 1");
    const cplx e = s.eta, zp = b.zeta_plus, zm = b.zeta_minus;
    const int pp = b.p_plus, pm = b.p_minus;
    cplx v = (2.0 * x - 2.0 * e) * (2.0 * x + e) * (2.0 * x - 3.0 * e) * (2.0 * x + 2.0 * e) * (2.0 * x - 4.0 * e) *
             (2.0 * x + 3.0 * e);
    v *= fn_dn(s, x + e) * fn_dn(s, x - e) * fn_dn(s, x - 2.0 * e);
    for (int h = 0; h < 3 - pp; ++h) v *= e / 2.0 - zp - double(h) * e - x;
    for (int h = 0; h < pp; ++h) v *= e / 2.0 + zp - double(h) * e - x;
    for (int h = 0; h < 3 - pm; ++h) v *= x - zm - double(h) * e;
    for (int h = 0; h < pm; ++h) v *= x + zm - double(h) * e;
    // our K-matrices are I at l = 0, hence the (zeta_+ zeta_-)^3; sign checked against the fused operator
    const double sg = (pp + pm) % 2 ? 1.0 : -1.0;
    const cplx z3 = std::pow(zp * zm, 3);
    return sg * v / z3;
}

double rel_diff(const CMatrix& a, const CMatrix& b) {
    const double den = std::max({a.frobenius(), b.frobenius(), std::numeric_limits<double>::min()});
    return (a - b).frobenius() / den;
}

PointSampler::PointSampler(unsigned long long seed) : rng_(seed) {}

double PointSampler::unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

double PointSampler::uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

cplx PointSampler::next() {
    const double r = uniform(0.3, 1.7), th = uniform(0.0, 2.0 * M_PI);
    return std::polar(r, th);
}

cplx PointSampler::next_avoiding(const std::vector<cplx>& avoid, double delta) {
    for (int tries = 0; tries < 1000; ++tries) {
        const cplx z = next();
        bool ok = true;
        for (const auto& a : avoid)
            if (std::abs(z - a) <= delta) ok = false;
        if (ok) return z;
    }
    throw ParameterError("PointSampler: could not find an admissible point");
}

std::map<std::string, double> algebra_residuals(const ModelSpec& s, unsigned long long seed) {
    PointSampler ps(seed);
    const int n = s.rank_n;
    const cplx e = s.eta;
    const bool gl2 = n == 2;
    // shift in the sum argument of the reflection equation and its dual
    const cplx sh_minus = gl2 ? -e : cplx(0.0);
    const cplx sh_plus = gl2 ? -e : -double(n) * e;
    std::map<std::string, double> out{{"ybe", 0.0},       {"reflection_minus", 0.0}, {"reflection_plus_dual", 0.0},
                                      {"unitarity", 0.0}, {"commutativity", 0.0}};
    const TensorSpace t2{n, 2}, t3{n, 3};
    auto R12 = [&](const TensorSpace& ts, int i, int j, cplx z) { return embed(ts, {i, j}, r_matrix(s, z)); };
    for (int rep = 0; rep < 3; ++rep) {
        const cplx l = ps.next(), m = ps.next();
        {
            const CMatrix lhs = R12(t3, 0, 1, l - m) * R12(t3, 0, 2, l) * R12(t3, 1, 2, m);
            const CMatrix rhs = R12(t3, 1, 2, m) * R12(t3, 0, 2, l) * R12(t3, 0, 1, l - m);
            out["ybe"] = std::max(out["ybe"], rel_diff(lhs, rhs));
        }
        {
            const CMatrix k1 = embed(t2, {0}, k_matrix(s, Side::minus, l));
            const CMatrix k2 = embed(t2, {1}, k_matrix(s, Side::minus, m));
            const CMatrix lhs = R12(t2, 0, 1, l - m) * k1 * R12(t2, 1, 0, l + m + sh_minus) * k2;
            const CMatrix rhs = k2 * R12(t2, 0, 1, l + m + sh_minus) * k1 * R12(t2, 1, 0, l - m);
            out["reflection_minus"] = std::max(out["reflection_minus"], rel_diff(lhs, rhs));
        }
        {
            const CMatrix k1 = embed(t2, {0}, k_matrix(s, Side::plus, l));
            const CMatrix k2 = embed(t2, {1}, k_matrix(s, Side::plus, m));
            const CMatrix lhs = R12(t2, 0, 1, m - l) * k1 * R12(t2, 1, 0, -l - m + sh_plus) * k2;
            const CMatrix rhs = k2 * R12(t2, 0, 1, -l - m + sh_plus) * k1 * R12(t2, 1, 0, m - l);
            out["reflection_plus_dual"] = std::max(out["reflection_plus_dual"], rel_diff(lhs, rhs));
        }
        {
            const cplx u = s.kind == Kind::rational ? e * e - l * l : std::sinh(e - l) * std::sinh(e + l);
            const CMatrix lhs = r_matrix(s, l) * r_matrix(s, -l);
            out["unitarity"] = std::max(out["unitarity"], rel_diff(lhs, CMatrix::identity(n * n) * u));
        }
    }
    for (int rep = 0; rep < 2; ++rep) {
        const cplx l = ps.next(), m = ps.next();
        const CMatrix tl = transfer_matrix(s, l), tm = transfer_matrix(s, m);
        const double c = commutator(tl, tm).frobenius() / (tl.frobenius() * tm.frobenius());
        out["commutativity"] = std::max(out["commutativity"], c);
    }
    return out;
}

ModelSpec rational_limit_trig_model(const RationalLimitTargets& t, double eps) {
    if (eps == 0.0) throw ParameterError("rational_limit_probe: epsilon must be nonzero");
    ModelSpec s;
    s.rank_n = 2;
    s.kind = Kind::trigonometric;
    s.N = t.N;
    s.eta = eps * t.eta_hat;
    for (const auto& x : t.xi_hat) s.xi.push_back(eps * x);
    BoundaryRank1 b = t.hat;
    b.zeta_plus *= eps;
    b.zeta_minus *= eps;
    s.boundary = b;
    return s;
}

ModelSpec rational_limit_rational_model(const RationalLimitTargets& t) {
    ModelSpec s;
    s.rank_n = 2;
    s.kind = Kind::rational;
    s.N = t.N;
    s.eta = t.eta_hat;
    s.xi = t.xi_hat;
    s.boundary = t.hat;
    return s;
}

RationalLimitReport rational_limit_probe(const RationalLimitTargets& t, double eps) {
    const ModelSpec mt = rational_limit_trig_model(t, eps);
    const ModelSpec mr = rational_limit_rational_model(t);
    const cplx l = eps * t.lambda_hat, lh = t.lambda_hat;
    const double sh = std::sinh(eps);
    const int N = t.N;
    RationalLimitReport rep;
    rep.epsilon = eps;
    rep.dev_R = (r_matrix(mt, l) * (1.0 / sh) - r_matrix(mr, lh)).max_abs();
    rep.dev_Kminus = (k_matrix(mt, Side::minus, l) - k_matrix(mr, Side::minus, lh)).max_abs();
    rep.dev_Kplus = (k_matrix(mt, Side::plus, l) - k_matrix(mr, Side::plus, lh)).max_abs();
    const double s2n = std::pow(sh, 2 * N), s4n = std::pow(sh, 4 * N);
    rep.dev_T = (transfer_matrix(mt, l) * (1.0 / s2n) - transfer_matrix(mr, lh)).max_abs();
    // trigonometric alpha, beta sit on principal branches, which corresponds to (+1,+1)
    rep.dev_A = std::abs(coeff_A(mt, l, ABranch{1, 1}) / s2n - coeff_A(mr, lh, ABranch{1, 1}));
    CMatrix ft = transfer_matrix(mt, mt.xi_h(0, 0)) * transfer_matrix(mt, mt.xi_h(0, 1));
    CMatrix fr = transfer_matrix(mr, mr.xi_h(0, 0)) * transfer_matrix(mr, mr.xi_h(0, 1));
    rep.dev_fusion = (ft * (1.0 / s4n) - fr).max_abs();
    return rep;
}

}  // namespace sov
