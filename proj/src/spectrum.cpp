#include "sov/spectrum.hpp"

#include <cmath>
#include <limits>

namespace sov {

namespace {

constexpr double kPi = 3.14159265358979323846;
const cplx kI(0.0, 1.0);

double sign_n(int N) { return (N % 2) ? -1.0 : 1.0; }

bool is_gl3(const ModelSpec& s) { return s.rank_n == 3 && !s.is_rank1(); }

void require_supported(const ModelSpec& s, const char* what) {
    if (s.rank_n == 2 && s.is_rank1()) return;
    if (is_gl3(s)) return;
    throw NotApplicable(std::string(what) + ": supported for gl2 and gl3 models");
}

double rel_err(cplx a, cplx b) {
    const double den = std::max({std::abs(a), std::abs(b), std::numeric_limits<double>::min()});
    return std::abs(a - b) / den;
}

// fused boundary matrices on the antisymmetric pair, both with projectors applied
CMatrix fused_k_plus(const ModelSpec& s, cplx x) {
    const int n = s.rank_n;
    const CMatrix p = antisym_projector(n, 2);
    const CMatrix in = CMatrix::identity(n);
    return p * kron(in, k_matrix(s, Side::plus, x - s.eta)) * r_matrix(s, -2.0 * x - 2.0 * s.eta) *
           kron(k_matrix(s, Side::plus, x), in) * p;
}

CMatrix fused_k_minus(const ModelSpec& s, cplx x) {
    const int n = s.rank_n;
    const CMatrix p = antisym_projector(n, 2);
    const CMatrix in = CMatrix::identity(n);
    // R_ba = R_ab for R = l + eta P
    return p * kron(k_matrix(s, Side::minus, x), in) * r_matrix(s, 2.0 * x - s.eta) *
           kron(in, k_matrix(s, Side::minus, x - s.eta)) * p;
}

// leading coefficient of a polynomial of degree m-1 in z from samples at z_k = rho e^{2 pi i k/m}
template <class F>
CMatrix leading_coefficient(int m, double rho, F&& value_at) {
    CMatrix acc;
    for (int k = 0; k < m; ++k) {
        const cplx z = std::polar(rho, 2.0 * kPi * (k + 0.25) / m);
        CMatrix v = value_at(z) * (1.0 / (double(m) * std::pow(z, m - 1)));
        if (acc.empty())
            acc = v;
        else
            acc += v;
    }
    return acc;
}

}  // namespace

CentralData central_data(const ModelSpec& s) {
    require_supported(s, "central_data");
    CentralData c;
    const cplx e = s.eta;
    if (s.is_rank1()) {
        const auto& b = s.b1();
        if (s.kind == Kind::rational) {
            c.t_leading = t_asymptotic(s);
            c.t_half = 2.0 * sign_n(s.N) * fn_a(s, e / 2.0) * fn_d(s, -e / 2.0);
        } else {
            c.t_leading = std::pow(2.0, 1 - s.N) * b.kappa_plus * b.kappa_minus * std::cosh(b.tau_plus - b.tau_minus) /
                          (std::sinh(b.zeta_plus) * std::sinh(b.zeta_minus));
            c.t_half = sign_n(s.N) * 2.0 * std::cosh(e) * fn_a(s, e / 2.0) * fn_d(s, -e / 2.0);
            c.t_half_ipi = -2.0 * std::cosh(e) / std::tanh(b.zeta_minus) / std::tanh(b.zeta_plus) *
                           fn_a(s, kI * kPi / 2.0 + e / 2.0) * fn_d(s, kI * kPi / 2.0 - e / 2.0);
        }
        return c;
    }
    const auto& b = s.bn();
    const cplx zp = b.zeta_plus, zm = b.zeta_minus, Z = zp * zm;
    const CMatrix mm = mcal_plus(s) * mcal_minus(s);
    c.t_zero = fn_dn(s, e) * k_matrix(s, Side::plus, 0.0).trace();
    c.t_m3half = fn_dn(s, 1.5 * e) * k_matrix(s, Side::minus, -1.5 * e).trace();
    c.t_inf = -mm.trace() / Z;
    const CMatrix p = antisym_projector(s.rank_n, 2);
    c.t2_inf = -4.0 * (p * kron(mm, mm) * p).trace() / (Z * Z);
    c.t2_half = e * (e * e / 4.0 - zm * zm) / (zm * zm) * fn_dn(s, e / 2.0) * fn_dn(s, 1.5 * e) *
                fused_k_plus(s, e / 2.0).trace();
    c.t2_meta = e * (e * e / 4.0 - zp * zp) / (zp * zp) * fn_dn(s, e) * fn_dn(s, 2.0 * e) * fused_k_minus(s, -e).trace();
    for (const cplx x : s.xi) {
        const cplx ax = fn_dn(s, x + e), amx = fn_dn(s, -x + e);
        c.r_inv.push_back((x - 1.5 * e) * (x + 1.5 * e) / ((x - e / 2.0) * (x + e / 2.0)) * ax * amx *
                          ((zp + e / 2.0) * (zp + e / 2.0) - x * x) * (zm * zm - x * x) / (Z * Z));
    }
    return c;
}

Interpolation interpolation(const ModelSpec& s, const CentralData& c, const std::vector<int>& h, cplx l) {
    require_supported(s, "interpolation");
    Interpolation out;
    const int N = s.N;
    const cplx e = s.eta;
    if (s.is_rank1()) {
        for (int a = 0; a < N; ++a) out.nodes.push_back(s.xi_h(a, h.empty() ? 0 : h[a]));
        if (s.kind == Kind::rational) {
            const cplx w = l * l, w0 = e * e / 4.0;
            cplx prod_all = 1.0, prod_half = 1.0;
            for (const cplx y : out.nodes) {
                prod_all *= w - y * y;
                prod_half *= (w - y * y) / (w0 - y * y);
            }
            for (int a = 0; a < N; ++a) {
                const cplx ya = out.nodes[a] * out.nodes[a];
                cplx v = (w - w0) / (ya - w0);
                for (int b2 = 0; b2 < N; ++b2)
                    if (b2 != a) v *= (w - out.nodes[b2] * out.nodes[b2]) / (ya - out.nodes[b2] * out.nodes[b2]);
                out.weights.push_back(v);
            }
            out.constant = c.t_half * prod_half + c.t_leading * (w - w0) * prod_all;
        } else {
            const cplx x = std::cosh(2.0 * l), ce = std::cosh(e);
            std::vector<cplx> cn;
            for (const cplx y : out.nodes) cn.push_back(std::cosh(2.0 * y));
            cplx prod_all = 1.0, lp = (x + ce) / (2.0 * ce), lm = (x - ce) / (-2.0 * ce);
            for (const cplx cb : cn) {
                prod_all *= x - cb;
                lp *= (x - cb) / (ce - cb);
                lm *= (x - cb) / (-ce - cb);
            }
            for (int a = 0; a < N; ++a) {
                cplx v = (x * x - ce * ce) / (cn[a] * cn[a] - ce * ce);
                for (int b2 = 0; b2 < N; ++b2)
                    if (b2 != a) v *= (x - cn[b2]) / (cn[a] - cn[b2]);
                out.weights.push_back(v);
            }
            out.constant = c.t_half * lp + c.t_half_ipi * lm + c.t_leading * (x * x - ce * ce) * prod_all;
        }
        return out;
    }
    // gl3: nodes +xi then -xi
    for (int eps : {1, -1})
        for (int a = 0; a < N; ++a) {
            const cplx xa = s.xi[a];
            const cplx x = double(eps) * xa;
            cplx v = l * (l + 1.5 * e) / (x * (x + 1.5 * e)) * (l + x) / (2.0 * x);
            for (int b2 = 0; b2 < N; ++b2)
                if (b2 != a) v *= (l * l - s.xi[b2] * s.xi[b2]) / (xa * xa - s.xi[b2] * s.xi[b2]);
            out.nodes.push_back(x);
            out.weights.push_back(v);
        }
    const cplx dl = fn_dn(s, l);
    out.constant = c.t_inf * l * (l + 1.5 * e) * dl + (l + 1.5 * e) * dl / (1.5 * e * fn_dn(s, 0.0)) * c.t_zero -
                   l * dl / (1.5 * e * fn_dn(s, 1.5 * e)) * c.t_m3half;
    return out;
}

T2Interpolation t2_interpolation(const ModelSpec& s, const CentralData& c, cplx l) {
    if (!is_gl3(s)) throw NotApplicable("t2_interpolation: gl3 only");
    const cplx e = s.eta, e5 = std::pow(e, 5);
    const Interpolation base = interpolation(s, c, {}, l);
    T2Interpolation out;
    out.nodes = base.nodes;
    const cplx dl = fn_dn(s, l), dle = fn_dn(s, l - e);
    const cplx common = (l * l - e * e) * (l * l - e * e / 4.0) * dle;
    for (std::size_t k = 0; k < base.nodes.size(); ++k) {
        const cplx x = base.nodes[k];
        out.f.push_back(common / ((x * x - e * e) * (x * x - e * e / 4.0) * fn_dn(s, x - e)) * base.weights[k]);
    }
    const cplx tail = (l + 1.5 * e) * dle * dl;
    out.constant = l * (l * l - e * e / 4.0) * (l * l - e * e) * tail * c.t2_inf;
    out.v_zero = 8.0 * (l * l - e * e) * (l * l - e * e / 4.0) * tail / (3.0 * e5 * fn_dn(s, e) * fn_dn(s, 0.0));
    for (int eps : {1, -1}) {
        const cplx v = -16.0 * l * (l * l - e * e) * (l + double(eps) * e / 2.0) * tail /
                       (3.0 * (3.0 + eps) * e5 * fn_dn(s, (eps - 2.0) * e / 2.0) * fn_dn(s, e / 2.0));
        (eps == 1 ? out.v_half : out.v_mhalf) = v;
    }
    out.v_meta = 4.0 * l * (l - e) * (l * l - e * e / 4.0) * tail / (3.0 * e5 * fn_dn(s, 2.0 * e) * fn_dn(s, e));
    return out;
}

CMatrix interpolate_transfer(const ModelSpec& s, const std::vector<int>& h, cplx l) {
    const CentralData c = central_data(s);
    const Interpolation ip = interpolation(s, c, h, l);
    CMatrix out = ip.constant * CMatrix::identity(s.hilbert_dim());
    for (std::size_t k = 0; k < ip.nodes.size(); ++k) out += ip.weights[k] * transfer_matrix(s, ip.nodes[k]);
    return out;
}

CMatrix interpolate_t2(const ModelSpec& s, cplx l) {
    const CentralData c = central_data(s);
    const T2Interpolation ip = t2_interpolation(s, c, l);
    const cplx e = s.eta;
    const CMatrix id = CMatrix::identity(s.hilbert_dim());
    auto T = [&](cplx x) { return transfer_matrix(s, x); };
    CMatrix out = (ip.constant + ip.v_half * c.t2_half + ip.v_meta * c.t2_meta) * id;
    for (std::size_t k = 0; k < ip.nodes.size(); ++k) {
        const cplx x = ip.nodes[k];
        out += (ip.f[k] * fn_r3(s, 2.0 * x - e)) * (T(x - e) * T(x));
    }
    out += (ip.v_zero * fn_r3(s, -e)) * (T(0.0) * T(-e));
    out += (ip.v_mhalf * fn_r3(s, -2.0 * e)) * (T(-e / 2.0) * T(-1.5 * e));
    return out;
}

std::vector<Residual> central_identities(const ModelSpec& s, double tol) {
    require_supported(s, "central_identities");
    const CentralData c = central_data(s);
    const cplx e = s.eta;
    const std::size_t D = s.hilbert_dim();
    const CMatrix id = CMatrix::identity(D);
    std::vector<Residual> out;
    auto add = [&](const std::string& name, double v) { out.push_back({name, v, tol}); };
    auto T = [&](cplx x) { return transfer_matrix(s, x); };
    PointSampler ps(97);

    if (s.is_rank1()) {
        add("t_half", rel_diff(T(e / 2.0), c.t_half * id));
        add("t_minus_half", rel_diff(T(-e / 2.0), c.t_half * id));
        if (s.kind == Kind::rational) {
            // T is a polynomial of degree N+1 in lambda^2
            const CMatrix lead = leading_coefficient(s.N + 2, 1.5, [&](cplx w) { return T(std::sqrt(w)); });
            add("t_leading", rel_diff(lead, c.t_leading * id));
        } else {
            add("t_half_ipi", rel_diff(T(e / 2.0 - kI * kPi / 2.0), c.t_half_ipi * id));
            const CMatrix lead =
                leading_coefficient(s.N + 3, 1.5, [&](cplx z) { return T(std::acosh(z) / 2.0); });
            if (std::abs(c.t_leading) > 0.0)
                add("t_leading", rel_diff(lead, c.t_leading * id));
            else
                add("t_leading", lead.max_abs() / T(ps.next()).max_abs());
        }
        for (int a = 0; a < s.N; ++a) {
            const cplx x0 = s.xi_h(a, 0), x1 = s.xi_h(a, 1);
            add("fusion_" + std::to_string(a), rel_diff(T(x0) * T(x1), coeff_A(s, x0) * coeff_A(s, -x1) * id));
        }
        const cplx l = ps.next();
        const CMatrix tl = T(l);
        add("interpolation_h0", rel_diff(interpolate_transfer(s, std::vector<int>(s.N, 0), l), tl));
        add("interpolation_h1", rel_diff(interpolate_transfer(s, std::vector<int>(s.N, 1), l), tl));
        return out;
    }

    add("t_zero", rel_diff(T(0.0), c.t_zero * id));
    add("t_minus_3half", rel_diff(T(-1.5 * e), c.t_m3half * id));
    add("t_leading", rel_diff(leading_coefficient(2 * s.N + 3, 1.5, T), c.t_inf * id));
    for (int a = 0; a < s.N; ++a)
        add("inversion_" + std::to_string(a), rel_diff(T(s.xi[a]) * T(-s.xi[a]), c.r_inv[a] * id));

    auto T2 = [&](cplx x) { return fused_transfer_2(s, x); };
    const cplx l = ps.next();
    const CMatrix t2l = T2(l);
    double z = T2(e).max_abs();
    z = std::max(z, T2(-1.5 * e).max_abs());
    for (int a = 0; a < s.N; ++a) {
        z = std::max(z, T2(e + s.xi[a]).max_abs());
        z = std::max(z, T2(e - s.xi[a]).max_abs());
    }
    add("t2_central_zeros", z / t2l.max_abs());
    add("t2_half", rel_diff(T2(e / 2.0), c.t2_half * id));
    add("t2_minus_eta", rel_diff(T2(-e), c.t2_meta * id));
    add("t2_zero_by_t", rel_diff(T2(0.0), fn_r3(s, -e) * (T(0.0) * T(-e))));
    add("t2_minus_half_by_t", rel_diff(T2(-e / 2.0), fn_r3(s, -2.0 * e) * (T(-e / 2.0) * T(-1.5 * e))));
    add("t2_leading", rel_diff(leading_coefficient(4 * s.N + 7, 1.5, T2), c.t2_inf * id));
    for (int eps : {1, -1})
        for (int a = 0; a < s.N; ++a) {
            const cplx x = double(eps) * s.xi[a];
            add("fusion_t2_" + std::to_string(a) + (eps > 0 ? "_plus" : "_minus"),
                rel_diff(T2(x), fn_r3(s, 2.0 * x - e) * (T(x) * T(x - e))));
        }
    add("interpolation_t", rel_diff(interpolate_transfer(s, {}, l), T(l)));
    add("interpolation_t2", rel_diff(interpolate_t2(s, l), t2l));
    if (s.N == 1) {
        const cplx q = ps.next();
        add("quantum_determinant", rel_diff(fused_transfer_3(s, q), quantum_determinant_t3(s, q) * id));
    }
    return out;
}

cplx eval_t(const ModelSpec& s, const CentralData& c, const TransferEigenvalue& t, cplx l) {
    const Interpolation ip = interpolation(s, c, std::vector<int>(s.N, 0), l);
    cplx v = ip.constant;
    for (int a = 0; a < s.N; ++a) v += ip.weights[a] * t.x[a];
    if (is_gl3(s))
        for (int a = 0; a < s.N; ++a) v += ip.weights[s.N + a] * t.x_dual[a];
    return v;
}

cplx eval_t2(const ModelSpec& s, const CentralData& c, const TransferEigenvalue& t, cplx l) {
    const T2Interpolation ip = t2_interpolation(s, c, l);
    const cplx e = s.eta;
    auto t1 = [&](cplx x) { return eval_t(s, c, t, x); };
    cplx v = ip.constant + ip.v_half * c.t2_half + ip.v_meta * c.t2_meta;
    for (std::size_t k = 0; k < ip.nodes.size(); ++k) {
        const cplx x = ip.nodes[k];
        const cplx tx = k < std::size_t(s.N) ? t.x[k] : t.x_dual[k - s.N];
        v += ip.f[k] * fn_r3(s, 2.0 * x - e) * t1(x - e) * tx;
    }
    v += ip.v_zero * fn_r3(s, -e) * c.t_zero * t1(-e);
    v += ip.v_mhalf * fn_r3(s, -2.0 * e) * t1(-e / 2.0) * c.t_m3half;
    return v;
}

OracleResult diag_oracle(const ModelSpec& s, unsigned long long seed) {
    require_supported(s, "diag_oracle");
    if (s.hilbert_dim() > eig_dim_cap()) throw DimensionError("diag_oracle: dimension above eigensolver cap");
    PointSampler ps(seed);
    OracleResult out;
    EigenData ed;
    CMatrix probe;
    for (int k = 0; k < 3; ++k) {
        out.probes_used = k + 1;
        if (k == 0)
            probe = transfer_matrix(s, ps.next());
        else
            probe = transfer_matrix(s, ps.next()) + ps.next() * transfer_matrix(s, ps.next());
        ed = eig_general(probe);
        if (ed.simple()) break;
    }
    out.simple = ed.simple();
    out.min_gap = ed.min_gap / std::max(ed.spectral_radius, std::numeric_limits<double>::min());
    if (!out.simple) out.note = "degenerate probe spectrum after 3 probes";
    for (double r : ed.residuals) out.max_pair_residual = std::max(out.max_pair_residual, r);

    std::vector<CMatrix> tp, tm;
    for (int a = 0; a < s.N; ++a) {
        if (s.is_rank1()) {
            tp.push_back(transfer_matrix(s, s.xi_h(a, 0)));
            tm.push_back(transfer_matrix(s, s.xi_h(a, 1)));
        } else {
            tp.push_back(transfer_matrix(s, s.xi[a]));
            tm.push_back(transfer_matrix(s, -s.xi[a]));
        }
    }
    const CentralData c = central_data(s);
    for (std::size_t k = 0; k < ed.values.size(); ++k) {
        TransferEigenvalue t;
        t.provenance = Provenance::oracle;
        t.right = ed.right_vectors.col_vec(k);
        t.left = ed.left_vectors.row_vec(k);
        for (int a = 0; a < s.N; ++a) {
            t.x.push_back(dot(t.left, tp[a] * t.right));
            t.x_dual.push_back(dot(t.left, tm[a] * t.right));
        }
        const auto r = fusion_residual(s, c, t);
        for (double v : r) t.residual = std::max(t.residual, v);
        out.eigen.push_back(std::move(t));
    }
    return out;
}

namespace {

// equation values scaled by fixed magnitudes; rank 1: N, gl3: 2N
std::vector<cplx> sov_equations(const ModelSpec& s, const CentralData& c, const std::vector<cplx>& x,
                                std::vector<cplx>* lhs_out = nullptr, std::vector<cplx>* rhs_out = nullptr) {
    TransferEigenvalue t;
    t.x = x;
    std::vector<cplx> lhs, rhs;
    if (s.is_rank1()) {
        for (int n = 0; n < s.N; ++n) {
            const cplx x0 = s.xi_h(n, 0), x1 = s.xi_h(n, 1);
            lhs.push_back(x[n] * eval_t(s, c, t, x1));
            rhs.push_back(coeff_A(s, x0) * coeff_A(s, -x1));
        }
    } else {
        for (int a = 0; a < s.N; ++a) t.x_dual.push_back(c.r_inv[a] / x[a]);
        const cplx e = s.eta;
        for (int eps : {1, -1})
            for (int a = 0; a < s.N; ++a) {
                const cplx xx = double(eps) * s.xi[a];
                const cplx t1 = eps > 0 ? t.x[a] : t.x_dual[a];
                lhs.push_back(fn_r3(s, 2.0 * xx - e) * fn_r3(s, 2.0 * xx - 2.0 * e) * t1 * eval_t2(s, c, t, xx - e));
                rhs.push_back(quantum_determinant_t3(s, xx));
            }
    }
    std::vector<cplx> g(lhs.size());
    for (std::size_t i = 0; i < lhs.size(); ++i) g[i] = (lhs[i] - rhs[i]) / std::max(std::abs(rhs[i]), 1e-300);
    if (lhs_out) *lhs_out = lhs;
    if (rhs_out) *rhs_out = rhs;
    return g;
}

double max_abs_vec(const std::vector<cplx>& v) {
    double m = 0.0;
    for (auto z : v) m = std::max(m, std::abs(z));
    return std::isfinite(m) ? m : std::numeric_limits<double>::infinity();
}

}  // namespace

std::vector<double> fusion_residual(const ModelSpec& s, const CentralData& c, const TransferEigenvalue& t) {
    require_supported(s, "fusion_residual");
    std::vector<cplx> lhs, rhs;
    if (s.is_rank1()) {
        sov_equations(s, c, t.x, &lhs, &rhs);
    } else {
        // use the supplied values at -xi as well, not the inversion-eliminated ones
        TransferEigenvalue u = t;
        if (u.x_dual.empty())
            for (int a = 0; a < s.N; ++a) u.x_dual.push_back(c.r_inv[a] / u.x[a]);
        const cplx e = s.eta;
        for (int eps : {1, -1})
            for (int a = 0; a < s.N; ++a) {
                const cplx xx = double(eps) * s.xi[a];
                const cplx t1 = eps > 0 ? u.x[a] : u.x_dual[a];
                lhs.push_back(fn_r3(s, 2.0 * xx - e) * fn_r3(s, 2.0 * xx - 2.0 * e) * t1 * eval_t2(s, c, u, xx - e));
                rhs.push_back(quantum_determinant_t3(s, xx));
            }
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < lhs.size(); ++i) out.push_back(rel_err(lhs[i], rhs[i]));
    return out;
}

std::vector<std::vector<cplx>> default_sov_seeds(const ModelSpec& s, const OracleResult& oracle,
                                                 unsigned long long seed) {
    require_supported(s, "default_sov_seeds");
    PointSampler ps(seed);
    std::vector<std::vector<cplx>> seeds;
    for (const auto& t : oracle.eigen) {
        std::vector<cplx> x = t.x;
        for (auto& v : x) v *= 1.0 + 1e-3 * ps.next();
        seeds.push_back(x);
    }
    const CentralData c = central_data(s);
    if (s.is_rank1() && s.N == 1) {
        // x (c0 + w x) = P
        const Interpolation ip = interpolation(s, c, {0}, s.xi_h(0, 1));
        const cplx P = coeff_A(s, s.xi_h(0, 0)) * coeff_A(s, -s.xi_h(0, 1));
        const cplx w = ip.weights[0], c0 = ip.constant;
        const cplx disc = std::sqrt(c0 * c0 + 4.0 * w * P);
        for (double sg : {1.0, -1.0}) {
            const cplx q = -0.5 * (c0 + sg * disc);
            if (std::abs(q) > 0.0) seeds.push_back({-P / q});
            if (std::abs(w) > 0.0) seeds.push_back({q / w});
        }
    }
    // seeded random starts with the scale of the node products
    std::vector<double> scale;
    for (int a = 0; a < s.N; ++a) {
        if (s.is_rank1())
            scale.push_back(std::sqrt(std::abs(coeff_A(s, s.xi_h(a, 0)) * coeff_A(s, -s.xi_h(a, 1)))));
        else
            scale.push_back(std::sqrt(std::abs(c.r_inv[a])));
    }
    std::size_t count = 1;
    for (int a = 0; a < s.N; ++a) count *= std::size_t(s.rank_n);
    for (std::size_t k = 0; k < 3 * count; ++k) {
        std::vector<cplx> x;
        for (int a = 0; a < s.N; ++a) x.push_back(scale[a] * std::polar(ps.uniform(0.5, 1.5), ps.uniform(0.0, 2.0 * kPi)));
        seeds.push_back(x);
    }
    return seeds;
}

SovSolveReport solve_sov_system(const ModelSpec& s, const std::vector<std::vector<cplx>>& seeds) {
    require_supported(s, "solve_sov_system");
    if (s.is_rank1() && s.N > 4) throw NotApplicable("solve_sov_system: N <= 4 for rank 1");
    if (!s.is_rank1() && s.N > 2) throw NotApplicable("solve_sov_system: N <= 2 for gl3");
    const CentralData c = central_data(s);
    SovSolveReport rep;
    for (const auto& seed : seeds) {
        ++rep.seeds_tried;
        std::vector<cplx> x = seed;
        std::vector<cplx> g = sov_equations(s, c, x);
        double gn = max_abs_vec(g);
        for (int it = 0; it < 50 && gn > 1e-12 && std::isfinite(gn); ++it) {
            CMatrix J(g.size(), x.size());
            for (std::size_t j = 0; j < x.size(); ++j) {
                const double h = 1e-7 * std::max(1.0, std::abs(x[j]));
                std::vector<cplx> xp = x;
                xp[j] += h;
                const auto gp = sov_equations(s, c, xp);
                for (std::size_t i = 0; i < g.size(); ++i) J(i, j) = (gp[i] - g[i]) / h;
            }
            std::vector<cplx> mg(g.size());
            for (std::size_t i = 0; i < g.size(); ++i) mg[i] = -g[i];
            std::vector<cplx> dx;
            try {
                dx = least_squares(J, mg).x;
            } catch (const std::exception&) {
                break;
            }
            double step = 1.0;
            bool improved = false;
            for (int halve = 0; halve < 20; ++halve, step *= 0.5) {
                std::vector<cplx> xn = x;
                for (std::size_t j = 0; j < x.size(); ++j) xn[j] += step * dx[j];
                const auto gnew = sov_equations(s, c, xn);
                const double nn = max_abs_vec(gnew);
                if (nn < gn) {
                    x = xn;
                    g = gnew;
                    gn = nn;
                    improved = true;
                    break;
                }
            }
            if (!improved) break;
        }
        TransferEigenvalue t;
        t.provenance = Provenance::sov_solver;
        t.x = x;
        for (int a = 0; a < s.N; ++a)
            t.x_dual.push_back(s.is_rank1() ? eval_t(s, c, t, s.xi_h(a, 1)) : c.r_inv[a] / x[a]);
        const auto r = fusion_residual(s, c, t);
        for (double v : r) t.residual = std::max(t.residual, v);
        if (!(t.residual < 1e-10)) {
            ++rep.dropped;
            continue;
        }
        bool dup = false;
        for (const auto& o : rep.solutions) {
            double d = 0.0, m = 1.0;
            for (int a = 0; a < s.N; ++a) {
                d = std::max(d, std::abs(o.x[a] - t.x[a]));
                m = std::max(m, std::abs(o.x[a]));
            }
            if (d / m <= 1e-6) dup = true;
        }
        if (!dup) rep.solutions.push_back(std::move(t));
    }
    if (rep.dropped > 0) rep.notes.push_back(std::to_string(rep.dropped) + " seeds did not converge");
    if (rep.solutions.empty()) rep.notes.push_back("no solution found");
    return rep;
}

double node_set_distance(const std::vector<TransferEigenvalue>& a, const std::vector<TransferEigenvalue>& b) {
    auto dist = [](const TransferEigenvalue& u, const TransferEigenvalue& v) {
        double d = 0.0, m = 1.0;
        for (std::size_t k = 0; k < u.x.size(); ++k) {
            d = std::max(d, std::abs(u.x[k] - v.x[k]));
            m = std::max({m, std::abs(u.x[k]), std::abs(v.x[k])});
        }
        return d / m;
    };
    auto one_way = [&](const std::vector<TransferEigenvalue>& p, const std::vector<TransferEigenvalue>& q) {
        double worst = 0.0;
        for (const auto& u : p) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& v : q) best = std::min(best, dist(u, v));
            worst = std::max(worst, best);
        }
        return worst;
    };
    if (a.empty() || b.empty()) return (a.empty() && b.empty()) ? 0.0 : std::numeric_limits<double>::infinity();
    return std::max(one_way(a, b), one_way(b, a));
}

std::vector<cplx> sov_coordinates(const ModelSpec& s, const SovBasis& basis, const TransferEigenvalue& t) {
    const CentralData c = central_data(s);
    std::vector<cplx> dual(s.N);
    for (int a = 0; a < s.N; ++a)
        dual[a] = s.is_rank1() ? eval_t(s, c, t, s.xi_h(a, 1)) / basis.normalizers[a] : t.x[a];
    std::vector<cplx> out;
    for (const auto& h : basis.tuples) {
        cplx v = 1.0;
        for (int a = 0; a < s.N; ++a) {
            const int p = s.is_rank1() ? 1 - h[a] : h[a];
            for (int k = 0; k < p; ++k) v *= dual[a];
        }
        out.push_back(v);
    }
    return out;
}

EigenvectorReport reconstruct_eigenvector(const ModelSpec& s, const SovBasis& basis, const TransferEigenvalue& t,
                                          unsigned long long seed) {
    require_supported(s, "reconstruct_eigenvector");
    if (!basis_rank_check(basis).full_rank) throw DependencyError("reconstruct_eigenvector: SoV basis not full rank");
    auto coords = sov_coordinates(s, basis, t);
    for (std::size_t i = 0; i < coords.size(); ++i) coords[i] *= std::exp(-basis.scale_logs[i]);
    EigenvectorReport rep;
    rep.vector = solve_linear(basis.covectors, coords);
    const double nv = norm2(rep.vector);
    for (auto& v : rep.vector) v /= nv;

    const CentralData c = central_data(s);
    PointSampler ps(seed);
    for (int k = 0; k < 3; ++k) {
        const cplx l = ps.next();
        const CMatrix T = transfer_matrix(s, l);
        const cplx tl = eval_t(s, c, t, l);
        auto r = T * rep.vector;
        for (std::size_t i = 0; i < r.size(); ++i) r[i] -= tl * rep.vector[i];
        rep.max_residual = std::max(rep.max_residual, norm2(r) / std::max(std::abs(tl), T.max_abs()));
    }
    if (!t.right.empty()) rep.alignment = std::abs(vdot(t.right, rep.vector)) / norm2(t.right);
    return rep;
}

double completeness_residual(const std::vector<std::vector<cplx>>& rights, const std::vector<std::vector<cplx>>& lefts) {
    if (rights.empty() || rights.size() != lefts.size()) throw ShapeError("completeness_residual: mismatched lists");
    const std::size_t D = rights[0].size();
    CMatrix acc(D, D);
    for (std::size_t k = 0; k < rights.size(); ++k) {
        const cplx nrm = dot(lefts[k], rights[k]);
        for (std::size_t i = 0; i < D; ++i)
            for (std::size_t j = 0; j < D; ++j) acc(i, j) += rights[k][i] * lefts[k][j] / nrm;
    }
    return (acc - CMatrix::identity(D)).max_abs();
}

}  // namespace sov
