#include "sov/sovbasis.hpp"

#include <cmath>
#include <limits>

namespace sov {

namespace {

cplx sqrt_k(cplx kappa) { return std::sqrt(1.0 + 4.0 * kappa * kappa); }

// off-diagonal gauge entry; the two forms avoid cancellation on either branch
cplx gauge_f(int eps, cplx kappa) {
    const cplx s = sqrt_k(kappa);
    if (eps == 1) return -2.0 * kappa / (1.0 + s);
    return (1.0 + s) / (2.0 * kappa);
}

double sign_n(int N) { return (N % 2) ? -1.0 : 1.0; }

CMatrix k_raw_rational(cplx u, cplx zeta, cplx kappa, cplx tau) {
    const cplx e = std::exp(tau);
    return CMatrix{{zeta + u, 2.0 * kappa * e * u}, {2.0 * kappa / e * u, zeta - u}} * (1.0 / zeta);
}

void require_rank1(const ModelSpec& s, const char* what) {
    if (s.rank_n != 2 || !s.is_rank1()) throw NotApplicable(std::string(what) + " needs a rank-1 gl2 model");
}

cplx trig_g(const ModelSpec& s, cplx l, cplx zeta, cplx kappa, double sgn) {
    const cplx e2 = s.eta / 2.0;
    // kappa -> 0 limit of the generic form (beta -> +inf); the two sides' exponentials cancel when both vanish
    if (kappa == cplx(0.0)) return std::sinh(l + zeta - e2) / std::sinh(zeta) * std::exp(-sgn * (l - e2));
    cplx al, be;
    trig_alpha_beta(zeta, kappa, al, be);
    return std::sinh(l + al - e2) * std::cosh(l - sgn * be - e2) / (std::sinh(al) * std::cosh(be));
}

// divide by the max modulus, return its log
double rescale(std::vector<cplx>& v) {
    const double m = max_abs(v);
    if (m == 0.0 || !std::isfinite(m)) return -std::numeric_limits<double>::infinity();
    for (auto& x : v) x /= m;
    return std::log(m);
}

std::vector<cplx> kron_site(const std::vector<cplx>& site, int N) {
    std::vector<cplx> v{1.0};
    for (int a = 0; a < N; ++a) v = kron_vec(v, site);
    return v;
}

}  // namespace

cplx zeta_bar(const BoundaryRank1& b, Side side, int eps) {
    const cplx z = side == Side::plus ? b.zeta_plus : b.zeta_minus;
    const cplx k = side == Side::plus ? b.kappa_plus : b.kappa_minus;
    return double(eps) * z / sqrt_k(k);
}

cplx t_asymptotic(const ModelSpec& s) {
    const auto& b = s.b1();
    return 2.0 * (1.0 + 4.0 * b.kappa_plus * b.kappa_minus * std::cosh(b.tau_plus - b.tau_minus)) /
           (b.zeta_plus * b.zeta_minus);
}

cplx bc_product(const ModelSpec& s, ABranch br) {
    require_rank1(s, "bc_product");
    if (s.kind != Kind::rational) throw NotApplicable("bc_product: rational models only");
    const auto& b = s.b1();
    return t_asymptotic(s) * zeta_bar(b, Side::plus, br.eps_plus) * zeta_bar(b, Side::minus, br.eps_minus) - 2.0;
}

void trig_alpha_beta(cplx zeta, cplx kappa, cplx& alpha, cplx& beta) {
    const cplx sp = std::asinh(std::exp(zeta) / (2.0 * kappa));
    const cplx sm = std::asinh(-std::exp(-zeta) / (2.0 * kappa));
    alpha = (sp + sm) / 2.0;
    beta = (sp - sm) / 2.0;
}

GaugeData gauge_transform_branch(const BoundaryRank1& p, int ep, int em) {
    GaugeData g;
    g.epsilon_plus = ep;
    g.epsilon_minus = em;
    const cplx sp = sqrt_k(p.kappa_plus), sm = sqrt_k(p.kappa_minus);
    const cplx fp = gauge_f(ep, p.kappa_plus), fm = gauge_f(em, p.kappa_minus);
    g.W_gauge = CMatrix{{1.0, -fp * std::exp(p.tau_plus)}, {fm * std::exp(-p.tau_minus), 1.0}};
    g.zeta_bar_plus = zeta_bar(p, Side::plus, ep);
    g.zeta_bar_minus = zeta_bar(p, Side::minus, em);
    g.c_bar_plus = double(ep) / sp * (2.0 * p.kappa_plus * std::exp(-p.tau_plus) + (1.0 + double(ep) * sp) * fm * std::exp(-p.tau_minus));
    g.b_bar_minus = double(em) / sm * (2.0 * p.kappa_minus * std::exp(p.tau_minus) + fp * (1.0 + double(em) * sm) * std::exp(p.tau_plus));

    const cplx dw = det(g.W_gauge);
    if (!g.W_gauge.all_finite() || std::abs(dw) < 1e-10) {
        g.form_residual = std::numeric_limits<double>::infinity();
        return g;
    }
    const CMatrix wi = inverse(g.W_gauge);
    const cplx u(0.37, 0.21);
    const CMatrix km = g.W_gauge * k_raw_rational(u, p.zeta_minus, p.kappa_minus, p.tau_minus) * wi;
    const CMatrix kp = g.W_gauge * k_raw_rational(u, p.zeta_plus, p.kappa_plus, p.tau_plus) * wi;
    const CMatrix em_form = CMatrix::identity(2) + (u / g.zeta_bar_minus) * CMatrix{{1.0, g.b_bar_minus}, {0.0, -1.0}};
    const CMatrix ep_form = CMatrix::identity(2) + (u / g.zeta_bar_plus) * CMatrix{{1.0, 0.0}, {g.c_bar_plus, -1.0}};
    g.form_residual = std::max((km - em_form).max_abs() / em_form.max_abs(), (kp - ep_form).max_abs() / ep_form.max_abs());
    return g;
}

GaugeData gauge_transform(const BoundaryRank1& p) {
    if (boundaries_commute(p)) throw NotApplicable("gauge_transform: K_+ and K_- commute");
    for (int ep : {-1, 1})
        for (int em : {-1, 1}) {
            GaugeData g;
            try {
                g = gauge_transform_branch(p, ep, em);
            } catch (const std::exception&) {
                continue;
            }
            const bool ok = std::isfinite(g.form_residual) && g.form_residual < 1e-8 &&
                            std::abs(g.b_bar_minus) > 1e-12 && std::isfinite(std::abs(g.c_bar_plus));
            if (ok) return g;
        }
    throw NotApplicable("gauge_transform: no admissible branch");
}

ABranch default_branch(const ModelSpec& s) {
    if (s.kind == Kind::rational && s.rank_n == 2 && s.is_rank1() && !boundaries_commute(s.b1())) {
        try {
            const GaugeData g = gauge_transform(s.b1());
            return {g.epsilon_plus, g.epsilon_minus};
        } catch (const NotApplicable&) {
        }
    }
    return {};
}

cplx coeff_A(const ModelSpec& s, cplx l, ABranch br) {
    require_rank1(s, "coeff_A");
    const auto& b = s.b1();
    const cplx e = s.eta;
    if (s.kind == Kind::rational) {
        const cplx zp = zeta_bar(b, Side::plus, br.eps_plus);
        const cplx zm = zeta_bar(b, Side::minus, br.eps_minus);
        return sign_n(s.N) * (2.0 * l + e) / (2.0 * l) * (l - e / 2.0 + zp) * (l - e / 2.0 + zm) / (zp * zm) *
               fn_a(s, l) * fn_d(s, -l);
    }
    return sign_n(s.N) * std::sinh(2.0 * l + e) / std::sinh(2.0 * l) * trig_g(s, l, b.zeta_plus, b.kappa_plus, 1.0) *
           trig_g(s, l, b.zeta_minus, b.kappa_minus, -1.0) * fn_a(s, l) * fn_d(s, -l);
}

cplx coeff_A(const ModelSpec& s, cplx l) { return coeff_A(s, l, default_branch(s)); }

std::vector<std::vector<int>> sov_tuples(int n, int N) {
    std::vector<std::vector<int>> out;
    std::vector<int> h(N, 0);
    while (true) {
        out.push_back(h);
        int i = N - 1;
        while (i >= 0 && h[i] == n - 1) h[i--] = 0;
        if (i < 0) break;
        ++h[i];
    }
    return out;
}

std::vector<cplx> SovBasis::raw_row(std::size_t i) const {
    auto v = covectors.row_vec(i);
    const double f = std::exp(scale_logs[i]);
    for (auto& x : v) x *= f;
    return v;
}

CMatrix SovBasis::raw_matrix() const {
    CMatrix m(covectors.rows(), covectors.cols());
    for (std::size_t i = 0; i < covectors.rows(); ++i) m.set_row(i, raw_row(i));
    return m;
}

std::vector<cplx> default_seed(const ModelSpec& s) {
    std::vector<cplx> site(s.rank_n);
    double w = 1.0;
    for (int k = 0; k < s.rank_n; ++k, w *= 0.6180339887498949) site[k] = w;
    if (s.rank_n > 2 && !s.is_rank1()) {
        const auto& b = s.bn();
        if (b.r_minus == 1 && !b.W_minus.empty()) site = vec_mat(site, inverse(b.W_minus));
    }
    return kron_site(site, s.N);
}

std::vector<cplx> gauge_seed(const ModelSpec& s, const GaugeData& g, bool inverse_w) {
    const CMatrix w = inverse_w ? inverse(g.W_gauge) : g.W_gauge;
    return kron_site(w.row_vec(0), s.N);
}

SovBasis build_left_sov_basis(const ModelSpec& s, const std::vector<cplx>& seed) {
    const std::size_t D = s.hilbert_dim();
    if (seed.size() != D) throw ShapeError("seed covector has wrong length");
    SovBasis b;
    b.model = &s;
    b.seed_covector = seed;
    b.tuples = sov_tuples(s.rank_n, s.N);
    b.covectors = CMatrix(b.tuples.size(), D);
    b.scale_logs.assign(b.tuples.size(), 0.0);

    std::vector<CMatrix> nodes;
    b.normalizers.assign(s.N, 1.0);
    if (s.rank_n == 2) {
        require_rank1(s, "build_left_sov_basis");
        const ABranch br = default_branch(s);
        for (int a = 0; a < s.N; ++a) {
            nodes.push_back(transfer_matrix(s, s.xi_h(a, 1)));
            b.normalizers[a] = coeff_A(s, s.eta / 2.0 - s.xi[a], br);
        }
    } else {
        for (int a = 0; a < s.N; ++a) nodes.push_back(transfer_matrix(s, s.xi[a]));
    }

    for (std::size_t i = 0; i < b.tuples.size(); ++i) {
        std::vector<cplx> v = seed;
        double lg = rescale(v);
        for (int a = 0; a < s.N && std::isfinite(lg); ++a) {
            // rank 2 applies T(xi^(1)) where h_a = 0; higher rank applies T(xi)^h_a
            const int times = s.rank_n == 2 ? 1 - b.tuples[i][a] : b.tuples[i][a];
            for (int t = 0; t < times; ++t) {
                v = vec_mat(v, nodes[a]);
                for (auto& x : v) x /= b.normalizers[a];
                lg += rescale(v);
                if (!std::isfinite(lg)) break;
            }
        }
        if (!std::isfinite(lg)) std::fill(v.begin(), v.end(), cplx(0.0));
        b.covectors.set_row(i, v);
        b.scale_logs[i] = lg;
    }
    return b;
}

RankCheck basis_rank_check(const SovBasis& b, double threshold) {
    RankCheck r;
    r.threshold = threshold;
    r.log_abs_det = log_abs_det(b.covectors);
    r.abs_det = std::exp(r.log_abs_det);
    double s = 0.0;
    for (double x : b.scale_logs) s += x;
    r.log_abs_det_raw = r.log_abs_det + s;
    r.full_rank = std::isfinite(r.log_abs_det) && r.abs_det > threshold;
    return r;
}

namespace {

cplx a_minus_diag(const ModelSpec& s, const GaugeData& g, cplx l) {
    return sign_n(s.N) * (g.zeta_bar_minus + l - s.eta / 2.0) / g.zeta_bar_minus * fn_a(s, l) * fn_d(s, -l);
}

CMatrix kbar_minus(const ModelSpec& s, const GaugeData& g, cplx l) {
    const cplx u = l - s.eta / 2.0;
    return CMatrix::identity(2) + (u / g.zeta_bar_minus) * CMatrix{{1.0, g.b_bar_minus}, {0.0, -1.0}};
}

cplx b_eigenvalue(const ModelSpec& s, const GaugeData& g, const std::vector<int>& h, cplx l) {
    cplx v = sign_n(s.N) * g.b_bar_minus * (l - s.eta / 2.0) / g.zeta_bar_minus;
    for (int a = 0; a < s.N; ++a) {
        const cplx x = s.xi_h(a, h[a]);
        v *= (l - x) * (-l - x);
    }
    return v;
}

}  // namespace

SklyaninBasis build_sklyanin_basis(const ModelSpec& s, const GaugeData& g, unsigned long long seed) {
    require_rank1(s, "build_sklyanin_basis");
    if (s.kind != Kind::rational) throw NotApplicable("Sklyanin basis: rational models only");
    const std::size_t D = s.hilbert_dim();
    const CMatrix wN = kron_power(g.W_gauge, s.N);

    std::vector<CMatrix> abar_nodes, abar_zero;
    std::vector<cplx> norms;
    for (int a = 0; a < s.N; ++a) {
        const cplx x = s.eta / 2.0 - s.xi[a];
        abar_nodes.push_back(aux_block(boundary_monodromy_k(s, x, kbar_minus(s, g, x)), 2, 0, 0));
        norms.push_back(a_minus_diag(s, g, x));
        const cplx z = s.xi[a] - s.eta / 2.0;
        abar_zero.push_back(aux_block(boundary_monodromy_k(s, z, kbar_minus(s, g, z)), 2, 0, 0));
    }

    SklyaninBasis out;
    std::vector<cplx> up(D, 0.0);
    up[0] = 1.0;
    for (int a = 0; a < s.N; ++a)
        out.zero_condition = std::max(out.zero_condition, norm2(vec_mat(up, abar_zero[a])) / abar_zero[a].frobenius());

    SovBasis& b = out.basis;
    b.model = &s;
    b.seed_covector = vec_mat(up, wN);
    b.tuples = sov_tuples(2, s.N);
    b.covectors = CMatrix(b.tuples.size(), D);
    b.scale_logs.assign(b.tuples.size(), 0.0);
    b.normalizers = norms;

    PointSampler ps(seed);
    std::vector<cplx> probes{ps.next(), ps.next(), ps.next()};
    std::vector<CMatrix> bbar;
    for (cplx l : probes) bbar.push_back(aux_block(boundary_monodromy_k(s, l, kbar_minus(s, g, l)), 2, 0, 1));

    for (std::size_t i = 0; i < b.tuples.size(); ++i) {
        const auto& h = b.tuples[i];
        std::vector<cplx> v = up;
        double lg = 0.0;
        for (int a = 0; a < s.N; ++a) {
            if (h[a] != 0) continue;
            v = vec_mat(v, abar_nodes[a]);
            for (auto& x : v) x /= norms[a];
            lg += rescale(v);
        }
        // eigen-tests in the gauged frame
        for (std::size_t k = 0; k < probes.size(); ++k) {
            const cplx ev = b_eigenvalue(s, g, h, probes[k]);
            auto r = vec_mat(v, bbar[k]);
            for (std::size_t j = 0; j < D; ++j) r[j] -= ev * v[j];
            out.b_eigen_residual = std::max(out.b_eigen_residual, norm2(r) / (norm2(v) * std::abs(ev)));
        }
        for (int a = 0; a < s.N; ++a) {
            const cplx z = s.xi_h(a, h[a]);
            const CMatrix bz = aux_block(boundary_monodromy_k(s, z, kbar_minus(s, g, z)), 2, 0, 1);
            out.b_eigen_zero = std::max(out.b_eigen_zero, norm2(vec_mat(v, bz)) / (norm2(v) * bz.frobenius()));
        }
        v = vec_mat(v, wN);
        lg += rescale(v);
        b.covectors.set_row(i, v);
        b.scale_logs[i] = lg;
    }
    return out;
}

SklyaninCompare compare_sklyanin_vs_new(const ModelSpec& s, const GaugeData& g) {
    const SklyaninBasis sk = build_sklyanin_basis(s, g);
    const SovBasis nb = build_left_sov_basis(s, gauge_seed(s, g));
    SklyaninCompare c;
    for (std::size_t i = 0; i < nb.tuples.size(); ++i) {
        const auto u = sk.basis.raw_row(i);
        const auto v = nb.raw_row(i);
        const double ang = line_angle(u, v);
        c.angles.push_back(ang);
        c.max_angle = std::max(c.max_angle, ang);
        std::size_t j = 0;
        for (std::size_t k = 1; k < v.size(); ++k)
            if (std::abs(v[k]) > std::abs(v[j])) j = k;
        c.constants.push_back(u[j] / v[j]);
    }
    return c;
}

cplx vhat_nodes(const ModelSpec& s, const std::vector<int>& h) {
    std::vector<cplx> x;
    for (int a = 0; a < s.N; ++a) x.push_back(s.xi_h(a, h[a]));
    if (s.kind == Kind::rational) return vandermonde_sq(x);
    cplx v = 1.0;
    for (std::size_t k = 0; k < x.size(); ++k)
        for (std::size_t j = k + 1; j < x.size(); ++j) v *= std::cosh(2.0 * x[k]) - std::cosh(2.0 * x[j]);
    return v;
}

cplx right_k_factor(const ModelSpec& s, int a) {
    const cplx x = s.xi[a], e = s.eta;
    if (s.kind == Kind::rational) return (x + e) / (x - e);
    return std::sinh(2.0 * x + 2.0 * e) / std::sinh(2.0 * x - 2.0 * e);
}

RightSovBasis build_right_sov_basis(const ModelSpec& s, const SovBasis& left, cplx N_S) {
    require_rank1(s, "build_right_sov_basis");
    const std::size_t D = s.hilbert_dim();
    const ABranch br = default_branch(s);
    RightSovBasis r;
    r.model = &s;
    r.N_S = N_S;

    // <h|S> = delta_{h,0} / (N_S Vhat(xi^(0))) against the unscaled rows
    std::vector<cplx> rhs(D, 0.0);
    rhs[0] = 1.0 / (N_S * vhat_nodes(s, std::vector<int>(s.N, 0))) * std::exp(-left.scale_logs[0]);
    r.seed_vector = solve_linear(left.covectors, rhs);

    std::vector<CMatrix> t0, t1;
    std::vector<cplx> a0, a1;
    for (int a = 0; a < s.N; ++a) {
        const cplx k = right_k_factor(s, a);
        r.k_factors.push_back(k);
        t0.push_back(transfer_matrix(s, s.xi_h(a, 0)));
        t1.push_back(transfer_matrix(s, s.xi_h(a, 1)));
        a0.push_back(k * coeff_A(s, s.eta / 2.0 - s.xi[a], br));
        a1.push_back(coeff_A(s, s.xi_h(a, 0), br) / k);
    }

    const auto tuples = sov_tuples(2, s.N);
    r.vectors = CMatrix(D, tuples.size());
    for (std::size_t i = 0; i < tuples.size(); ++i) {
        std::vector<cplx> v = r.seed_vector;
        for (int a = 0; a < s.N; ++a) {
            if (tuples[i][a] == 0) continue;
            v = t0[a] * v;
            for (auto& x : v) x /= a0[a];
        }
        r.vectors.set_col(i, v);
    }

    // second construction: down from |1..1> with T(xi^(1))
    const std::vector<cplx> top = r.vectors.col_vec(tuples.size() - 1);
    for (std::size_t i = 0; i < tuples.size(); ++i) {
        std::vector<cplx> v = top;
        for (int a = 0; a < s.N; ++a) {
            if (tuples[i][a] == 1) continue;
            v = t1[a] * v;
            for (auto& x : v) x /= a1[a];
        }
        const auto ref = r.vectors.col_vec(i);
        std::vector<cplx> d(D);
        for (std::size_t j = 0; j < D; ++j) d[j] = v[j] - ref[j];
        r.construction_mismatch = std::max(r.construction_mismatch, norm2(d) / norm2(ref));
    }
    return r;
}

}  // namespace sov
