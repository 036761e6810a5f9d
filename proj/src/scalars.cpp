#include "sov/scalars.hpp"

#include <cmath>
#include <limits>

namespace sov {

namespace {

double sign_n(int N) { return (N % 2) ? -1.0 : 1.0; }

void require_rational_gl2(const ModelSpec& s, const char* what) {
    if (s.rank_n != 2 || !s.is_rank1() || s.kind != Kind::rational)
        throw NotApplicable(std::string(what) + ": rational gl2 only");
}

// separate states and their SoV sum also run for the trigonometric kind (experimental)
void require_gl2(const ModelSpec& s, const char* what) {
    if (s.rank_n != 2 || !s.is_rank1()) throw NotApplicable(std::string(what) + ": gl2 only");
}

// v(x) - v(r) in the variable the Q polynomial lives in
cplx node_factor(const ModelSpec& s, cplx x, cplx r) {
    if (s.kind == Kind::rational) return x * x - r * r;
    return std::cosh(2.0 * x) - std::cosh(2.0 * r);
}

double rel(cplx a, cplx b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), std::numeric_limits<double>::min()});
}

cplx b_h(const ModelSpec& s, const std::vector<int>& h, cplx l) {
    cplx v = 1.0;
    for (int a = 0; a < s.N; ++a) v *= l * l - s.xi_h(a, h[a]) * s.xi_h(a, h[a]);
    return v;
}

// A(xi^(0)) / (k A(-xi^(1))), k the right-basis factor
std::vector<cplx> right_ratios(const ModelSpec& s) {
    const ABranch br = default_branch(s);
    std::vector<cplx> out;
    for (int a = 0; a < s.N; ++a)
        out.push_back(coeff_A(s, s.xi_h(a, 0), br) / (right_k_factor(s, a) * coeff_A(s, -s.xi_h(a, 1), br)));
    return out;
}

double relative_gap(const std::vector<cplx>& ev) {
    double gap = std::numeric_limits<double>::infinity(), rad = 0.0;
    for (std::size_t i = 0; i < ev.size(); ++i) {
        rad = std::max(rad, std::abs(ev[i]));
        for (std::size_t j = i + 1; j < ev.size(); ++j) gap = std::min(gap, std::abs(ev[i] - ev[j]));
    }
    return gap / std::max(rad, std::numeric_limits<double>::min());
}

CMatrix rank1_mcal(cplx kappa, cplx tau) {
    return CMatrix{{1.0, 2.0 * kappa * std::exp(tau)}, {2.0 * kappa * std::exp(-tau), -1.0}};
}

}  // namespace

MeasureFactors measure_factors(const ModelSpec& s, cplx N_S) {
    require_rational_gl2(s, "measure_factors");
    const ABranch br = default_branch(s);
    const auto& b = s.b1();
    const cplx zp = zeta_bar(b, Side::plus, br.eps_plus), zm = zeta_bar(b, Side::minus, br.eps_minus);
    const cplx e = s.eta;
    MeasureFactors m;
    m.N_S = N_S;
    const auto ratios = right_ratios(s);
    for (int n = 0; n < s.N; ++n) {
        const cplx x = s.xi[n];
        m.g.push_back((x + zp) * (x + zm) / ((x - zp) * (x - zm)));
        cplx f1 = -1.0, f2 = -1.0;
        const cplx x0 = s.xi_h(n, 0), x1 = s.xi_h(n, 1);
        for (int a = 0; a < s.N; ++a) {
            if (a == n) continue;
            const cplx y = s.xi[a], y0 = s.xi_h(a, 0), y1 = s.xi_h(a, 1);
            f1 *= (x - y + e) * (x + y + e) / ((x - y - e) * (x + y - e));
            f2 *= (x0 * x0 - y1 * y1) * (x0 * x0 - y0 * y0) / ((x1 * x1 - y1 * y1) * (x1 * x1 - y0 * y0));
        }
        m.f.push_back(f1);
        m.f_squared_form.push_back(f2);
        m.k.push_back((x + e) / (x - e));
        m.f_forms_diff = std::max(m.f_forms_diff, rel(f1, f2));
        m.gf_vs_ratio = std::max(m.gf_vs_ratio, rel(m.g.back() * f1, ratios[n]));
    }
    return m;
}

cplx special_normalization(const ModelSpec& s) {
    require_rational_gl2(s, "special_normalization");
    const ABranch br = default_branch(s);
    const cplx zm = zeta_bar(s.b1(), Side::minus, br.eps_minus);
    cplx v = vandermonde_sq(s.xi) * vhat_nodes(s, std::vector<int>(s.N, 0)) / vhat_nodes(s, std::vector<int>(s.N, 1));
    for (const cplx x : s.xi) v *= x / (x - zm);
    return v;
}

std::vector<std::array<cplx, 2>> node_values_from_roots(const ModelSpec& s, const std::vector<cplx>& roots) {
    std::vector<std::array<cplx, 2>> out(s.N);
    for (int a = 0; a < s.N; ++a)
        for (int h = 0; h < 2; ++h) {
            const cplx x = s.xi_h(a, h);
            cplx v = 1.0;
            for (const cplx r : roots) v *= node_factor(s, x, r);
            out[a][h] = v;
        }
    return out;
}

std::vector<std::array<cplx, 2>> node_values_from_poly(const ModelSpec& s, const QPolynomial& q) {
    std::vector<std::array<cplx, 2>> out(s.N);
    for (int a = 0; a < s.N; ++a)
        for (int h = 0; h < 2; ++h) out[a][h] = q(s.xi_h(a, h), s.eta);
    return out;
}

SeparateState make_left_state(const ModelSpec& s, const SovBasis& left, const std::vector<std::array<cplx, 2>>& values) {
    require_gl2(s, "make_left_state");
    SeparateState st;
    st.side = StateSide::left;
    st.values = values;
    st.vector.assign(s.hilbert_dim(), 0.0);
    for (std::size_t i = 0; i < left.tuples.size(); ++i) {
        const auto& h = left.tuples[i];
        cplx c = vhat_nodes(s, h);
        for (int a = 0; a < s.N; ++a) c *= values[a][h[a]];
        st.coordinates.push_back(c);
        const auto row = left.raw_row(i);
        for (std::size_t j = 0; j < row.size(); ++j) st.vector[j] += c * row[j];
    }
    return st;
}

SeparateState make_right_state(const ModelSpec& s, const RightSovBasis& right,
                               const std::vector<std::array<cplx, 2>>& values) {
    require_gl2(s, "make_right_state");
    const auto ratios = right_ratios(s);
    const auto tuples = sov_tuples(2, s.N);
    SeparateState st;
    st.side = StateSide::right;
    st.values = values;
    st.vector.assign(s.hilbert_dim(), 0.0);
    for (std::size_t i = 0; i < tuples.size(); ++i) {
        const auto& h = tuples[i];
        cplx c = vhat_nodes(s, h);
        for (int a = 0; a < s.N; ++a) c *= values[a][h[a]] * (h[a] ? ratios[a] : cplx(1.0));
        st.coordinates.push_back(c);
        const auto col = right.vectors.col_vec(i);
        for (std::size_t j = 0; j < col.size(); ++j) st.vector[j] += c * col[j];
    }
    return st;
}

SeparateState make_left_eigenstate(const ModelSpec& s, const SovBasis& left,
                                   const std::vector<std::array<cplx, 2>>& values) {
    require_gl2(s, "make_left_eigenstate");
    const auto ratios = right_ratios(s);
    SeparateState st;
    st.side = StateSide::left;
    st.values = values;
    st.vector.assign(s.hilbert_dim(), 0.0);
    for (std::size_t i = 0; i < left.tuples.size(); ++i) {
        const auto& h = left.tuples[i];
        cplx c = vhat_nodes(s, h);
        for (int a = 0; a < s.N; ++a) c *= values[a][h[a]] * (h[a] ? ratios[a] : cplx(1.0));
        st.coordinates.push_back(c);
        const auto row = left.raw_row(i);
        for (std::size_t j = 0; j < row.size(); ++j) st.vector[j] += c * row[j];
    }
    return st;
}

SeparateState make_right_eigenstate(const ModelSpec& s, const RightSovBasis& right,
                                    const std::vector<std::array<cplx, 2>>& values) {
    require_gl2(s, "make_right_eigenstate");
    const auto tuples = sov_tuples(2, s.N);
    SeparateState st;
    st.side = StateSide::right;
    st.values = values;
    st.vector.assign(s.hilbert_dim(), 0.0);
    for (std::size_t i = 0; i < tuples.size(); ++i) {
        cplx c = vhat_nodes(s, tuples[i]);
        for (int a = 0; a < s.N; ++a) c *= values[a][tuples[i][a]];
        st.coordinates.push_back(c);
        const auto col = right.vectors.col_vec(i);
        for (std::size_t j = 0; j < col.size(); ++j) st.vector[j] += c * col[j];
    }
    return st;
}

ScalarProduct scalar_product_sov(const ModelSpec& s, const SeparateState& left, const SeparateState& right, cplx N_S) {
    require_gl2(s, "scalar_product_sov");
    if (left.side != StateSide::left || right.side != StateSide::right)
        throw ShapeError("scalar_product_sov: expects a left and a right state");
    // rational: the g f measure form; trigonometric: the plain ratio
    std::vector<cplx> w;
    if (s.kind == Kind::rational) {
        const MeasureFactors m = measure_factors(s, N_S);
        for (int a = 0; a < s.N; ++a) w.push_back(m.g[a] * m.f[a]);
    } else {
        w = right_ratios(s);
    }
    ScalarProduct sp;
    for (const auto& h : sov_tuples(2, s.N)) {
        cplx v = vhat_nodes(s, h) / N_S;
        for (int a = 0; a < s.N; ++a)
            v *= left.values[a][h[a]] * right.values[a][h[a]] * (h[a] ? w[a] : cplx(1.0));
        sp.sov += v;
    }
    sp.direct = dot(left.vector, right.vector);
    sp.rel_diff = rel(sp.sov, sp.direct);
    double mag = 0.0;
    for (std::size_t i = 0; i < left.vector.size(); ++i) mag += std::abs(left.vector[i] * right.vector[i]);
    sp.cancellation = mag / std::max(std::abs(sp.direct), std::numeric_limits<double>::min());
    sp.scaled_diff = std::abs(sp.sov - sp.direct) / std::max(mag, std::numeric_limits<double>::min());
    return sp;
}

double measure_rewrite_residual(const ModelSpec& s, const std::vector<std::array<cplx, 2>>& alpha,
                                const std::vector<std::array<cplx, 2>>& beta) {
    require_rational_gl2(s, "measure_rewrite_residual");
    const cplx ns = special_normalization(s);
    const MeasureFactors m = measure_factors(s, ns);
    const ABranch br = default_branch(s);
    const cplx zm = zeta_bar(s.b1(), Side::minus, br.eps_minus);
    const cplx v0 = vandermonde_sq(s.xi);
    cplx sum1 = 0.0, sum2 = 0.0;
    for (const auto& h : sov_tuples(2, s.N)) {
        std::vector<int> hc(h.size());
        for (std::size_t a = 0; a < h.size(); ++a) hc[a] = 1 - h[a];
        cplx p1 = vhat_nodes(s, h) / ns, p2 = vhat_nodes(s, hc) / v0;
        for (int a = 0; a < s.N; ++a) {
            const cplx ab = alpha[a][h[a]] * beta[a][h[a]];
            p1 *= ab * (h[a] ? m.g[a] * m.f[a] : cplx(1.0));
            p2 *= ab * (h[a] ? -m.g[a] : cplx(1.0));
        }
        sum1 += p1;
        sum2 += p2;
    }
    for (const cplx x : s.xi) sum2 *= (x - zm) / x;
    return rel(sum1, sum2);
}

CMatrix b_operator(const ModelSpec& s, const SovBasis& left, const RightSovBasis& right, cplx l) {
    require_rational_gl2(s, "b_operator");
    const std::size_t D = s.hilbert_dim();
    CMatrix out(D, D);
    for (std::size_t i = 0; i < left.tuples.size(); ++i) {
        const auto& h = left.tuples[i];
        const cplx w = right.N_S * b_h(s, h, l) * vhat_nodes(s, h);
        const auto row = left.raw_row(i);
        const auto col = right.vectors.col_vec(i);
        for (std::size_t p = 0; p < D; ++p)
            for (std::size_t q = 0; q < D; ++q) out(p, q) += w * col[p] * row[q];
    }
    return out;
}

BHatCheck b_hat_check(const ModelSpec& s, unsigned long long seed) {
    require_rational_gl2(s, "b_hat_check");
    const GaugeData g = gauge_transform(s.b1());
    const SovBasis left = build_left_sov_basis(s, gauge_seed(s, g));
    if (!basis_rank_check(left).full_rank) throw DependencyError("b_hat_check: SoV basis not full rank");
    const RightSovBasis right = build_right_sov_basis(s, left);
    const CMatrix wN = kron_power(g.W_gauge, s.N), wNi = inverse(wN);
    const cplx e = s.eta;

    BHatCheck out;
    PointSampler ps(seed);
    std::vector<CMatrix> fam;
    for (int k = 0; k < 3; ++k) {
        const cplx l = ps.next();
        const cplx u = l - e / 2.0;
        const CMatrix kb = CMatrix::identity(2) + (u / g.zeta_bar_minus) * CMatrix{{1.0, g.b_bar_minus}, {0.0, -1.0}};
        const CMatrix bhat = wNi * aux_block(boundary_monodromy_k(s, l, kb), 2, 0, 1) * wN;
        const CMatrix bb = b_operator(s, left, right, l);
        fam.push_back(bb);
        const CMatrix scaled = bb * (g.b_bar_minus * u / g.zeta_bar_minus);
        out.proportionality = std::max(out.proportionality, rel_diff(bhat, scaled));
        out.signed_variant = std::max(out.signed_variant, rel_diff(bhat, scaled * sign_n(s.N)));
    }
    out.commutator = commutator(fam[0], fam[1]).max_abs() / (fam[0].max_abs() * fam[1].max_abs());
    const auto tuples = sov_tuples(2, s.N);
    for (std::size_t i = 0; i < tuples.size(); ++i) {
        const auto col = right.vectors.col_vec(i);
        for (int a = 0; a < s.N; ++a) {
            const CMatrix bz = b_operator(s, left, right, s.xi_h(a, tuples[i][a]));
            out.annihilation = std::max(out.annihilation, norm2(bz * col) / (bz.max_abs() * norm2(col)));
        }
    }
    return out;
}

double aba_form_check(const ModelSpec& s, const SovBasis& left, const RightSovBasis& right,
                      const std::vector<cplx>& alpha_roots) {
    require_rational_gl2(s, "aba_form_check");
    const std::vector<std::array<cplx, 2>> ones(s.N, {cplx(1.0), cplx(1.0)});
    const SeparateState one = make_left_state(s, left, ones);
    const SeparateState direct = make_left_state(s, left, node_values_from_roots(s, alpha_roots));
    std::vector<cplx> v = one.vector;
    for (const cplx r : alpha_roots) v = vec_mat(v, b_operator(s, left, right, r));
    const double sgn = (alpha_roots.size() * s.N) % 2 ? -1.0 : 1.0;
    double diff = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) diff = std::max(diff, std::abs(sgn * v[j] - direct.vector[j]));
    return diff / std::max(max_abs(direct.vector), std::numeric_limits<double>::min());
}

SimplicityReport simplicity_check(const ModelSpec& s, unsigned long long seed) {
    SimplicityReport rep;
    PointSampler ps(seed);
    const double tol = 1e-8;
    if (s.is_rank1()) {
        const auto& b = s.b1();
        if (s.kind == Kind::rational) {
            if (boundaries_commute(b)) {
                rep.criterion = "commuting, 1 + 4 kappa^2 != 0";
                const double v = std::abs(1.0 + 4.0 * b.kappa_minus * b.kappa_minus);
                rep.detail["abs_1_plus_4kappa2"] = v;
                rep.predicted_simple = v > tol;
            } else {
                rep.criterion = "non-commuting, M- M+ simple";
                const CMatrix mm = rank1_mcal(b.kappa_minus, b.tau_minus) * rank1_mcal(b.kappa_plus, b.tau_plus);
                const double gap = relative_gap(eigenvalues(mm));
                rep.detail["mm_relative_gap"] = gap;
                // a double root only resolves to sqrt(eps) in the eigenvalues; the discriminant is linear
                const cplx tr = mm.trace(), dt = det(mm);
                const double disc = std::abs(tr * tr - 4.0 * dt) / std::max(std::norm(tr), 4.0 * std::abs(dt));
                rep.detail["mm_discriminant"] = disc;
                rep.predicted_simple = disc > 1e-12;
            }
        } else {
            rep.criterion = "K+ K- simple at a probe";
            const cplx l = ps.next();
            const double gap = relative_gap(eigenvalues(k_matrix(s, Side::plus, l) * k_matrix(s, Side::minus, l)));
            rep.detail["kk_relative_gap"] = gap;
            rep.predicted_simple = gap > tol;
        }
    } else {
        const CMatrix mm_ = mcal_minus(s), mp = mcal_plus(s);
        const CMatrix mm = mm_ * mp;
        const std::vector<cplx> ev = eigenvalues(mm);
        const double comm = commutator(mm_, mp).max_abs();
        rep.detail["commutator"] = comm;
        const double gap = relative_gap(ev);
        rep.detail["mm_relative_gap"] = gap;
        // det M- det M+ = prod of eigenvalues; trace of powers symmetric under inversion
        cplx prod = 1.0;
        for (const cplx t : ev) prod *= t;
        rep.detail["det_constraint"] = std::abs(prod - det(mm_) * det(mp));
        double inv_sym = 0.0;
        for (int r = 1; r <= 3; ++r) {
            cplx d = 0.0;
            for (const cplx t : ev) d += std::pow(t, r) - std::pow(t, -r);
            inv_sym = std::max(inv_sym, std::abs(d));
        }
        rep.detail["inverse_symmetry"] = inv_sym;
        double best = 0.0;
        for (int k = 0; k < 4; ++k) {
            const cplx am = ps.next(), ap = ps.next();
            const CMatrix id = CMatrix::identity(s.rank_n);
            best = std::max(best, relative_gap(eigenvalues((id * am + mm_) * (id * ap + mp))));
        }
        rep.detail["shifted_product_gap"] = best;
        const cplx l = ps.next();
        rep.detail["kk_relative_gap"] = relative_gap(eigenvalues(k_matrix(s, Side::plus, l) * k_matrix(s, Side::minus, l)));
        rep.criterion = "non-commuting, M- M+ simple";
        rep.predicted_simple = comm > tol && gap > tol;
    }
    // probe combination of transfer matrices, any rank
    const CMatrix probe = transfer_matrix(s, ps.next()) + ps.next() * transfer_matrix(s, ps.next());
    const EigenData ed = eig_general(probe);
    rep.oracle_simple = ed.simple();
    rep.oracle_gap = ed.min_gap / std::max(ed.spectral_radius, std::numeric_limits<double>::min());
    double pair = 0.0;
    for (double r : ed.residuals) pair = std::max(pair, r);
    rep.diagonalizable = ed.simple() && ed.biorthogonal && pair < 1e-8;
    rep.min_norm_cosine = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < ed.values.size(); ++k) {
        const auto l = ed.left_vectors.row_vec(k), r = ed.right_vectors.col_vec(k);
        rep.min_norm_cosine = std::min(rep.min_norm_cosine, std::abs(dot(l, r)) / (norm2(l) * norm2(r)));
    }
    return rep;
}

}  // namespace sov
