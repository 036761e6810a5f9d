#include "sov/qcurve.hpp"

#include <cmath>
#include <limits>

namespace sov {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool is_gl3(const ModelSpec& s) { return s.rank_n == 3 && !s.is_rank1(); }
bool is_gl2(const ModelSpec& s) { return s.rank_n == 2 && s.is_rank1(); }

cplx horner(const std::vector<cplx>& c, cplx v) {
    cplx acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * v + *it;
    return acc;
}

cplx ipow(cplx v, int k) {
    cplx r = 1.0;
    for (int i = 0; i < k; ++i) r *= v;
    return r;
}

std::vector<cplx> poly_roots(const std::vector<cplx>& c) {
    const int d = int(c.size()) - 1;
    if (d <= 0) return {};
    if (d == 1) return {-c[0] / c[1]};
    CMatrix comp(d, d);
    for (int i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < d; ++i) comp(i, d - 1) = -c[i] / c[d];
    return eigenvalues(comp);
}


std::vector<cplx> sample_points(const ModelSpec& s, int count, unsigned long long seed, double radius_scale) {
    std::vector<cplx> avoid{0.0, s.eta / 2.0, -s.eta / 2.0};
    if (s.kind == Kind::trigonometric) {
        const cplx ih(0.0, kPi / 2.0);
        avoid.push_back(ih);
        avoid.push_back(-ih);
    }
    for (const cplx x : s.xi)
        for (int k = -3; k <= 3; ++k) {
            avoid.push_back(x + double(k) * s.eta / 2.0);
            avoid.push_back(-x + double(k) * s.eta / 2.0);
        }
    PointSampler ps(seed);
    std::vector<cplx> out;
    while (int(out.size()) < count) out.push_back(radius_scale * ps.next_avoiding(avoid, 1e-2));
    return out;
}

ABranch side_branch(const ModelSpec& s, QSide side) {
    ABranch br = default_branch(s);
    if (side == QSide::P) {
        br.eps_plus = -br.eps_plus;
        br.eps_minus = -br.eps_minus;
    }
    return br;
}

// gl3 helpers
cplx gl3_a(const ModelSpec& s, cplx l) { return fn_dn(s, l + s.eta); }

cplx gl3_gamma0(const ModelSpec& s, cplx l) {
    const auto& b = s.bn();
    return (s.eta / 2.0 + b.zeta_plus - l) * (b.zeta_minus + l) * gl3_a(s, l);
}

cplx gl3_rr(const ModelSpec& s, cplx x) { return fn_r3(s, 2.0 * x - s.eta) * fn_r3(s, 2.0 * x - 2.0 * s.eta); }

void require_gl3_curve(const ModelSpec& s) {
    if (!is_gl3(s)) throw NotApplicable("gl3 spectral curve: rank-3 models only");
    const auto& b = s.bn();
    if (b.r_plus != 1 || b.r_minus != 1 || b.p_minus != 2 || b.p_plus != 1)
        throw NotApplicable("gl3 spectral curve: needs r = 1 on both sides, p_- = 2, p_+ = 1");
}

}  // namespace

void fill_roots(QPolynomial& q, const std::vector<cplx>& node_values) {
    q.roots = poly_roots(q.coeffs);
    q.min_node_distance = std::numeric_limits<double>::infinity();
    for (const cplx r : q.roots)
        for (const cplx v : node_values)
            q.min_node_distance = std::min(q.min_node_distance, std::abs(r - v) / std::max(1.0, std::abs(v)));
    // multiple roots are reported, never rejected
    q.min_root_separation = std::numeric_limits<double>::infinity();
    q.max_multiplicity = q.roots.empty() ? 0 : 1;
    for (std::size_t i = 0; i < q.roots.size(); ++i) {
        int m = 1;
        for (std::size_t j = 0; j < q.roots.size(); ++j) {
            if (i == j) continue;
            const double d = std::abs(q.roots[i] - q.roots[j]) / std::max(1.0, std::abs(q.roots[i]));
            q.min_root_separation = std::min(q.min_root_separation, d);
            if (d < 1e-6) ++m;
        }
        q.max_multiplicity = std::max(q.max_multiplicity, m);
    }
}

cplx QPolynomial::variable_at(QVariable v, cplx l, cplx eta) {
    switch (v) {
        case QVariable::lambda_squared: return l * l;
        case QVariable::cosh_2lambda: return std::cosh(2.0 * l);
        case QVariable::gl3_pair_form: return l * (l + eta);
    }
    return l;
}

cplx QPolynomial::operator()(cplx l, cplx eta) const { return horner(coeffs, variable_at(variable, l, eta)); }

cplx trig_F0(const ModelSpec& s) {
    const auto& b = s.b1();
    const bool zp = std::abs(b.kappa_plus) == 0.0, zm = std::abs(b.kappa_minus) == 0.0;
    if (zp && zm) return 0.0;
    const cplx den = std::pow(2.0, s.N - 1) * std::sinh(b.zeta_plus) * std::sinh(b.zeta_minus);
    cplx ap, bp, am, bm;
    // one kappa -> 0: beta on that side ~ -log kappa, kappa cosh(arg) keeps a finite limit
    if (zp) {
        trig_alpha_beta(b.zeta_minus, b.kappa_minus, am, bm);
        const cplx x = b.zeta_plus + am + bm - double(s.N + 1) * s.eta;
        return -b.kappa_minus * std::exp(-x) / 2.0 / den;
    }
    if (zm) {
        trig_alpha_beta(b.zeta_plus, b.kappa_plus, ap, bp);
        const cplx y = ap + b.zeta_minus - bp - double(s.N + 1) * s.eta;
        return -b.kappa_plus * std::exp(y) / 2.0 / den;
    }
    trig_alpha_beta(b.zeta_plus, b.kappa_plus, ap, bp);
    trig_alpha_beta(b.zeta_minus, b.kappa_minus, am, bm);
    const cplx arg = ap + am - bp + bm - double(s.N + 1) * s.eta;
    return b.kappa_plus * b.kappa_minus * (std::cosh(b.tau_plus - b.tau_minus) - std::cosh(arg)) / den;
}

cplx inhom_term(const ModelSpec& s, cplx l) {
    const cplx e = s.eta;
    if (is_gl2(s)) {
        if (s.kind == Kind::rational) {
            const ABranch br = default_branch(s);
            const auto& b = s.b1();
            const cplx zp = zeta_bar(b, Side::plus, br.eps_plus), zm = zeta_bar(b, Side::minus, br.eps_minus);
            cplx v = bc_product(s, br) / (zp * zm) * (l * l - e * e / 4.0);
            for (int a = 0; a < s.N; ++a)
                for (int h = 0; h < 2; ++h) v *= l * l - s.xi_h(a, h) * s.xi_h(a, h);
            return v;
        }
        const cplx c = std::cosh(2.0 * l), ce = std::cosh(e);
        cplx v = trig_F0(s) * (c * c - ce * ce);
        for (int a = 0; a < s.N; ++a)
            for (int h = 0; h < 2; ++h) v *= c - std::cosh(2.0 * s.xi_h(a, h));
        return v;
    }
    require_gl3_curve(s);
    return gl3_curve_coefficients(s, l).f;
}

bool inhom_vanishes(const ModelSpec& s, double tol) {
    if (is_gl2(s)) {
        if (s.kind == Kind::rational) {
            const ABranch br = default_branch(s);
            const auto& b = s.b1();
            const cplx zp = zeta_bar(b, Side::plus, br.eps_plus), zm = zeta_bar(b, Side::minus, br.eps_minus);
            return std::abs(bc_product(s, br) / (zp * zm)) < tol * std::max(1.0, std::abs(t_asymptotic(s)));
        }
        return std::abs(trig_F0(s)) < tol;
    }
    require_gl3_curve(s);
    return std::abs(1.0 - gl3_cos_alpha(s)) < tol;
}

QSolveResult solve_q_given_t(const ModelSpec& s, const CentralData& c, const TransferEigenvalue& t, QSide side,
                             unsigned long long seed) {
    if (!is_gl2(s)) throw NotApplicable("solve_q_given_t: gl2 models only");
    if (s.kind == Kind::trigonometric && side == QSide::P)
        throw NotApplicable("solve_q_given_t: the dual equation is set up for the rational kind only");
    const QVariable var = s.kind == Kind::rational ? QVariable::lambda_squared : QVariable::cosh_2lambda;
    const ABranch br = side_branch(s, side);
    const cplx e = s.eta;
    const bool homogeneous = inhom_vanishes(s);

    auto vv = [&](cplx l) { return QPolynomial::variable_at(var, l, e); };
    std::vector<cplx> node_values;
    for (int a = 0; a < s.N; ++a)
        for (int h = 0; h < 2; ++h) node_values.push_back(vv(s.xi_h(a, h)));

    struct PointData {
        cplx t, ap, am, v0, vm, vp, f;
    };
    auto point_data = [&](cplx l) {
        return PointData{eval_t(s, c, t, l), coeff_A(s, l, br), coeff_A(s, -l, br), vv(l), vv(l - e), vv(l + e),
                         homogeneous ? cplx(0.0) : inhom_term(s, l)};
    };
    const std::vector<cplx> grid = sample_points(s, 32, seed + 7919, 1.15);
    std::vector<PointData> grid_data;
    for (const cplx l : grid) grid_data.push_back(point_data(l));

    auto grid_residual = [&](const std::vector<cplx>& q) {
        double worst = 0.0;
        for (const PointData& p : grid_data) {
            const cplx t0 = p.t * horner(q, p.v0), t1 = p.ap * horner(q, p.vm), t2 = p.am * horner(q, p.vp);
            const double scale = std::abs(t0) + std::abs(t1) + std::abs(t2) + std::abs(p.f);
            worst = std::max(worst, std::abs(t0 - t1 - t2 - p.f) / std::max(scale, 1e-300));
        }
        return worst;
    };

    QSolveResult res;
    res.residual = std::numeric_limits<double>::infinity();
    const int lo = homogeneous ? 0 : s.N;
    for (int deg = lo; deg <= s.N; ++deg) {
        const std::vector<cplx> pts = sample_points(s, 2 * (deg + 2), seed + 31 * deg, 1.0);
        // monic unknowns q_0..q_{deg-1} when homogeneous, all of q_0..q_deg otherwise
        const int unknowns = homogeneous ? deg : deg + 1;
        std::vector<cplx> q;
        double sigma = 1.0;
        if (unknowns > 0) {
            CMatrix a(pts.size(), unknowns);
            std::vector<cplx> rhs(pts.size());
            for (std::size_t i = 0; i < pts.size(); ++i) {
                const PointData p = point_data(pts[i]);
                auto col = [&](int k) { return p.t * ipow(p.v0, k) - p.ap * ipow(p.vm, k) - p.am * ipow(p.vp, k); };
                for (int k = 0; k < unknowns; ++k) a(i, k) = col(k);
                rhs[i] = homogeneous ? -col(deg) : p.f;
            }
            const LeastSquares ls = least_squares(a, rhs);
            q = ls.x;
            sigma = ls.min_singular;
        }
        if (homogeneous) q.push_back(1.0);
        const double r = grid_residual(q);
        res.residual_by_degree.push_back(r);
        const bool ok = r < 1e-8 && std::isfinite(r);
        if (ok || r < res.residual) {
            res.residual = r;
            res.min_singular = sigma;
            res.poly.variable = var;
            res.poly.coeffs = q;
            res.poly.degree = deg;
            res.poly.monic = homogeneous;
        }
        if (ok) {
            res.found = true;
            break;
        }
    }
    if (!res.poly.coeffs.empty() && std::abs(res.poly.coeffs.back()) > 0.0) fill_roots(res.poly, node_values);
    if (!res.found) res.note = "no polynomial passes the grid residual";
    return res;
}

double tq_point_residual(const ModelSpec& s, const CentralData& c, const TransferEigenvalue& t, const QPolynomial& q,
                         QSide side, cplx l) {
    if (!is_gl2(s)) throw NotApplicable("tq_point_residual: gl2 models only");
    const ABranch br = side_branch(s, side);
    const cplx e = s.eta;
    const cplx f = inhom_vanishes(s) ? cplx(0.0) : inhom_term(s, l);
    const cplx t0 = eval_t(s, c, t, l) * q(l, e), t1 = coeff_A(s, l, br) * q(l - e, e), t2 = coeff_A(s, -l, br) * q(l + e, e);
    const double scale = std::abs(t0) + std::abs(t1) + std::abs(t2) + std::abs(f);
    return std::abs(t0 - t1 - t2 - f) / std::max(scale, 1e-300);
}

double wronskian_check(const ModelSpec& s, const QPolynomial& q, const QPolynomial& p) {
    if (!is_gl2(s) || s.kind != Kind::rational) throw NotApplicable("wronskian_check: rational gl2 only");
    if (!inhom_vanishes(s)) throw NotApplicable("wronskian_check: needs a vanishing inhomogeneous term");
    const ABranch br = default_branch(s);
    const auto& b = s.b1();
    const cplx zp = zeta_bar(b, Side::plus, br.eps_plus), zm = zeta_bar(b, Side::minus, br.eps_minus);
    const cplx e = s.eta;
    const double sgn = (s.N % 2) ? -1.0 : 1.0;
    const std::vector<cplx> grid = sample_points(s, 16, 4242, 1.0);
    double worst = 0.0;
    for (const cplx l : grid) {
        const cplx u = l - e / 2.0;
        const cplx lhs = 2.0 * sgn * (zp + zm + double(p.degree - q.degree) * e) * u * fn_a(s, -l) * fn_d(s, l);
        const cplx t1 = (u + zp) * (u + zm) * q(l - e) * p(l);
        const cplx t2 = (u - zp) * (u - zm) * q(l) * p(l - e);
        const double scale = std::abs(t1) + std::abs(t2) + std::abs(lhs);
        worst = std::max(worst, std::abs(lhs - (t1 - t2)) / std::max(scale, 1e-300));
    }
    return worst;
}

Gl3CurveCoefficients gl3_curve_coefficients(const ModelSpec& s, cplx l) {
    require_gl3_curve(s);
    const auto& b = s.bn();
    const cplx e = s.eta, e2 = e * e;
    Gl3CurveCoefficients k;
    const cplx g0 = gl3_gamma0(s, l), g1 = gl3_gamma0(s, l - e), g2 = gl3_gamma0(s, l - 2.0 * e);
    const cplx v0 = 16.0 * (l * l - e2) * (l + 1.5 * e) * (l - e / 2.0);
    const cplx v1 = 64.0 * l * (l * l - e2) * (l * l - 2.25 * e2) * (l + e / 2.0);
    const cplx v2 = 64.0 * l * (l * l - e2) * (l * l - e2 / 4.0) * (l + 1.5 * e);
    k.gamma0 = g0;
    k.gamma = v0 * g0;
    k.beta = v1 * g0 * g1;
    k.alpha = v2 * g0 * g1 * g2;
    const cplx ca = gl3_cos_alpha(s);
    k.f = (1.0 - ca) * 256.0 * l * (l + b.zeta_minus - e) * (l - e) * (l - 2.0 * e) * (l * l - e2 / 4.0) * (l * l - e2) *
          (l * l - 2.25 * e2) * (e / 2.0 + b.zeta_plus - l) * (b.zeta_minus + l) * gl3_a(s, l) * fn_dn(s, l) *
          fn_dn(s, l - e) * fn_dn(s, l - 2.0 * e);
    return k;
}

cplx gl3_cos_alpha(const ModelSpec& s) {
    require_gl3_curve(s);
    std::vector<cplx> ev = eigenvalues(mcal_plus(s) * mcal_minus(s));
    std::size_t fixed = 0;
    for (std::size_t i = 1; i < ev.size(); ++i)
        if (std::abs(ev[i] + 1.0) < std::abs(ev[fixed] + 1.0)) fixed = i;
    cplx sum = 0.0;
    for (std::size_t i = 0; i < ev.size(); ++i)
        if (i != fixed) sum += ev[i];
    return sum / 2.0;
}

double gl3_curve_point_residual(const ModelSpec& s, const CentralData& c, const TransferEigenvalue& t,
                                const QPolynomial& phi, cplx l) {
    require_gl3_curve(s);
    const cplx e = s.eta;
    const auto& b = s.bn();
    const cplx Z = b.zeta_plus * b.zeta_minus;
    const Gl3CurveCoefficients k = gl3_curve_coefficients(s, l);
    const cplx f = inhom_vanishes(s, 1e-12) ? cplx(0.0) : k.f;
    const cplx x3 = k.alpha * phi(l - 3.0 * e, e);
    const cplx x2 = -k.beta * Z * eval_t(s, c, t, l - 2.0 * e) * phi(l - 2.0 * e, e);
    const cplx x1 = -k.gamma * Z * Z * eval_t2(s, c, t, l - e) * phi(l - e, e);
    const cplx x0 = Z * Z * Z * quantum_determinant_t3(s, l) * phi(l, e);
    const double scale = std::abs(x3) + std::abs(x2) + std::abs(x1) + std::abs(x0) + std::abs(f);
    return std::abs(x3 + x2 + x1 + x0 - f) / std::max(scale, 1e-300);
}

Gl3CurveResult gl3_spectral_curve(const ModelSpec& s, const CentralData& c, const TransferEigenvalue& t,
                                  unsigned long long seed) {
    require_gl3_curve(s);
    const cplx e = s.eta;
    const auto& b = s.bn();
    const cplx Z = b.zeta_plus * b.zeta_minus;
    const bool homogeneous = inhom_vanishes(s, 1e-12);
    const QVariable var = QVariable::gl3_pair_form;
    auto mu = [&](cplx l) { return QPolynomial::variable_at(var, l, e); };

    std::vector<cplx> xs, tx;
    for (int a = 0; a < s.N; ++a) {
        xs.push_back(s.xi[a]);
        tx.push_back(Z * t.x[a]);
    }
    for (int a = 0; a < s.N; ++a) {
        xs.push_back(-s.xi[a]);
        tx.push_back(Z * t.x_dual[a]);
    }

    Gl3CurveResult res;
    std::vector<cplx> phi;
    int deg = -1;
    const int lo = homogeneous ? 0 : s.N;
    for (int m = lo; m <= s.N; ++m) {
        CMatrix d(xs.size(), m + 1);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const cplx g = gl3_curve_coefficients(s, xs[i]).gamma;
            const cplx rr = gl3_rr(s, xs[i]);
            for (int k = 0; k <= m; ++k) d(i, k) = g * ipow(mu(xs[i] - e), k) - rr * tx[i] * ipow(mu(xs[i]), k);
        }
        double sigma = 0.0;
        std::vector<cplx> v;
        if (m == 0) {
            v = {1.0};
            double num = 0.0, den = 0.0;
            for (std::size_t i = 0; i < xs.size(); ++i) {
                num = std::max(num, std::abs(d(i, 0)));
                den = std::max(den, std::abs(gl3_rr(s, xs[i]) * tx[i]));
            }
            sigma = num / std::max(den, 1e-300);
        } else {
            v = null_vector(d, &sigma);
        }
        res.discrete_null_sigma = sigma;
        if (sigma < 1e-9 || m == s.N) {
            phi = v;
            deg = m;
            if (sigma < 1e-9) break;
        }
    }
    if (deg < 0 || std::abs(phi.back()) == 0.0) {
        res.note = "discrete system has no null vector";
        return res;
    }
    for (auto& x : phi) x /= phi[deg];

    struct Terms {
        cplx a3, a2, a1, a0, f;
    };
    auto terms = [&](cplx l) {
        const Gl3CurveCoefficients k = gl3_curve_coefficients(s, l);
        return Terms{k.alpha, -k.beta * Z * eval_t(s, c, t, l - 2.0 * e), -k.gamma * Z * Z * eval_t2(s, c, t, l - e),
                     Z * Z * Z * quantum_determinant_t3(s, l), homogeneous ? cplx(0.0) : k.f};
    };
    auto term_value = [&](const Terms& tm, cplx l, const std::vector<cplx>& q, double* scale) {
        const cplx x3 = tm.a3 * horner(q, mu(l - 3.0 * e)), x2 = tm.a2 * horner(q, mu(l - 2.0 * e));
        const cplx x1 = tm.a1 * horner(q, mu(l - e)), x0 = tm.a0 * horner(q, mu(l));
        if (scale) *scale = std::abs(x3) + std::abs(x2) + std::abs(x1) + std::abs(x0) + std::abs(tm.f);
        return x3 + x2 + x1 + x0 - tm.f;
    };

    // global least squares on the curve; monic unless f fixes the normalization
    const std::vector<cplx> pts = sample_points(s, 2 * (deg + 2) + 4, seed, 1.0);
    const int unknowns = homogeneous ? deg : deg + 1;
    std::vector<cplx> fit = phi;
    if (unknowns > 0) {
        CMatrix a(pts.size(), unknowns);
        std::vector<cplx> rhs(pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const cplx l = pts[i];
            const Terms tm = terms(l);
            auto col = [&](int k) {
                return tm.a3 * ipow(mu(l - 3.0 * e), k) + tm.a2 * ipow(mu(l - 2.0 * e), k) +
                       tm.a1 * ipow(mu(l - e), k) + tm.a0 * ipow(mu(l), k);
            };
            for (int k = 0; k < unknowns; ++k) a(i, k) = col(k);
            rhs[i] = homogeneous ? -col(deg) : tm.f;
        }
        const LeastSquares ls = least_squares(a, rhs);
        fit = ls.x;
        if (homogeneous) fit.push_back(1.0);
    }
    res.lsq_mismatch = line_angle(fit, phi);

    double worst = 0.0;
    for (const cplx l : sample_points(s, 32, seed + 7919, 1.15)) {
        double sc = 0.0;
        const cplx r = term_value(terms(l), l, fit, &sc);
        worst = std::max(worst, std::abs(r) / std::max(sc, 1e-300));
    }
    res.curve_residual = worst;

    // coefficients of the left side as a polynomial in lambda, by DFT on a circle
    {
        const int budget = 8 * s.N + 12;
        const int m = budget + 8;
        const double rho = 1.5;
        std::vector<cplx> vals(m);
        double top = 0.0, excess = 0.0;
        for (int j = 0; j < m; ++j) {
            const cplx z = std::polar(rho, 2.0 * kPi * (j + 0.25) / m);
            Terms tm = terms(z);
            tm.f = 0.0;
            double sc = 0.0;
            vals[j] = term_value(tm, z, fit, &sc);
            top = std::max(top, sc);  // individual terms, so an identically vanishing side still has a scale
        }
        for (int k = 0; k < m; ++k) {
            cplx ck = 0.0;
            for (int j = 0; j < m; ++j) ck += vals[j] * std::polar(1.0, -2.0 * kPi * (j + 0.25) * k / m);
            const double mag = std::abs(ck) / m;  // |c_k| rho^k
            if (k > budget) excess = std::max(excess, mag);
        }
        res.degree_excess = excess / std::max(top, 1e-300);
    }

    // coefficient of lambda^{2N+2} in Z t(lambda)
    {
        const int m = 2 * s.N + 3;
        const double rho = 1.5;
        cplx lead = 0.0;
        for (int j = 0; j < m; ++j) {
            const cplx z = std::polar(rho, 2.0 * kPi * (j + 0.25) / m);
            lead += Z * eval_t(s, c, t, z) / (double(m) * ipow(z, m - 1));
        }
        const cplx target = 1.0 - 2.0 * gl3_cos_alpha(s);
        res.leading_identity = std::abs(lead - target) / std::max(1.0, std::abs(target));
    }

    res.phi.variable = var;
    res.phi.coeffs = fit;
    res.phi.degree = deg;
    res.phi.monic = homogeneous || std::abs(fit.back() - 1.0) < 1e-8;
    std::vector<cplx> node_values;
    for (const cplx x : xs) {
        node_values.push_back(mu(x));
        node_values.push_back(mu(x - e));
    }
    fill_roots(res.phi, node_values);

    double wdev = 0.0;
    for (const auto& h : sov_tuples(3, s.N)) {
        cplx lhs = 1.0, rhs = 1.0;
        for (int a = 0; a < s.N; ++a) {
            const cplx x = s.xi[a];
            const cplx g = gl3_curve_coefficients(s, x).gamma;
            const cplx px = res.phi(x, e), pm = res.phi(x - e, e);
            lhs *= ipow(g * pm, h[a]) * ipow(px, 2 - h[a]);
            rhs *= ipow(gl3_rr(s, x) * Z * t.x[a], h[a]) * px * px;
        }
        wdev = std::max(wdev, std::abs(lhs / rhs - 1.0));
    }
    res.weights_deviation = wdev;
    res.found = res.curve_residual < 1e-7;
    if (!res.found) res.note = "curve residual above tolerance";
    return res;
}

}  // namespace sov
