#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "sov/qcurve.hpp"
#include "sov/sovbasis.hpp"

using namespace sov;

namespace {

// t Q - A(l) Q(l - eta) - A(-l) Q(l + eta) - F, relative to the largest term
double tq_direct(const ModelSpec& s, const CentralData& c, const TransferEigenvalue& t, const QPolynomial& q, cplx l) {
    const cplx e = s.eta;
    const cplx a = coeff_A(s, l) * q(l - e), b = coeff_A(s, -l) * q(l + e), tq = eval_t(s, c, t, l) * q(l);
    const cplx f = inhom_term(s, l);
    const double scale = std::max({std::abs(a), std::abs(b), std::abs(tq), std::abs(f)});
    return std::abs(tq - a - b - f) / scale;
}

}  // namespace

TEST_CASE("inhomogeneous term zeros") {
    for (Kind k : {Kind::rational, Kind::trigonometric}) {
        const ModelSpec s = fx::gl2(k, 2);
        const cplx scale = inhom_term(s, cplx(0.4, 0.3));
        CHECK(std::abs(scale) > 1e-8);
        for (int a = 0; a < 2; ++a)
            for (int h = 0; h < 2; ++h) {
                CHECK(std::abs(inhom_term(s, s.xi_h(a, h))) < 1e-12 * std::abs(scale));
                CHECK(std::abs(inhom_term(s, -s.xi_h(a, h))) < 1e-12 * std::abs(scale));
            }
        CHECK(std::abs(inhom_term(s, s.eta / 2.0)) < 1e-12 * std::abs(scale));
    }
    CHECK(inhom_vanishes(fx::gl2(Kind::rational, 2, true)));
    CHECK(inhom_vanishes(fx::gl2(Kind::trigonometric, 2, true)));
}

TEST_CASE("trigonometric F0") {
    ModelSpec s = fx::gl2(Kind::trigonometric, 2);
    BoundaryRank1 b = s.b1();
    cplx ap, bp, am, bm;
    trig_alpha_beta(b.zeta_plus, b.kappa_plus, ap, bp);
    trig_alpha_beta(b.zeta_minus, b.kappa_minus, am, bm);
    b.tau_plus = b.tau_minus + (ap + am - bp + bm - 3.0 * s.eta);
    s.boundary = b;
    CHECK(std::abs(trig_F0(s)) < 1e-12);

    // one-sided kappa -> 0 keeps a finite coefficient
    for (int side = 0; side < 2; ++side) {
        ModelSpec z = fx::gl2(Kind::trigonometric, 2), n = z;
        BoundaryRank1 bz = z.b1(), bn = bz;
        (side == 0 ? bz.kappa_plus : bz.kappa_minus) = 0.0;
        (side == 0 ? bn.kappa_plus : bn.kappa_minus) = 1e-9;
        z.boundary = bz;
        n.boundary = bn;
        CHECK(std::abs(trig_F0(z)) > 1e-3);
        CHECK(std::abs(trig_F0(z) - trig_F0(n)) < 1e-6 * std::abs(trig_F0(z)));
    }
}

TEST_CASE("root multiplicities are reported") {
    QPolynomial q;
    q.coeffs = {cplx(0.25), cplx(-1.0), cplx(1.0)};  // (v - 1/2)^2
    q.degree = 2;
    fill_roots(q, {cplx(3.0)});
    CHECK(q.max_multiplicity == 2);
    CHECK(q.min_root_separation < 1e-6);
    q.coeffs = {cplx(-0.5), cplx(-0.5), cplx(1.0)};
    fill_roots(q, {cplx(3.0)});
    CHECK(q.max_multiplicity == 1);
}

TEST_CASE("Q for generic boundaries has degree N") {
    for (const ModelSpec& s : {fx::gl2(Kind::rational, 2), fx::gl2(Kind::rational, 3), fx::gl2(Kind::trigonometric, 2)}) {
        const CentralData c = central_data(s);
        for (const auto& t : diag_oracle(s).eigen) {
            const QSolveResult q = solve_q_given_t(s, c, t, QSide::Q);
            CHECK(q.found);
            CHECK(q.poly.degree == s.N);
            CHECK(q.poly.roots.size() == std::size_t(s.N));
            CHECK(q.poly.max_multiplicity >= 1);
            CHECK(q.residual < 1e-8);
            CHECK(tq_direct(s, c, t, q.poly, cplx(0.61, -0.37)) < 1e-9);
            CHECK(tq_direct(s, c, t, q.poly, cplx(-1.1, 0.52)) < 1e-9);

            TransferEigenvalue p = t;
            p.x[0] *= 1.0 + 1e-2;
            const QSolveResult bad = solve_q_given_t(s, c, p, QSide::Q);
            CHECK_FALSE(bad.found);
            CHECK(bad.residual > 1e-4);
        }
    }
}

TEST_CASE("Q with one diagonal trigonometric boundary") {
    ModelSpec s = fx::gl2(Kind::trigonometric, 2);
    BoundaryRank1 b = s.b1();
    b.kappa_plus = 0.0;
    s.boundary = b;
    const CentralData c = central_data(s);
    for (const auto& t : diag_oracle(s).eigen) {
        const QSolveResult q = solve_q_given_t(s, c, t, QSide::Q);
        CHECK(q.found);
        CHECK(q.residual < 1e-8);
    }
}

TEST_CASE("diagonal boundaries: degree sum and Wronskian") {
    for (int N : {1, 2, 3}) {
        const ModelSpec s = fx::gl2(Kind::rational, N, true);
        const CentralData c = central_data(s);
        std::vector<int> qdeg;
        for (const auto& t : diag_oracle(s).eigen) {
            const QSolveResult q = solve_q_given_t(s, c, t, QSide::Q);
            const QSolveResult p = solve_q_given_t(s, c, t, QSide::P);
            REQUIRE(q.found);
            REQUIRE(p.found);
            CHECK(q.poly.degree + p.poly.degree == N);
            CHECK(wronskian_check(s, q.poly, p.poly) < 1e-8);
            qdeg.push_back(q.poly.degree);
        }
        if (N == 1) CHECK(qdeg[0] != qdeg[1]);
    }
    const ModelSpec g = fx::gl2(Kind::rational, 2);
    const CentralData c = central_data(g);
    const auto t = diag_oracle(g).eigen.front();
    const QPolynomial q = solve_q_given_t(g, c, t, QSide::Q).poly;
    CHECK_THROWS_AS(wronskian_check(g, q, q), NotApplicable);
}

TEST_CASE("gl3 spectral curve") {
    for (int N : {1, 2}) {
        const ModelSpec s = fx::gl3(N);
        const CentralData c = central_data(s);
        // leading coefficient of t against 1 - 2 cos(alpha), through the closed-form central datum
        const cplx ca = gl3_cos_alpha(s);
        for (const auto& t : diag_oracle(s).eigen) {
            const Gl3CurveResult r = gl3_spectral_curve(s, c, t);
            CHECK(r.found);
            CHECK(r.phi.degree <= N);
            CHECK(r.curve_residual < 1e-7);
            CHECK(r.leading_identity < 1e-8);
            CHECK(r.degree_excess < 1e-8);
            CHECK(r.weights_deviation < 1e-8);
            CHECK(gl3_curve_point_residual(s, c, t, r.phi, cplx(0.44, 0.12)) < 1e-7);
        }
        CHECK(std::abs(ca - 1.0) > 1e-3);
    }
    const ModelSpec s = fx::gl3(1, true);
    CHECK(std::abs(gl3_cos_alpha(s) - 1.0) < 1e-12);
    const Gl3CurveCoefficients k = gl3_curve_coefficients(s, cplx(0.37, 0.2));
    CHECK(std::abs(k.f) < 1e-12 * std::max(1.0, std::abs(k.alpha)));
    const CentralData c = central_data(s);
    for (const auto& t : diag_oracle(s).eigen) CHECK(gl3_spectral_curve(s, c, t).curve_residual < 1e-7);
}
