#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "sov/sovbasis.hpp"

using namespace sov;

namespace {

double row_rel(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d / std::max(max_abs(a), max_abs(b));
}

}  // namespace

TEST_CASE("coefficient A") {
    ModelSpec s = fx::gl2(Kind::rational, 1);
    CHECK(std::abs(coeff_A(s, s.xi[0] - s.eta / 2.0)) < 1e-14);

    // T(xi^(0)) T(xi^(1)) is scalar with value A(xi^(0)) A(-xi^(1))
    for (Kind k : {Kind::rational, Kind::trigonometric}) {
        s = fx::gl2(k, 1);
        const cplx x0 = s.xi_h(0, 0), x1 = s.xi_h(0, 1);
        const CMatrix p = transfer_matrix(s, x0) * transfer_matrix(s, x1);
        CHECK(rel_diff(p, coeff_A(s, x0) * coeff_A(s, -x1) * CMatrix::identity(2)) < 1e-9);
    }

    s = fx::gl2(Kind::trigonometric, 2);
    BoundaryRank1 b = s.b1();
    b.kappa_plus = 0.0;
    s.boundary = b;
    const cplx l(0.27, 0.41);
    const cplx a0 = coeff_A(s, l);
    b.kappa_plus = 1e-8;
    s.boundary = b;
    CHECK(std::abs(coeff_A(s, l) - a0) < 1e-6);
}

TEST_CASE("gauge transformation") {
    const ModelSpec s = fx::gl2(Kind::rational, 2);
    const GaugeData g = gauge_transform(s.b1());
    CHECK(g.form_residual < 1e-12);
    CHECK(std::abs(g.b_bar_minus) > 1e-6);
    CHECK(std::abs(g.c_bar_plus) > 1e-6);
    const cplx bc = bc_product(s, ABranch{g.epsilon_plus, g.epsilon_minus});
    CHECK(std::abs(g.b_bar_minus * g.c_bar_plus - bc) < 1e-10 * std::max(1.0, std::abs(bc)));

    // W K_- W^-1 lower-triangular part against the explicit form
    const cplx l(0.31, -0.42);
    const CMatrix kb = g.W_gauge * k_matrix(s, Side::minus, l) * inverse(g.W_gauge);
    const cplx x = (l - s.eta / 2.0) / g.zeta_bar_minus;
    CHECK(std::abs(kb(0, 0) - (1.0 + x)) < 1e-12);
    CHECK(std::abs(kb(1, 1) - (1.0 - x)) < 1e-12);
    CHECK(std::abs(kb(1, 0)) < 1e-12);
    CHECK(std::abs(kb(0, 1) - x * g.b_bar_minus) < 1e-12);

    BoundaryRank1 c = s.b1();
    c.kappa_minus = c.kappa_plus;
    c.tau_minus = c.tau_plus;
    CHECK_THROWS_AS(gauge_transform(c), NotApplicable);
}

TEST_CASE("left basis, single site") {
    const ModelSpec s = fx::gl2(Kind::rational, 1);
    const std::vector<cplx> seed = default_seed(s);
    const SovBasis b = build_left_sov_basis(s, seed);
    REQUIRE(b.tuples.size() == 2);
    // tuple order: h = 0 first
    CHECK(row_rel(b.raw_row(1), seed) < 1e-13);
    auto r0 = vec_mat(seed, transfer_matrix(s, s.xi[0] - s.eta / 2.0));
    const cplx a = coeff_A(s, s.eta / 2.0 - s.xi[0]);
    for (auto& v : r0) v /= a;
    CHECK(row_rel(b.raw_row(0), r0) < 1e-13);
}

TEST_CASE("left basis rank") {
    for (const ModelSpec& s : {fx::gl2(Kind::rational, 2), fx::gl2(Kind::rational, 3, true),
                               fx::gl2(Kind::trigonometric, 3), fx::gl3(1), fx::gl3(2), fx::gl4(1)}) {
        const RankCheck rc = basis_rank_check(build_left_sov_basis(s, default_seed(s)));
        CHECK(rc.full_rank);
        CHECK(rc.abs_det > 1e-8);
    }
    const ModelSpec s = fx::gl2(Kind::rational, 2);
    const RankCheck z = basis_rank_check(build_left_sov_basis(s, std::vector<cplx>(4, 0.0)));
    CHECK_FALSE(z.full_rank);
    CHECK(std::isinf(z.log_abs_det));
    CHECK(z.log_abs_det < 0);
}

TEST_CASE("Sklyanin construction") {
    for (int N : {1, 2, 3}) {
        const ModelSpec s = fx::gl2(Kind::rational, N);
        const GaugeData g = gauge_transform(s.b1());
        const SklyaninBasis sk = build_sklyanin_basis(s, g);
        CHECK(sk.zero_condition < 1e-10);
        CHECK(sk.b_eigen_residual < 1e-10);
        CHECK(sk.b_eigen_zero < 1e-10);
        CHECK(basis_rank_check(sk.basis).full_rank);
        const SklyaninCompare c = compare_sklyanin_vs_new(s, g);
        CHECK(c.angles.size() == std::size_t(1) << N);
        CHECK(c.max_angle < (N == 1 ? 1e-10 : 1e-8));
    }
    const ModelSpec d = fx::gl2(Kind::rational, 2, true);
    CHECK_THROWS_AS(gauge_transform(d.b1()), NotApplicable);
}

TEST_CASE("right basis") {
    for (Kind kind : {Kind::rational, Kind::trigonometric})
    for (int N : {1, 2, 3}) {
        const ModelSpec s = fx::gl2(kind, N);
        const SovBasis left = build_left_sov_basis(s, default_seed(s));
        const cplx ns(0.7, 0.2);
        const RightSovBasis right = build_right_sov_basis(s, left, ns);
        CHECK(right.construction_mismatch < 1e-8);
        const auto tuples = sov_tuples(2, N);
        const std::size_t D = tuples.size();
        double bio = 0.0;
        CMatrix id(D, D);
        for (std::size_t i = 0; i < D; ++i) {
            const auto row = left.raw_row(i);
            const cplx w = ns * vhat_nodes(s, tuples[i]);
            for (std::size_t j = 0; j < D; ++j)
                bio = std::max(bio, std::abs(dot(row, right.vectors.col_vec(j)) * w - (i == j ? 1.0 : 0.0)));
            const auto col = right.vectors.col_vec(i);
            for (std::size_t p = 0; p < D; ++p)
                for (std::size_t q = 0; q < D; ++q) id(p, q) += w * col[p] * row[q];
        }
        CHECK(bio < 1e-8);
        CHECK((id - CMatrix::identity(D)).max_abs() < 1e-8);
    }
    const ModelSpec g = fx::gl3(1);
    CHECK_THROWS_AS(build_right_sov_basis(g, build_left_sov_basis(g, default_seed(g))), NotApplicable);
}

TEST_CASE("tuples and measure") {
    const auto t = sov_tuples(3, 2);
    REQUIRE(t.size() == 9);
    CHECK(t[1] == std::vector<int>{0, 1});
    CHECK(t[3] == std::vector<int>{1, 0});
    const ModelSpec s = fx::gl2(Kind::rational, 2);
    const cplx x0 = s.xi_h(0, 1), x1 = s.xi_h(1, 0);
    CHECK(std::abs(vhat_nodes(s, {1, 0}) - (x0 * x0 - x1 * x1)) < 1e-14);
}
