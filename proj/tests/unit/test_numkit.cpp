#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "sov/numkit.hpp"
#include "sov/tensor.hpp"

#ifdef SOV_HAVE_EIGEN
#include <Eigen/Dense>
#endif

using namespace sov;

namespace {

CMatrix random_matrix(std::size_t n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = {g(rng), g(rng)};
    return m;
}

// sort by real then imaginary part for set comparison
std::vector<cplx> sorted(std::vector<cplx> v) {
    std::sort(v.begin(), v.end(), [](cplx a, cplx b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return v;
}

double set_distance(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double d = 0.0;
    for (cplx x : a) {
        double best = 1e300;
        for (cplx y : b) best = std::min(best, std::abs(x - y));
        d = std::max(d, best);
    }
    return d;
}

}  // namespace

TEST_CASE("kron basics") {
    CHECK((kron(CMatrix::identity(2), CMatrix::identity(3)) - CMatrix::identity(6)).max_abs() == 0.0);
    const CMatrix k = kron(random_matrix(2, 1), random_matrix(3, 2));
    CHECK(k.rows() == 6);
    CHECK(k.cols() == 6);
    const CMatrix x{{0, 1}, {1, 0}};
    const CMatrix d = CMatrix::diag({2.0, 5.0});
    const CMatrix e = kron(x, d);
    const CMatrix expect{{0, 0, 2, 0}, {0, 0, 0, 5}, {2, 0, 0, 0}, {0, 5, 0, 0}};
    CHECK((e - expect).max_abs() == 0.0);
}

TEST_CASE("partial trace") {
    const CMatrix a = random_matrix(2, 3), b = random_matrix(3, 4);
    CHECK((partial_trace_first(kron(a, b), 2) - a.trace() * b).max_abs() < 1e-13);
    CHECK((partial_trace_first(CMatrix::identity(4), 2) - 2.0 * CMatrix::identity(2)).max_abs() == 0.0);
    const CMatrix m = random_matrix(6, 5);
    CHECK(std::abs(partial_trace_first(m, 2).trace() - m.trace()) < 1e-13);
    CHECK(std::abs(partial_trace_first(m, 3).trace() - m.trace()) < 1e-13);
}

TEST_CASE("determinant") {
    CHECK(std::abs(det(CMatrix::identity(5)) - 1.0) < 1e-15);
    CHECK(std::abs(det(CMatrix{{1, 2}, {3, 4}}) + 2.0) < 1e-14);
    // unitary conjugation of diag(1,2,3): Q from the QR of a random matrix via Gram-Schmidt
    CMatrix q = random_matrix(3, 7);
    for (std::size_t j = 0; j < 3; ++j) {
        auto v = q.col_vec(j);
        for (std::size_t k = 0; k < j; ++k) {
            const auto u = q.col_vec(k);
            const cplx p = vdot(u, v);
            for (std::size_t i = 0; i < 3; ++i) v[i] -= p * u[i];
        }
        const double nv = norm2(v);
        for (auto& x : v) x /= nv;
        q.set_col(j, v);
    }
    const CMatrix m = q * CMatrix::diag({1.0, 2.0, 3.0}) * q.adjoint();
    CHECK(std::abs(std::abs(det(m)) - 6.0) < 1e-12);
    CHECK(std::abs(log_abs_det(m) - std::log(6.0)) < 1e-12);
}

TEST_CASE("linear solve") {
    const std::vector<cplx> b{1.0, cplx(2, 1), -3.0};
    const auto x = solve_linear(CMatrix::identity(3), b);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(x[i] - b[i]) < 1e-15);
    const auto y = solve_linear(CMatrix::diag({2.0, 4.0}), std::vector<cplx>{2.0, 8.0});
    CHECK(std::abs(y[0] - 1.0) < 1e-15);
    CHECK(std::abs(y[1] - 2.0) < 1e-15);
    CMatrix a = random_matrix(8, 11);
    for (int i = 0; i < 8; ++i) a(i, i) += 6.0;
    std::vector<cplx> rhs(8);
    for (int i = 0; i < 8; ++i) rhs[i] = cplx(i, 1.0 - i);
    const auto z = solve_linear(a, rhs);
    const auto r = a * z;
    double res = 0.0;
    for (int i = 0; i < 8; ++i) res = std::max(res, std::abs(r[i] - rhs[i]));
    CHECK(res < 1e-12);
    CHECK_THROWS_AS(solve_linear(CMatrix(2, 2), std::vector<cplx>{1.0, 1.0}), SingularError);
}

TEST_CASE("least squares and null vector") {
    CMatrix a(6, 3);
    std::vector<cplx> b(6);
    for (int i = 0; i < 6; ++i) {
        const cplx x(0.3 * i, 0.1);
        a(i, 0) = 1.0;
        a(i, 1) = x;
        a(i, 2) = x * x;
        b[i] = 2.0 - x + cplx(0, 3) * x * x;
    }
    const LeastSquares ls = least_squares(a, b);
    CHECK(std::abs(ls.x[0] - 2.0) < 1e-12);
    CHECK(std::abs(ls.x[1] + 1.0) < 1e-12);
    CHECK(std::abs(ls.x[2] - cplx(0, 3)) < 1e-12);
    CHECK(ls.residual < 1e-12);

    CMatrix s{{1, 2, 3}, {2, 4, 6}, {1, 0, 1}};
    double sigma = 1.0;
    const auto v = null_vector(s, &sigma);
    CHECK(sigma < 1e-14);
    CHECK(max_abs(s * v) < 1e-13);
}

TEST_CASE("eigenvalues") {
    auto e = sorted(eigenvalues(CMatrix::diag({1.0, 2.0, 3.0})));
    CHECK(std::abs(e[0] - 1.0) < 1e-14);
    CHECK(std::abs(e[2] - 3.0) < 1e-14);
    e = sorted(eigenvalues(CMatrix{{0, 1}, {1, 0}}));
    CHECK(std::abs(e[0] + 1.0) < 1e-14);
    CHECK(std::abs(e[1] - 1.0) < 1e-14);
    // companion of z^2 - 3z + 2
    e = sorted(eigenvalues(CMatrix{{3, -2}, {1, 0}}));
    CHECK(std::abs(e[0] - 1.0) < 1e-13);
    CHECK(std::abs(e[1] - 2.0) < 1e-13);

    const CMatrix m = random_matrix(9, 5);
    const EigenData ed = eig_general(m);
    CHECK(ed.biorthogonal);
    for (double r : ed.residuals) CHECK(r < 1e-12);
    for (std::size_t k = 0; k < 9; ++k) {
        const auto mv = m * ed.right_vectors.col_vec(k);
        const auto lv = vec_mat(ed.left_vectors.row_vec(k), m);
        double rr = 0.0, rl = 0.0;
        for (std::size_t i = 0; i < 9; ++i) {
            rr = std::max(rr, std::abs(mv[i] - ed.values[k] * ed.right_vectors(i, k)));
            rl = std::max(rl, std::abs(lv[i] - ed.values[k] * ed.left_vectors(k, i)));
        }
        CHECK(rr < 1e-10 * std::max(1.0, max_abs(ed.right_vectors.col_vec(k))));
        CHECK(rl < 1e-10 * std::max(1.0, max_abs(ed.left_vectors.row_vec(k))));
    }
#ifdef SOV_HAVE_EIGEN
    Eigen::MatrixXcd em(9, 9);
    for (int i = 0; i < 9; ++i)
        for (int j = 0; j < 9; ++j) em(i, j) = m(i, j);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ces(em);
    std::vector<cplx> ref(ces.eigenvalues().data(), ces.eigenvalues().data() + 9);
    CHECK(set_distance(ed.values, ref) < 1e-10);
    CHECK(set_distance(ref, ed.values) < 1e-10);
    CHECK(std::abs(det(m) - em.determinant()) < 1e-10 * std::abs(em.determinant()));
#endif
}

TEST_CASE("vandermonde in squares") {
    CHECK(std::abs(vandermonde_sq({cplx(0.7, 0.2)}) - 1.0) == 0.0);
    CHECK(std::abs(vandermonde_sq({2.0, 1.0}) - 3.0) < 1e-15);
    const std::vector<cplx> x{cplx(0.3, 0.1), cplx(-1.2, 0.4), cplx(0.9, -0.7), cplx(1.5, 0.2)};
    // det of x_i^{2(j-1)} equals prod_{i<j} (x_j^2 - x_i^2); our order is (x_i^2 - x_j^2), sign (-1)^{n(n-1)/2}
    CMatrix v(4, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) v(i, j) = std::pow(x[i], 2 * j);
    CHECK(std::abs(vandermonde_sq(x) - det(v)) < 1e-12 * std::abs(det(v)));
}

TEST_CASE("dimension cap") {
    const std::size_t old = kron_dim_cap();
    set_kron_dim_cap(8);
    CHECK_THROWS_AS(kron_power(CMatrix::identity(3), 2), DimensionError);
    set_kron_dim_cap(old);
    CHECK(kron_power(CMatrix::identity(3), 2).rows() == 9);
}

TEST_CASE("embedded operators") {
    const TensorSpace ts{2, 3};
    const CMatrix p = swap_matrix(2);
    const CMatrix a = random_matrix(2, 9);
    // P_{02} (a (x) 1 (x) 1) P_{02} = 1 (x) 1 (x) a
    const CMatrix e = embed(ts, {0, 2}, p);
    const CMatrix lhs = e * kron(a, CMatrix::identity(4)) * e;
    CHECK((lhs - kron(CMatrix::identity(4), a)).max_abs() < 1e-14);
    const CMatrix x = random_matrix(8, 10);
    CHECK((apply_right(ts, x, {0, 2}, p) - x * e).max_abs() < 1e-14);
}
