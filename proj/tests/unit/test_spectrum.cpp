#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "sov/spectrum.hpp"

using namespace sov;

namespace {

// <l| M |r> with l . r = 1
cplx expect(const CMatrix& m, const TransferEigenvalue& t) { return dot(t.left, m * t.right); }

double maxv(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, x);
    return m;
}

}  // namespace

TEST_CASE("central identities") {
    for (const ModelSpec& s : {fx::gl2(Kind::rational, 2), fx::gl2(Kind::rational, 3, true),
                               fx::gl2(Kind::trigonometric, 2), fx::gl3(1), fx::gl3(2)}) {
        for (const Residual& r : central_identities(s)) {
            INFO(r.name);
            CHECK(r.value < 1e-8);
        }
    }
}

TEST_CASE("oracle and eigenvalue interpolation") {
    for (const ModelSpec& s : {fx::gl2(Kind::rational, 1), fx::gl2(Kind::rational, 2), fx::gl2(Kind::trigonometric, 2),
                               fx::gl3(1)}) {
        const CentralData c = central_data(s);
        const OracleResult o = diag_oracle(s);
        CHECK(o.simple);
        CHECK(o.eigen.size() == s.hilbert_dim());
        const cplx l(0.23, -0.61);
        const CMatrix t = transfer_matrix(s, l);
        for (const auto& e : o.eigen) {
            CHECK(maxv(fusion_residual(s, c, e)) < 1e-8);
            const cplx ref = expect(t, e);
            CHECK(std::abs(eval_t(s, c, e, l) - ref) < 1e-9 * std::max(1.0, std::abs(ref)));
            TransferEigenvalue p = e;
            p.x[0] *= 1.0 + 1e-3;
            CHECK(maxv(fusion_residual(s, c, p)) > 1e-4);
        }
    }
}

TEST_CASE("gl2 eigenvalue asymptotics") {
    const ModelSpec s = fx::gl2(Kind::rational, 2);
    const auto& b = s.b1();
    const cplx tinf = 2.0 * (1.0 + 4.0 * b.kappa_plus * b.kappa_minus * std::cosh(b.tau_plus - b.tau_minus)) /
                      (b.zeta_plus * b.zeta_minus);
    const CentralData c = central_data(s);
    const cplx big = std::polar(1e5, 0.4);
    for (const auto& e : diag_oracle(s).eigen)
        CHECK(std::abs(eval_t(s, c, e, big) / std::pow(big, 6) - tinf) < 1e-6 * std::abs(tinf));
}

TEST_CASE("gl3 inversion and fusion") {
    const ModelSpec s = fx::gl3(1);
    const CentralData c = central_data(s);
    const OracleResult o = diag_oracle(s);
    REQUIRE(o.eigen.size() == 3);
    const cplx x = s.xi[0], e = s.eta, probe(0.31, 0.44);
    const CMatrix t2p = fused_transfer_2(s, probe);
    for (const auto& t : o.eigen) {
        CHECK(std::abs(t.x[0] * t.x_dual[0] - c.r_inv[0]) < 1e-9 * std::abs(c.r_inv[0]));
        const cplx lhs = eval_t2(s, c, t, x), rhs = fn_r3(s, 2.0 * x - e) * eval_t(s, c, t, x) * eval_t(s, c, t, x - e);
        CHECK(std::abs(lhs - rhs) < 1e-8 * std::max(1.0, std::abs(rhs)));
        CHECK(std::abs(eval_t2(s, c, t, e)) < 1e-10 * std::max(1.0, std::abs(eval_t2(s, c, t, probe))));
        const cplx op = expect(t2p, t);
        CHECK(std::abs(eval_t2(s, c, t, probe) - op) < 1e-8 * std::abs(op));
        // both sign nodes
        CHECK(fusion_residual(s, c, t).size() == 2);
    }
}

TEST_CASE("SoV system") {
    {
        const ModelSpec s = fx::gl2(Kind::rational, 1);
        const OracleResult o = diag_oracle(s);
        const SovSolveReport r = solve_sov_system(s, default_sov_seeds(s, o));
        CHECK(r.solutions.size() == 2);
        CHECK(node_set_distance(o.eigen, r.solutions) < 1e-8);
    }
    for (const ModelSpec& s : {fx::gl2(Kind::rational, 2), fx::gl2(Kind::rational, 3), fx::gl2(Kind::trigonometric, 2),
                               fx::gl3(1), fx::gl3(2)}) {
        const OracleResult o = diag_oracle(s);
        const SovSolveReport r = solve_sov_system(s, default_sov_seeds(s, o));
        CHECK(r.solutions.size() == s.hilbert_dim());
        CHECK(node_set_distance(o.eigen, r.solutions) < 1e-7);
        for (const auto& t : r.solutions) CHECK(t.provenance == Provenance::sov_solver);
    }
}

TEST_CASE("eigenvectors from the SoV basis") {
    for (const ModelSpec& s : {fx::gl2(Kind::rational, 2), fx::gl2(Kind::trigonometric, 2), fx::gl3(1)}) {
        const SovBasis b = build_left_sov_basis(s, default_seed(s));
        const OracleResult o = diag_oracle(s);
        std::vector<std::vector<cplx>> rights, lefts;
        for (const auto& t : o.eigen) {
            const EigenvectorReport e = reconstruct_eigenvector(s, b, t);
            CHECK(e.alignment > 1.0 - 1e-8);
            CHECK(e.max_residual < 1e-10);
            rights.push_back(t.right);
            lefts.push_back(t.left);
        }
        CHECK(completeness_residual(rights, lefts) < 1e-8);
    }
}
