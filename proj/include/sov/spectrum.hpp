#pragma once

#include <string>
#include <vector>

#include "sov/sovbasis.hpp"

namespace sov {

// closed-form central data of the transfer matrices
struct CentralData {
    // rank 1: leading coefficient (in lambda^2 rational, cosh 2lambda trigonometric), t(eta/2), t(eta/2 - i pi/2)
    cplx t_leading = 0.0, t_half = 0.0, t_half_ipi = 0.0;
    // gl3: t(0), t(-3eta/2), coefficient of lambda^{2N+2}
    cplx t_zero = 0.0, t_m3half = 0.0, t_inf = 0.0;
    // gl3: t2(eta/2), t2(-eta), coefficient of lambda^{4N+6}
    cplx t2_half = 0.0, t2_meta = 0.0, t2_inf = 0.0;
    std::vector<cplx> r_inv;  // gl3 inversion t(xi_a) t(-xi_a) = r_a
};
CentralData central_data(const ModelSpec& s);

// t(lambda) = constant + sum_k weights[k] * t(nodes[k])
// rank 1: nodes xi_a^(h_a); gl3: xi_1..xi_N then -xi_1..-xi_N (h ignored)
struct Interpolation {
    std::vector<cplx> nodes;
    std::vector<cplx> weights;
    cplx constant = 0.0;
};
Interpolation interpolation(const ModelSpec& s, const CentralData& c, const std::vector<int>& h, cplx lambda);

// gl3: t2(lambda) = constant + sum_k f[k] r(2x_k - eta) t(x_k - eta) t(x_k)
//      + v_zero t2(0) + v_half t2(eta/2) + v_mhalf t2(-eta/2) + v_meta t2(-eta)
struct T2Interpolation {
    std::vector<cplx> nodes;  // xi_a, then -xi_a
    std::vector<cplx> f;
    cplx constant = 0.0;
    cplx v_zero = 0.0, v_half = 0.0, v_mhalf = 0.0, v_meta = 0.0;
};
T2Interpolation t2_interpolation(const ModelSpec& s, const CentralData& c, cplx lambda);

// operator rebuilt from node operators (and T2 from T for gl3)
CMatrix interpolate_transfer(const ModelSpec& s, const std::vector<int>& h, cplx lambda);
CMatrix interpolate_t2(const ModelSpec& s, cplx lambda);

// residuals of every closed-form central identity against the operators
std::vector<Residual> central_identities(const ModelSpec& s, double tol = 1e-8);

enum class Provenance { oracle, sov_solver };

struct TransferEigenvalue {
    std::vector<cplx> x;       // rank 1: t(xi_a^(0)); gl3: t(xi_a)
    std::vector<cplx> x_dual;  // rank 1: t(xi_a^(1)); gl3: t(-xi_a)
    Provenance provenance = Provenance::oracle;
    std::vector<cplx> right, left;  // oracle eigenvectors, left . right = 1
    double residual = 0.0;          // max fusion residual
};

cplx eval_t(const ModelSpec& s, const CentralData& c, const TransferEigenvalue& t, cplx lambda);
// gl3 only
cplx eval_t2(const ModelSpec& s, const CentralData& c, const TransferEigenvalue& t, cplx lambda);

struct OracleResult {
    std::vector<TransferEigenvalue> eigen;
    bool simple = false;
    int probes_used = 0;
    double min_gap = 0.0;  // relative to the spectral radius of the probed matrix
    double max_pair_residual = 0.0;
    std::string note;
};
OracleResult diag_oracle(const ModelSpec& s, unsigned long long seed = 11);

// rank 1: N relative residuals; gl3: 2N (mu = +1 nodes first)
std::vector<double> fusion_residual(const ModelSpec& s, const CentralData& c, const TransferEigenvalue& t);

struct SovSolveReport {
    std::vector<TransferEigenvalue> solutions;
    int seeds_tried = 0;
    int dropped = 0;
    std::vector<std::string> notes;
};
// seeds are node vectors x; empty seeds use the default set built from `oracle`
SovSolveReport solve_sov_system(const ModelSpec& s, const std::vector<std::vector<cplx>>& seeds);
std::vector<std::vector<cplx>> default_sov_seeds(const ModelSpec& s, const OracleResult& oracle,
                                                 unsigned long long seed = 5);

// max over a of min over b of the max-norm distance, symmetrized
double node_set_distance(const std::vector<TransferEigenvalue>& a, const std::vector<TransferEigenvalue>& b);

struct EigenvectorReport {
    std::vector<cplx> vector;
    double max_residual = 0.0;  // ||T v - t v|| / (||T|| ||v||) at the probes
    double alignment = -1.0;    // |<v_oracle, v>| / norms, -1 without oracle vector
};
// SoV coordinates solved against the co-vector stack
EigenvectorReport reconstruct_eigenvector(const ModelSpec& s, const SovBasis& basis, const TransferEigenvalue& t,
                                          unsigned long long seed = 13);
std::vector<cplx> sov_coordinates(const ModelSpec& s, const SovBasis& basis, const TransferEigenvalue& t);

// || sum_t |t><t| / <t|t> - I ||_max for right/left pairs
double completeness_residual(const std::vector<std::vector<cplx>>& rights, const std::vector<std::vector<cplx>>& lefts);

}  // namespace sov
