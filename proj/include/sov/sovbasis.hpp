#pragma once

#include <stdexcept>
#include <vector>

#include "sov/algebra.hpp"

namespace sov {

struct NotApplicable : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DependencyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// sign choice (eps_+, eps_-) entering zeta_bar = eps zeta / sqrt(1 + 4 kappa^2)
struct ABranch {
    int eps_plus = 1;
    int eps_minus = 1;
};

struct GaugeData {
    int epsilon_plus = 1, epsilon_minus = 1;
    CMatrix W_gauge;
    cplx zeta_bar_plus, zeta_bar_minus;
    cplx c_bar_plus, b_bar_minus;
    double form_residual = 0.0;  // max deviation of W K W^-1 from the triangular forms
};

cplx zeta_bar(const BoundaryRank1& b, Side side, int eps);
// b_- c_+ = t_{N+1} zbar_+ zbar_- - 2, valid also where no gauge exists
cplx bc_product(const ModelSpec& s, ABranch br);
// 2 (1 + 4 k_+ k_- cosh(tau_+ - tau_-)) / (zeta_+ zeta_-)
cplx t_asymptotic(const ModelSpec& s);
// rank-1 rational: gauge branch when applicable, (+1,+1) otherwise; trigonometric: (+1,+1)
ABranch default_branch(const ModelSpec& s);

cplx coeff_A(const ModelSpec& s, cplx lambda, ABranch br);
cplx coeff_A(const ModelSpec& s, cplx lambda);
// trigonometric alpha, beta from asinh(e^z/2k) = alpha + beta, asinh(-e^-z/2k) = alpha - beta
void trig_alpha_beta(cplx zeta, cplx kappa, cplx& alpha, cplx& beta);

GaugeData gauge_transform(const BoundaryRank1& params);
GaugeData gauge_transform_branch(const BoundaryRank1& params, int eps_plus, int eps_minus);

// all tuples of {0..n-1}^N, first site most significant
std::vector<std::vector<int>> sov_tuples(int n, int N);

struct SovBasis {
    const ModelSpec* model = nullptr;
    std::vector<cplx> seed_covector;
    std::vector<std::vector<int>> tuples;
    CMatrix covectors;               // rows, each scaled to unit max-norm
    std::vector<double> scale_logs;  // row_true = exp(scale_log) * row_stored
    std::vector<cplx> normalizers;   // A(eta/2 - xi_a) for rank 1, 1 otherwise

    // row as it would be without the max-norm rescaling
    std::vector<cplx> raw_row(std::size_t i) const;
    CMatrix raw_matrix() const;
};

struct RightSovBasis {
    const ModelSpec* model = nullptr;
    std::vector<cplx> seed_vector;
    CMatrix vectors;  // columns indexed like the left tuples
    cplx N_S = 1.0;
    std::vector<cplx> k_factors;
    double construction_mismatch = 0.0;  // two constructions compared up to fusion scalars
};

// per-site seed (1, 0.618) for rank 2, (1, 0.618, 0.382) W_-^{-1} for rank n with r_- = 1
std::vector<cplx> default_seed(const ModelSpec& s);
// all spins up <0| times (x) W
std::vector<cplx> gauge_seed(const ModelSpec& s, const GaugeData& g, bool inverse_w = false);

SovBasis build_left_sov_basis(const ModelSpec& s, const std::vector<cplx>& seed);

struct RankCheck {
    bool full_rank = false;
    double log_abs_det = 0.0;   // of the rescaled stack
    double abs_det = 0.0;       // rescaled
    double log_abs_det_raw = 0.0;
    double threshold = 1e-8;
};
RankCheck basis_rank_check(const SovBasis& b, double threshold = 1e-8);

struct SklyaninBasis {
    SovBasis basis;                       // rows <h_-| mapped back by the gauge
    double zero_condition = 0.0;          // max |<0| Abar(xi_a - eta/2)|
    double b_eigen_residual = 0.0;        // left-eigenvector test of Bbar
    double b_eigen_zero = 0.0;            // |b_h(xi^(h))| relative
};
SklyaninBasis build_sklyanin_basis(const ModelSpec& s, const GaugeData& g, unsigned long long seed = 7);

struct SklyaninCompare {
    double max_angle = 0.0;
    std::vector<double> angles;
    std::vector<cplx> constants;
};
SklyaninCompare compare_sklyanin_vs_new(const ModelSpec& s, const GaugeData& g);

RightSovBasis build_right_sov_basis(const ModelSpec& s, const SovBasis& left, cplx N_S = 1.0);

// measure on the nodes xi^(h): prod_{a<b} (x_a^2 - x_b^2)
cplx vhat_nodes(const ModelSpec& s, const std::vector<int>& h);
// (xi + eta)/(xi - eta); sinh(2 xi + 2 eta)/sinh(2 xi - 2 eta) for the trigonometric kind
cplx right_k_factor(const ModelSpec& s, int a);

}  // namespace sov
