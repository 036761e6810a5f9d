#pragma once

#include <map>
#include <random>
#include <string>
#include <vector>

#include "sov/model.hpp"
#include "sov/tensor.hpp"

namespace sov {

enum class Side { plus, minus };
enum class MonoVariant { bulk, hat };
enum class HatConstruction { product, transpose };

// n^2 x n^2 R-matrix
CMatrix r_matrix(const ModelSpec& s, cplx lambda);
// n x n boundary matrix
CMatrix k_matrix(const ModelSpec& s, Side side, cplx lambda);

// operator on V_aux (x) H, auxiliary factor first
CMatrix monodromy(const ModelSpec& s, cplx lambda, MonoVariant v,
                  HatConstruction hc = HatConstruction::product);
CMatrix boundary_monodromy(const ModelSpec& s, cplx lambda);
// same with an explicit K_- in place of the model's
CMatrix boundary_monodromy_k(const ModelSpec& s, cplx lambda, const CMatrix& kminus);
CMatrix transfer_matrix(const ModelSpec& s, cplx lambda);

// (1/m!) sum over permutations of sign * P_pi on (C^n)^{(x)m}
CMatrix antisym_projector(int n, int m);
// orthonormal columns spanning the image of a projector
CMatrix projector_image(const CMatrix& p);

CMatrix fused_transfer_2(const ModelSpec& s, cplx lambda);
CMatrix fused_transfer_3(const ModelSpec& s, cplx lambda);
// closed-form quantum determinant in the normalization of fused_transfer_3
cplx quantum_determinant_t3(const ModelSpec& s, cplx lambda);

struct Residual {
    std::string name;
    double value = 0.0;
    double tol = 0.0;
    bool pass() const { return value < tol; }
};

// relative Frobenius distance
double rel_diff(const CMatrix& a, const CMatrix& b);

// seeded sample point on the annulus 0.3 < |z| < 1.7
class PointSampler {
public:
    explicit PointSampler(unsigned long long seed);
    cplx next();
    // rejects points within delta of any entry of `avoid`
    cplx next_avoiding(const std::vector<cplx>& avoid, double delta = 1e-3);
    double uniform(double lo, double hi);

private:
    std::mt19937_64 rng_;
    double unit();
};

// ybe, reflection_minus, reflection_plus_dual, unitarity, commutativity
std::map<std::string, double> algebra_residuals(const ModelSpec& s, unsigned long long seed = 20240607ULL);

struct RationalLimitTargets {
    int N = 1;
    cplx eta_hat, lambda_hat;
    std::vector<cplx> xi_hat;
    BoundaryRank1 hat;  // zeta_hat, kappa, tau
};

struct RationalLimitReport {
    double epsilon = 0.0;
    double dev_R = 0.0, dev_Kminus = 0.0, dev_Kplus = 0.0, dev_T = 0.0, dev_A = 0.0, dev_fusion = 0.0;
};

ModelSpec rational_limit_trig_model(const RationalLimitTargets& t, double epsilon);
ModelSpec rational_limit_rational_model(const RationalLimitTargets& t);
RationalLimitReport rational_limit_probe(const RationalLimitTargets& t, double epsilon);

}  // namespace sov
