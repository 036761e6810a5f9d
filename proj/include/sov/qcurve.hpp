#pragma once

#include <string>
#include <vector>

#include "sov/spectrum.hpp"

namespace sov {

enum class QVariable { lambda_squared, cosh_2lambda, gl3_pair_form };
enum class QSide { Q, P };

// polynomial in v(lambda): lambda^2, cosh 2lambda, or lambda (lambda + eta)
struct QPolynomial {
    QVariable variable = QVariable::lambda_squared;
    std::vector<cplx> coeffs;  // ascending powers of v
    bool monic = true;
    int degree = 0;
    std::vector<cplx> roots;   // roots in v
    double min_node_distance = 0.0;  // |v_root - v(node)| / max(1, |v(node)|), smallest
    double min_root_separation = 0.0;  // same scaling between roots; inf below two roots
    int max_multiplicity = 0;          // largest cluster of roots closer than 1e-6

    cplx operator()(cplx lambda, cplx eta = 0.0) const;
    static cplx variable_at(QVariable v, cplx lambda, cplx eta);
};

struct QSolveResult {
    bool found = false;
    QPolynomial poly;
    double residual = 0.0;      // grid residual of the accepted degree (or best tried)
    double min_singular = 0.0;  // design matrix, column-scaled, relative
    std::vector<double> residual_by_degree;
    std::string note;
};

// rational: b_- c_+ / (zbar_- zbar_+) (l^2 - eta^2/4) prod (l^2 - xi^(h)^2)
// trig: F0 (cosh^2 2l - cosh^2 eta) prod (cosh 2l - cosh 2xi^(h)); gl3: f(l)
// roots, node distance and multiplicities of q from its coefficients
void fill_roots(QPolynomial& q, const std::vector<cplx>& node_values);

cplx inhom_term(const ModelSpec& s, cplx lambda);
cplx trig_F0(const ModelSpec& s);
bool inhom_vanishes(const ModelSpec& s, double tol = 1e-12);

QSolveResult solve_q_given_t(const ModelSpec& s, const CentralData& c, const TransferEigenvalue& t, QSide side,
                             unsigned long long seed = 17);

// relative residual of the TQ equation at one point
double tq_point_residual(const ModelSpec& s, const CentralData& c, const TransferEigenvalue& t, const QPolynomial& q,
                         QSide side, cplx lambda);

// rational F = 0 case only; relative max over a 16-point grid
double wronskian_check(const ModelSpec& s, const QPolynomial& q, const QPolynomial& p);

// gl3 (p_- = 2, p_+ = 1) third-order curve
struct Gl3CurveCoefficients {
    cplx alpha, beta, gamma, gamma0, f;
};
Gl3CurveCoefficients gl3_curve_coefficients(const ModelSpec& s, cplx lambda);
// cos of the boundary angle from the spectrum of M+ M-
cplx gl3_cos_alpha(const ModelSpec& s);

struct Gl3CurveResult {
    bool found = false;
    QPolynomial phi;
    double discrete_null_sigma = 0.0;  // relative smallest singular value of the discrete system
    double lsq_mismatch = 0.0;         // coefficients from the global fit vs the discrete system
    double curve_residual = 0.0;       // disjoint grid
    double degree_excess = 0.0;        // coefficient of lambda^{8N+13}, relative
    double leading_identity = 0.0;     // |t~_{1,2N+2} - (1 - 2 cos alpha)| relative
    double weights_deviation = 0.0;    // SoV weights vs prod (r r Z t(xi))^h phi(xi)^2
    std::string note;
};
double gl3_curve_point_residual(const ModelSpec& s, const CentralData& c, const TransferEigenvalue& t,
                                const QPolynomial& phi, cplx lambda);
Gl3CurveResult gl3_spectral_curve(const ModelSpec& s, const CentralData& c, const TransferEigenvalue& t,
                                  unsigned long long seed = 19);

}  // namespace sov
