#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace sov {

using cplx = std::complex<double>;

struct DimensionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ShapeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SingularError : std::runtime_error {
    double smallest_pivot;
    SingularError(const std::string& what, double piv) : std::runtime_error(what), smallest_pivot(piv) {}
};
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ParameterError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// process-wide caps; SOV_DIM_CAP overrides the kron cap at first use
std::size_t kron_dim_cap();
void set_kron_dim_cap(std::size_t cap);
std::size_t eig_dim_cap();
void set_eig_dim_cap(std::size_t cap);

// row-major dense complex matrix
class CMatrix {
public:
    CMatrix() = default;
    CMatrix(std::size_t r, std::size_t c) : r_(r), c_(c), a_(r * c, cplx(0.0)) {}
    CMatrix(std::size_t r, std::size_t c, std::vector<cplx> data);
    CMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

    static CMatrix identity(std::size_t n);
    static CMatrix diag(const std::vector<cplx>& d);
    static CMatrix column(const std::vector<cplx>& v);
    static CMatrix row(const std::vector<cplx>& v);

    std::size_t rows() const { return r_; }
    std::size_t cols() const { return c_; }
    bool square() const { return r_ == c_; }
    bool empty() const { return a_.empty(); }

    cplx& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }
    cplx* data() { return a_.data(); }
    const cplx* data() const { return a_.data(); }
    const std::vector<cplx>& values() const { return a_; }

    std::vector<cplx> row_vec(std::size_t i) const;
    std::vector<cplx> col_vec(std::size_t j) const;
    void set_row(std::size_t i, const std::vector<cplx>& v);
    void set_col(std::size_t j, const std::vector<cplx>& v);

    CMatrix transpose() const;
    CMatrix adjoint() const;
    cplx trace() const;
    double max_abs() const;
    double frobenius() const;
    bool all_finite() const;

    CMatrix& operator+=(const CMatrix& o);
    CMatrix& operator-=(const CMatrix& o);
    CMatrix& operator*=(cplx s);

private:
    std::size_t r_ = 0, c_ = 0;
    std::vector<cplx> a_;
};

CMatrix operator+(CMatrix a, const CMatrix& b);
CMatrix operator-(CMatrix a, const CMatrix& b);
CMatrix operator*(const CMatrix& a, const CMatrix& b);
CMatrix operator*(cplx s, CMatrix a);
CMatrix operator*(CMatrix a, cplx s);
std::vector<cplx> operator*(const CMatrix& a, const std::vector<cplx>& v);
// row vector times matrix
std::vector<cplx> vec_mat(const std::vector<cplx>& v, const CMatrix& a);

CMatrix commutator(const CMatrix& a, const CMatrix& b);

double norm2(const std::vector<cplx>& v);
double max_abs(const std::vector<cplx>& v);
// bilinear sum u_i v_i (no conjugation)
cplx dot(const std::vector<cplx>& u, const std::vector<cplx>& v);
// hermitian <u,v>
cplx vdot(const std::vector<cplx>& u, const std::vector<cplx>& v);
// sine of the angle between the complex lines spanned by u and v
double line_angle(const std::vector<cplx>& u, const std::vector<cplx>& v);

CMatrix kron(const CMatrix& a, const CMatrix& b);
CMatrix kron_power(const CMatrix& a, int k);
std::vector<cplx> kron_vec(const std::vector<cplx>& a, const std::vector<cplx>& b);
CMatrix partial_trace_first(const CMatrix& m, std::size_t dim_first);
// sub-block (i,j) of m viewed as dim_first x dim_first blocks
CMatrix aux_block(const CMatrix& m, std::size_t dim_first, std::size_t i, std::size_t j);

cplx det(const CMatrix& m);
// log|det| without overflow; -inf for an exactly singular matrix
double log_abs_det(const CMatrix& m);
CMatrix solve_linear(const CMatrix& a, const CMatrix& rhs);
std::vector<cplx> solve_linear(const CMatrix& a, const std::vector<cplx>& rhs);
CMatrix inverse(const CMatrix& a);

struct LeastSquares {
    std::vector<cplx> x;
    double residual = 0.0;       // ||Ax - b|| / ||b||
    double min_singular = 0.0;   // after column scaling, relative to the largest
};
// Householder QR least squares with column equilibration
LeastSquares least_squares(const CMatrix& a, const std::vector<cplx>& b);
// singular values, descending (one-sided Jacobi)
std::vector<double> singular_values(const CMatrix& a);
// right singular vector of the smallest singular value, unit norm
std::vector<cplx> null_vector(const CMatrix& a, double* rel_sigma = nullptr);

struct EigenData {
    std::vector<cplx> values;
    CMatrix right_vectors;  // columns
    CMatrix left_vectors;   // rows, scaled so that left_k . right_k = 1
    std::vector<double> residuals;
    double min_gap = 0.0;
    double spectral_radius = 0.0;
    bool biorthogonal = false;
    bool simple(double rel_gap = 1e-7) const { return min_gap > rel_gap * std::max(spectral_radius, 1e-300); }
};
EigenData eig_general(const CMatrix& m);
std::vector<cplx> eigenvalues(const CMatrix& m);

// prod_{k<j} (x_k^2 - x_j^2)
cplx vandermonde_sq(const std::vector<cplx>& x);

}  // namespace sov
