#include "sov/numkit.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>

namespace sov {

namespace {

std::size_t g_kron_cap = 0;
std::size_t g_eig_cap = 256;

constexpr double kEps = std::numeric_limits<double>::epsilon();

}  // namespace

std::size_t kron_dim_cap() {
    if (g_kron_cap == 0) {
        g_kron_cap = std::size_t(1) << 16;
        if (const char* env = std::getenv("SOV_DIM_CAP")) {
            char* end = nullptr;
            unsigned long long v = std::strtoull(env, &end, 10);
            if (end != env && v > 0) g_kron_cap = static_cast<std::size_t>(v);
        }
    }
    return g_kron_cap;
}
void set_kron_dim_cap(std::size_t cap) { g_kron_cap = cap; }
std::size_t eig_dim_cap() { return g_eig_cap; }
void set_eig_dim_cap(std::size_t cap) { g_eig_cap = cap; }

CMatrix::CMatrix(std::size_t r, std::size_t c, std::vector<cplx> data) : r_(r), c_(c), a_(std::move(data)) {
    if (a_.size() != r * c) throw ShapeError("CMatrix: entry count does not match shape");
}

CMatrix::CMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
    r_ = rows.size();
    c_ = r_ ? rows.begin()->size() : 0;
    a_.reserve(r_ * c_);
    for (const auto& row : rows) {
        if (row.size() != c_) throw ShapeError("CMatrix: ragged initializer");
        a_.insert(a_.end(), row.begin(), row.end());
    }
}

CMatrix CMatrix::identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

CMatrix CMatrix::diag(const std::vector<cplx>& d) {
    CMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

CMatrix CMatrix::column(const std::vector<cplx>& v) { return CMatrix(v.size(), 1, v); }
CMatrix CMatrix::row(const std::vector<cplx>& v) { return CMatrix(1, v.size(), v); }

std::vector<cplx> CMatrix::row_vec(std::size_t i) const {
    return std::vector<cplx>(a_.begin() + i * c_, a_.begin() + (i + 1) * c_);
}

std::vector<cplx> CMatrix::col_vec(std::size_t j) const {
    std::vector<cplx> v(r_);
    for (std::size_t i = 0; i < r_; ++i) v[i] = (*this)(i, j);
    return v;
}

void CMatrix::set_row(std::size_t i, const std::vector<cplx>& v) {
    if (v.size() != c_) throw ShapeError("set_row: length mismatch");
    std::copy(v.begin(), v.end(), a_.begin() + i * c_);
}

void CMatrix::set_col(std::size_t j, const std::vector<cplx>& v) {
    if (v.size() != r_) throw ShapeError("set_col: length mismatch");
    for (std::size_t i = 0; i < r_; ++i) (*this)(i, j) = v[i];
}

CMatrix CMatrix::transpose() const {
    CMatrix t(c_, r_);
    for (std::size_t i = 0; i < r_; ++i)
        for (std::size_t j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

CMatrix CMatrix::adjoint() const {
    CMatrix t(c_, r_);
    for (std::size_t i = 0; i < r_; ++i)
        for (std::size_t j = 0; j < c_; ++j) t(j, i) = std::conj((*this)(i, j));
    return t;
}

cplx CMatrix::trace() const {
    if (!square()) throw ShapeError("trace: matrix not square");
    cplx s = 0.0;
    for (std::size_t i = 0; i < r_; ++i) s += (*this)(i, i);
    return s;
}

double CMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& z : a_) m = std::max(m, std::abs(z));
    return m;
}

double CMatrix::frobenius() const {
    double s = 0.0;
    for (const auto& z : a_) s += std::norm(z);
    return std::sqrt(s);
}

bool CMatrix::all_finite() const {
    for (const auto& z : a_)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

CMatrix& CMatrix::operator+=(const CMatrix& o) {
    if (r_ != o.r_ || c_ != o.c_) throw ShapeError("matrix sum: shape mismatch");
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
    return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& o) {
    if (r_ != o.r_ || c_ != o.c_) throw ShapeError("matrix difference: shape mismatch");
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
    return *this;
}

CMatrix& CMatrix::operator*=(cplx s) {
    for (auto& z : a_) z *= s;
    return *this;
}

CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
CMatrix operator*(cplx s, CMatrix a) { return a *= s; }
CMatrix operator*(CMatrix a, cplx s) { return a *= s; }

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
    if (a.cols() != b.rows()) throw ShapeError("matrix product: inner dimensions differ");
    const std::size_t n = a.rows(), k = a.cols(), m = b.cols();
    CMatrix c(n, m);
    for (std::size_t i = 0; i < n; ++i) {
        cplx* ci = c.data() + i * m;
        for (std::size_t p = 0; p < k; ++p) {
            const cplx aip = a(i, p);
            if (aip == cplx(0.0)) continue;
            const cplx* bp = b.data() + p * m;
            for (std::size_t j = 0; j < m; ++j) ci[j] += aip * bp[j];
        }
    }
    return c;
}

std::vector<cplx> operator*(const CMatrix& a, const std::vector<cplx>& v) {
    if (a.cols() != v.size()) throw ShapeError("matrix-vector product: length mismatch");
    std::vector<cplx> out(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        cplx s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * v[j];
        out[i] = s;
    }
    return out;
}

std::vector<cplx> vec_mat(const std::vector<cplx>& v, const CMatrix& a) {
    if (a.rows() != v.size()) throw ShapeError("vector-matrix product: length mismatch");
    std::vector<cplx> out(a.cols(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        if (v[i] == cplx(0.0)) continue;
        for (std::size_t j = 0; j < a.cols(); ++j) out[j] += v[i] * a(i, j);
    }
    return out;
}

CMatrix commutator(const CMatrix& a, const CMatrix& b) { return a * b - b * a; }

double norm2(const std::vector<cplx>& v) {
    double s = 0.0;
    for (const auto& z : v) s += std::norm(z);
    return std::sqrt(s);
}

double max_abs(const std::vector<cplx>& v) {
    double m = 0.0;
    for (const auto& z : v) m = std::max(m, std::abs(z));
    return m;
}

cplx dot(const std::vector<cplx>& u, const std::vector<cplx>& v) {
    if (u.size() != v.size()) throw ShapeError("dot: length mismatch");
    cplx s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
    return s;
}

cplx vdot(const std::vector<cplx>& u, const std::vector<cplx>& v) {
    if (u.size() != v.size()) throw ShapeError("vdot: length mismatch");
    cplx s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += std::conj(u[i]) * v[i];
    return s;
}

double line_angle(const std::vector<cplx>& u, const std::vector<cplx>& v) {
    // residual of v after projecting on u; sqrt(1-cos^2) loses half the digits
    const double nu = norm2(u), nv = norm2(v);
    if (nu == 0.0 || nv == 0.0) return 1.0;
    const cplx c = vdot(u, v) / (nu * nu);
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += std::norm(v[i] - c * u[i]);
    return std::min(1.0, std::sqrt(s) / nv);
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
    const std::size_t r = a.rows() * b.rows(), c = a.cols() * b.cols();
    if (r > kron_dim_cap() || c > kron_dim_cap())
        throw DimensionError("kron: dimension " + std::to_string(std::max(r, c)) + " exceeds cap " +
                             std::to_string(kron_dim_cap()));
    CMatrix out(r, c);
    for (std::size_t i1 = 0; i1 < a.rows(); ++i1)
        for (std::size_t j1 = 0; j1 < a.cols(); ++j1) {
            const cplx x = a(i1, j1);
            if (x == cplx(0.0)) continue;
            for (std::size_t i2 = 0; i2 < b.rows(); ++i2)
                for (std::size_t j2 = 0; j2 < b.cols(); ++j2)
                    out(i1 * b.rows() + i2, j1 * b.cols() + j2) = x * b(i2, j2);
        }
    return out;
}

CMatrix kron_power(const CMatrix& a, int k) {
    CMatrix out = CMatrix::identity(1);
    for (int i = 0; i < k; ++i) out = kron(out, a);
    return out;
}

std::vector<cplx> kron_vec(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    std::vector<cplx> out;
    out.reserve(a.size() * b.size());
    for (const auto& x : a)
        for (const auto& y : b) out.push_back(x * y);
    return out;
}

CMatrix partial_trace_first(const CMatrix& m, std::size_t dim_first) {
    if (!m.square()) throw ShapeError("partial_trace_first: matrix not square");
    if (dim_first == 0 || m.rows() % dim_first != 0)
        throw ShapeError("partial_trace_first: dimension not divisible by first factor");
    const std::size_t d = m.rows() / dim_first;
    CMatrix out(d, d);
    for (std::size_t a = 0; a < dim_first; ++a)
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) out(i, j) += m(a * d + i, a * d + j);
    return out;
}

CMatrix aux_block(const CMatrix& m, std::size_t dim_first, std::size_t i, std::size_t j) {
    if (!m.square() || m.rows() % dim_first != 0) throw ShapeError("aux_block: bad shape");
    const std::size_t d = m.rows() / dim_first;
    CMatrix out(d, d);
    for (std::size_t p = 0; p < d; ++p)
        for (std::size_t q = 0; q < d; ++q) out(p, q) = m(i * d + p, j * d + q);
    return out;
}

namespace {

struct LU {
    CMatrix lu;
    std::vector<std::size_t> perm;
    int sign = 1;
    double min_pivot = std::numeric_limits<double>::infinity();
    bool singular = false;
};

LU lu_decompose(const CMatrix& a) {
    if (!a.square()) throw ShapeError("LU: matrix not square");
    const std::size_t n = a.rows();
    LU f{a, std::vector<std::size_t>(n), 1};
    std::iota(f.perm.begin(), f.perm.end(), 0);
    double rownorm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += std::abs(a(i, j));
        rownorm = std::max(rownorm, s);
    }
    const double thresh = 1e-12 * rownorm;
    CMatrix& m = f.lu;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = std::abs(m(k, k));
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(m(i, k)) > best) {
                best = std::abs(m(i, k));
                p = i;
            }
        f.min_pivot = std::min(f.min_pivot, best);
        if (best <= thresh || best == 0.0) f.singular = true;
        if (best == 0.0) continue;
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
            std::swap(f.perm[k], f.perm[p]);
            f.sign = -f.sign;
        }
        const cplx piv = m(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const cplx l = m(i, k) / piv;
            m(i, k) = l;
            if (l == cplx(0.0)) continue;
            for (std::size_t j = k + 1; j < n; ++j) m(i, j) -= l * m(k, j);
        }
    }
    if (n == 0) f.min_pivot = 0.0;
    return f;
}

}  // namespace

cplx det(const CMatrix& m) {
    const LU f = lu_decompose(m);
    cplx d = static_cast<double>(f.sign);
    for (std::size_t i = 0; i < m.rows(); ++i) d *= f.lu(i, i);
    return d;
}

double log_abs_det(const CMatrix& m) {
    const LU f = lu_decompose(m);
    double s = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const double a = std::abs(f.lu(i, i));
        if (a == 0.0) return -std::numeric_limits<double>::infinity();
        s += std::log(a);
    }
    return s;
}

CMatrix solve_linear(const CMatrix& a, const CMatrix& rhs) {
    if (rhs.rows() != a.rows()) throw ShapeError("solve_linear: rhs rows differ from matrix rows");
    const LU f = lu_decompose(a);
    if (f.singular) throw SingularError("solve_linear: matrix singular within pivot threshold", f.min_pivot);
    const std::size_t n = a.rows(), m = rhs.cols();
    CMatrix x(n, m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) x(i, j) = rhs(f.perm[i], j);
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < i; ++k) x(i, j) -= f.lu(i, k) * x(k, j);
        for (std::size_t ii = n; ii-- > 0;) {
            for (std::size_t k = ii + 1; k < n; ++k) x(ii, j) -= f.lu(ii, k) * x(k, j);
            x(ii, j) /= f.lu(ii, ii);
        }
    }
    return x;
}

std::vector<cplx> solve_linear(const CMatrix& a, const std::vector<cplx>& rhs) {
    return solve_linear(a, CMatrix::column(rhs)).col_vec(0);
}

CMatrix inverse(const CMatrix& a) { return solve_linear(a, CMatrix::identity(a.rows())); }

namespace {

struct Jacobi {
    std::vector<double> sigma;  // unsorted
    CMatrix v;
};

// one-sided Jacobi on the columns of a (rows padded to >= cols)
Jacobi jacobi_svd(CMatrix a) {
    const std::size_t n = a.cols();
    if (a.rows() < n) {
        CMatrix p(n, n);
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t j = 0; j < n; ++j) p(i, j) = a(i, j);
        a = std::move(p);
    }
    const std::size_t m = a.rows();
    CMatrix v = CMatrix::identity(n);
    for (int sweep = 0; sweep < 80; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                double al = 0.0, be = 0.0;
                cplx ga = 0.0;
                for (std::size_t i = 0; i < m; ++i) {
                    al += std::norm(a(i, p));
                    be += std::norm(a(i, q));
                    ga += std::conj(a(i, p)) * a(i, q);
                }
                const double g = std::abs(ga);
                if (g == 0.0 || g <= kEps * std::sqrt(al * be)) continue;
                off = std::max(off, g / std::sqrt(al * be));
                const cplx ph = std::conj(ga / g);
                const double zeta = (be - al) / (2.0 * g);
                const double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t), s = c * t;
                for (std::size_t i = 0; i < m; ++i) {
                    const cplx x = a(i, p), y = a(i, q) * ph;
                    a(i, p) = c * x - s * y;
                    a(i, q) = s * x + c * y;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const cplx x = v(i, p), y = v(i, q) * ph;
                    v(i, p) = c * x - s * y;
                    v(i, q) = s * x + c * y;
                }
            }
        if (off < 4 * kEps) break;
    }
    Jacobi out{std::vector<double>(n), std::move(v)};
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) s += std::norm(a(i, j));
        out.sigma[j] = std::sqrt(s);
    }
    return out;
}

}  // namespace

std::vector<double> singular_values(const CMatrix& a) {
    auto j = jacobi_svd(a);
    std::sort(j.sigma.begin(), j.sigma.end(), std::greater<>());
    return j.sigma;
}

std::vector<cplx> null_vector(const CMatrix& a, double* rel_sigma) {
    auto j = jacobi_svd(a);
    std::size_t k = 0;
    double smax = 0.0;
    for (std::size_t i = 0; i < j.sigma.size(); ++i) {
        if (j.sigma[i] < j.sigma[k]) k = i;
        smax = std::max(smax, j.sigma[i]);
    }
    if (rel_sigma) *rel_sigma = smax > 0 ? j.sigma[k] / smax : 0.0;
    return j.v.col_vec(k);
}

LeastSquares least_squares(const CMatrix& a0, const std::vector<cplx>& b0) {
    const std::size_t m = a0.rows(), n = a0.cols();
    if (b0.size() != m) throw ShapeError("least_squares: rhs length mismatch");
    if (m < n) throw ShapeError("least_squares: underdetermined system");
    std::vector<double> scale(n, 1.0);
    CMatrix a = a0;
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) s += std::norm(a(i, j));
        s = std::sqrt(s);
        if (s > 0) {
            scale[j] = 1.0 / s;
            for (std::size_t i = 0; i < m; ++i) a(i, j) *= scale[j];
        }
    }
    LeastSquares out;
    {
        const auto sv = singular_values(a);
        out.min_singular = sv.empty() || sv.front() == 0.0 ? 0.0 : sv.back() / sv.front();
    }
    std::vector<cplx> b = b0;
    // Householder QR applied to [a | b]
    for (std::size_t k = 0; k < n; ++k) {
        double nrm = 0.0;
        for (std::size_t i = k; i < m; ++i) nrm += std::norm(a(i, k));
        nrm = std::sqrt(nrm);
        if (nrm == 0.0) continue;
        const cplx akk = a(k, k);
        const cplx ph = std::abs(akk) > 0 ? akk / std::abs(akk) : cplx(1.0);
        const cplx alpha = -ph * nrm;
        std::vector<cplx> u(m - k);
        for (std::size_t i = k; i < m; ++i) u[i - k] = a(i, k);
        u[0] -= alpha;
        const double un = norm2(u);
        if (un == 0.0) continue;
        for (auto& z : u) z /= un;
        for (std::size_t j = k; j < n; ++j) {
            cplx s = 0.0;
            for (std::size_t i = k; i < m; ++i) s += std::conj(u[i - k]) * a(i, j);
            for (std::size_t i = k; i < m; ++i) a(i, j) -= 2.0 * u[i - k] * s;
        }
        cplx s = 0.0;
        for (std::size_t i = k; i < m; ++i) s += std::conj(u[i - k]) * b[i];
        for (std::size_t i = k; i < m; ++i) b[i] -= 2.0 * u[i - k] * s;
    }
    std::vector<cplx> y(n, 0.0);
    for (std::size_t ii = n; ii-- > 0;) {
        cplx s = b[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= a(ii, k) * y[k];
        y[ii] = a(ii, ii) != cplx(0.0) ? s / a(ii, ii) : cplx(0.0);
    }
    out.x.resize(n);
    for (std::size_t j = 0; j < n; ++j) out.x[j] = y[j] * scale[j];
    const auto r = a0 * out.x;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        num += std::norm(r[i] - b0[i]);
        den += std::norm(b0[i]);
    }
    out.residual = den > 0 ? std::sqrt(num / den) : std::sqrt(num);
    return out;
}

namespace {

// Householder reduction to upper Hessenberg form, q accumulates the transform
void hessenberg(CMatrix& h, CMatrix& q) {
    const std::size_t n = h.rows();
    q = CMatrix::identity(n);
    for (std::size_t k = 0; k + 2 <= n; ++k) {
        double nrm = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) nrm += std::norm(h(i, k));
        nrm = std::sqrt(nrm);
        if (nrm == 0.0) continue;
        const cplx x0 = h(k + 1, k);
        const cplx ph = std::abs(x0) > 0 ? x0 / std::abs(x0) : cplx(1.0);
        std::vector<cplx> u(n - k - 1);
        for (std::size_t i = k + 1; i < n; ++i) u[i - k - 1] = h(i, k);
        u[0] += ph * nrm;
        const double un = norm2(u);
        if (un == 0.0) continue;
        for (auto& z : u) z /= un;
        // h <- (I - 2uu^H) h (I - 2uu^H)
        for (std::size_t j = 0; j < n; ++j) {
            cplx s = 0.0;
            for (std::size_t i = k + 1; i < n; ++i) s += std::conj(u[i - k - 1]) * h(i, j);
            for (std::size_t i = k + 1; i < n; ++i) h(i, j) -= 2.0 * u[i - k - 1] * s;
        }
        for (std::size_t i = 0; i < n; ++i) {
            cplx s = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) s += h(i, j) * u[j - k - 1];
            for (std::size_t j = k + 1; j < n; ++j) h(i, j) -= 2.0 * s * std::conj(u[j - k - 1]);
        }
        for (std::size_t i = 0; i < n; ++i) {
            cplx s = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) s += q(i, j) * u[j - k - 1];
            for (std::size_t j = k + 1; j < n; ++j) q(i, j) -= 2.0 * s * std::conj(u[j - k - 1]);
        }
        for (std::size_t i = k + 2; i < n; ++i) h(i, k) = 0.0;
    }
}

// complex Givens rotation zeroing b in (a, b)
void givens(cplx a, cplx b, double& c, cplx& s) {
    const double aa = std::abs(a), bb = std::abs(b);
    if (bb == 0.0) {
        c = 1.0;
        s = 0.0;
        return;
    }
    if (aa == 0.0) {
        c = 0.0;
        s = std::conj(b) / bb;
        return;
    }
    const double r = std::hypot(aa, bb);
    c = aa / r;
    s = (a / aa) * std::conj(b) / r;
}

// shifted QR on a Hessenberg matrix -> upper triangular Schur form
void schur(CMatrix& h, CMatrix& z) {
    const std::size_t n = h.rows();
    if (n == 0) return;
    const double hnorm = std::max(h.frobenius(), std::numeric_limits<double>::min());
    std::size_t hi = n - 1;
    int iter = 0, total = 0;
    const int budget = 60 * static_cast<int>(n) + 100;
    while (hi > 0) {
        std::size_t lo = hi;
        while (lo > 0) {
            const double sub = std::abs(h(lo, lo - 1));
            const double diag = std::abs(h(lo, lo)) + std::abs(h(lo - 1, lo - 1));
            if (sub <= kEps * (diag > 0 ? diag : hnorm)) {
                h(lo, lo - 1) = 0.0;
                break;
            }
            --lo;
        }
        if (lo == hi) {
            --hi;
            iter = 0;
            continue;
        }
        if (++total > budget) throw ConvergenceError("eig_general: QR iteration budget exhausted");
        ++iter;
        cplx mu;
        if (iter % 11 == 10) {
            mu = h(hi, hi) + cplx(0.75 * std::abs(h(hi, hi - 1)), 0.4 * std::abs(h(hi, hi - 1)));
        } else {
            // Wilkinson shift from the trailing 2x2 block
            const cplx a = h(hi - 1, hi - 1), b = h(hi - 1, hi), c = h(hi, hi - 1), d = h(hi, hi);
            const cplx tr = 0.5 * (a + d);
            const cplx disc = std::sqrt(0.25 * (a - d) * (a - d) + b * c);
            const cplx m1 = tr + disc, m2 = tr - disc;
            mu = std::abs(m1 - d) < std::abs(m2 - d) ? m1 : m2;
        }
        std::vector<double> cs(hi - lo);
        std::vector<cplx> sn(hi - lo);
        for (std::size_t k = lo; k <= hi; ++k) h(k, k) -= mu;
        for (std::size_t k = lo; k < hi; ++k) {
            double c;
            cplx s;
            givens(h(k, k), h(k + 1, k), c, s);
            cs[k - lo] = c;
            sn[k - lo] = s;
            for (std::size_t j = k; j < n; ++j) {
                const cplx x = h(k, j), y = h(k + 1, j);
                h(k, j) = c * x + s * y;
                h(k + 1, j) = -std::conj(s) * x + c * y;
            }
        }
        for (std::size_t k = lo; k < hi; ++k) {
            const double c = cs[k - lo];
            const cplx s = sn[k - lo];
            const std::size_t top = std::min(hi, k + 2);
            for (std::size_t i = 0; i <= top; ++i) {
                const cplx x = h(i, k), y = h(i, k + 1);
                h(i, k) = c * x + std::conj(s) * y;
                h(i, k + 1) = -s * x + c * y;
            }
            for (std::size_t i = 0; i < n; ++i) {
                const cplx x = z(i, k), y = z(i, k + 1);
                z(i, k) = c * x + std::conj(s) * y;
                z(i, k + 1) = -s * x + c * y;
            }
        }
        for (std::size_t k = lo; k <= hi; ++k) h(k, k) += mu;
    }
}

struct RightEig {
    std::vector<cplx> values;
    CMatrix vectors;
};

RightEig right_eig(const CMatrix& m) {
    const std::size_t n = m.rows();
    CMatrix h = m, z;
    hessenberg(h, z);
    schur(h, z);
    RightEig out{std::vector<cplx>(n), CMatrix(n, n)};
    const double small = kEps * std::max(h.frobenius(), std::numeric_limits<double>::min());
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = h(k, k);
        std::vector<cplx> y(n, 0.0);
        y[k] = 1.0;
        for (std::size_t ii = k; ii-- > 0;) {
            cplx s = 0.0;
            for (std::size_t j = ii + 1; j <= k; ++j) s += h(ii, j) * y[j];
            cplx den = h(ii, ii) - h(k, k);
            if (std::abs(den) < small) den = small;
            y[ii] = -s / den;
        }
        auto v = z * y;
        const double nv = norm2(v);
        for (auto& x : v) x /= nv;
        out.vectors.set_col(k, v);
    }
    return out;
}

bool lex_less(cplx a, cplx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

}  // namespace

EigenData eig_general(const CMatrix& m) {
    if (!m.square()) throw ShapeError("eig_general: matrix not square");
    const std::size_t n = m.rows();
    if (n > eig_dim_cap())
        throw DimensionError("eig_general: dimension " + std::to_string(n) + " exceeds cap " +
                             std::to_string(eig_dim_cap()));
    if (!m.all_finite()) throw ParameterError("eig_general: non-finite input");
    RightEig r = right_eig(m);
    RightEig l = right_eig(m.transpose());

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return lex_less(r.values[i], r.values[j]); });

    EigenData out;
    out.values.resize(n);
    out.right_vectors = CMatrix(n, n);
    out.left_vectors = CMatrix(n, n);
    out.residuals.resize(n);
    std::vector<bool> used(n, false);
    const double anorm = std::max(m.frobenius(), std::numeric_limits<double>::min());
    bool bio = true;
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t i = order[k];
        const auto v = r.vectors.col_vec(i);
        // nearest unused left eigenvalue; ties broken by overlap with v
        std::size_t best = n;
        double bestd = 0.0, bestov = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (used[j]) continue;
            const double d = std::abs(l.values[j] - r.values[i]);
            const double ov = std::abs(dot(l.vectors.col_vec(j), v));
            const double tie = 1e-8 * std::max(1.0, std::abs(r.values[i]));
            if (best == n || d < bestd - tie || (std::abs(d - bestd) <= tie && ov > bestov)) {
                best = j;
                bestd = d;
                bestov = ov;
            }
        }
        used[best] = true;
        auto u = l.vectors.col_vec(best);
        const cplx p = dot(u, v);
        if (std::abs(p) < 1e-10) {
            bio = false;
        } else {
            for (auto& x : u) x /= p;
        }
        out.values[k] = r.values[i];
        out.right_vectors.set_col(k, v);
        out.left_vectors.set_row(k, u);
        const auto av = m * v;
        double res = 0.0;
        for (std::size_t q = 0; q < n; ++q) res += std::norm(av[q] - r.values[i] * v[q]);
        out.residuals[k] = std::sqrt(res) / anorm;
    }
    out.biorthogonal = bio;
    out.min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < n; ++a) {
        out.spectral_radius = std::max(out.spectral_radius, std::abs(out.values[a]));
        for (std::size_t b = a + 1; b < n; ++b) out.min_gap = std::min(out.min_gap, std::abs(out.values[a] - out.values[b]));
    }
    if (n < 2) out.min_gap = std::numeric_limits<double>::infinity();
    return out;
}

std::vector<cplx> eigenvalues(const CMatrix& m) {
    if (!m.square()) throw ShapeError("eigenvalues: matrix not square");
    CMatrix h = m, z;
    hessenberg(h, z);
    schur(h, z);
    std::vector<cplx> v(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) v[i] = h(i, i);
    std::sort(v.begin(), v.end(), lex_less);
    return v;
}

cplx vandermonde_sq(const std::vector<cplx>& x) {
    cplx v = 1.0;
    for (std::size_t k = 0; k < x.size(); ++k)
        for (std::size_t j = k + 1; j < x.size(); ++j) v *= x[k] * x[k] - x[j] * x[j];
    return v;
}

}  // namespace sov
