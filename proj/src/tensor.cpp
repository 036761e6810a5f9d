#include "sov/tensor.hpp"

namespace sov {

std::size_t TensorSpace::dim() const {
    std::size_t d = 1;
    for (int i = 0; i < k; ++i) {
        d *= static_cast<std::size_t>(n);
        if (d > kron_dim_cap()) throw DimensionError("tensor space dimension exceeds cap");
    }
    return d;
}

CMatrix apply_right(const TensorSpace& ts, const CMatrix& x, const std::vector<int>& factors, const CMatrix& op) {
    const std::size_t D = ts.dim();
    if (x.cols() != D) throw ShapeError("apply_right: column dimension differs from tensor space");
    const int m = static_cast<int>(factors.size());
    std::size_t sub = 1;
    for (int i = 0; i < m; ++i) sub *= static_cast<std::size_t>(ts.n);
    if (op.rows() != sub || op.cols() != sub) throw ShapeError("apply_right: local operator has wrong size");

    std::vector<std::size_t> stride(ts.k);
    {
        std::size_t s = 1;
        for (int f = ts.k - 1; f >= 0; --f) {
            stride[f] = s;
            s *= static_cast<std::size_t>(ts.n);
        }
    }
    // offset of each local index inside the global index
    std::vector<std::size_t> loc_off(sub, 0);
    for (std::size_t li = 0; li < sub; ++li) {
        std::size_t r = li, off = 0;
        for (int i = m - 1; i >= 0; --i) {
            off += (r % ts.n) * stride[factors[i]];
            r /= ts.n;
        }
        loc_off[li] = off;
    }
    CMatrix y(x.rows(), D);
    for (std::size_t col = 0; col < D; ++col) {
        std::size_t base = col, lc = 0;
        for (int i = 0; i < m; ++i) {
            const std::size_t digit = (col / stride[factors[i]]) % ts.n;
            base -= digit * stride[factors[i]];
            lc = lc * ts.n + digit;
        }
        for (std::size_t lr = 0; lr < sub; ++lr) {
            const cplx w = op(lr, lc);
            if (w == cplx(0.0)) continue;
            const std::size_t src = base + loc_off[lr];
            for (std::size_t r = 0; r < x.rows(); ++r) y(r, col) += x(r, src) * w;
        }
    }
    return y;
}

CMatrix embed(const TensorSpace& ts, const std::vector<int>& factors, const CMatrix& op) {
    return apply_right(ts, CMatrix::identity(ts.dim()), factors, op);
}

CMatrix swap_matrix(int n) {
    CMatrix p(n * n, n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) p(i * n + j, j * n + i) = 1.0;
    return p;
}

}  // namespace sov
