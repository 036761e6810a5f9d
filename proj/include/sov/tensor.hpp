#pragma once

#include <vector>

#include "sov/numkit.hpp"

namespace sov {

// (C^n)^{(x)k}; factor 0 is the most significant digit of a basis index
struct TensorSpace {
    int n = 2;
    int k = 1;
    std::size_t dim() const;
};

// X * E(op), where E(op) acts as op on the listed factors (op is n^m x n^m,
// its row/column digits ordered like `factors`) and as identity elsewhere
CMatrix apply_right(const TensorSpace& ts, const CMatrix& x, const std::vector<int>& factors, const CMatrix& op);
// E(op) itself
CMatrix embed(const TensorSpace& ts, const std::vector<int>& factors, const CMatrix& op);
// permutation matrix P on C^n (x) C^n
CMatrix swap_matrix(int n);

}  // namespace sov
