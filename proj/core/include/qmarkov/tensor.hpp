#ifndef QMARKOV_TENSOR_HPP
#define QMARKOV_TENSOR_HPP

#include <vector>

#include "qmarkov/operators.hpp"

namespace qmarkov {

// Plain Kronecker product of matrices, row of `a` slow, row of `b` fast.
Matrix kron2(const Matrix& a, const Matrix& b);

// Tensor product of operators in listed order; the result layout is the
// concatenation of the part layouts. Labels must be disjoint across parts.
Operator kron(const std::vector<Operator>& parts);

// Trace out every system not in `keep`. The result layout contains exactly
// the kept labels in their original relative order.
Operator partial_trace(const Operator& op, const std::vector<std::string>& keep);

// Reorder systems; `order` must be a permutation of the layout labels.
Operator permute_systems(const Operator& op, const std::vector<std::string>& order);

// Lift a matrix acting on the sub-layout of `labels` (taken in layout order)
// to the full space, as identity elsewhere.
Operator embed_operator(const SystemLayout& layout,
                        const std::vector<std::string>& labels, const Matrix& m);

double frob_norm(const Matrix& m);
double frob_dist(const Operator& a, const Operator& b);
double frob_dist(const Matrix& a, const Matrix& b);

// Half the trace norm of (a - b) for Hermitian a, b.
double trace_distance(const Matrix& a, const Matrix& b);
double trace_distance(const DensityOperator& a, const DensityOperator& b);

// Hilbert-Schmidt inner product Tr(a^dag b).
Complex hs_inner(const Matrix& a, const Matrix& b);

// Hermitian operator basis of M_d, orthonormal under the HS inner product:
// diagonal units, then (E_ij + E_ji)/sqrt(2) and i(E_ij - E_ji)/sqrt(2).
std::vector<Matrix> hermitian_basis(int dim);

}  // namespace qmarkov

#endif
