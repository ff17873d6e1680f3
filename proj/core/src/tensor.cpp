#include "qmarkov/tensor.hpp"

#include <Eigen/Eigenvalues>

#include "qmarkov/errors.hpp"
#include "qmarkov/spectral.hpp"

namespace qmarkov {

Matrix kron2(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c)
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
  return out;
}

Operator kron(const std::vector<Operator>& parts) {
  if (parts.empty()) throw LayoutError("kron of an empty part list");
  std::vector<SubSystem> systems;
  for (const auto& p : parts)
    for (const auto& s : p.layout().systems()) systems.push_back(s);
  SystemLayout layout(std::move(systems));  // rejects duplicate labels

  Matrix m = parts.front().entries();
  for (size_t i = 1; i < parts.size(); ++i) m = kron2(m, parts[i].entries());
  return Operator(std::move(layout), std::move(m));
}

namespace {

// Composite-index offsets contributed by the systems at `positions` when
// enumerating their sub-layout indices in order.
std::vector<int> offset_table(const SystemLayout& layout,
                              const std::vector<int>& positions) {
  int sub_dim = 1;
  for (int p : positions) sub_dim *= layout.system(p).dim;
  std::vector<int> table(sub_dim, 0);
  std::vector<int> digits(positions.size(), 0);
  for (int idx = 0; idx < sub_dim; ++idx) {
    int off = 0;
    for (size_t s = 0; s < positions.size(); ++s)
      off += digits[s] * layout.stride(positions[s]);
    table[idx] = off;
    // increment mixed-radix digits, last position fastest
    for (int s = static_cast<int>(positions.size()) - 1; s >= 0; --s) {
      if (++digits[s] < layout.system(positions[s]).dim) break;
      digits[s] = 0;
    }
  }
  return table;
}

}  // namespace

Operator partial_trace(const Operator& op, const std::vector<std::string>& keep) {
  if (keep.empty()) throw LayoutError("partial_trace with empty keep set");
  const SystemLayout& L = op.layout();
  auto keep_pos = L.positions(keep);
  std::sort(keep_pos.begin(), keep_pos.end());  // original relative order
  auto traced_pos = L.complement(L.labels_at(keep_pos));

  SystemLayout out_layout = L.sub(keep_pos);
  const auto kmap = offset_table(L, keep_pos);
  const auto tmap = offset_table(L, traced_pos);
  const int dk = static_cast<int>(kmap.size());

  Matrix out = Matrix::Zero(dk, dk);
  const Matrix& in = op.entries();
  for (int i = 0; i < dk; ++i)
    for (int j = 0; j < dk; ++j) {
      Complex acc(0.0, 0.0);
      for (int t : tmap) acc += in(kmap[i] + t, kmap[j] + t);
      out(i, j) = acc;
    }
  return Operator(std::move(out_layout), std::move(out));
}

Operator permute_systems(const Operator& op,
                         const std::vector<std::string>& order) {
  const SystemLayout& L = op.layout();
  auto pos = L.positions(order);
  if (static_cast<int>(pos.size()) != L.count())
    throw LayoutError("permutation must list every subsystem label");

  SystemLayout out_layout = L.sub(pos);
  const int d = L.total_dim();
  // map: new composite index -> old composite index
  std::vector<int> omap(d);
  std::vector<int> digits;
  for (int i = 0; i < d; ++i) {
    out_layout.decompose(i, digits);
    int old = 0;
    for (size_t s = 0; s < pos.size(); ++s) old += digits[s] * L.stride(pos[s]);
    omap[i] = old;
  }
  Matrix out(d, d);
  const Matrix& in = op.entries();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) out(i, j) = in(omap[i], omap[j]);
  return Operator(std::move(out_layout), std::move(out));
}

Operator embed_operator(const SystemLayout& layout,
                        const std::vector<std::string>& labels, const Matrix& m) {
  auto pos = layout.positions(labels);
  std::sort(pos.begin(), pos.end());
  auto rest = layout.complement(layout.labels_at(pos));

  const auto smap = offset_table(layout, pos);
  const auto rmap = offset_table(layout, rest);
  const int ds = static_cast<int>(smap.size());
  if (m.rows() != ds || m.cols() != ds)
    throw LayoutError("embedded matrix has wrong dimension");

  const int d = layout.total_dim();
  Matrix out = Matrix::Zero(d, d);
  for (int i = 0; i < ds; ++i)
    for (int j = 0; j < ds; ++j) {
      if (m(i, j) == Complex(0.0, 0.0)) continue;
      for (int r : rmap) out(smap[i] + r, smap[j] + r) = m(i, j);
    }
  return Operator(layout, std::move(out));
}

double frob_norm(const Matrix& m) { return m.norm(); }

double frob_dist(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw LayoutError("frob_dist: dimension mismatch");
  return (a - b).norm();
}

double frob_dist(const Operator& a, const Operator& b) {
  if (a.dim() != b.dim()) throw LayoutError("frob_dist: dimension mismatch");
  return (a.entries() - b.entries()).norm();
}

double trace_distance(const Matrix& a, const Matrix& b) {
  Matrix diff = a - b;
  diff = ((diff + diff.adjoint()) / 2.0).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(diff, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw NumericError("eigensolver failed in trace_distance");
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

double trace_distance(const DensityOperator& a, const DensityOperator& b) {
  return trace_distance(a.entries(), b.entries());
}

Complex hs_inner(const Matrix& a, const Matrix& b) {
  return (a.adjoint() * b).trace();
}

std::vector<Matrix> hermitian_basis(int dim) {
  std::vector<Matrix> basis;
  basis.reserve(static_cast<size_t>(dim) * dim);
  for (int i = 0; i < dim; ++i) {
    Matrix e = Matrix::Zero(dim, dim);
    e(i, i) = 1.0;
    basis.push_back(std::move(e));
  }
  const double s = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j) {
      Matrix re = Matrix::Zero(dim, dim);
      re(i, j) = s;
      re(j, i) = s;
      basis.push_back(std::move(re));
      Matrix im = Matrix::Zero(dim, dim);
      im(i, j) = Complex(0.0, s);
      im(j, i) = Complex(0.0, -s);
      basis.push_back(std::move(im));
    }
  return basis;
}

}  // namespace qmarkov
