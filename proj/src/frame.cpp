#include "disklab/frame.hpp"

#include <cmath>
#include <stdexcept>

namespace disklab {

FrameField::FrameField(const DiskGrid& g, int n) : g_(&g), n_(n) {
  if (n < 2) throw std::invalid_argument("FrameField: need n >= 2");
  const size_t total = static_cast<size_t>(g.n()) * g.n() * n * n;
  a_.assign(total, 0.0);
  for (int idx = 0; idx < g.n() * g.n(); ++idx)
    for (int d = 0; d < n; ++d) block(idx)[d * n + d] = 1.0;
}

Eigen::MatrixXd FrameField::at(int idx) const {
  Eigen::MatrixXd m(n_, n_);
  const double* b = block(idx);
  for (int r = 0; r < n_; ++r)
    for (int c = 0; c < n_; ++c) m(r, c) = b[r * n_ + c];
  return m;
}

void FrameField::set(int idx, const Eigen::MatrixXd& m) {
  double* b = block(idx);
  for (int r = 0; r < n_; ++r)
    for (int c = 0; c < n_; ++c) b[r * n_ + c] = m(r, c);
}

double FrameField::orth_defect() const {
  double worst = 0.0;
  auto scan = [&](const std::vector<int>& nodes) {
    for (int idx : nodes) {
      const Eigen::MatrixXd r = at(idx);
      worst = std::max(worst,
                       (r.transpose() * r - Eigen::MatrixXd::Identity(n_, n_)).norm());
    }
  };
  scan(g_->interior());
  scan(g_->boundary());
  return worst;
}

MatrixField FrameField::as_matrix_field() const {
  MatrixField m(*g_, n_);
  const int total = g_->n() * g_->n();
  for (int idx = 0; idx < total; ++idx) {
    const double* b = block(idx);
    for (int r = 0; r < n_; ++r)
      for (int c = 0; c < n_; ++c) m.entry(r, c)[idx] = b[r * n_ + c];
  }
  return m;
}

Eigen::MatrixXd qr_retract(const Eigen::MatrixXd& m) {
  const int n = static_cast<int>(m.cols());
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd r = qr.matrixQR();
  for (int i = 0; i < n; ++i)
    if (r(i, i) < 0.0) q.col(i) = -q.col(i);
  if (q.determinant() <= 0.0)
    throw std::runtime_error("qr_retract: input too far from a rotation");
  return q;
}

}  // namespace disklab
