#include "dikin/types.hpp"

#include <cmath>

namespace dikin {

SymPD::SymPD(Matrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw ShapeError("SymPD: matrix is not square");
  const double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
  if ((m_ - m_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw ShapeError("SymPD: matrix is not symmetric");
  }
  m_ = 0.5 * (m_ + m_.transpose());
}

const Eigen::LLT<Matrix>& SymPD::llt() const {
  if (!llt_) {
    llt_.emplace(m_);
    if (llt_->info() != Eigen::Success) {
      llt_.reset();
      throw FactorizationError("SymPD: matrix is not positive definite");
    }
  }
  return *llt_;
}

bool SymPD::is_pd() const {
  try {
    llt();
    return true;
  } catch (const FactorizationError&) {
    return false;
  }
}

double SymPD::log_det() const {
  if (!log_det_) {
    const auto& l = llt().matrixLLT();
    double s = 0.0;
    for (Index i = 0; i < l.rows(); ++i) s += std::log(l(i, i));
    log_det_ = 2.0 * s;
  }
  return *log_det_;
}

Vector SymPD::solve(const Vector& v) const { return llt().solve(v); }

Matrix SymPD::inverse() const {
  return llt().solve(Matrix::Identity(m_.rows(), m_.cols()));
}

}  // namespace dikin
