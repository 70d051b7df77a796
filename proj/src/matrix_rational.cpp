#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "viscodual/errors.hpp"
#include "viscodual/rational.hpp"

namespace viscodual {
namespace {

// Pencil eigenvalues, in units of p / sigma.
constexpr double kClusterTol = 1e-9;
constexpr double kClusterAbs = 1e-10;
constexpr double kMuTol = 1e-13;
constexpr double kNullTol = 1e-10;

double rate_scale(const MatrixCbf& q) {
  if (!q.modes.empty()) return std::sqrt(q.modes.front().rate * q.modes.back().rate);
  const double nl = q.linear.norm();
  const double nc = q.constant.norm();
  return (nl > 0.0 && nc > 0.0) ? nc / nl : 1.0;
}

double cbf_scale(const MatrixCbf& q, double sigma) {
  double s = std::max(q.linear.norm() * sigma, q.constant.norm());
  double modes = 0.0;
  for (const auto& m : q.modes) modes += m.weight.norm();
  return std::max(s, modes);
}

MatrixCbf rescaled(const MatrixCbf& q, double sigma) {
  MatrixCbf out{q.linear * sigma, q.constant, q.modes};
  for (auto& m : out.modes) m.rate /= sigma;
  return out;
}

Dense6 symmetric_inverse(const Dense6& m) {
  Eigen::LDLT<Dense6> ldlt(m);
  Dense6 inv = ldlt.solve(Dense6::Identity());
  if (ldlt.info() != Eigen::Success || !inv.allFinite())
    inv = m.fullPivLu().inverse();
  return 0.5 * (inv + inv.transpose());
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

// V (V^T M V)^{-1} V^T for a column basis V.
Dense6 compressed_inverse(const Eigen::MatrixXd& v, const Dense6& m) {
  if (v.cols() == 0) return Dense6::Zero();
  const Eigen::MatrixXd small = v.transpose() * m * v;
  Eigen::LLT<Eigen::MatrixXd> llt(0.5 * (small + small.transpose()));
  if (llt.info() != Eigen::Success)
    throw NumericError("derivative is not positive definite on a null space");
  const Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(v.cols(), v.cols()));
  Dense6 out = v * inv * v.transpose();
  return 0.5 * (out + out.transpose());
}

}  // namespace

Dense6 MatrixCbf::operator()(double p) const {
  Dense6 v = linear.dense() * p + constant.dense();
  for (const auto& m : modes) v += m.weight.dense() * (p / (p + m.rate));
  return v;
}

Dense6 MatrixCbf::derivative(double p) const {
  Dense6 d = linear.dense();
  for (const auto& m : modes) {
    const double x = p + m.rate;
    d += m.weight.dense() * (m.rate / (x * x));
  }
  return d;
}

bool MatrixCbf::nondegenerate() const {
  Dense6 sum = linear.dense() + constant.dense();
  for (const auto& m : modes) sum += m.weight.dense();
  return Matrix6::from_upper(sum).is_positive_definite(1e-12);
}

Dense6 MatrixStieltjes::operator()(double p) const {
  Dense6 v = constant.dense() + pole_at_zero.dense() / p;
  for (const auto& m : modes) v += m.weight.dense() / (p + m.rate);
  return v;
}

MatrixCbf as_cbf(const MatrixRelaxation& k) {
  return MatrixCbf{k.newtonian(), k.equilibrium(), k.modes()};
}

MatrixCbf as_cbf(const MatrixCreep& k) {
  return MatrixCbf{k.instantaneous(), k.fluidity(), k.modes()};
}

Dense6 MatrixPolynomial::operator()(double p) const {
  Dense6 v = Dense6::Zero();
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) v = v * p + it->dense();
  return v;
}

Dense6 MatrixPolynomial::derivative(double p) const {
  Dense6 v = Dense6::Zero();
  for (std::size_t i = coeffs_.size(); i-- > 1;) v = v * p + coeffs_[i].dense() * static_cast<double>(i);
  return v;
}

MatrixCbfPolynomial matrix_cbf_as_polynomial(const MatrixCbf& q) {
  if (!q.nondegenerate())
    throw ValidationError("kernel has a direction with identically zero response");
  const std::size_t n = q.modes.size();
  std::vector<double> rates;
  for (const auto& m : q.modes) rates.push_back(m.rate);
  const RealPolynomial d = RealPolynomial::from_negated_roots(rates);

  std::vector<Matrix6> coeffs(n + 2);
  const auto& dc = d.coeffs();
  for (std::size_t i = 0; i < dc.size(); ++i) {
    coeffs[i] += q.constant * dc[i];
    coeffs[i + 1] += q.linear * dc[i];
  }
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<double> others;
    for (std::size_t j = 0; j < n; ++j)
      if (j != k) others.push_back(rates[j]);
    const auto e = RealPolynomial::from_negated_roots(others).coeffs();
    for (std::size_t i = 0; i < e.size(); ++i) coeffs[i + 1] += q.modes[k].weight * e[i];
  }
  while (!coeffs.empty() && coeffs.back().is_zero()) coeffs.pop_back();
  return {MatrixPolynomial(std::move(coeffs)), d};
}

MatrixCbfPolynomial matrix_cbf_as_polynomial(const MatrixRelaxation& k) {
  return matrix_cbf_as_polynomial(as_cbf(k));
}

std::vector<PencilRoot> matrix_pencil_roots(const MatrixCbf& q) {
  const double sigma = rate_scale(q);
  const MatrixCbf qs = rescaled(q, sigma);
  if (!qs.nondegenerate())
    throw ValidationError("kernel has a direction with identically zero response");

  // With G_k = F_k F_k^T (F_k of full column rank) and y_k = F_k^T v / (p + r_k),
  // Q(p) v = 0 becomes (K + p M) x = 0 for x = [v, y_1, ..., y_n] with
  //   K = [[C + sum G_k, -r_k F_k], [-r_k F_k^T, r_k^2 I]],  M = diag(L, r_k I).
  // K and M are PSD and K + M is PD for a nondegenerate Q, so K x = mu (K + M) x
  // has real mu in [0, 1] and the roots are s = mu / (1 - mu).
  std::vector<Eigen::MatrixXd> factors;
  int size = 6;
  for (const auto& m : qs.modes) {
    Eigen::SelfAdjointEigenSolver<Dense6> es(m.weight.dense());
    const double top = es.eigenvalues().cwiseAbs().maxCoeff();
    std::vector<int> keep;
    for (int i = 0; i < 6; ++i)
      if (es.eigenvalues()(i) > kNullTol * top) keep.push_back(i);
    Eigen::MatrixXd f(6, static_cast<int>(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c)
      f.col(static_cast<int>(c)) = es.eigenvectors().col(keep[c]) * std::sqrt(es.eigenvalues()(keep[c]));
    size += static_cast<int>(f.cols());
    factors.push_back(std::move(f));
  }
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(size, size);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(size, size);
  k.topLeftCorner<6, 6>() = qs.constant.dense();
  m.topLeftCorner<6, 6>() = qs.linear.dense();
  int offset = 6;
  for (std::size_t j = 0; j < qs.modes.size(); ++j) {
    const double r = qs.modes[j].rate;
    const Eigen::MatrixXd& f = factors[j];
    const int w = static_cast<int>(f.cols());
    k.topLeftCorner<6, 6>() += qs.modes[j].weight.dense();
    k.block(0, offset, 6, w) = -r * f;
    k.block(offset, 0, w, 6) = -r * f.transpose();
    k.block(offset, offset, w, w).diagonal().setConstant(r * r);
    m.block(offset, offset, w, w).diagonal().setConstant(r);
    offset += w;
  }
  // Symmetric diagonal scaling so that K + M has unit diagonal; the r_k^2
  // blocks are otherwise tiny for slow modes and the solve loses accuracy.
  const Eigen::VectorXd d = (k + m).diagonal().cwiseSqrt().cwiseInverse();
  k = d.asDiagonal() * k * d.asDiagonal();
  m = d.asDiagonal() * m * d.asDiagonal();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(k, k + m, Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
  if (ges.info() != Eigen::Success) throw NumericError("symmetric pencil is not definite");

  // With X^T (K + M) X = I, (K + p M)^{-1} = sum_i x_i x_i^T / (mu_i + p (1 - mu_i)) and
  // its leading 6x6 block is Q(p)^{-1}.  Each finite root contributes v_i v_i^T / (x_i^T M x_i).
  // K has null space null(C) x {0} (roots at zero) and M has null(L) x {0}
  // (roots at infinity); mu is ascending, so these are the outermost eigenvalues.
  const double scale = cbf_scale(qs, 1.0);
  const int n_zero = static_cast<int>(null_space(qs.constant.dense(), kNullTol, scale).cols());
  const int n_inf = static_cast<int>(null_space(qs.linear.dense(), kNullTol, scale).cols());
  struct Pair {
    double mu;
    double rate;
    Eigen::VectorXd x;
  };
  std::vector<Pair> pairs;
  for (int i = n_zero; i < size - n_inf; ++i) {
    const Eigen::VectorXd x = ges.eigenvectors().col(i);
    const double rate = x.dot(k * x) / x.dot(m * x);
    if (!(rate > 0.0) || !std::isfinite(rate))
      throw NumericError("pencil eigenvalue at a nonpositive rate");
    pairs.push_back({ges.eigenvalues()(i), rate, x});
  }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) { return a.rate < b.rate; });

  // A semisimple root of rounded data comes out split by roughly eps * cond;
  // chained gaps within kClusterTol relative plus kClusterAbs (scaled) are one root.
  const auto same = [](const Pair& a, const Pair& b) {
    return b.rate - a.rate <= kClusterTol * b.rate + kClusterAbs || std::abs(b.mu - a.mu) <= kMuTol;
  };
  std::vector<PencilRoot> roots;
  std::size_t i = 0;
  while (i < pairs.size()) {
    std::size_t j = i + 1;
    while (j < pairs.size() && same(pairs[j - 1], pairs[j])) ++j;
    const int mult = static_cast<int>(j - i);
    Eigen::MatrixXd xv(6, mult);
    Dense6 h = Dense6::Zero();
    double rate = 0.0;
    for (std::size_t c = i; c < j; ++c) {
      const Vector6 v = d.head<6>().cwiseProduct(pairs[c].x.head<6>());
      xv.col(static_cast<int>(c - i)) = v;
      h += v * v.transpose() / pairs[c].x.dot(m * pairs[c].x);
      rate += pairs[c].rate / mult;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(xv, Eigen::ComputeThinU);
    const double smax = svd.singularValues()(0);
    int rank = 0;
    while (rank < mult && svd.singularValues()(rank) > 1e-8 * smax) ++rank;
    roots.push_back({rate * sigma, svd.matrixU().leftCols(rank), Dense6(0.5 * sigma * (h + h.transpose()))});
    i = j;
  }
  return roots;
}

MatrixStieltjes matrix_residues(const MatrixCbf& q, const std::vector<PencilRoot>& roots,
                                ResidueDiagnostics* diagnostics) {
  const double sigma = rate_scale(q);
  const double scale = cbf_scale(q, sigma);
  double min_rel = 0.0;
  auto clip = [&](const Dense6& m, double ref, const char* what) {
    Matrix6 out;
    double lo = 0.0;
    const double s = ref > 0.0 ? ref : 1.0;
    if (!clip_psd(m, 1e-10, s, out, &lo))
      throw NumericError(std::string(what) + " is not positive semidefinite (eigenvalue " +
                         sci(lo) + ")");
    min_rel = std::min(min_rel, lo / s);
    return out;
  };

  MatrixStieltjes out;
  for (const auto& root : roots) out.modes.push_back({root.rate, clip(root.residue, root.residue.norm(), "residue")});

  const Eigen::MatrixXd v0 = null_space(q.constant.dense(), kNullTol, scale);
  Dense6 d0 = Dense6::Zero();
  if (v0.cols() > 0) d0 = compressed_inverse(v0, q.derivative(0.0));
  out.pole_at_zero = clip(d0, d0.norm(), "pole at zero");

  // Constant term: supported on null(linear).
  const Eigen::MatrixXd u = null_space(q.linear.dense() * sigma, kNullTol, scale);
  const Dense6 proj = u * u.transpose();
  double min_rate = 0.0;
  for (const auto& m : q.modes) min_rate = min_rate == 0.0 ? m.rate : std::min(min_rate, m.rate);
  for (const auto& r : roots) min_rate = min_rate == 0.0 ? r.rate : std::min(min_rate, r.rate);

  double cond = 1.0;
  auto constant_at = [&](double p, double& ref) {
    const Dense6 qp = q(p);
    const Vector6 ev = Eigen::SelfAdjointEigenSolver<Dense6>(qp, Eigen::EigenvaluesOnly).eigenvalues().cwiseAbs();
    cond = std::max(cond, ev.maxCoeff() / std::max(ev.minCoeff(), 1e-300));
    const Dense6 s = symmetric_inverse(qp);
    Dense6 c = s - d0 / p;
    // magnitude of the terms being subtracted
    ref = s.norm() + d0.norm() / p;
    for (const auto& m : out.modes) {
      c -= m.weight.dense() / (p + m.rate);
      ref += m.weight.norm() / (p + m.rate);
    }
    return Dense6(proj * c * proj);
  };
  const double p1 = 1.0 + 2.0 * q.max_rate();
  const double p2 = min_rate > 0.0 ? 0.5 * min_rate : 0.5;
  double ref1 = 0.0, ref2 = 0.0;
  const Dense6 a1 = constant_at(p1, ref1);
  const Dense6 a2 = constant_at(p2, ref2);
  const double mismatch = (a1 - a2).norm() / std::max({ref1, ref2, 1e-300});
  // The evaluated inverse itself carries an error of order eps * cond(Q).
  if (mismatch > std::max(1e-8, 1e3 * std::numeric_limits<double>::epsilon() * cond))
    throw NumericError("constant term differs between evaluation points (relative " +
                       sci(mismatch) + ")");
  out.constant = u.cols() == 0 ? Matrix6::zero() : clip(a1, ref1, "constant term");

  if (diagnostics) {
    diagnostics->min_relative_eigenvalue = min_rel;
    diagnostics->constant_mismatch = mismatch;
  }
  return out;
}

MatrixStieltjes invert_cbf(const MatrixCbf& q, ResidueDiagnostics* diagnostics) {
  return matrix_residues(q, matrix_pencil_roots(q), diagnostics);
}

}  // namespace viscodual
