#include "carleson/model_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "carleson/error.hpp"

namespace carleson {

namespace {

double factorial(unsigned n) {
  double f = 1.0;
  for (unsigned k = 2; k <= n; ++k) f *= k;
  return f;
}

double binomial(unsigned n, unsigned k) {
  double b = 1.0;
  for (unsigned i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

cplx ipow(cplx z, unsigned n) {
  cplx r{1.0, 0.0};
  for (unsigned k = 0; k < n; ++k) r *= z;
  return r;
}

Eigen::VectorXd inverse_sqrt_diagonal(const DenseMatrix& g) {
  Eigen::VectorXd s(g.rows());
  for (Eigen::Index i = 0; i < g.rows(); ++i) s(i) = 1.0 / std::sqrt(g(i, i).real());
  return s;
}

DenseMatrix equilibrate(const DenseMatrix& g, const Eigen::VectorXd& s) {
  return s.asDiagonal() * g * s.asDiagonal();
}

std::vector<Atom> span_atoms(const FiniteBlaschke& b) {
  std::vector<Atom> atoms;
  for (const auto& z : b.zeros())
    for (unsigned j = 0; j < z.multiplicity; ++j) atoms.push_back({z.zero, j});
  return atoms;
}

double quadratic_form(const DenseMatrix& g, const Eigen::VectorXcd& c) {
  return (c.adjoint() * g * c)(0, 0).real();
}

}  // namespace

cplx szego_inner(const Atom& a, const Atom& b) {
  // i-th derivative in z of j! z^j (1 - conj(w) z)^{-(j+1)} at z = v, by
  // Leibniz: sum_k C(i,k) j!/(j-k)! v^{j-k} (i+j-k)! conj(w)^{i-k}
  //          / (1 - conj(w) v)^{i+j-k+1}.
  const cplx v = a.node.value();
  const cplx wb = std::conj(b.node.value());
  const unsigned i = a.order;
  const unsigned j = b.order;
  const cplx d = 1.0 - wb * v;
  cplx sum{0.0, 0.0};
  for (unsigned k = 0; k <= std::min(i, j); ++k) {
    double coeff = binomial(i, k) * factorial(j) / factorial(j - k) * factorial(i + j - k);
    sum += coeff * ipow(v, j - k) * ipow(wb, i - k) / ipow(d, i + j - k + 1);
  }
  return sum;
}

cplx kernel_value(const Atom& atom, cplx z) {
  const unsigned j = atom.order;
  return factorial(j) * ipow(z, j) / ipow(1.0 - std::conj(atom.node.value()) * z, j + 1);
}

Series kernel_jet(const Atom& atom, cplx z, std::size_t length) {
  Series zj = series::power(series::variable(z, length), atom.order);
  Series inv = series::inverse_linear_power(std::conj(atom.node.value()), z, atom.order + 1, length);
  return series::scale(series::multiply(zj, inv), factorial(atom.order));
}

DenseMatrix cross_gram(const std::vector<Atom>& rows, const std::vector<Atom>& cols) {
  DenseMatrix g(rows.size(), cols.size());
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = 0; b < cols.size(); ++b) g(a, b) = szego_inner(rows[a], cols[b]);
  return g;
}

KernelBasis::KernelBasis(std::vector<Atom> atoms, std::optional<FiniteBlaschke> source)
    : atoms_(std::move(atoms)), source_(std::move(source)) {
  if (atoms_.empty()) throw InputError("kernel basis: no atoms");
  gram_ = cross_gram(atoms_, atoms_);
  // Exact Hermitian symmetry; the closed form is symmetric only up to rounding.
  gram_ = (0.5 * (gram_ + gram_.adjoint())).eval();
  scale_ = inverse_sqrt_diagonal(gram_);
  DenseMatrix gs = equilibrate(gram_, scale_);
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(gs, Eigen::EigenvaluesOnly);
  double lo = es.eigenvalues().minCoeff();
  double hi = es.eigenvalues().maxCoeff();
  if (!(lo > kGramConditioning * hi))
    throw ConditioningError("kernel basis: Gram matrix is numerically singular (eigenvalue ratio " +
                            std::to_string(lo / hi) + ")");
  llt_.compute(gs);
  if (llt_.info() != Eigen::Success) throw ConditioningError("kernel basis: Cholesky failed");
  for (const auto& a : atoms_) {
    if (1.0 - a.node.abs() < kNearBoundary) {
      diagnostics_.push_back("node within 1e-4 of the unit circle; Gram entries are large");
      break;
    }
  }
}

Eigen::VectorXcd KernelBasis::solve(const Eigen::VectorXcd& rhs) const {
  Eigen::VectorXcd t = scale_.asDiagonal() * rhs;
  return scale_.asDiagonal() * llt_.solve(t);
}

Eigen::MatrixXcd KernelBasis::solve(const Eigen::MatrixXcd& rhs) const {
  Eigen::MatrixXcd t = scale_.asDiagonal() * rhs;
  return scale_.asDiagonal() * llt_.solve(t);
}

DenseMatrix KernelBasis::cholesky_factor() const {
  DenseMatrix l = llt_.matrixL();
  return scale_.cwiseInverse().asDiagonal() * l;
}

std::pair<double, double> KernelBasis::gram_spectrum() const {
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(gram_, Eigen::EigenvaluesOnly);
  return {es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff()};
}

std::shared_ptr<const KernelBasis> model_basis(const FiniteBlaschke& b) {
  if (b.degree() == 0) throw InputError("model_basis: degree must be at least 1");
  const auto& zs = b.zeros();
  for (std::size_t i = 0; i < zs.size(); ++i)
    for (std::size_t k = i + 1; k < zs.size(); ++k)
      if (pseudo_distance_raw(zs[i].zero.value(), zs[k].zero.value()) < kNodeSeparation)
        throw ConditioningError("model_basis: zeros closer than 1e-6");
  return std::make_shared<const KernelBasis>(span_atoms(b), b);
}

cplx ModelVector::evaluate(cplx z) const {
  cplx s{0.0, 0.0};
  const auto& atoms = basis->atoms();
  for (std::size_t a = 0; a < atoms.size(); ++a) s += coefficients(a) * kernel_value(atoms[a], z);
  return s;
}

Series ModelVector::jet(cplx z, std::size_t length) const {
  Series s(length, cplx{0.0, 0.0});
  const auto& atoms = basis->atoms();
  for (std::size_t a = 0; a < atoms.size(); ++a)
    s = series::add(s, series::scale(kernel_jet(atoms[a], z, length), coefficients(a)));
  return s;
}

double ModelVector::norm() const {
  return std::sqrt(std::max(0.0, quadratic_form(basis->gram(), coefficients)));
}

Projection project(const DiskPoint& w, std::shared_ptr<const KernelBasis> basis) {
  const auto& atoms = basis->atoms();
  const double nrm = std::sqrt(1.0 - std::norm(w.value()));
  const Atom target{w, 0};
  Eigen::VectorXcd r(atoms.size());
  for (std::size_t a = 0; a < atoms.size(); ++a) r(a) = szego_inner(atoms[a], target) * nrm;
  Eigen::VectorXcd c = basis->solve(r);
  double captured = r.dot(c).real();  // <Px, x> = ||Px||^2
  Projection p{ModelVector{std::move(basis), std::move(c)}, 0.0};
  p.distance = std::sqrt(std::max(0.0, 1.0 - captured));
  return p;
}

double dual_extremal_norm(const DiskPoint& w, const KernelBasis& basis) {
  // Minimizer lies in span(basis, x); the constraints <y, e_a> = 0 and
  // <y, x> = 1 read G_aug v = e_last, so ||y||^2 = (G_aug^{-1})_{last,last}.
  std::vector<Atom> atoms = basis.atoms();
  atoms.push_back({w, 0});
  DenseMatrix g = cross_gram(atoms, atoms);
  const Eigen::Index n = g.rows() - 1;
  const double nrm = std::sqrt(1.0 - std::norm(w.value()));
  g.row(n) *= nrm;
  g.col(n) *= nrm;
  Eigen::VectorXd s = inverse_sqrt_diagonal(g);
  Eigen::FullPivLU<DenseMatrix> lu(equilibrate(g, s));
  if (!lu.isInvertible()) return std::numeric_limits<double>::infinity();
  Eigen::VectorXcd e = Eigen::VectorXcd::Zero(g.rows());
  e(n) = s(n);
  Eigen::VectorXcd v = lu.solve(e);
  return std::sqrt(std::max(0.0, (s(n) * v(n)).real()));
}

double sine(const KernelBasis& k, const KernelBasis& l) {
  DenseMatrix gkl = cross_gram(k.atoms(), l.atoms());
  DenseMatrix s = k.gram() - gkl * l.solve(DenseMatrix(gkl.adjoint()));
  Eigen::VectorXd d = inverse_sqrt_diagonal(k.gram());
  DenseMatrix ss = equilibrate(s, d);
  ss = (0.5 * (ss + ss.adjoint())).eval();
  DenseMatrix gs = equilibrate(k.gram(), d);
  Eigen::GeneralizedSelfAdjointEigenSolver<DenseMatrix> es(ss, gs, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw ConditioningError("sine: generalized eigensolver failed");
  double mu = std::clamp(es.eigenvalues().minCoeff(), 0.0, 1.0);
  return std::sqrt(mu);
}

FiniteBlaschke blaschke_lcm(const FiniteBlaschke& a, const FiniteBlaschke& b) {
  std::vector<BlaschkeZero> zs = a.zeros();
  for (const auto& z : b.zeros()) {
    auto it = std::find_if(zs.begin(), zs.end(), [&](const BlaschkeZero& x) { return x.zero == z.zero; });
    if (it == zs.end())
      zs.push_back(z);
    else
      it->multiplicity = std::max(it->multiplicity, z.multiplicity);
  }
  return FiniteBlaschke(std::move(zs));
}

namespace {

// <u, v> for u, v over (possibly different) kernel bases.
cplx inner(const ModelVector& u, const ModelVector& v) {
  DenseMatrix c = cross_gram(v.basis->atoms(), u.basis->atoms());
  return (v.coefficients.adjoint() * c * u.coefficients)(0, 0);
}

double distance_between(const ModelVector& u, const ModelVector& v) {
  const double nu = u.norm(), nv = v.norm();
  double d2 = nu * nu + nv * nv - 2.0 * inner(u, v).real();
  return std::sqrt(std::max(0.0, d2));
}

}  // namespace

Witness theorem55_witness(const FiniteBlaschke& b1, const FiniteBlaschke& b2, const DiskPoint& z) {
  Witness w{};
  const double m1 = b1.modulus(z.value());
  const double m2 = b2.modulus(z.value());
  w.epsilon = std::max(m1, m2);
  if (!(w.epsilon < 1.0)) throw DomainError("theorem55_witness: requires max |B_i(z)| < 1");
  Projection p1 = project(z, model_basis(b1));
  Projection p2 = project(z, model_basis(b2));
  w.x1 = p1.vector;
  w.x2 = p2.vector;
  w.norm1 = w.x1.norm();
  w.norm2 = w.x2.norm();
  w.norm_floor = std::sqrt(1.0 - w.epsilon * w.epsilon);
  w.difference = distance_between(w.x1, w.x2);

  Projection y = project(z, model_basis(blaschke_lcm(b1, b2)));
  w.residual_sq1 = std::pow(distance_between(w.x1, y.vector), 2);
  w.residual_sq2 = std::pow(distance_between(w.x2, y.vector), 2);
  w.identity_rhs1 = m1 * m1 * (1.0 - m2 * m2);
  w.identity_rhs2 = m2 * m2 * (1.0 - m1 * m1);
  w.coprime = blaschke_lcm(b1, b2).degree() == b1.degree() + b2.degree();
  return w;
}

VectorFamily VectorFamily::span_of(std::shared_ptr<const KernelBasis> basis) {
  const auto n = static_cast<Eigen::Index>(basis->dimension());
  return {std::move(basis), Eigen::MatrixXcd::Identity(n, n)};
}

FrameBounds frame_bounds(const std::vector<VectorFamily>& families) {
  if (families.empty()) throw InputError("frame_bounds: no subspaces");
  std::vector<Atom> atoms;
  std::vector<Eigen::MatrixXcd> blocks;
  Eigen::Index total = 0;
  for (const auto& f : families) {
    if (static_cast<std::size_t>(f.coefficients.rows()) != f.basis->dimension())
      throw InputError("frame_bounds: coefficient rows do not match the basis");
    DenseMatrix g = f.coefficients.adjoint() * f.basis->gram() * f.coefficients;
    g = (0.5 * (g + g.adjoint())).eval();
    Eigen::LLT<DenseMatrix> llt(g);
    if (llt.info() != Eigen::Success)
      throw ConditioningError("frame_bounds: family vectors are linearly dependent");
    // Q = C L^{-*}, so Q^* G Q = I.
    DenseMatrix lt = llt.matrixL().adjoint();
    Eigen::MatrixXcd q =
        lt.triangularView<Eigen::Upper>().solve<Eigen::OnTheRight>(f.coefficients);
    blocks.push_back(q);
    atoms.insert(atoms.end(), f.basis->atoms().begin(), f.basis->atoms().end());
    total += q.cols();
  }
  if (static_cast<std::size_t>(total) > kFrameDimensionCap)
    throw InputError("frame_bounds: total dimension exceeds 2000");
  Eigen::MatrixXcd q = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(atoms.size()), total);
  Eigen::Index r = 0, c = 0;
  for (const auto& b : blocks) {
    q.block(r, c, b.rows(), b.cols()) = b;
    r += b.rows();
    c += b.cols();
  }
  DenseMatrix joint = q.adjoint() * cross_gram(atoms, atoms) * q;
  joint = (0.5 * (joint + joint.adjoint())).eval();
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(joint, Eigen::EigenvaluesOnly);
  return {std::max(0.0, es.eigenvalues().minCoeff()), es.eigenvalues().maxCoeff()};
}

FrameBounds frame_bounds(const std::vector<std::shared_ptr<const KernelBasis>>& subspaces) {
  std::vector<VectorFamily> fams;
  for (const auto& s : subspaces) fams.push_back(VectorFamily::span_of(s));
  return frame_bounds(fams);
}

ThreeKernel three_kernel_identity(const DiskPoint& w1, const DiskPoint& w2, const DiskPoint& w3) {
  if (w1 == w2) throw InputError("three_kernel_identity: w1 and w2 must differ");
  auto basis = std::make_shared<const KernelBasis>(std::vector<Atom>{{w1, 0}, {w2, 0}});
  ThreeKernel t{};
  t.lhs = project(w3, basis).distance;
  t.rhs = std::abs(blaschke_factor(w1, w3.value()) * blaschke_factor(w2, w3.value()));
  return t;
}

}  // namespace carleson
