#include "relcrypt/qsmall.hpp"

#include "relcrypt/error.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>
#include <string>

namespace relcrypt::q {

namespace {

constexpr double kStructTol = 1e-12;
constexpr double kEigTol = 1e-10;

void check_dim(int d, const char* what) {
  if (d < 1 || d > kMaxDim * kMaxDim)
    throw PreconditionError(std::string(what) + ": dimension " + std::to_string(d) + " out of range");
}

}  // namespace

DensityMatrix::DensityMatrix(Matrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw PreconditionError("density matrix must be square");
  check_dim(static_cast<int>(m_.rows()), "density matrix");
  if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > kStructTol) throw PreconditionError("density matrix not Hermitian");
  if (std::abs(m_.trace() - Complex(1)) > kStructTol) throw PreconditionError("density matrix trace is not 1");
  Eigen::SelfAdjointEigenSolver<Matrix> es(m_);
  if (es.eigenvalues().minCoeff() < -kEigTol) throw PreconditionError("density matrix has a negative eigenvalue");
}

DensityMatrix DensityMatrix::pure(const Vector& psi) {
  Vector v = psi / psi.norm();
  return DensityMatrix(v * v.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(int d) {
  check_dim(d, "maximally_mixed");
  return DensityMatrix(Matrix::Identity(d, d) / static_cast<double>(d));
}

Vector maximally_entangled_vector(int d) {
  check_dim(d, "maximally_entangled");
  Vector v = Vector::Zero(d * d);
  for (int i = 0; i < d; ++i) v(i * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
  return v;
}

DensityMatrix DensityMatrix::maximally_entangled(int d) { return pure(maximally_entangled_vector(d)); }

QuantumChannel::QuantumChannel(int din, int dout, std::vector<Matrix> kraus)
    : din_(din), dout_(dout), kraus_(std::move(kraus)) {
  check_dim(din, "channel input");
  check_dim(dout, "channel output");
  if (kraus_.empty()) throw PreconditionError("channel needs at least one Kraus operator");
  Matrix sum = Matrix::Zero(din, din);
  for (const auto& k : kraus_) {
    if (k.rows() != dout || k.cols() != din) throw PreconditionError("Kraus operator has the wrong shape");
    sum += k.adjoint() * k;
  }
  if ((sum - Matrix::Identity(din, din)).cwiseAbs().maxCoeff() > kStructTol)
    throw PreconditionError("Kraus operators are not complete");
}

Matrix QuantumChannel::apply(const Matrix& rho) const {
  if (rho.rows() != din_ || rho.cols() != din_) throw PreconditionError("channel input dimension mismatch");
  Matrix out = Matrix::Zero(dout_, dout_);
  for (const auto& k : kraus_) out += k * rho * k.adjoint();
  return out;
}

DensityMatrix QuantumChannel::apply(const DensityMatrix& rho) const { return DensityMatrix(apply(rho.matrix())); }

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  const Matrix& x = a.matrix();
  const Matrix& y = b.matrix();
  Matrix out(x.rows() * y.rows(), x.cols() * y.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
  return DensityMatrix(out);
}

DensityMatrix partial_trace(const DensityMatrix& rho, int dim_a, int dim_b, int which) {
  if (dim_a * dim_b != rho.dim())
    throw PreconditionError("partial_trace: " + std::to_string(dim_a) + "x" + std::to_string(dim_b) +
                            " does not match dimension " + std::to_string(rho.dim()));
  if (which != 0 && which != 1) throw PreconditionError("partial_trace: subsystem must be 0 or 1");
  const Matrix& m = rho.matrix();
  const int keep = which == 0 ? dim_b : dim_a;
  const int gone = which == 0 ? dim_a : dim_b;
  Matrix out = Matrix::Zero(keep, keep);
  for (int i = 0; i < keep; ++i)
    for (int j = 0; j < keep; ++j)
      for (int k = 0; k < gone; ++k) {
        const int r = which == 0 ? k * dim_b + i : i * dim_b + k;
        const int c = which == 0 ? k * dim_b + j : j * dim_b + k;
        out(i, j) += m(r, c);
      }
  return DensityMatrix(out);
}

QuantumChannel identity_channel(int d) { return QuantumChannel(d, d, {Matrix::Identity(d, d)}); }

QuantumChannel replacement_channel(const DensityMatrix& tau) {
  const int d = tau.dim();
  Eigen::SelfAdjointEigenSolver<Matrix> es(tau.matrix());
  std::vector<Matrix> kraus;
  for (int j = 0; j < d; ++j) {
    const double lambda = std::max(0.0, es.eigenvalues()(j));
    if (lambda == 0.0) continue;
    for (int i = 0; i < d; ++i) {
      Matrix k = Matrix::Zero(d, d);
      k.col(i) = std::sqrt(lambda) * es.eigenvectors().col(j);
      kraus.push_back(std::move(k));
    }
  }
  // Eigenvalues clipped at zero shift the trace by at most kEigTol; renormalise.
  double total = 0;
  for (int j = 0; j < d; ++j) total += std::max(0.0, es.eigenvalues()(j));
  for (auto& k : kraus) k /= std::sqrt(total);
  return QuantumChannel(d, d, std::move(kraus));
}

QuantumChannel depolarizing_channel(int d) {
  check_dim(d, "depolarizing");
  const double pi = std::acos(-1.0);
  Matrix x = Matrix::Zero(d, d), z = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    x((i + 1) % d, i) = 1;
    z(i, i) = std::polar(1.0, 2 * pi * i / d);
  }
  std::vector<Matrix> kraus;
  Matrix xa = Matrix::Identity(d, d);
  for (int a = 0; a < d; ++a, xa = x * xa) {
    Matrix zb = Matrix::Identity(d, d);
    for (int b = 0; b < d; ++b, zb = z * zb) kraus.push_back(xa * zb / static_cast<double>(d));
  }
  return QuantumChannel(d, d, std::move(kraus));
}

QuantumChannel mixture(const std::vector<double>& weights, const std::vector<QuantumChannel>& channels) {
  if (weights.size() != channels.size() || channels.empty())
    throw PreconditionError("mixture needs one weight per channel");
  std::vector<Matrix> kraus;
  for (std::size_t i = 0; i < channels.size(); ++i) {
    if (weights[i] < 0) throw PreconditionError("mixture weights must be non-negative");
    if (channels[i].input_dim() != channels[0].input_dim() || channels[i].output_dim() != channels[0].output_dim())
      throw PreconditionError("mixture of channels with different dimensions");
    for (const auto& k : channels[i].kraus()) kraus.push_back(std::sqrt(weights[i]) * k);
  }
  return QuantumChannel(channels[0].input_dim(), channels[0].output_dim(), std::move(kraus));
}

Matrix choi_state(const QuantumChannel& c) {
  const int d = c.input_dim();
  const int e = c.output_dim();
  const Vector phi = maximally_entangled_vector(d);
  const Matrix in = phi * phi.adjoint();
  // Apply K ⊗ I to the first factor.
  Matrix out = Matrix::Zero(e * d, e * d);
  for (const auto& k : c.kraus()) {
    Matrix big = Matrix::Zero(e * d, d * d);
    for (int r = 0; r < e; ++r)
      for (int s = 0; s < d; ++s)
        big.block(r * d, s * d, d, d) = k(r, s) * Matrix::Identity(d, d);
    out += big * in * big.adjoint();
  }
  return out;
}

double epr_test_success(const QuantumChannel& c) {
  if (c.input_dim() != c.output_dim()) throw PreconditionError("epr_test_success needs a d-to-d channel");
  const Vector phi = maximally_entangled_vector(c.input_dim());
  return std::real((phi.adjoint() * choi_state(c) * phi)(0, 0));
}

EprDistinguisherResult epr_distinguisher(int d, const DensityMatrix& tau) {
  if (tau.dim() != d) throw PreconditionError("replacement state dimension mismatch");
  EprDistinguisherResult r;
  r.dim = d;
  r.accept_identity = epr_test_success(identity_channel(d));
  r.accept_replace = epr_test_success(replacement_channel(tau));
  r.advantage = r.accept_identity - r.accept_replace;
  r.uniform_success = 0.5 * r.accept_identity + 0.5 * (1 - r.accept_replace);
  return r;
}

DensityMatrix random_state(int d, std::uint64_t seed) {
  check_dim(d, "random_state");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0, 1);
  Matrix g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = Complex(n(rng), n(rng));
  Matrix m = g * g.adjoint();
  m /= m.trace().real();
  m = (m + m.adjoint()) / 2.0;
  return DensityMatrix(m);
}

}  // namespace relcrypt::q
