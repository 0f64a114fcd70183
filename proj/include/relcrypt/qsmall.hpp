#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <vector>

namespace relcrypt::q {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr int kMaxDim = 8;

// Hermitian, unit-trace, positive semidefinite; dim <= 8 per factor.
class DensityMatrix {
 public:
  explicit DensityMatrix(Matrix m);
  static DensityMatrix pure(const Vector& psi);
  static DensityMatrix maximally_mixed(int d);
  // |Φ⟩ = Σ_i |ii⟩ / √d.
  static DensityMatrix maximally_entangled(int d);

  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const noexcept { return m_; }

 private:
  Matrix m_;
};

Vector maximally_entangled_vector(int d);

class QuantumChannel {
 public:
  // Throws PreconditionError unless Σ K†K = I within 1e-12.
  QuantumChannel(int din, int dout, std::vector<Matrix> kraus);

  int input_dim() const noexcept { return din_; }
  int output_dim() const noexcept { return dout_; }
  const std::vector<Matrix>& kraus() const noexcept { return kraus_; }

  Matrix apply(const Matrix& rho) const;
  DensityMatrix apply(const DensityMatrix& rho) const;

 private:
  int din_;
  int dout_;
  std::vector<Matrix> kraus_;
};

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);
// Traces out subsystem `which` (0 or 1) of a bipartite state with the given
// factor dimensions.
DensityMatrix partial_trace(const DensityMatrix& rho, int dim_a, int dim_b, int which);

QuantumChannel identity_channel(int d);
// ρ ↦ τ.
QuantumChannel replacement_channel(const DensityMatrix& tau);
// ρ ↦ I/d, from the d² Weyl operators.
QuantumChannel depolarizing_channel(int d);
// Λ = Σ w_k Λ_k, realised by concatenating scaled Kraus lists.
QuantumChannel mixture(const std::vector<double>& weights, const std::vector<QuantumChannel>& channels);

// Choi state (Λ ⊗ id)(|Φ⟩⟨Φ|).
Matrix choi_state(const QuantumChannel& c);

// ⟨Φ|(Λ ⊗ id)(|Φ⟩⟨Φ|)|Φ⟩.
double epr_test_success(const QuantumChannel& c);

// Identity versus replacement, decided by the Bell-projector test.
struct EprDistinguisherResult {
  int dim = 0;
  double accept_identity = 0;
  double accept_replace = 0;
  double advantage = 0;        // accept_identity - accept_replace
  double uniform_success = 0;  // under the uniform prior over the two channels
};
EprDistinguisherResult epr_distinguisher(int d, const DensityMatrix& tau);

// Ginibre-distributed random mixed state.
DensityMatrix random_state(int d, std::uint64_t seed);

}  // namespace relcrypt::q
