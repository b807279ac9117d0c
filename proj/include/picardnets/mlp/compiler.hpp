#pragma once

#include <string>
#include <vector>

#include "picardnets/mlp/engine.hpp"
#include "picardnets/mlp/oracle.hpp"
#include "picardnets/nn/network.hpp"

namespace picardnets::mlp {

class BoundError : public Error {
 public:
  using Error::Error;
};

class EquivalenceError : public Error {
 public:
  using Error::Error;
};

struct CompileInputs {
  MlpConfig cfg;
  Network g;  // datum, R^d -> R
  Network f;  // nonlinearity, R -> R
  Network j;  // identity with dims (1,𝔡,1)
  Activation activation;
  RandomOracle oracle;
  /// Compile even when the parameter bound exceeds kMaxBoundParams.
  bool allow_large = false;

  /// Checks shapes and that `j` realizes the identity under `activation`.
  void validate() const;
};

inline constexpr double kMaxBoundParams = 1e8;

struct SizeReport {
  LayerDims dims;
  std::size_t depth = 0;
  std::size_t max_width = 0;
  std::size_t params = 0;
  std::size_t bound_depth = 0;
  double bound_width = 0.0;
  double bound_params = 0.0;

  bool within_bounds() const;
  std::string to_json(int indent = 2) const;
};

/// max{𝔡,𝓛(G)} + n ℋ(F), max{𝔡,|||𝒟(F)|||,|||𝒟(G)|||}(3M)^n and 2·depth·base²·(3M)^{2n}
/// for the inputs, without compiling.
SizeReport predicted_bounds(const CompileInputs& inputs);

/// 𝐔_{n,t}^θ. For n >= 1 the network is
///
///   [⊕_k 1/M^n ⊛ (G ∘ A_{I,W^{(θ,0,-k)}_{T-t}})]
///   ⊞ [⊞_i (T-t)/M^{n-i} ⊛ (⊞_k F ∘ 𝐔_{i,𝒰}^{(θ,i,k)} ∘ A_{I,W^{(θ,i,k)}_{𝒰-t}})]
///   ⊞ [⊞_i (t-T)[i>=1]/M^{n-i} ⊛ (⊞_k F ∘ 𝐔_{max(i-1,0),𝒰}^{(θ,-i,k)} ∘ A_{I,W^{(θ,i,k)}_{𝒰-t}})]
///
/// with every ⊞ taken through `inputs.j`, and 𝐔_0 = ((0 ... 0), 0).
/// Throws BoundError when the parameter bound exceeds kMaxBoundParams and
/// `allow_large` is unset.
Network compile_mlp(const CompileInputs& inputs, const ThetaPath& theta, double t);

struct EquivalenceReport {
  double max_residual = 0.0;  // max |net - mlp| / (1 + |mlp|)
  std::size_t worst_probe = 0;
  std::vector<double> net_values;
  std::vector<double> mlp_values;
};

/// Compares the compiled net with mlp_eval using f = ℛ(F), g = ℛ(G) and the
/// same oracle. Throws EquivalenceError naming the offending probe when the
/// relative residual exceeds `tol`.
EquivalenceReport verify_equivalence(const CompileInputs& inputs, const ThetaPath& theta, double t,
                                     std::span<const Vector> probes, double tol);
/// Same check against an already compiled network.
EquivalenceReport verify_equivalence(const CompileInputs& inputs, const Network& compiled, const ThetaPath& theta,
                                     double t, std::span<const Vector> probes, double tol);

/// Actual sizes of `compiled` together with the bounds of `inputs`.
SizeReport size_report(const CompileInputs& inputs, const Network& compiled);

/// Drops hidden neurons that cannot influence the output: neurons whose
/// outgoing column is zero, and neurons whose incoming row is zero (their
/// constant activation is folded into the next bias). Keeps at least one
/// neuron per layer. The realization under `act` is unchanged.
Network prune_zero_blocks(const Network& net, const Activation& act);

}  // namespace picardnets::mlp
