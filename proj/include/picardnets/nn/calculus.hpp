#pragma once

// Constructors of the network algebra. Each returns a new network whose
// realization is the corresponding function-level operation on the inputs'
// realizations, for every activation.

#include <optional>
#include <span>
#include <vector>

#include "picardnets/nn/network.hpp"

namespace picardnets {

class CompositionError : public Error {
 public:
  using Error::Error;
};

class DepthError : public Error {
 public:
  using Error::Error;
};

/// The identity net passed to a different-depth sum does not realize id.
class SemanticError : public Error {
 public:
  using Error::Error;
};

/// outer ∘ inner: realizes x ↦ outer(inner(x)). The layer where the two nets
/// meet is merged into one affine map, so depth = depth(outer)+depth(inner)-1.
Network compose(const Network& outer, const Network& inner);

/// n-fold self composition; n = 0 gives the affine identity on the output width.
Network power(const Network& phi, std::size_t n);

/// Pads `phi` to `target_depth` by composing powers of the square net `psi` on the output side.
Network extend(std::size_t target_depth, const Network& psi, const Network& phi);

/// Block-diagonal stacking of equal-depth nets.
Network parallelize(std::span<const Network> nets);

Network affine(Matrix w, Vector b);
Network affine_scalar(double w, double b);

/// x = (x_1..x_n), x_i ∈ R^m ↦ Σ x_i
Network fan_in(std::size_t m, std::size_t n);
/// x ∈ R^m ↦ (x, ..., x), n copies
Network fan_out(std::size_t m, std::size_t n);

/// Pointwise sum of nets with equal depth, input and output widths.
///
/// The result is the same network as fan_in ∘ parallelize ∘ fan_out; the
/// blocks are assembled directly so that the block-diagonal middle of a wide
/// sum of shallow nets is never materialized.
Network sum_same_depth(std::span<const Network> nets);
/// fan_in ∘ (parallelize ∘ fan_out), built through `compose`.
Network sum_same_depth_literal(std::span<const Network> nets);

/// λ ⊛ Φ = A_{λI,0} ∘ Φ
Network scalar_mul(double lambda, const Network& phi);

/// ⊕_k h_k ⊛ (Φ_k ∘ A_{t_k I, B_k}); realizes x ↦ Σ h_k Φ_k(t_k x + B_k).
/// An empty `shifts` means B_k = 0.
Network linear_combination_same(std::span<const double> h, std::span<const double> t, std::span<const Vector> shifts,
                                std::span<const Network> nets);

/// Checks that `j` has one hidden layer and realizes the identity on R under
/// `act` at fixed probe points. Piecewise-linear and softplus activations are
/// probed on [-1e6, 1e6]; RePU on [-5, 5]. Throws SemanticError otherwise.
void require_identity_net(const Network& j, const Activation& act);

/// ⊕_k ℰ_{L,J}(Φ_k), L the largest depth. Realizes the pointwise sum.
/// With `act` set, J is first checked by require_identity_net.
Network sum_diff_depth(std::span<const Network> nets, const Network& j,
                       const std::optional<Activation>& act = std::nullopt);

/// ⊞_{k,J} h_k ⊛ (Φ_k ∘ A_{I,B_k}); realizes x ↦ Σ h_k Φ_k(x + B_k).
Network linear_combination_diff(std::span<const double> h, std::span<const Vector> shifts,
                                std::span<const Network> nets, const Network& j,
                                const std::optional<Activation>& act = std::nullopt);

/// 𝔦_n = ((I_n,0),(I_n,0)); realizes the elementwise activation.
Network activation_wrapper(std::size_t n);

}  // namespace picardnets
