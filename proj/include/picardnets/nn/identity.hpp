#pragma once

// Shallow networks with dims (1,w,1) that realize the identity on R.

#include <span>
#include <vector>

#include "picardnets/nn/network.hpp"

namespace picardnets {

/// The RePU monomial net I_γ: dims (1,2,1), hidden weights (1,-1), output row (1,(-1)^γ).
/// Realizes x^γ under RePU(γ) and (1+α)x for γ = 1 under LeakyReLU(α).
Network monomial_net(unsigned gamma);

/// (1+α)^{-1} ⊛ I_1
Network identity_leaky(double alpha);
/// I_1, which under softplus realizes ln(1+e^x) - ln(1+e^{-x}) = x.
Network identity_softplus();

/// Coefficients c_0..c_γ of the node system
///   [k=γ] c_0 + Σ_i c_i b_i^k = [k=γ-1] / γ,   k = 0..γ.
/// Throws Error when the nodes are not strictly increasing or the system's
/// condition estimate exceeds 1e12.
std::vector<double> identity_coefficients(unsigned gamma, std::span<const double> nodes);

/// A_{1,c_0} ∘ ⊕_i c_i ⊛ (I_γ ∘ A_{1,b_i}); dims (1,2γ,1), identity under RePU(γ).
Network identity_repu(unsigned gamma, std::span<const double> nodes);
/// A_{1,c_0} ∘ ⊕_i c_i ⊛ (𝔦_1 ∘ A_{1,b_i}); dims (1,γ,1), identity under a(x) = x^γ.
Network identity_power(unsigned gamma, std::span<const double> nodes);

/// Nodes (1, 2, ..., γ).
std::vector<double> default_nodes(unsigned gamma);

/// The identity net used as padding for `act`.
Network default_identity(const Activation& act);

}  // namespace picardnets
