#pragma once
// Exhaustive enumeration of natural transformations between finite presheaves
// on the same graph, and the unique-τ test: every natural transformation
// P^n -> P ⊗ F should be −⊗τ for exactly one τ ∈ F[n].

#include <cstddef>
#include <cstdint>
#include <vector>

#include "coend/functor.hpp"
#include "coend/presheaf.hpp"
#include "coend/report.hpp"

namespace coend {

/// One component per object, [|S(c)|] -> [|T(c)|].
using NaturalTransformation = std::vector<FinFunction>;

struct NatTransOptions {
  std::uint64_t node_budget = 50'000'000;  // partial assignments tried before SearchTooLarge
  Execution execution = Execution::Parallel;
};

/// Throws DomainMismatch unless s and t have the same objects and edge endpoints.
bool is_natural(const FinitePresheaf& s, const FinitePresheaf& t, const NaturalTransformation& alpha);

/// All natural transformations s -> t, ordered lexicographically by their
/// concatenated component values. Backtracking over elements object by object,
/// with each naturality square checked as soon as both of its ends are set.
std::vector<NaturalTransformation> enumerate_natural_transformations(const FinitePresheaf& s, const FinitePresheaf& t,
                                                                     const NatTransOptions& options = {});

namespace reference {
/// Every family of component functions, filtered by is_natural. Throws
/// SearchTooLarge above `cap` candidate families.
std::vector<NaturalTransformation> enumerate_natural_transformations_bruteforce(const FinitePresheaf& s,
                                                                                const FinitePresheaf& t,
                                                                                std::uint64_t cap = 1u << 22);
}  // namespace reference

struct UniqueTauOptions {
  std::size_t n_max = 2;
  NatTransOptions search;
  std::size_t witness_limit = 64;  // witnesses listed per check; the count is always exact
};

/// One result per (F, n) plus a summary "inhabited_topos_rigid". Throws
/// PreconditionFailed if p is not inhabited or some F is outside the essential
/// image, BoundTooSmall if some F is too small for the carriers of p, and
/// SearchTooLarge from the enumeration.
std::vector<CheckResult> check_unique_tau(const FinitePresheaf& p, const std::vector<TruncatedFunctor>& functors,
                                          const UniqueTauOptions& options = {});

/// Bound used for built-in functors: enough for the tensors of p and for n_max.
std::size_t unique_tau_bound(const FinitePresheaf& p, std::size_t n_max);

}  // namespace coend
