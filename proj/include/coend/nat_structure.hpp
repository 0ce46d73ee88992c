#pragma once
// Relational structures on the carrier ℕ with decidable relations, the
// T_n / S_n augmentation by a pairing system, and the sampled replay of the
// argument that a morphism preserving them is a projection.

#include <cstddef>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "coend/pairing.hpp"
#include "json.hpp"

namespace coend {

/// A decidable relation on ℕ with an enumeration of its members.
struct NatRelation {
  std::string name;
  std::size_t arity = 0;
  std::function<bool(std::span<const Nat>)> contains;
  std::optional<Nat> count;                                        // nullopt: infinite
  std::function<std::vector<Nat>(Nat)> at;                         // k-th member, k < count
  std::function<std::optional<Nat>(std::span<const Nat>)> index_of;  // inverse of at on members
};

struct NatStructure {
  std::string name;
  std::vector<NatRelation> relations;

  std::optional<std::size_t> index_of(const std::string& relation) const;
};

/// Finite relation given by its member list (sorted on construction).
NatRelation finite_nat_relation(std::string name, std::size_t arity, std::vector<std::vector<Nat>> tuples);

/// Bundled structure: lt (x < y), even (unary) and the 1-in-3 relation on {0, 1}.
NatStructure nat_order_structure();

struct AugmentedStructure {
  NatStructure structure;  // original relations followed by T_n, S_n for each n
  CantorPairingSystem pairing;
  std::vector<Nat> constants;  // c_0, c_1, ...
};

/// Adds T_n = {c_0..c_{n-1}} and S_n = {(x, c_i, p^n_i(x)) : i < n} for each
/// arity of the pairing system. Constants default to c_i = i; duplicates are
/// rejected with PreconditionFailed.
AugmentedStructure augment_with_pairing(const NatStructure& a, const CantorPairingSystem& ps,
                                        std::vector<Nat> constants = {});

using NatFunction = std::function<Nat(std::span<const Nat>)>;

struct ProjectionVerdict {
  bool consistent = false;
  std::optional<std::size_t> index;  // the i of CONSISTENT(i)
  std::string reason;                // which step refuted
  nlohmann::json witness;
  std::size_t samples_checked = 0;
  nlohmann::json to_json() const;
};

/// Replays the projection argument for f: ℕ^n -> ℕ on the given samples:
/// c = f(c_0..c_{n-1}) must be some c_i; then on every sample the diagonal law,
/// preservation of S_n on the three columns (x, c, xs), and f(xs) = xs_i.
ProjectionVerdict projection_certificate(const NatFunction& f, const AugmentedStructure& aug, std::size_t n,
                                         std::span<const std::vector<Nat>> samples);

/// n-tuples with entries below `limit` (clamped so that pair_n cannot overflow).
std::vector<std::vector<Nat>> sample_tuples(std::mt19937_64& rng, std::size_t count, std::size_t n, Nat limit);

}  // namespace coend
