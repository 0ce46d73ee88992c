#pragma once
// Pairing systems: families p^n_0..p^n_{n-1} whose assembled map X -> X^n is a
// bijection. Over ℕ we use the Cantor pairing, nested to the right:
//   <a, b> = (a + b)(a + b + 1)/2 + b
//   <x_0, ..., x_{n-1}> = <x_0, <x_1, ..., x_{n-1}>>,   <x> = x.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "coend/finset.hpp"

namespace coend {

using Nat = std::uint64_t;

/// Throws Overflow when the result does not fit in 64 bits.
Nat pair2(Nat a, Nat b);
std::pair<Nat, Nat> unpair2(Nat z);

/// n >= 1. Throws Overflow.
Nat pair_n(std::span<const Nat> xs);
std::vector<Nat> unpair_n(Nat z, std::size_t n);

/// Largest m such that pair_n(m, ..., m) fits; every tuple with entries <= m then does.
Nat max_safe_coordinate(std::size_t n);

class CantorPairingSystem {
 public:
  /// Arities are sorted and deduplicated; each must be >= 1.
  explicit CantorPairingSystem(std::vector<std::size_t> arities);

  const std::vector<std::size_t>& arities() const { return arities_; }
  bool has_arity(std::size_t n) const;
  /// p^n_i(x). Throws PreconditionFailed for an arity outside the system.
  Nat project(std::size_t n, std::size_t i, Nat x) const;
  /// Inverse of the assembled map x |-> (p^n_0(x), ..., p^n_{n-1}(x)).
  Nat assemble(std::span<const Nat> xs) const;
  std::string describe() const;

 private:
  std::vector<std::size_t> arities_;
};

/// Pairing system on a finite carrier [size], given by its component maps.
/// Arities n >= 2 can only be bijective when size <= 1.
class FinitePairingSystem {
 public:
  FinitePairingSystem(std::size_t size, std::map<std::size_t, std::vector<FinFunction>> components);

  std::size_t size() const { return size_; }
  const std::map<std::size_t, std::vector<FinFunction>>& components() const { return components_; }
  /// Exhaustively checks that every assembled map [size] -> [size]^n is a
  /// bijection; returns a description of the first failure.
  std::optional<std::string> violation() const;

 private:
  std::size_t size_;
  std::map<std::size_t, std::vector<FinFunction>> components_;
};

}  // namespace coend
