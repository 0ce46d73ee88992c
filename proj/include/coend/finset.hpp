#pragma once
// Finite sets as initial segments [n] = {0, ..., n-1} and the functions
// between them: the arrows of the skeleton of FinSet.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace coend {

/// A function [dom_size] -> [cod_size], stored as its value list.
///
/// Immutable after construction. Functions with the same domain and codomain
/// are totally ordered lexicographically by their value lists; that order is
/// the canonical one used for every "first witness" in the library.
class FinFunction {
 public:
  FinFunction() = default;
  /// Throws DomainMismatch if some value is >= cod_size (so [m] -> [0] with m > 0 is rejected).
  FinFunction(std::vector<std::uint32_t> values, std::size_t cod_size);
  FinFunction(std::initializer_list<std::uint32_t> values, std::size_t cod_size)
      : FinFunction(std::vector<std::uint32_t>(values), cod_size) {}

  static FinFunction identity(std::size_t n);
  /// The unique function [0] -> [n].
  static FinFunction empty(std::size_t cod_size) { return FinFunction({}, cod_size); }
  /// Function with the given lexicographic rank among all [dom] -> [cod].
  static FinFunction from_rank(std::uint64_t rank, std::size_t dom_size, std::size_t cod_size);

  std::size_t dom_size() const noexcept { return values_.size(); }
  std::size_t cod_size() const noexcept { return cod_size_; }
  std::uint32_t operator()(std::size_t i) const { return values_[i]; }
  std::span<const std::uint32_t> values() const noexcept { return values_; }

  /// Position of this function in enumerate_functions(dom_size, cod_size).
  std::uint64_t rank() const noexcept;

  std::string to_string() const;

  friend bool operator==(const FinFunction&, const FinFunction&) = default;
  friend std::strong_ordering operator<=>(const FinFunction& a, const FinFunction& b) {
    if (auto c = a.dom_size() <=> b.dom_size(); c != 0) return c;
    if (auto c = a.cod_size_ <=> b.cod_size_; c != 0) return c;
    return a.values_ <=> b.values_;
  }

 private:
  std::vector<std::uint32_t> values_;
  std::size_t cod_size_ = 0;
};

/// g o f. Throws DomainMismatch unless f.cod_size() == g.dom_size().
FinFunction compose(const FinFunction& g, const FinFunction& f);

/// Sorted, duplicate-free image of f.
std::vector<std::uint32_t> image(const FinFunction& f);

bool is_injective(const FinFunction& f);
bool is_surjective(const FinFunction& f);

/// All n^m functions [m] -> [n] in lexicographic order of their values.
/// For m = 0 this is the single empty function, even when n = 0.
std::vector<FinFunction> enumerate_functions(std::size_t m, std::size_t n);

/// base^exponent, throwing SearchTooLarge when the result exceeds `limit`.
std::uint64_t checked_power(std::uint64_t base, std::uint64_t exponent,
                            std::uint64_t limit = UINT64_MAX);

/// Lexicographic rank of a tuple over [base] (most significant entry first).
std::uint64_t tuple_rank(std::span<const std::uint32_t> tuple, std::size_t base) noexcept;
/// Inverse of tuple_rank.
std::vector<std::uint32_t> tuple_unrank(std::uint64_t rank, std::size_t length, std::size_t base);

}  // namespace coend
