#pragma once
// Finite relational structures, their products, homomorphism search and the
// bounded rigidity checks built on it.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coend/finset.hpp"
#include "coend/report.hpp"

namespace coend {

struct RelSymbol {
  std::string name;
  std::size_t arity = 0;
  friend bool operator==(const RelSymbol&, const RelSymbol&) = default;
};

class RelLanguage {
 public:
  RelLanguage() = default;
  /// Throws PreconditionFailed on duplicate names.
  explicit RelLanguage(std::vector<RelSymbol> symbols);

  std::span<const RelSymbol> symbols() const { return symbols_; }
  std::size_t size() const { return symbols_.size(); }
  const RelSymbol& operator[](std::size_t i) const { return symbols_[i]; }
  std::optional<std::size_t> index_of(const std::string& name) const;
  bool has_nullary() const;

  friend bool operator==(const RelLanguage&, const RelLanguage&) = default;

 private:
  std::vector<RelSymbol> symbols_;
};

using Tuple = std::vector<std::uint32_t>;

class RelStructure {
 public:
  RelStructure() = default;
  /// relations[i] holds the tuples of symbol i; duplicates are dropped and the
  /// list is sorted. Throws DomainMismatch on malformed tuples.
  RelStructure(RelLanguage language, std::vector<std::string> carrier, std::vector<std::vector<Tuple>> relations);

  /// Carrier labelled 0..size-1.
  static RelStructure with_size(RelLanguage language, std::size_t size, std::vector<std::vector<Tuple>> relations);

  const RelLanguage& language() const { return language_; }
  std::size_t size() const { return carrier_.size(); }
  std::span<const std::string> carrier() const { return carrier_; }
  std::span<const Tuple> relation(std::size_t symbol) const { return relations_[symbol]; }
  bool contains(std::size_t symbol, std::span<const std::uint32_t> tuple) const;

  friend bool operator==(const RelStructure& a, const RelStructure& b) {
    return a.language_ == b.language_ && a.carrier_ == b.carrier_ && a.relations_ == b.relations_;
  }

 private:
  RelLanguage language_;
  std::vector<std::string> carrier_;
  std::vector<std::vector<Tuple>> relations_;  // sorted, so membership is a binary search
};

/// Componentwise product. Carrier elements are pairs ranked a * |B| + b.
RelStructure product(const RelStructure& a, const RelStructure& b);
/// A^n with elements ranked as tuples over [|A|]; A^1 keeps the labels of A.
/// A^0 is a point on which
/// every relation holds.
RelStructure power(const RelStructure& a, std::size_t n);

/// True iff h maps every tuple of every relation of A into the same relation of B.
bool is_homomorphism(const FinFunction& h, const RelStructure& a, const RelStructure& b);

struct HomSearchOptions {
  std::uint64_t cap = 10'000'000;  // bound on |B|^|A|
  Execution execution = Execution::Parallel;
};

/// All homomorphisms A -> B in lexicographic order. Throws DomainMismatch when
/// the languages differ and SearchTooLarge when |B|^|A| exceeds the cap.
std::vector<FinFunction> hom_enum(const RelStructure& a, const RelStructure& b, const HomSearchOptions& options = {});

namespace reference {
/// Filters every function A -> B; the oracle for hom_enum.
std::vector<FinFunction> hom_enum_bruteforce(const RelStructure& a, const RelStructure& b, std::uint64_t cap = 10'000'000);
}  // namespace reference

enum class RigidityMode { Rigid, Lex, InhabitedLex };
std::string to_string(RigidityMode m);
/// Parses "rigid", "lex", "inhabited-lex"; throws PreconditionFailed otherwise.
RigidityMode parse_rigidity_mode(const std::string& s);

/// A bounded rigidity verdict. For the lex modes the check ranges over
/// n = first..n_max only.
struct RigidityResult {
  RigidityMode mode = RigidityMode::Rigid;
  bool holds = false;
  std::size_t n_max = 1;
  std::vector<std::size_t> hom_counts;  // homs A^n -> A per checked n, starting at `first_n`
  std::size_t first_n = 1;
  std::optional<std::size_t> witness_arity;
  std::optional<FinFunction> witness;  // first non-projection in lexicographic order
  nlohmann::json to_json(const RelStructure& a) const;
};

/// Rigid: the identity is the only endomorphism.
RigidityResult is_rigid(const RelStructure& a, const HomSearchOptions& options = {});
/// Every hom A^n -> A for 0 <= n <= n_max is a projection; for n = 0 no hom may exist.
RigidityResult is_lex_rigid(const RelStructure& a, std::size_t n_max, const HomSearchOptions& options = {});
/// Every hom A^n -> A for 1 <= n <= n_max is a projection.
RigidityResult is_inhabited_lex_rigid(const RelStructure& a, std::size_t n_max, const HomSearchOptions& options = {});
RigidityResult check_rigidity(const RelStructure& a, RigidityMode mode, std::size_t n_max,
                              const HomSearchOptions& options = {});

/// Index i when h: A^n -> A is the i-th projection.
std::optional<std::size_t> projection_index(const FinFunction& h, std::size_t base, std::size_t n);

/// Drops nullary symbols and replaces every empty relation of positive arity by the full relation.
RelStructure fill_empty_relations(const RelStructure& a);

/// Restriction to the symbols named in `language` (which must all exist with the same arity).
RelStructure reduct(const RelStructure& a, const RelLanguage& language);

/// Bundled structures.
RelStructure one_in_three_structure();
RelStructure two_point_no_relations();
RelStructure singleton_no_relations();

}  // namespace coend
