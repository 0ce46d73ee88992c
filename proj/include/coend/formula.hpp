#pragma once
// First-order formulas over a relational language: parsing, Tarski evaluation
// on finite structures, and the expansion by definable relations.
//
// Surface syntax, loosest binding first:
//   forall x. φ   exists x. φ   (body extends as far right as possible)
//   φ -> ψ        (right associative)
//   φ | ψ
//   φ & ψ
//   !φ   (φ)   true   false   r(x, y, ...)   x = y

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "coend/relational.hpp"

namespace coend {

struct FormulaNode {
  enum class Kind { True, False, Atom, Equal, Not, And, Or, Implies, Forall, Exists };
  Kind kind = Kind::True;
  std::string name;                // relation symbol for Atom, bound variable for quantifiers
  std::vector<std::string> args;   // Atom arguments, or the two sides of Equal
  std::vector<std::shared_ptr<const FormulaNode>> children;
};

class Formula {
 public:
  /// Throws ParseError with the offending position.
  static Formula parse(std::string_view text);

  const FormulaNode& root() const { return *root_; }
  /// Free variables in order of first occurrence.
  const std::vector<std::string>& free_variables() const { return free_; }
  std::size_t arity() const { return free_.size(); }
  /// Canonical fully parenthesised rendering; parse(to_string()) is equivalent.
  std::string to_string() const;

  static Formula negation(const Formula& f);

 private:
  explicit Formula(std::shared_ptr<const FormulaNode> root);
  std::shared_ptr<const FormulaNode> root_;
  std::vector<std::string> free_;
};

using Assignment = std::map<std::string, std::uint32_t>;

/// Tarski semantics. Throws PreconditionFailed on an unbound variable and
/// DomainMismatch on an unknown symbol or arity mismatch.
bool eval_formula(const RelStructure& a, const Formula& phi, const Assignment& assignment);

/// All tuples (over the free variables, in order) satisfying phi.
std::vector<Tuple> satisfying_tuples(const RelStructure& a, const Formula& phi);

/// Expansion with one relation per formula, named by its canonical text
/// (repeated formulas produce one symbol). With nullary_free, formulas
/// without free variables are rejected with PreconditionFailed.
RelStructure hat_expand(const RelStructure& a, const std::vector<Formula>& formulas, bool nullary_free = true);

}  // namespace coend
