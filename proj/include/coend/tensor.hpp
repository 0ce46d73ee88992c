#pragma once
// The coend tensor X ⊗ F for a finite carrier X = [n] and a truncated functor F,
// computed as explicit equivalence classes of expressions (f: [k] -> X, σ ∈ F[k])
// under the relation generated by (f o g, σ) ~ (f, g·σ).

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "coend/functor.hpp"
#include "coend/presheaf.hpp"
#include "coend/report.hpp"

namespace coend {

/// An expression (f: [arity] -> X, element ∈ F[arity]).
struct Expression {
  std::vector<std::uint32_t> map;
  std::uint32_t element = 0;

  std::size_t arity() const { return map.size(); }
  friend bool operator==(const Expression&, const Expression&) = default;
  /// Arity first, then the map lexicographically, then the element index.
  friend std::strong_ordering operator<=>(const Expression& a, const Expression& b) {
    if (auto c = a.map.size() <=> b.map.size(); c != 0) return c;
    if (auto c = a.map <=> b.map; c != 0) return c;
    return a.element <=> b.element;
  }
};

struct TensorClass {
  std::uint32_t id = 0;
  Expression canonical;    // least minimal expression; injective map, arity = length
  std::size_t length = 0;  // Le(t)
  std::size_t size = 0;    // number of expressions of arity <= working bound
};

/// How the working bound was confirmed. The relation is closed over all
/// expressions of arity <= b; the partition restricted to arity <= base is
/// recomputed at b + 1, b + 2, ... until it is unchanged twice in a row.
struct StabilityInfo {
  std::size_t base_bound = 0;     // max(|X|, 2) + 1
  std::size_t working_bound = 0;  // bound the class table is taken from
  std::vector<std::size_t> compared_bounds;
  bool stable = false;   // two consecutive agreeing recomputations
  bool flagged = false;  // stabilization needed working_bound > |X| + 2
};

class Tensor {
 public:
  /// Throws BoundTooSmall unless F.bound() >= max(carrier_size, 2) + 1.
  static Tensor compute(std::size_t carrier_size, const TruncatedFunctor& f);

  static std::size_t required_bound(std::size_t carrier_size) {
    return (carrier_size > 2 ? carrier_size : 2) + 1;
  }

  std::size_t carrier_size() const { return carrier_size_; }
  const TruncatedFunctor& functor() const { return functor_; }
  std::size_t bound() const { return stability_.working_bound; }
  const StabilityInfo& stability() const { return stability_; }

  std::size_t class_count() const { return classes_.size(); }
  std::span<const TensorClass> classes() const { return classes_; }
  const TensorClass& cls(std::uint32_t id) const { return classes_.at(id); }

  /// Class of an expression; throws DomainMismatch for invalid expressions and
  /// BoundTooSmall for arity above the working bound.
  std::uint32_t lookup(const Expression& e) const;
  std::size_t length(const Expression& e) const { return cls(lookup(e)).length; }

  /// All expressions of the class with arity <= bound(), ascending.
  std::vector<Expression> members(std::uint32_t id) const;
  /// Members whose arity equals the class length, ascending.
  std::vector<Expression> minimal_expressions(std::uint32_t id) const;

  std::string render(const Expression& e, std::span<const std::string> carrier_labels = {}) const;

 private:
  Tensor() = default;
  std::uint64_t encode(const Expression& e) const;
  Expression decode(std::uint64_t id) const;

  std::size_t carrier_size_ = 0;
  TruncatedFunctor functor_;
  StabilityInfo stability_;
  std::vector<std::uint64_t> offsets_;  // first expression id of each arity, plus end
  std::vector<std::uint32_t> class_of_;
  std::vector<TensorClass> classes_;
  std::vector<std::uint64_t> member_offsets_;
  std::vector<std::uint64_t> member_ids_;
};

/// Induced map X ⊗ F -> Y ⊗ F of g: X -> Y on a class of `source`.
std::uint32_t act(const FinFunction& g, const Tensor& source, const Tensor& target, std::uint32_t class_id);

/// The map X^n -> X ⊗ F, (x_0..x_{n-1}) |-> class of ((x_0..x_{n-1}), σ), as a
/// function from tuple ranks [|X|^n] to class ids. Throws BoundTooSmall if n > bound.
FinFunction tensor_morphism(const Tensor& t, std::size_t n, std::uint32_t sigma);

/// Pointwise tensor of a finite presheaf, with the per-object tensors kept.
struct PresheafTensor {
  FinitePresheaf presheaf;
  std::vector<Tensor> fibers;
};
PresheafTensor presheaf_tensor(const FinitePresheaf& p, const TruncatedFunctor& f);

struct LemmaCheckOptions {
  std::size_t carrier_cap = 3;
  Execution execution = Execution::Parallel;
};

/// Exhaustive check of the length and minimal-expression lemmas on X ⊗ F:
/// minimal => injective, cancellation, co-Yoneda cancellation, comparison and
/// uniqueness for Le > 1, and the inhabited versions at all lengths when F is in
/// the essential image of iota_*. Throws PreconditionFailed if |X| exceeds the cap.
std::vector<CheckResult> verify_tensor_lemmas(const Tensor& t, const LemmaCheckOptions& options = {});

/// JSON class table: canonical expression, length, class size and minimal expressions.
nlohmann::json class_table(const Tensor& t, std::span<const std::string> carrier_labels = {},
                           bool with_minimal = true);

}  // namespace coend
