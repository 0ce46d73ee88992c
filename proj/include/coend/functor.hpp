#pragma once
// Truncated functors FinSet -> Set (and FinSet° -> Set): finite value sets
// F[k] for k up to a bound N, with the action of every function [k] -> [l].

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coend/finset.hpp"

namespace coend {

namespace detail {

struct FunctorTables {
  std::string name;
  std::size_t bound = 0;
  std::size_t first = 0;                         // 0 for FinSet, 1 for FinSet°
  std::vector<std::vector<std::string>> labels;  // labels[k], empty for k < first
  std::vector<std::size_t> offsets;              // start of the (k, l) block in data
  std::vector<std::uint32_t> data;

  std::size_t size(std::size_t k) const { return labels[k].size(); }
  const std::uint32_t* table(std::size_t k, std::size_t l, std::uint64_t rank) const {
    return data.data() + offsets[k * (bound + 1) + l] + rank * size(k);
  }
};

using LabelFn = std::function<std::vector<std::string>(std::size_t k)>;
using ActionFn = std::function<std::uint32_t(const FinFunction& g, std::uint32_t element)>;

std::shared_ptr<const FunctorTables> build_tables(std::string name, std::size_t bound,
                                                  std::size_t first, const LabelFn& labels,
                                                  const ActionFn& action);

}  // namespace detail

/// A violated functoriality law: F(g o f) != F(g) o F(f) at `element`
/// (or F(id) != id when g is an identity and f is absent).
struct FunctorialityViolation {
  FinFunction g;
  std::optional<FinFunction> f;
  std::uint32_t element = 0;
  std::string describe() const;
};

/// Immutable handle on a truncated functor; copies share the tables.
///
/// MinSize is 0 for objects of [FinSet, Set] and 1 for [FinSet°, Set], where
/// the empty set is excluded.
template <std::size_t MinSize>
class BasicTruncatedFunctor {
 public:
  static constexpr std::size_t min_size = MinSize;

  BasicTruncatedFunctor() = default;

  /// Tabulates `action` on every function between sizes in [MinSize, bound].
  /// The result is not checked for functoriality; see find_functoriality_violation.
  static BasicTruncatedFunctor generate(std::string name, std::size_t bound,
                                        const detail::LabelFn& labels,
                                        const detail::ActionFn& action) {
    return BasicTruncatedFunctor(detail::build_tables(std::move(name), bound, MinSize, labels, action));
  }

  const std::string& name() const { return tables_->name; }
  std::size_t bound() const { return tables_->bound; }
  std::size_t size(std::size_t k) const { return tables_->size(k); }
  const std::string& label(std::size_t k, std::uint32_t element) const {
    return tables_->labels[k][element];
  }
  std::span<const std::string> labels(std::size_t k) const { return tables_->labels[k]; }
  std::optional<std::uint32_t> find_label(std::size_t k, const std::string& label) const {
    const auto& ls = tables_->labels[k];
    for (std::size_t i = 0; i < ls.size(); ++i)
      if (ls[i] == label) return static_cast<std::uint32_t>(i);
    return std::nullopt;
  }

  /// Action of g on an element of F[g.dom_size()].
  std::uint32_t act(const FinFunction& g, std::uint32_t element) const {
    return tables_->table(g.dom_size(), g.cod_size(), g.rank())[element];
  }
  /// The whole map F[k] -> F[l] induced by the function of lexicographic rank `rank`.
  std::span<const std::uint32_t> action(std::size_t k, std::size_t l, std::uint64_t rank) const {
    return {tables_->table(k, l, rank), size(k)};
  }

  /// Same functor with a smaller bound.
  BasicTruncatedFunctor restrict_bound(std::size_t bound) const {
    auto self = *this;
    return generate(
        name(), bound, [self](std::size_t k) { return std::vector<std::string>(self.labels(k).begin(), self.labels(k).end()); },
        [self](const FinFunction& g, std::uint32_t e) { return self.act(g, e); });
  }

  const detail::FunctorTables& tables() const { return *tables_; }

 private:
  explicit BasicTruncatedFunctor(std::shared_ptr<const detail::FunctorTables> t) : tables_(std::move(t)) {}
  std::shared_ptr<const detail::FunctorTables> tables_;
};

using TruncatedFunctor = BasicTruncatedFunctor<0>;
using InhabitedTruncatedFunctor = BasicTruncatedFunctor<1>;

/// Generators of the truncated skeleton between sizes [first, bound]: adjacent
/// transpositions, the merge [k] -> [k-1] of the last two points, and the
/// inclusion [k] -> [k+1]. Every function between sizes in range is a composite
/// of these with all intermediate sizes in range.
std::vector<FinFunction> skeleton_generators(std::size_t first, std::size_t bound);

/// Exhaustive functoriality check within the bound. Checks identities and
/// F(g o f) = F(g) o F(f) for every f and every generator g, which implies the
/// law for all composable pairs.
std::optional<FunctorialityViolation> find_functoriality_violation(const detail::FunctorTables& t);

template <std::size_t M>
std::optional<FunctorialityViolation> find_functoriality_violation(const BasicTruncatedFunctor<M>& f) {
  return find_functoriality_violation(f.tables());
}

/// Comparison F[0] -> eq(F[1] => F[2]) induced by [0] -> [1], with the two maps
/// [1] => [2] given by the values [0] and [1].
struct EssentialImageWitness {
  std::vector<std::uint32_t> comparison;  // element of F[0] -> element of F[1]
  std::vector<std::uint32_t> equalizer;   // elements of F[1], ascending
  bool injective = false;
  bool surjective = false;
  bool in_image() const { return injective && surjective; }
};

EssentialImageWitness essential_image_witness(const TruncatedFunctor& f);
bool is_in_essential_image(const TruncatedFunctor& f);

/// Restriction to non-empty sizes.
InhabitedTruncatedFunctor restrict_to_inhabited(const TruncatedFunctor& f);
/// Right extension: F[0] becomes the equalizer of F[1] => F[2].
TruncatedFunctor iota_star(const InhabitedTruncatedFunctor& f);

/// F[k] = functions [s] -> [k], acting by post-composition.
TruncatedFunctor representable(std::size_t s, std::size_t bound);
/// F[k] = subsets of [k], acting by direct image.
TruncatedFunctor power_set_functor(std::size_t bound);
/// F[0] = {}, F[k] = {*} otherwise.
TruncatedFunctor ine_functor(std::size_t bound);
/// F[0] = {a, b}, F[k] = {*} otherwise.
TruncatedFunctor ine2_functor(std::size_t bound);

/// Built-in by name: "rep:<s>", "pow", "ine", "ine2". Throws PreconditionFailed on unknown names.
TruncatedFunctor builtin_functor(const std::string& spec, std::size_t bound);

}  // namespace coend
