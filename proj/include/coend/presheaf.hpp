#pragma once
// Finite covariant functors C -> Set where C is generated by a finite graph.
// Only generating edges carry actions; naturality and equivariance are
// checked on them.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "coend/finset.hpp"

namespace coend {

struct PresheafObject {
  std::string name;
  std::vector<std::string> labels;
  std::size_t size() const { return labels.size(); }
};

struct PresheafEdge {
  std::string name;
  std::size_t source = 0;
  std::size_t target = 0;
  FinFunction action;  // [|P(source)|] -> [|P(target)|]
};

class FinitePresheaf {
 public:
  FinitePresheaf() = default;
  /// Throws DomainMismatch when an edge's action does not match its endpoints.
  FinitePresheaf(std::vector<PresheafObject> objects, std::vector<PresheafEdge> edges);

  const std::vector<PresheafObject>& objects() const { return objects_; }
  const std::vector<PresheafEdge>& edges() const { return edges_; }
  std::size_t size(std::size_t object) const { return objects_[object].size(); }
  std::optional<std::size_t> object_index(const std::string& name) const;

 private:
  std::vector<PresheafObject> objects_;
  std::vector<PresheafEdge> edges_;
};

/// Pointwise n-th power. Elements of P^n(c) are tuples ranked lexicographically.
FinitePresheaf power(const FinitePresheaf& p, std::size_t n);

/// True iff every carrier is non-empty (vacuously true with no objects).
bool check_inhabited(const FinitePresheaf& p);

/// Applies a carrier bijection per object; perms[c][old] = new.
FinitePresheaf relabel(const FinitePresheaf& p, const std::vector<FinFunction>& perms);

/// One object with `size` elements and no edges.
FinitePresheaf constant_presheaf(std::size_t size);

/// Objects v (carrier {0,1}) and v_R (the three tuples of the 1-in-3 relation)
/// with the three coordinate projections v_R -> v as edges. Its natural
/// transformations P^n -> P are exactly the n-ary polymorphisms of 1-in-3.
FinitePresheaf one_in_three_presheaf();

}  // namespace coend
