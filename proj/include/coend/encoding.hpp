#pragma once
// The encoding graph of a relational language and presheaves on it whose
// retraction edges split the section edges, in particular the presheaf
// encoding of a structure on ℕ.
//
// Edges for 1 <= n <= N and i < n, and for each symbol λ of arity n_λ:
//   p^n_i   : v -> v        x |-> p^n_i(x)
//   p'^n_i  : v -> v        <x, <x_0..x_{n-1}>> |-> <x, x_i>
//   s'_λ    : v_λ -> v      (x, q) |-> <x, <q>>
//   r_λ     : v -> v_λ      retraction of s'_λ
// The element (x, q) of v_λ, with q the k-th member of Q_λ, is stored as <x, k>.

#include <cstddef>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "coend/nat_structure.hpp"
#include "coend/relational.hpp"
#include "coend/report.hpp"

namespace coend {

enum class EdgeKind { Pairing, PrimedPairing, Section, Retraction };

struct EncodingEdge {
  std::string name;
  EdgeKind kind = EdgeKind::Pairing;
  std::size_t source = 0;
  std::size_t target = 0;
  std::size_t n = 0;       // pairing arity, or the symbol's arity
  std::size_t i = 0;       // component for the pairing edges
  std::size_t symbol = 0;  // for section and retraction edges
};

struct EncodingGraph {
  static constexpr std::size_t main_vertex = 0;

  RelLanguage language;
  std::size_t n_trunc = 2;
  std::vector<std::string> vertices;  // "v", then "v_<symbol>"
  std::vector<EncodingEdge> edges;

  static std::size_t vertex_of(std::size_t symbol) { return symbol + 1; }
  std::optional<std::size_t> edge_index(const std::string& name) const;
};

/// Throws PreconditionFailed for nullary symbols or n_trunc < 2.
EncodingGraph build_encoding_graph(const RelLanguage& language, std::size_t n_trunc);

struct VertexCarrier {
  std::optional<Nat> size;                        // finite carrier [size]; nullopt: infinite subset of ℕ
  std::function<Nat(std::mt19937_64&)> sample;   // draws an element (used when infinite)
};

struct EncodingPresheaf {
  EncodingGraph graph;
  std::vector<VertexCarrier> carriers;            // per vertex
  std::vector<std::function<Nat(Nat)>> actions;   // per edge
};

/// Retraction law r_λ ∘ s'_λ = id on every v_λ, exhaustive on finite carriers
/// and on `samples` draws otherwise.
std::vector<CheckResult> check_presheaf(const EncodingPresheaf& p, std::size_t samples, std::uint64_t seed);

struct PresheafEncoding {
  NatStructure structure;
  CantorPairingSystem pairing{{}};
  EncodingPresheaf presheaf;
  Nat sample_limit = 0;  // main-carrier samples are drawn below this

  /// s_λ(q) = <q>.
  Nat section(std::size_t symbol, std::span<const Nat> q) const;
  Nat fiber_element(Nat x, Nat k) const { return pair2(x, k); }
  /// Image of elements outside Im(s'_λ) under r_λ: <0, 0>, the least element of X × Q_λ.
  static constexpr Nat default_fiber_element = 0;
};

/// Throws PreconditionFailed for nullary or empty relations and Overflow if
/// the pairing leaves 64 bits during construction.
PresheafEncoding build_presheaf_encoding(const NatStructure& a, std::size_t n_trunc, Nat sample_limit = Nat{1} << 16);

/// check_presheaf plus the primed-pairing law, the s' law, injectivity of s_λ on
/// sampled members, and the pairing round trip on the main carrier.
std::vector<CheckResult> check_encoding(const PresheafEncoding& e, std::size_t samples, std::uint64_t seed);

nlohmann::json describe_graph(const EncodingGraph& g);

}  // namespace coend
