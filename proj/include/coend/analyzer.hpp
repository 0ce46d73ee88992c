#pragma once
// Sampled analysis of a morphism P^n -> P ⊗ F for a presheaf encoding P: given
// black-box components f_v, f_{v_λ}, decide whether f looks like −⊗τ and
// recover τ.
//
// Wire protocol for black boxes (decimal integers, single spaces, '\n'):
//   request   <vertex> <x_0> ... <x_{n-1}>        vertex 0 is v, 1 + j is v_λj
//   response  <k> <y_0> ... <y_{k-1}> <e>          the expression ((y_0..y_{k-1}), e), e an index into F[k]

#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <sys/types.h>
#include <vector>

#include "coend/encoding.hpp"
#include "coend/functor.hpp"

namespace coend {

/// An expression over a carrier inside ℕ: (map: [k] -> ℕ, element ∈ F[k]).
struct NatExpression {
  std::vector<Nat> map;
  std::uint32_t element = 0;

  std::size_t arity() const { return map.size(); }
  friend bool operator==(const NatExpression&, const NatExpression&) = default;
};

/// Canonical representative of the class of e in ℕ ⊗ F, valid when F is in the
/// essential image: the image Y of the map in ascending order, then the least
/// subset S of Y (by size, then lexicographically) through which the element
/// factors, with the least such element. The result has arity Le(e) and an
/// increasing map. Throws DomainMismatch for invalid elements and BoundTooSmall
/// when the arity exceeds F.bound().
NatExpression normalize(const TruncatedFunctor& f, const NatExpression& e);

std::string render(const TruncatedFunctor& f, const NatExpression& e);

std::string format_request(std::size_t vertex, std::span<const Nat> xs);
/// Throws ProtocolError on anything but a well-formed response line.
NatExpression parse_response(const std::string& line);

class MorphismOracle {
 public:
  virtual ~MorphismOracle() = default;
  virtual NatExpression evaluate(std::size_t vertex, std::span<const Nat> xs) = 0;
  /// Whether evaluate may be called concurrently.
  virtual bool thread_safe() const { return false; }
  virtual std::string describe() const = 0;
};

/// −⊗τ at every vertex.
class TensorOracle : public MorphismOracle {
 public:
  explicit TensorOracle(std::uint32_t tau) : tau_(tau) {}
  NatExpression evaluate(std::size_t vertex, std::span<const Nat> xs) override;
  bool thread_safe() const override { return true; }
  std::string describe() const override { return "tensor(" + std::to_string(tau_) + ")"; }

 private:
  std::uint32_t tau_;
};

/// −⊗τ after permuting coordinates: xs |-> ((x_{π(0)}, ..., x_{π(n-1)}), τ).
class PermutedTensorOracle : public MorphismOracle {
 public:
  PermutedTensorOracle(std::uint32_t tau, FinFunction pi) : tau_(tau), pi_(std::move(pi)) {}
  NatExpression evaluate(std::size_t vertex, std::span<const Nat> xs) override;
  bool thread_safe() const override { return true; }
  std::string describe() const override;

 private:
  std::uint32_t tau_;
  FinFunction pi_;
};

/// A child process speaking the wire protocol on its stdin/stdout. Calls are
/// serialized. SIGPIPE is ignored process-wide so a dying child surfaces as a
/// ProtocolError.
class SubprocessOracle : public MorphismOracle {
 public:
  explicit SubprocessOracle(std::vector<std::string> argv);
  ~SubprocessOracle() override;
  SubprocessOracle(const SubprocessOracle&) = delete;
  SubprocessOracle& operator=(const SubprocessOracle&) = delete;

  NatExpression evaluate(std::size_t vertex, std::span<const Nat> xs) override;
  std::string describe() const override;

 private:
  std::vector<std::string> argv_;
  pid_t pid_ = -1;
  std::FILE* to_child_ = nullptr;
  std::FILE* from_child_ = nullptr;
  std::mutex mutex_;
};

enum class Verdict { Naive, Inconclusive, Refuted };
std::string to_string(Verdict v);

struct AnalyzerOptions {
  std::size_t n = 1;
  std::uint64_t seed = 0;
  std::size_t samples = 1000;
  std::size_t equivariance_samples = 50;  // per edge
  std::vector<std::string> edges;         // edges to spot-check; empty means all
  Execution execution = Execution::Parallel;
};

struct MorphismAnalysis {
  Verdict verdict = Verdict::Inconclusive;
  std::optional<std::uint32_t> tau;
  std::string reason;
  nlohmann::json witness;

  std::size_t equivariance_checks = 0;
  std::size_t max_length = 0;
  std::size_t first_max_sample = 0;
  bool plateau = false;  // the maximum was first seen in the first half of the samples
  std::vector<Nat> argmax;
  NatExpression minimal;
  std::optional<FinFunction> h;  // [m] -> [n]

  nlohmann::json to_json(const TruncatedFunctor& f) const;
};

/// Throws PreconditionFailed unless F is in the essential image, n >= 1 and
/// n <= F.bound(); ProtocolError when the oracle returns an invalid expression.
MorphismAnalysis analyze_morphism(MorphismOracle& f, const PresheafEncoding& encoding, const TruncatedFunctor& F,
                                  const AnalyzerOptions& options);

}  // namespace coend
