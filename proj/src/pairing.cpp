#include "coend/pairing.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "coend/errors.hpp"

namespace coend {

namespace {

using U128 = unsigned __int128;

U128 triangle(U128 w) { return w * (w + 1) / 2; }

}  // namespace

Nat pair2(Nat a, Nat b) {
  const U128 s = static_cast<U128>(a) + b;
  const U128 z = s >= (U128{1} << 33) ? U128{UINT64_MAX} + 1 : triangle(s) + b;
  if (z > UINT64_MAX) throw Overflow("pair(" + std::to_string(a) + ", " + std::to_string(b) + ") exceeds 64 bits");
  return static_cast<Nat>(z);
}

std::pair<Nat, Nat> unpair2(Nat z) {
  auto w = static_cast<U128>((std::sqrt(8.0L * static_cast<long double>(z) + 1.0L) - 1.0L) / 2.0L);
  while (triangle(w) > z) --w;
  while (triangle(w + 1) <= z) ++w;
  const auto b = static_cast<Nat>(z - triangle(w));
  return {static_cast<Nat>(w - b), b};
}

Nat pair_n(std::span<const Nat> xs) {
  if (xs.empty()) throw PreconditionFailed("pairing needs arity >= 1");
  Nat acc = xs.back();
  for (std::size_t i = xs.size() - 1; i-- > 0;) acc = pair2(xs[i], acc);
  return acc;
}

std::vector<Nat> unpair_n(Nat z, std::size_t n) {
  if (n == 0) throw PreconditionFailed("pairing needs arity >= 1");
  std::vector<Nat> out;
  out.reserve(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const auto [a, rest] = unpair2(z);
    out.push_back(a);
    z = rest;
  }
  out.push_back(z);
  return out;
}

Nat max_safe_coordinate(std::size_t n) {
  if (n == 0) throw PreconditionFailed("pairing needs arity >= 1");
  auto fits = [n](Nat m) {
    try {
      std::vector<Nat> xs(n, m);
      pair_n(xs);
      return true;
    } catch (const Overflow&) {
      return false;
    }
  };
  Nat lo = 0, hi = UINT64_MAX;
  if (fits(hi)) return hi;
  while (hi - lo > 1) {
    const Nat mid = lo + (hi - lo) / 2;
    (fits(mid) ? lo : hi) = mid;
  }
  return lo;
}

CantorPairingSystem::CantorPairingSystem(std::vector<std::size_t> arities) : arities_(std::move(arities)) {
  std::sort(arities_.begin(), arities_.end());
  arities_.erase(std::unique(arities_.begin(), arities_.end()), arities_.end());
  if (!arities_.empty() && arities_.front() == 0) throw PreconditionFailed("pairing arities must be >= 1");
}

bool CantorPairingSystem::has_arity(std::size_t n) const {
  return std::binary_search(arities_.begin(), arities_.end(), n);
}

Nat CantorPairingSystem::project(std::size_t n, std::size_t i, Nat x) const {
  if (!has_arity(n)) throw PreconditionFailed("arity " + std::to_string(n) + " is not in the pairing system");
  if (i >= n) throw DomainMismatch("projection index out of range");
  return unpair_n(x, n)[i];
}

Nat CantorPairingSystem::assemble(std::span<const Nat> xs) const {
  if (!has_arity(xs.size()))
    throw PreconditionFailed("arity " + std::to_string(xs.size()) + " is not in the pairing system");
  return pair_n(xs);
}

std::string CantorPairingSystem::describe() const {
  std::string s = "cantor, right-nested, arities {";
  for (std::size_t i = 0; i < arities_.size(); ++i) s += (i ? "," : "") + std::to_string(arities_[i]);
  return s + "}";
}

FinitePairingSystem::FinitePairingSystem(std::size_t size, std::map<std::size_t, std::vector<FinFunction>> components)
    : size_(size), components_(std::move(components)) {
  for (const auto& [n, ps] : components_) {
    if (n == 0 || ps.size() != n) throw DomainMismatch("arity " + std::to_string(n) + " needs exactly n components");
    for (const auto& p : ps)
      if (p.dom_size() != size_ || p.cod_size() != size_) throw DomainMismatch("component is not an endomap of the carrier");
  }
}

std::optional<std::string> FinitePairingSystem::violation() const {
  for (const auto& [n, ps] : components_) {
    if (size_ > 1 && n > 1) return "arity " + std::to_string(n) + ": |X|^n != |X|";
    std::set<std::uint64_t> seen;
    std::vector<std::uint32_t> t(n);
    for (std::uint32_t x = 0; x < size_; ++x) {
      for (std::size_t i = 0; i < n; ++i) t[i] = ps[i](x);
      if (!seen.insert(tuple_rank(t, size_)).second)
        return "arity " + std::to_string(n) + ": element " + std::to_string(x) + " collides";
    }
  }
  return std::nullopt;
}

}  // namespace coend
