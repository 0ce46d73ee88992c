#include "coend/finset.hpp"

#include <algorithm>

#include "coend/errors.hpp"

namespace coend {

FinFunction::FinFunction(std::vector<std::uint32_t> values, std::size_t cod_size)
    : values_(std::move(values)), cod_size_(cod_size) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] >= cod_size_) {
      throw DomainMismatch("value " + std::to_string(values_[i]) + " at position " +
                           std::to_string(i) + " is outside [" + std::to_string(cod_size_) + "]");
    }
  }
}

FinFunction FinFunction::identity(std::size_t n) {
  std::vector<std::uint32_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<std::uint32_t>(i);
  return FinFunction(std::move(v), n);
}

FinFunction FinFunction::from_rank(std::uint64_t rank, std::size_t dom_size, std::size_t cod_size) {
  if (dom_size > 0 && cod_size == 0) throw DomainMismatch("no function [m] -> [0] with m > 0");
  return FinFunction(tuple_unrank(rank, dom_size, cod_size), cod_size);
}

std::uint64_t FinFunction::rank() const noexcept { return tuple_rank(values_, cod_size_); }

std::string FinFunction::to_string() const {
  std::string s = "[";
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(values_[i]);
  }
  s += "]:[" + std::to_string(dom_size()) + "]->[" + std::to_string(cod_size_) + "]";
  return s;
}

FinFunction compose(const FinFunction& g, const FinFunction& f) {
  if (f.cod_size() != g.dom_size()) {
    throw DomainMismatch("cannot compose " + g.to_string() + " after " + f.to_string());
  }
  std::vector<std::uint32_t> v(f.dom_size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = g(f(i));
  return FinFunction(std::move(v), g.cod_size());
}

std::vector<std::uint32_t> image(const FinFunction& f) {
  std::vector<std::uint32_t> im(f.values().begin(), f.values().end());
  std::sort(im.begin(), im.end());
  im.erase(std::unique(im.begin(), im.end()), im.end());
  return im;
}

bool is_injective(const FinFunction& f) { return image(f).size() == f.dom_size(); }

bool is_surjective(const FinFunction& f) { return image(f).size() == f.cod_size(); }

std::vector<FinFunction> enumerate_functions(std::size_t m, std::size_t n) {
  const std::uint64_t count = checked_power(n, m);
  std::vector<FinFunction> out;
  out.reserve(count);
  for (std::uint64_t r = 0; r < count; ++r) out.push_back(FinFunction::from_rank(r, m, n));
  return out;
}

std::uint64_t checked_power(std::uint64_t base, std::uint64_t exponent, std::uint64_t limit) {
  std::uint64_t result = 1;
  for (std::uint64_t i = 0; i < exponent; ++i) {
    if (base != 0 && result > limit / base) {
      throw SearchTooLarge(std::to_string(base) + "^" + std::to_string(exponent) +
                           " exceeds limit " + std::to_string(limit));
    }
    result *= base;
  }
  if (result > limit) {
    throw SearchTooLarge(std::to_string(base) + "^" + std::to_string(exponent) +
                         " exceeds limit " + std::to_string(limit));
  }
  return result;
}

std::uint64_t tuple_rank(std::span<const std::uint32_t> tuple, std::size_t base) noexcept {
  std::uint64_t r = 0;
  for (auto v : tuple) r = r * base + v;
  return r;
}

std::vector<std::uint32_t> tuple_unrank(std::uint64_t rank, std::size_t length, std::size_t base) {
  if (base == 0 && length > 0) throw DomainMismatch("no tuples of positive length over [0]");
  std::vector<std::uint32_t> t(length);
  for (std::size_t i = length; i-- > 0;) {
    t[i] = static_cast<std::uint32_t>(rank % base);
    rank /= base;
  }
  return t;
}

}  // namespace coend
