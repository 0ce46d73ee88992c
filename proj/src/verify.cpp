#include "coend/verify.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <random>
#include <map>
#include <string>

#include "coend/analyzer.hpp"
#include "coend/encoding.hpp"
#include "coend/nat_structure.hpp"
#include "coend/pairing.hpp"
#include "coend/relational.hpp"
#include "coend/tensor.hpp"
#include "coend/unique_tau.hpp"

namespace coend {

nlohmann::json VerifyConfig::to_json() const {
  return {{"seed", seed}, {"cap", cap}, {"n_max", n_max}, {"samples", samples},
          {"execution", execution == Execution::Parallel ? "parallel" : "serial"}};
}

namespace {

const char* const kBuiltins[] = {"rep:0", "rep:1", "rep:2", "pow", "ine", "ine2"};

std::vector<CheckResult> prefixed(const std::string& prefix, std::vector<CheckResult> rs) {
  for (auto& r : rs) r.name = prefix + r.name;
  return rs;
}

CheckResult verdict(std::string name, bool ok, nlohmann::json detail, std::string reason = "") {
  return {std::move(name), ok ? Status::Pass : Status::Fail, std::move(reason), std::move(detail)};
}

std::vector<CheckResult> functor_checks() {
  std::vector<CheckResult> out;
  for (const std::string spec : kBuiltins) {
    const auto f = builtin_functor(spec, 4);
    const auto violation = find_functoriality_violation(f);
    nlohmann::json d{{"bound", f.bound()}};
    if (violation) d["witness"] = violation->describe();
    out.push_back(verdict("functor/" + spec + "/functoriality", !violation, d));

    const bool expected = spec != "ine" && spec != "ine2";
    const bool got = is_in_essential_image(f);
    out.push_back(verdict("functor/" + spec + "/essential_image", got == expected,
                          {{"in_essential_image", got}, {"expected", expected}}));
  }
  for (std::size_t bound = 2; bound <= 4; ++bound)
    for (std::size_t s = 0; s <= bound; ++s) {
      const bool got = is_in_essential_image(representable(s, bound));
      out.push_back(verdict("functor/rep:" + std::to_string(s) + "@" + std::to_string(bound) + "/essential_image", got,
                            {{"in_essential_image", got}}));
    }
  return out;
}

std::vector<CheckResult> tensor_lemma_checks(const VerifyConfig& c) {
  std::vector<CheckResult> out;
  std::vector<std::size_t> sizes;
  for (std::size_t n = 0; n <= c.cap; ++n) sizes.push_back(n);
  CheckResult scope{"tensor_lemmas/scope", Status::Pass, "", {{"carrier_sizes", sizes}, {"functors", kBuiltins}}};
  if (c.cap == 0) scope.reason = "vacuous: carrier cap 0 leaves only the empty carrier, which has no expressions of positive arity";
  out.push_back(std::move(scope));
  for (const std::string spec : kBuiltins)
    for (std::size_t n : sizes) {
      const auto t = Tensor::compute(n, builtin_functor(spec, Tensor::required_bound(n) + 2));
      auto rs = verify_tensor_lemmas(t, {c.cap, c.execution});
      for (auto& r : prefixed("tensor_lemmas/" + spec + "/X=" + std::to_string(n) + "/", std::move(rs))) {
        if (c.cap == 0 && r.status == Status::Pass && r.reason.empty()) r.reason = "vacuous";
        out.push_back(std::move(r));
      }
    }
  return out;
}

std::vector<CheckResult> rigidity_checks(const VerifyConfig& c) {
  std::vector<CheckResult> out;
  const HomSearchOptions hom{.execution = c.execution};
  const std::size_t n_max = std::max<std::size_t>(c.n_max, 1);
  for (const auto& [name, a] : {std::pair{"one-in-three", one_in_three_structure()},
                                std::pair{"singleton", singleton_no_relations()}}) {
    const auto r = is_inhabited_lex_rigid(a, n_max, hom);
    out.push_back(verdict(std::string("rigidity/") + name + "/inhabited_lex", r.holds, r.to_json(a)));
  }
  // The two-point set without relations must be refuted, and by a constant map.
  const auto a = two_point_no_relations();
  const auto r = is_inhabited_lex_rigid(a, n_max, hom);
  bool constant = false;
  if (r.witness) constant = image(*r.witness).size() == 1;
  out.push_back(verdict("rigidity/two-point/refuted_by_constant", !r.holds && constant, r.to_json(a)));

  const auto one = is_rigid(one_in_three_structure(), hom);
  out.push_back(verdict("rigidity/one-in-three/rigid", one.holds, one.to_json(one_in_three_structure())));
  return out;
}

std::vector<CheckResult> pairing_checks(const VerifyConfig& c) {
  std::vector<CheckResult> out;
  std::mt19937_64 rng(c.seed ^ 0x70616972ull);
  const std::size_t count = c.samples * 10;
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto tuples = sample_tuples(rng, count, n, max_safe_coordinate(n));
    const CantorPairingSystem ps({n});
    std::optional<nlohmann::json> witness;
    std::map<Nat, std::size_t> codes;
    for (std::size_t s = 0; s < tuples.size() && !witness; ++s) {
      const auto& xs = tuples[s];
      const Nat z = pair_n(xs);
      if (unpair_n(z, n) != xs) witness = nlohmann::json{{"tuple", xs}, {"code", z}, {"problem", "unpair(pair(x)) != x"}};
      for (std::size_t i = 0; i < n && !witness; ++i)
        if (ps.project(n, i, ps.assemble(xs)) != xs[i])
          witness = nlohmann::json{{"tuple", xs}, {"component", i}, {"problem", "p^n_i(assemble(x)) != x_i"}};
      if (!witness && pair_n(unpair_n(z, n)) != z) witness = nlohmann::json{{"code", z}, {"problem", "pair(unpair(z)) != z"}};
      auto [it, fresh] = codes.emplace(z, s);
      if (!witness && !fresh && tuples[it->second] != xs)
        witness = nlohmann::json{{"tuples", {tuples[it->second], xs}}, {"code", z}, {"problem", "not injective"}};
    }
    nlohmann::json d{{"samples", tuples.size()}, {"distinct_codes", codes.size()}};
    if (witness) d["witness"] = *witness;
    out.push_back(verdict("pairing/n=" + std::to_string(n) + "/round_trip", !witness, d));
  }
  return out;
}

std::vector<CheckResult> encoding_checks(const VerifyConfig& c) {
  const auto e = build_presheaf_encoding(nat_order_structure(), std::max<std::size_t>(c.n_max, 2));
  auto out = prefixed("encoding/nat-order/", check_encoding(e, c.samples, c.seed));

  const CantorPairingSystem ps({2, 3});
  const auto aug = augment_with_pairing(nat_order_structure(), ps);
  std::mt19937_64 rng(c.seed ^ 0x70726f6aull);
  const auto s3 = sample_tuples(rng, c.samples, 3, Nat{1} << 16);
  const auto second = projection_certificate([](std::span<const Nat> x) { return x[1]; }, aug, 3, s3);
  out.push_back(verdict("encoding/projection_certificate/second_projection",
                        second.consistent && second.index == 1u, second.to_json()));
  const auto s2 = sample_tuples(rng, c.samples, 2, Nat{1} << 16);
  const auto constant = projection_certificate([](std::span<const Nat>) { return Nat{0}; }, aug, 2, s2);
  out.push_back(verdict("encoding/projection_certificate/constant_refuted", !constant.consistent, constant.to_json()));
  return out;
}

std::vector<CheckResult> analyzer_checks(const VerifyConfig& c) {
  std::vector<CheckResult> out;
  const std::size_t n_top = std::clamp<std::size_t>(c.n_max, 1, 3);
  const auto e = build_presheaf_encoding(nat_order_structure(), std::max<std::size_t>(n_top, 2));
  std::mt19937_64 rng(c.seed ^ 0x616e616cull);
  for (const std::string spec : {"rep:1", "rep:2"}) {
    const auto f = builtin_functor(spec, 4);
    for (std::size_t n = 1; n <= n_top; ++n) {
      const auto tau = static_cast<std::uint32_t>(rng() % f.size(n));
      TensorOracle oracle(tau);
      AnalyzerOptions o;
      o.n = n;
      o.seed = rng();
      o.samples = c.samples;
      o.execution = c.execution;
      const auto a = analyze_morphism(oracle, e, f, o);
      auto d = a.to_json(f);
      d["expected_tau"] = f.label(n, tau);
      out.push_back(verdict("analyzer/" + spec + "/n=" + std::to_string(n) + "/round_trip",
                            a.verdict == Verdict::Naive && a.tau == tau, d));
    }
  }
  return out;
}

std::vector<CheckResult> unique_tau_checks(const VerifyConfig& c) {
  const std::size_t n_max = std::clamp<std::size_t>(c.n_max, 1, 2);
  UniqueTauOptions o;
  o.n_max = n_max;
  o.search.execution = c.execution;

  const auto p = one_in_three_presheaf();
  const auto bound = unique_tau_bound(p, n_max);
  auto out = prefixed("unique_tau/one-in-three/",
                      check_unique_tau(p, {builtin_functor("rep:1", bound), builtin_functor("rep:2", bound)}, o));

  // The constant two-point presheaf must fail, with the swap among the witnesses.
  const auto q = constant_presheaf(2);
  o.n_max = 1;
  const auto rs = check_unique_tau(q, {builtin_functor("rep:1", unique_tau_bound(q, 1))}, o);
  const auto& r = rs.front();
  bool swap = false;
  for (const auto& w : r.detail.value("witnesses", nlohmann::json::array()))
    swap = swap || w["components"]["c"]["map"] == "[1,0]:[2]->[2]";
  out.push_back(verdict("unique_tau/two-point/fails_with_swap", r.status == Status::Fail && swap, r.detail));
  return out;
}

}  // namespace

Report verify_all(const VerifyConfig& config) {
  Report report;
  report.command = "verify-all";
  report.config = config.to_json();

  const std::pair<const char*, std::function<std::vector<CheckResult>()>> sections[] = {
      {"functors", [] { return functor_checks(); }},
      {"tensor_lemmas", [&] { return tensor_lemma_checks(config); }},
      {"rigidity", [&] { return rigidity_checks(config); }},
      {"pairing", [&] { return pairing_checks(config); }},
      {"encoding", [&] { return encoding_checks(config); }},
      {"analyzer", [&] { return analyzer_checks(config); }},
      {"unique_tau", [&] { return unique_tau_checks(config); }},
  };
  for (const auto& [name, run] : sections) {
    const auto start = std::chrono::steady_clock::now();
    try {
      report.add_all(run());
    } catch (const std::exception& e) {
      report.add({std::string(name) + "/error", Status::Fail, e.what(), nullptr});
    }
    const std::chrono::duration<double, std::milli> ms = std::chrono::steady_clock::now() - start;
    report.timing[name] = {{"ms", ms.count()}};
  }
  return report;
}

}  // namespace coend
