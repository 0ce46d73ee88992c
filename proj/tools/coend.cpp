// coend: command-line front end. Every command prints a Report (JSON or text)
// and exits 0 when no check failed, 1 on a failed check, 2 on usage or input errors.

#include <charconv>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "coend/analyzer.hpp"
#include "coend/encoding.hpp"
#include "coend/errors.hpp"
#include "coend/formula.hpp"
#include "coend/io.hpp"
#include "coend/pairing.hpp"
#include "coend/relational.hpp"
#include "coend/tensor.hpp"
#include "coend/unique_tau.hpp"
#include "coend/verify.hpp"

using namespace coend;

namespace {

struct Common {
  std::uint64_t seed = 0;
  std::optional<std::size_t> bound;
  std::size_t cap = 3;
  std::string report = "json";
};

nlohmann::json common_config(const Common& c) {
  nlohmann::json j{{"seed", c.seed}, {"cap", c.cap}};
  if (c.bound) j["bound"] = *c.bound;
  return j;
}

std::uint32_t parse_element(const TruncatedFunctor& f, std::size_t k, const std::string& text) {
  if (auto e = f.find_label(k, text)) return *e;
  std::uint32_t v = 0;
  const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size() || v >= f.size(k))
    throw PreconditionFailed("'" + text + "' is neither a label nor an index of " + f.name() + "[" + std::to_string(k) + "]");
  return v;
}

std::vector<std::string> split_words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

CheckResult pass_fail(std::string name, bool ok, nlohmann::json detail) {
  return {std::move(name), ok ? Status::Pass : Status::Fail, "", std::move(detail)};
}

// ---- tensor / minexpr ----

struct TensorArgs {
  std::size_t carrier = 1;
  std::string functor = "rep:1";
};

TruncatedFunctor tensor_functor(const Common& c, const TensorArgs& a) {
  return resolve_functor(a.functor, c.bound.value_or(Tensor::required_bound(a.carrier) + 2));
}

Report run_tensor(const Common& c, const TensorArgs& a) {
  Report r;
  r.command = "tensor";
  r.config = common_config(c);
  r.config["carrier"] = a.carrier;
  r.config["functor"] = a.functor;
  const auto f = tensor_functor(c, a);
  const auto t = Tensor::compute(a.carrier, f);
  r.data["classes"] = class_table(t);
  r.data["class_count"] = t.class_count();
  r.data["stability"] = {{"base_bound", t.stability().base_bound},
                         {"working_bound", t.stability().working_bound},
                         {"compared_bounds", t.stability().compared_bounds},
                         {"stable", t.stability().stable},
                         {"flagged", t.stability().flagged}};
  if (a.carrier <= c.cap) {
    r.add_all(verify_tensor_lemmas(t, {c.cap, Execution::Parallel}));
  } else {
    r.add({"tensor_lemmas", Status::Skipped, "bound: carrier size exceeds --cap " + std::to_string(c.cap), nullptr});
  }
  return r;
}

struct MinexprArgs {
  TensorArgs tensor;
  std::string map;  // comma-separated carrier elements
  std::string element;
};

Report run_minexpr(const Common& c, const MinexprArgs& a) {
  Report r;
  r.command = "minexpr";
  r.config = common_config(c);
  r.config["carrier"] = a.tensor.carrier;
  r.config["functor"] = a.tensor.functor;
  const auto f = tensor_functor(c, a.tensor);
  const auto t = Tensor::compute(a.tensor.carrier, f);
  Expression e;
  std::istringstream parts(a.map);
  for (std::string x; std::getline(parts, x, ',');) {
    std::uint32_t v = 0;
    const auto [p, ec] = std::from_chars(x.data(), x.data() + x.size(), v);
    if (x.empty() || ec != std::errc() || p != x.data() + x.size()) throw PreconditionFailed("bad map entry '" + x + "'");
    e.map.push_back(v);
  }
  e.element = parse_element(f, e.arity(), a.element);
  const auto id = t.lookup(e);
  const auto& cls = t.cls(id);
  nlohmann::json mins = nlohmann::json::array();
  for (const auto& m : t.minimal_expressions(id)) mins.push_back(t.render(m));
  r.data = {{"expression", t.render(e)},
            {"class", id},
            {"length", cls.length},
            {"canonical", t.render(cls.canonical)},
            {"minimal_expressions", mins}};
  return r;
}

// ---- functor check ----

Report run_functor_check(const Common& c, const std::string& spec) {
  Report r;
  r.command = "functor check";
  r.config = common_config(c);
  r.config["functor"] = spec;
  const auto f = resolve_functor(spec, c.bound.value_or(4));
  const auto v = find_functoriality_violation(f);
  nlohmann::json d{{"bound", f.bound()}};
  if (v) d["witness"] = v->describe();
  r.add(pass_fail("functoriality", !v, d));
  const auto w = essential_image_witness(f);
  nlohmann::json comparison = nlohmann::json::array();
  for (std::size_t e = 0; e < w.comparison.size(); ++e)
    comparison.push_back({f.label(0, static_cast<std::uint32_t>(e)), f.label(1, w.comparison[e])});
  nlohmann::json equalizer = nlohmann::json::array();
  for (auto e : w.equalizer) equalizer.push_back(f.label(1, e));
  r.data = {{"sizes", nlohmann::json::array()},
            {"essential_image",
             {{"in_image", w.in_image()}, {"injective", w.injective}, {"surjective", w.surjective},
              {"comparison", comparison}, {"equalizer", equalizer}}}};
  for (std::size_t k = 0; k <= f.bound(); ++k) r.data["sizes"].push_back(f.size(k));
  return r;
}

// ---- rigidity / hat-expand ----

struct RigidityArgs {
  std::string structure = "one-in-three";
  std::string mode = "inhabited-lex";
  std::size_t n_max = 3;
};

CheckResult rigidity_result(const RelStructure& a, const RigidityArgs& args) {
  const auto mode = parse_rigidity_mode(args.mode);
  const auto v = check_rigidity(a, mode, args.n_max);
  return {"rigidity/" + to_string(mode), v.holds ? Status::Pass : Status::Fail,
          v.holds ? "" : "refuted by a non-projection", v.to_json(a)};
}

Report run_rigidity(const Common& c, const RigidityArgs& a) {
  Report r;
  r.command = "rigidity check";
  r.config = common_config(c);
  r.config.update({{"structure", a.structure}, {"mode", a.mode}, {"n_max", a.n_max}});
  r.add(rigidity_result(resolve_structure(a.structure), a));
  return r;
}

struct HatArgs {
  RigidityArgs rigidity;
  std::vector<std::string> formulas;
  bool check = false;
};

Report run_hat_expand(const Common& c, const HatArgs& a) {
  Report r;
  r.command = "hat-expand";
  r.config = common_config(c);
  r.config.update({{"structure", a.rigidity.structure}, {"formulas", a.formulas}});
  std::vector<Formula> fs;
  for (const auto& s : a.formulas) fs.push_back(Formula::parse(s));
  const auto expanded = hat_expand(resolve_structure(a.rigidity.structure), fs);
  r.data["structure"] = structure_to_json(expanded);
  if (a.check) {
    r.config.update({{"mode", a.rigidity.mode}, {"n_max", a.rigidity.n_max}});
    r.add(rigidity_result(expanded, a.rigidity));
  }
  return r;
}

// ---- pairing ----

struct PairingArgs {
  std::size_t n = 2;
  std::size_t samples = 10000;
  std::vector<Nat> pair;
  std::optional<Nat> unpair;
};

Report run_pairing(const Common& c, const PairingArgs& a) {
  Report r;
  r.command = "pairing";
  r.config = common_config(c);
  r.config.update({{"n", a.n}, {"samples", a.samples}});
  if (a.n == 0) throw PreconditionFailed("--n must be at least 1");
  if (!a.pair.empty()) r.data["pair"] = {{"tuple", a.pair}, {"code", pair_n(a.pair)}};
  if (a.unpair) r.data["unpair"] = {{"code", *a.unpair}, {"tuple", unpair_n(*a.unpair, a.n)}};
  std::mt19937_64 rng(c.seed);
  const auto tuples = sample_tuples(rng, a.samples, a.n, max_safe_coordinate(a.n));
  std::optional<nlohmann::json> bad;
  std::set<Nat> codes;
  for (const auto& xs : tuples) {
    const Nat z = pair_n(xs);
    if (unpair_n(z, a.n) != xs) {
      bad = nlohmann::json{{"tuple", xs}, {"code", z}};
      break;
    }
    codes.insert(z);
  }
  std::set<std::vector<Nat>> distinct(tuples.begin(), tuples.end());
  nlohmann::json d{{"samples", tuples.size()}, {"distinct_tuples", distinct.size()}, {"distinct_codes", codes.size()}};
  if (bad) d["witness"] = *bad;
  r.add(pass_fail("round_trip", !bad, d));
  r.add(pass_fail("injective_on_samples", bad || codes.size() == distinct.size(), d));
  return r;
}

// ---- encode ----

struct EncodeArgs {
  std::string structure = "nat-order";
  std::size_t n_trunc = 3;
  std::size_t samples = 1000;
  std::optional<std::string> presheaf;
  std::vector<std::string> functors{"rep:1", "rep:2"};
  std::size_t n = 1;
  std::optional<std::string> fn;
  std::optional<std::string> tau;
  std::string functor = "rep:1";
  std::vector<std::string> edges;
};

Report encode_report(const std::string& sub, const Common& c) {
  Report r;
  r.command = "encode " + sub;
  r.config = common_config(c);
  return r;
}

Report run_encode_build(const Common& c, const EncodeArgs& a) {
  auto r = encode_report("build", c);
  r.config.update({{"structure", a.structure}, {"n_max", a.n_trunc}});
  const auto e = build_presheaf_encoding(resolve_nat_structure(a.structure), a.n_trunc);
  r.data["graph"] = describe_graph(e.presheaf.graph);
  r.data["pairing"] = e.pairing.describe();
  r.data["retraction_default"] = PresheafEncoding::default_fiber_element;
  return r;
}

Report run_encode_check(const Common& c, const EncodeArgs& a) {
  auto r = encode_report("check", c);
  r.config["samples"] = a.samples;
  if (a.presheaf) {
    r.config.update({{"presheaf", *a.presheaf}, {"functors", a.functors}, {"n_max", a.n}});
    const auto p = resolve_presheaf(*a.presheaf);
    const auto bound = c.bound.value_or(unique_tau_bound(p, a.n));
    std::vector<TruncatedFunctor> fs;
    for (const auto& s : a.functors) fs.push_back(resolve_functor(s, bound));
    UniqueTauOptions o;
    o.n_max = a.n;
    r.add_all(check_unique_tau(p, fs, o));
    return r;
  }
  r.config.update({{"structure", a.structure}, {"n_max", a.n_trunc}});
  const auto e = build_presheaf_encoding(resolve_nat_structure(a.structure), a.n_trunc);
  r.add_all(check_encoding(e, a.samples, c.seed));
  return r;
}

Report run_encode_analyze(const Common& c, const EncodeArgs& a) {
  auto r = encode_report("analyze", c);
  r.config.update({{"structure", a.structure}, {"functor", a.functor}, {"n", a.n}, {"samples", a.samples}});
  if (a.fn.has_value() == a.tau.has_value()) throw PreconditionFailed("give exactly one of --fn and --tau");
  const auto f = resolve_functor(a.functor, c.bound.value_or(std::max<std::size_t>(a.n, 2) + 1));
  const auto e = build_presheaf_encoding(resolve_nat_structure(a.structure), std::max(a.n_trunc, a.n));
  std::unique_ptr<MorphismOracle> oracle;
  if (a.fn) {
    r.config["fn"] = *a.fn;
    oracle = std::make_unique<SubprocessOracle>(split_words(*a.fn));
  } else {
    r.config["tau"] = *a.tau;
    oracle = std::make_unique<TensorOracle>(parse_element(f, a.n, *a.tau));
  }
  AnalyzerOptions o;
  o.n = a.n;
  o.seed = c.seed;
  o.samples = a.samples;
  o.edges = a.edges;
  const auto m = analyze_morphism(*oracle, e, f, o);
  CheckResult res{"naive_morphism", Status::Pass, m.reason, m.to_json(f)};
  if (m.verdict == Verdict::Refuted) res.status = Status::Fail;
  if (m.verdict == Verdict::Inconclusive) {
    res.status = Status::Skipped;
    res.reason = "bound: " + m.reason;
  }
  r.add(std::move(res));
  return r;
}

void print(const Report& r, const std::string& format) {
  if (format == "text") {
    std::cout << r.to_text();
    if (!r.data.empty()) std::cout << r.data.dump(2) << "\n";
  } else {
    std::cout << r.to_json().dump(2) << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coend tensors, rigidity and encoding checks"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--seed", common.seed, "PRNG seed");
  app.add_option("--bound", common.bound, "truncation bound for built-in functors");
  app.add_option("--cap", common.cap, "largest carrier for exhaustive lemma checks");
  app.add_option("--report", common.report, "output format")->check(CLI::IsMember({"json", "text"}));

  std::function<Report()> run;

  TensorArgs tensor;
  auto* t = app.add_subcommand("tensor", "class table and lemma checks for X ⊗ F");
  t->add_option("--carrier", tensor.carrier, "|X|")->required();
  t->add_option("--functor", tensor.functor, "rep:<s>, pow, ine, ine2 or a functor file");
  t->callback([&] { run = [&] { return run_tensor(common, tensor); }; });

  MinexprArgs minexpr;
  auto* mx = app.add_subcommand("minexpr", "minimal expressions of the class of (map, element)");
  mx->add_option("--carrier", minexpr.tensor.carrier, "|X|")->required();
  mx->add_option("--functor", minexpr.tensor.functor, "functor");
  mx->add_option("--map", minexpr.map, "comma-separated values of [k] -> X (empty for k = 0)");
  mx->add_option("--element", minexpr.element, "label or index in F[k]")->required();
  mx->callback([&] { run = [&] { return run_minexpr(common, minexpr); }; });

  std::string functor_spec;
  auto* fn = app.add_subcommand("functor", "functor checks");
  fn->require_subcommand(1);
  auto* fc = fn->add_subcommand("check", "functoriality and essential-image witness");
  fc->add_option("--functor", functor_spec, "functor")->required();
  fc->callback([&] { run = [&] { return run_functor_check(common, functor_spec); }; });

  RigidityArgs rigidity;
  auto* rg = app.add_subcommand("rigidity", "rigidity checks");
  rg->require_subcommand(1);
  auto* rc = rg->add_subcommand("check", "bounded rigidity by exhaustive hom enumeration");
  rc->add_option("--structure", rigidity.structure, "one-in-three, two-point, singleton or a structure file");
  rc->add_option("--mode", rigidity.mode, "rigid, lex or inhabited-lex");
  rc->add_option("--nmax", rigidity.n_max, "largest power checked");
  rc->callback([&] { run = [&] { return run_rigidity(common, rigidity); }; });

  HatArgs hat;
  auto* hx = app.add_subcommand("hat-expand", "expand a structure by definable relations");
  hx->add_option("--structure", hat.rigidity.structure, "structure");
  hx->add_option("--formula", hat.formulas, "formula (repeatable)")->required();
  hx->add_flag("--check-rigidity", hat.check, "also check rigidity of the expansion");
  hx->add_option("--mode", hat.rigidity.mode, "rigidity mode");
  hx->add_option("--nmax", hat.rigidity.n_max, "largest power checked");
  hx->callback([&] { run = [&] { return run_hat_expand(common, hat); }; });

  PairingArgs pairing;
  auto* pr = app.add_subcommand("pairing", "Cantor pairing round trips");
  pr->add_option("--n", pairing.n, "arity");
  pr->add_option("--samples", pairing.samples, "sampled tuples");
  pr->add_option("--pair", pairing.pair, "tuple to encode")->delimiter(',');
  pr->add_option("--unpair", pairing.unpair, "code to decode into --n coordinates");
  pr->callback([&] { run = [&] { return run_pairing(common, pairing); }; });

  EncodeArgs encode;
  auto* en = app.add_subcommand("encode", "encoding topos");
  en->require_subcommand(1);
  auto* eb = en->add_subcommand("build", "encoding graph of a structure over ℕ");
  eb->add_option("--structure", encode.structure, "nat-order or a nat structure file");
  eb->add_option("--nmax", encode.n_trunc, "pairing truncation N >= 2");
  eb->callback([&] { run = [&] { return run_encode_build(common, encode); }; });
  auto* ec = en->add_subcommand("check", "encoding laws, or unique-τ on a finite presheaf");
  ec->add_option("--structure", encode.structure, "nat-order or a nat structure file");
  ec->add_option("--nmax", encode.n_trunc, "pairing truncation N >= 2 (with --presheaf: use --n)");
  ec->add_option("--samples", encode.samples, "samples per law");
  ec->add_option("--presheaf", encode.presheaf, "one-in-three, two-point, singleton or a presheaf file");
  ec->add_option("--functor", encode.functors, "functors for the unique-τ check (repeatable)");
  ec->add_option("--n", encode.n, "largest n for the unique-τ check");
  ec->callback([&] { run = [&] { return run_encode_check(common, encode); }; });
  auto* ea = en->add_subcommand("analyze", "test a black-box morphism X^n -> X ⊗ F");
  ea->add_option("--fn", encode.fn, "command speaking the line protocol (split on spaces)");
  ea->add_option("--tau", encode.tau, "built-in −⊗τ instead of --fn (label or index)");
  ea->add_option("--functor", encode.functor, "functor in the essential image");
  ea->add_option("--n", encode.n, "arity n")->required();
  ea->add_option("--samples", encode.samples, "main-carrier samples");
  ea->add_option("--structure", encode.structure, "nat-order or a nat structure file");
  ea->add_option("--nmax", encode.n_trunc, "pairing truncation");
  ea->add_option("--edge", encode.edges, "restrict equivariance checks to these edges (repeatable)");
  ea->callback([&] { run = [&] { return run_encode_analyze(common, encode); }; });

  VerifyConfig verify;
  auto* va = app.add_subcommand("verify-all", "every lemma check");
  va->add_option("--nmax", verify.n_max, "arity limit")->check(CLI::Range(1, 4));
  va->add_option("--samples", verify.samples, "samples per sampled check")->check(CLI::Range(1, 100000));
  bool no_timing = false;
  va->add_flag("--no-timing", no_timing, "omit timing from the JSON report");
  va->callback([&] {
    run = [&] {
      verify.seed = common.seed;
      verify.cap = common.cap;
      return verify_all(verify);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  if (app.got_subcommand("verify-all") && common.cap > 3) {
    std::cerr << "error: verify-all supports --cap up to 3\n";
    return 2;
  }

  try {
    const Report r = run();
    if (no_timing && common.report == "json") {
      std::cout << r.to_json(false).dump(2) << "\n";
    } else {
      print(r, common.report);
    }
    return r.any_failure() ? 1 : 0;
  } catch (const coend::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
