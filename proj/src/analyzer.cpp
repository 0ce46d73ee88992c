#include "coend/analyzer.hpp"

#include <fcntl.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <charconv>
#include <csignal>
#include <cstdlib>
#include <exception>
#include <numeric>
#include <random>

#include "coend/errors.hpp"

namespace coend {

NatExpression normalize(const TruncatedFunctor& f, const NatExpression& e) {
  const std::size_t k = e.arity();
  if (k > f.bound())
    throw BoundTooSmall("expression of arity " + std::to_string(k) + " exceeds bound " + std::to_string(f.bound()));
  if (e.element >= f.size(k)) throw DomainMismatch("element " + std::to_string(e.element) + " not in F[" + std::to_string(k) + "]");

  std::vector<Nat> ys = e.map;
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  const std::size_t m = ys.size();
  std::vector<std::uint32_t> bar(k);
  for (std::size_t i = 0; i < k; ++i)
    bar[i] = static_cast<std::uint32_t>(std::lower_bound(ys.begin(), ys.end(), e.map[i]) - ys.begin());
  const std::uint32_t rho = f.act(FinFunction(bar, m), e.element);

  for (std::size_t s = 0; s <= m; ++s) {
    std::vector<std::uint32_t> idx(s);
    std::iota(idx.begin(), idx.end(), 0u);
    while (true) {
      const FinFunction incl(idx, m);
      for (std::uint32_t t = 0; t < f.size(s); ++t) {
        if (f.act(incl, t) != rho) continue;
        NatExpression out;
        out.element = t;
        for (auto i : idx) out.map.push_back(ys[i]);
        return out;
      }
      // next s-subset of [m] in lexicographic order
      std::size_t pos = s;
      while (pos > 0 && idx[pos - 1] == m - s + pos - 1) --pos;
      if (pos == 0) break;
      ++idx[pos - 1];
      for (std::size_t j = pos; j < s; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return {ys, rho};  // not reached: the full subset always factors
}

std::string render(const TruncatedFunctor& f, const NatExpression& e) {
  std::string s = "(";
  for (std::size_t i = 0; i < e.map.size(); ++i) s += (i ? "," : "") + std::to_string(e.map[i]);
  s += ")⊗";
  if (e.arity() <= f.bound() && e.element < f.size(e.arity()))
    s += f.label(e.arity(), e.element);
  else
    s += "#" + std::to_string(e.element);
  return s;
}

std::string format_request(std::size_t vertex, std::span<const Nat> xs) {
  std::string s = std::to_string(vertex);
  for (auto x : xs) s += " " + std::to_string(x);
  s += "\n";
  return s;
}

NatExpression parse_response(const std::string& line) {
  std::vector<Nat> tokens;
  const char* p = line.data();
  const char* end = p + line.size();
  while (p < end) {
    Nat v = 0;
    auto [next, ec] = std::from_chars(p, end, v);
    if (ec != std::errc() || next == p) throw ProtocolError("malformed response: \"" + line + "\"");
    tokens.push_back(v);
    p = next;
    if (p < end) {
      if (*p != ' ' || p + 1 == end) throw ProtocolError("malformed response: \"" + line + "\"");
      ++p;
    }
  }
  if (tokens.empty()) throw ProtocolError("empty response");
  const Nat k = tokens[0];
  if (tokens.size() != k + 2)
    throw ProtocolError("response announces " + std::to_string(k) + " entries but has " + std::to_string(tokens.size()) + " tokens");
  if (tokens.back() > UINT32_MAX) throw ProtocolError("element index out of range");
  NatExpression e;
  e.map.assign(tokens.begin() + 1, tokens.end() - 1);
  e.element = static_cast<std::uint32_t>(tokens.back());
  return e;
}

NatExpression TensorOracle::evaluate(std::size_t, std::span<const Nat> xs) {
  return {std::vector<Nat>(xs.begin(), xs.end()), tau_};
}

NatExpression PermutedTensorOracle::evaluate(std::size_t, std::span<const Nat> xs) {
  if (xs.size() != pi_.dom_size() || pi_.cod_size() != xs.size()) throw DomainMismatch("permutation of the wrong size");
  NatExpression e;
  e.element = tau_;
  for (std::size_t i = 0; i < pi_.dom_size(); ++i) e.map.push_back(xs[pi_(i)]);
  return e;
}

std::string PermutedTensorOracle::describe() const {
  return "tensor(" + std::to_string(tau_) + ") after " + pi_.to_string();
}

SubprocessOracle::SubprocessOracle(std::vector<std::string> argv) : argv_(std::move(argv)) {
  if (argv_.empty()) throw PreconditionFailed("empty black-box command");
  std::signal(SIGPIPE, SIG_IGN);
  int to[2];
  int from[2];
  if (pipe2(to, O_CLOEXEC) != 0) throw ProtocolError("pipe failed");
  if (pipe2(from, O_CLOEXEC) != 0) {
    close(to[0]);
    close(to[1]);
    throw ProtocolError("pipe failed");
  }
  std::vector<char*> cargv;
  for (auto& a : argv_) cargv.push_back(a.data());
  cargv.push_back(nullptr);
  pid_ = fork();
  if (pid_ < 0) throw ProtocolError("fork failed");
  if (pid_ == 0) {
    dup2(to[0], STDIN_FILENO);
    dup2(from[1], STDOUT_FILENO);
    execvp(cargv[0], cargv.data());
    _exit(127);
  }
  close(to[0]);
  close(from[1]);
  to_child_ = fdopen(to[1], "w");
  from_child_ = fdopen(from[0], "r");
}

SubprocessOracle::~SubprocessOracle() {
  if (to_child_) std::fclose(to_child_);
  if (from_child_) std::fclose(from_child_);
  if (pid_ > 0) waitpid(pid_, nullptr, 0);
}

NatExpression SubprocessOracle::evaluate(std::size_t vertex, std::span<const Nat> xs) {
  std::lock_guard lock(mutex_);
  const auto request = format_request(vertex, xs);
  if (std::fputs(request.c_str(), to_child_) == EOF || std::fflush(to_child_) != 0)
    throw ProtocolError("black box is not accepting input");
  char* buf = nullptr;
  std::size_t cap = 0;
  const auto len = getline(&buf, &cap, from_child_);
  if (len < 0) {
    std::free(buf);
    throw ProtocolError("black box closed its output");
  }
  std::string line(buf, static_cast<std::size_t>(len));
  std::free(buf);
  if (!line.empty() && line.back() == '\n') line.pop_back();
  return parse_response(line);
}

std::string SubprocessOracle::describe() const {
  std::string s;
  for (const auto& a : argv_) s += (s.empty() ? "" : " ") + a;
  return s;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Naive: return "NAIVE";
    case Verdict::Inconclusive: return "INCONCLUSIVE";
    case Verdict::Refuted: return "REFUTED";
  }
  return "?";
}

nlohmann::json MorphismAnalysis::to_json(const TruncatedFunctor& f) const {
  nlohmann::json j{{"verdict", to_string(verdict)},
                   {"equivariance_checks", equivariance_checks},
                   {"max_length", max_length},
                   {"first_max_sample", first_max_sample},
                   {"plateau", plateau},
                   {"length_bound", "sampled hypothesis"}};
  if (tau) {
    j["tau"] = *tau;
    j["tau_label"] = f.label(argmax.size(), *tau);
  }
  if (!reason.empty()) j["reason"] = reason;
  if (!witness.is_null()) j["witness"] = witness;
  if (!argmax.empty()) {
    j["argmax"] = argmax;
    j["minimal"] = render(f, minimal);
  }
  if (h) j["h"] = h->to_string();
  return j;
}

namespace {

template <class Body>
void for_each_index(std::size_t count, bool parallel, Body body) {
  std::exception_ptr error;
#pragma omp parallel for schedule(static) if (parallel)
  for (std::size_t i = 0; i < count; ++i) {
    try {
      body(i);
    } catch (...) {
#pragma omp critical(coend_analyzer_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

NatExpression checked(const TruncatedFunctor& f, NatExpression e) {
  if (e.arity() > f.bound())
    throw ProtocolError("black box returned an expression of arity " + std::to_string(e.arity()) +
                        " above the functor bound " + std::to_string(f.bound()));
  if (e.element >= f.size(e.arity()))
    throw ProtocolError("black box returned element " + std::to_string(e.element) + " outside F[" +
                        std::to_string(e.arity()) + "]");
  return e;
}

// Normal forms of f at one vertex on every input. Oracle calls run in parallel
// only when the oracle allows it; normalization always may.
std::vector<NatExpression> evaluate_all(MorphismOracle& oracle, const TruncatedFunctor& f, std::size_t vertex,
                                        const std::vector<std::vector<Nat>>& inputs, bool parallel) {
  std::vector<NatExpression> out(inputs.size());
  const bool oracle_parallel = parallel && oracle.thread_safe();
  for_each_index(inputs.size(), oracle_parallel, [&](std::size_t i) { out[i] = checked(f, oracle.evaluate(vertex, inputs[i])); });
  for_each_index(inputs.size(), parallel, [&](std::size_t i) { out[i] = normalize(f, out[i]); });
  return out;
}

}  // namespace

MorphismAnalysis analyze_morphism(MorphismOracle& oracle, const PresheafEncoding& encoding, const TruncatedFunctor& F,
                                  const AnalyzerOptions& o) {
  const std::size_t n = o.n;
  if (n == 0) throw PreconditionFailed("n must be positive");
  if (n > F.bound()) throw PreconditionFailed("n exceeds the bound of " + F.name());
  if (!is_in_essential_image(F)) throw PreconditionFailed(F.name() + " is not in the essential image");
  if (o.samples == 0) throw PreconditionFailed("need at least one sample");
  const bool parallel = o.execution == Execution::Parallel;
  const auto& p = encoding.presheaf;
  const auto& g = p.graph;
  for (const auto& name : o.edges)
    if (!g.edge_index(name)) throw PreconditionFailed("unknown edge " + name);

  MorphismAnalysis out;
  std::mt19937_64 rng(o.seed);
  auto draw = [&](std::size_t vertex) -> Nat {
    const auto& c = p.carriers[vertex];
    return c.size ? rng() % *c.size : c.sample(rng);
  };
  auto refute = [&](std::string reason, nlohmann::json witness) {
    out.verdict = Verdict::Refuted;
    out.reason = std::move(reason);
    out.witness = std::move(witness);
    return out;
  };

  // Equivariance spot checks: f_t(e·x) = e·f_s(x).
  for (std::size_t ei = 0; ei < g.edges.size(); ++ei) {
    const auto& edge = g.edges[ei];
    if (!o.edges.empty() && std::find(o.edges.begin(), o.edges.end(), edge.name) == o.edges.end()) continue;
    const auto& act = p.actions[ei];
    std::vector<std::vector<Nat>> inputs(o.equivariance_samples, std::vector<Nat>(n));
    for (auto& t : inputs)
      for (auto& x : t) x = draw(edge.source);
    std::vector<std::vector<Nat>> images = inputs;
    for (auto& t : images)
      for (auto& x : t) x = act(x);
    const auto lhs = evaluate_all(oracle, F, edge.target, images, parallel);
    auto rhs = evaluate_all(oracle, F, edge.source, inputs, parallel);
    for (std::size_t s = 0; s < inputs.size(); ++s) {
      NatExpression moved = rhs[s];
      for (auto& y : moved.map) y = act(y);
      moved = normalize(F, moved);
      ++out.equivariance_checks;
      if (moved != lhs[s])
        return refute("not equivariant for edge " + edge.name,
                      {{"edge", edge.name}, {"input", inputs[s]}, {"f(e.x)", render(F, lhs[s])}, {"e.f(x)", render(F, moved)}});
    }
  }

  // Lengths on main-carrier samples; the maximum is only a sampled hypothesis.
  const Nat limit = std::min<Nat>(encoding.sample_limit, Nat{1} << 31);
  const auto as = sample_tuples(rng, o.samples, n, limit);
  const auto fa = evaluate_all(oracle, F, EncodingGraph::main_vertex, as, parallel);
  for (std::size_t s = 0; s < fa.size(); ++s)
    if (fa[s].arity() > out.max_length || s == 0) {
      out.max_length = fa[s].arity();
      out.first_max_sample = s;
    }
  out.plateau = 2 * out.first_max_sample < o.samples;
  const std::size_t m = out.max_length;
  out.argmax = as[out.first_max_sample];
  out.minimal = fa[out.first_max_sample];
  const auto& alpha = out.minimal.map;
  const std::uint32_t sigma = out.minimal.element;

  // f(<a, b>) = (<α, β>) ⊗ σ up to reordering; read off β and the functions φ_i.
  const auto bs = sample_tuples(rng, o.samples, n, limit);
  std::vector<std::vector<Nat>> cs(bs.size(), std::vector<Nat>(n));
  for (std::size_t s = 0; s < bs.size(); ++s)
    for (std::size_t i = 0; i < n; ++i) cs[s][i] = pair2(out.argmax[i], bs[s][i]);
  const auto fc = evaluate_all(oracle, F, EncodingGraph::main_vertex, cs, parallel);
  std::vector<std::vector<Nat>> phi(m, std::vector<Nat>(bs.size()));
  for (std::size_t s = 0; s < bs.size(); ++s) {
    const auto& e = fc[s];
    const nlohmann::json w{{"b", bs[s]}, {"f(<a,b>)", render(F, e)}};
    if (e.arity() > m) {
      out.verdict = Verdict::Inconclusive;
      out.reason = "length of f(<a,b>) exceeds the sampled maximum";
      out.witness = w;
      return out;
    }
    if (e.arity() < m) return refute("length of f(<a,b>) is below Le(f(a))", w);
    std::vector<Nat> u(m);
    std::vector<Nat> beta(m);
    for (std::size_t j = 0; j < m; ++j) std::tie(u[j], beta[j]) = unpair2(e.map[j]);
    std::vector<std::uint32_t> psi(m);
    for (std::size_t i = 0; i < m; ++i) {
      auto it = std::find(u.begin(), u.end(), alpha[i]);
      if (it == u.end()) return refute("first coordinates of f(<a,b>) do not match the minimal expression of f(a)", w);
      psi[i] = static_cast<std::uint32_t>(it - u.begin());
    }
    if (F.act(FinFunction(psi, m), sigma) != e.element)
      return refute("element of f(<a,b>) is not the reindexed element of f(a)", w);
    for (std::size_t i = 0; i < m; ++i) phi[i][s] = beta[psi[i]];
  }

  // Each φ_i must be a projection b |-> b_{h(i)}.
  std::vector<std::uint32_t> hv(m);
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<std::uint32_t> candidates;
    for (std::size_t j = 0; j < n; ++j) {
      bool all = true;
      for (std::size_t s = 0; s < bs.size() && all; ++s) all = phi[i][s] == bs[s][j];
      if (all) candidates.push_back(static_cast<std::uint32_t>(j));
    }
    if (candidates.empty()) return refute("phi_" + std::to_string(i) + " is not a projection", {{"i", i}});
    if (candidates.size() > 1) {
      out.verdict = Verdict::Inconclusive;
      out.reason = "phi_" + std::to_string(i) + " agrees with several projections on the samples";
      out.witness = {{"i", i}, {"projections", candidates}};
      return out;
    }
    hv[i] = candidates[0];
  }
  out.h = FinFunction(hv, n);
  const std::uint32_t tau = F.act(*out.h, sigma);
  out.tau = tau;

  // Fresh samples at every vertex: f = −⊗τ.
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    std::vector<std::vector<Nat>> xs;
    if (v == EncodingGraph::main_vertex) {
      xs = sample_tuples(rng, o.samples, n, limit);
    } else {
      xs.assign(o.samples, std::vector<Nat>(n));
      for (auto& t : xs)
        for (auto& x : t) x = draw(v);
    }
    const auto got = evaluate_all(oracle, F, v, xs, parallel);
    for (std::size_t s = 0; s < xs.size(); ++s) {
      const auto want = normalize(F, {xs[s], tau});
      if (got[s] != want) {
        out.tau.reset();
        return refute("f differs from -⊗tau at vertex " + g.vertices[v],
                      {{"vertex", g.vertices[v]}, {"input", xs[s]}, {"f(x)", render(F, got[s])}, {"x⊗tau", render(F, want)}});
      }
    }
  }
  out.verdict = Verdict::Naive;
  return out;
}

}  // namespace coend
