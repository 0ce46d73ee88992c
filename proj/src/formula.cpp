#include "coend/formula.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "coend/errors.hpp"

namespace coend {

namespace {

using Node = FormulaNode;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Node::Kind kind, std::string name = {}, std::vector<std::string> args = {},
             std::vector<NodePtr> children = {}) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->name = std::move(name);
  n->args = std::move(args);
  n->children = std::move(children);
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse() {
    auto n = implication();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(std::string_view token) {
    skip_space();
    if (text_.substr(pos_, token.size()) != token) return false;
    pos_ += token.size();
    return true;
  }

  void expect(std::string_view token) {
    if (!accept(token)) fail("expected '" + std::string(token) + "'");
  }

  static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

  std::string identifier() {
    skip_space();
    const std::size_t start = pos_;
    if (pos_ >= text_.size() || !(std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      fail("expected an identifier");
    while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  // Keyword followed by a non-identifier character.
  bool keyword(std::string_view kw) {
    skip_space();
    if (text_.substr(pos_, kw.size()) != kw) return false;
    if (pos_ + kw.size() < text_.size() && ident_char(text_[pos_ + kw.size()])) return false;
    pos_ += kw.size();
    return true;
  }

  NodePtr implication() {
    auto left = disjunction();
    if (accept("->")) return make(Node::Kind::Implies, {}, {}, {left, implication()});
    return left;
  }

  NodePtr disjunction() {
    auto left = conjunction();
    while (accept("|")) left = make(Node::Kind::Or, {}, {}, {left, conjunction()});
    return left;
  }

  NodePtr conjunction() {
    auto left = unary();
    while (accept("&")) left = make(Node::Kind::And, {}, {}, {left, unary()});
    return left;
  }

  NodePtr unary() {
    if (accept("!")) return make(Node::Kind::Not, {}, {}, {unary()});
    for (auto [kw, kind] : {std::pair{"forall", Node::Kind::Forall}, std::pair{"exists", Node::Kind::Exists}}) {
      if (keyword(kw)) {
        auto var = identifier();
        accept(".");
        return make(kind, std::move(var), {}, {implication()});
      }
    }
    return primary();
  }

  NodePtr primary() {
    if (accept("(")) {
      auto n = implication();
      expect(")");
      return n;
    }
    if (keyword("true")) return make(Node::Kind::True);
    if (keyword("false")) return make(Node::Kind::False);
    auto id = identifier();
    if (accept("(")) {
      std::vector<std::string> args;
      if (!accept(")")) {
        do args.push_back(identifier());
        while (accept(","));
        expect(")");
      }
      return make(Node::Kind::Atom, std::move(id), std::move(args));
    }
    if (accept("=")) return make(Node::Kind::Equal, {}, {id, identifier()});
    fail("expected '(' or '=' after '" + id + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

void collect_free(const Node& n, std::vector<std::string>& bound, std::vector<std::string>& out) {
  auto note = [&](const std::string& v) {
    if (std::find(bound.begin(), bound.end(), v) == bound.end() && std::find(out.begin(), out.end(), v) == out.end())
      out.push_back(v);
  };
  switch (n.kind) {
    case Node::Kind::Atom:
    case Node::Kind::Equal:
      for (const auto& v : n.args) note(v);
      return;
    case Node::Kind::Forall:
    case Node::Kind::Exists:
      bound.push_back(n.name);
      collect_free(*n.children[0], bound, out);
      bound.pop_back();
      return;
    default:
      for (const auto& c : n.children) collect_free(*c, bound, out);
  }
}

std::string render(const Node& n) {
  switch (n.kind) {
    case Node::Kind::True: return "true";
    case Node::Kind::False: return "false";
    case Node::Kind::Atom: {
      std::string s = n.name + "(";
      for (std::size_t i = 0; i < n.args.size(); ++i) s += (i ? "," : "") + n.args[i];
      return s + ")";
    }
    case Node::Kind::Equal: return n.args[0] + "=" + n.args[1];
    case Node::Kind::Not: return "!" + render(*n.children[0]);
    case Node::Kind::And: return "(" + render(*n.children[0]) + " & " + render(*n.children[1]) + ")";
    case Node::Kind::Or: return "(" + render(*n.children[0]) + " | " + render(*n.children[1]) + ")";
    case Node::Kind::Implies: return "(" + render(*n.children[0]) + " -> " + render(*n.children[1]) + ")";
    case Node::Kind::Forall: return "(forall " + n.name + ". " + render(*n.children[0]) + ")";
    case Node::Kind::Exists: return "(exists " + n.name + ". " + render(*n.children[0]) + ")";
  }
  return "";
}

std::uint32_t lookup(const Assignment& env, const std::string& v) {
  auto it = env.find(v);
  if (it == env.end()) throw PreconditionFailed("unbound variable " + v);
  return it->second;
}

bool eval(const RelStructure& a, const Node& n, Assignment& env) {
  switch (n.kind) {
    case Node::Kind::True: return true;
    case Node::Kind::False: return false;
    case Node::Kind::Atom: {
      const auto s = a.language().index_of(n.name);
      if (!s) throw DomainMismatch("unknown relation symbol " + n.name);
      if (a.language()[*s].arity != n.args.size())
        throw DomainMismatch("relation " + n.name + " applied to " + std::to_string(n.args.size()) + " arguments");
      Tuple t;
      for (const auto& v : n.args) t.push_back(lookup(env, v));
      return a.contains(*s, t);
    }
    case Node::Kind::Equal: return lookup(env, n.args[0]) == lookup(env, n.args[1]);
    case Node::Kind::Not: return !eval(a, *n.children[0], env);
    case Node::Kind::And: return eval(a, *n.children[0], env) && eval(a, *n.children[1], env);
    case Node::Kind::Or: return eval(a, *n.children[0], env) || eval(a, *n.children[1], env);
    case Node::Kind::Implies: return !eval(a, *n.children[0], env) || eval(a, *n.children[1], env);
    case Node::Kind::Forall:
    case Node::Kind::Exists: {
      const bool universal = n.kind == Node::Kind::Forall;
      auto saved = env.find(n.name) == env.end() ? std::nullopt : std::optional<std::uint32_t>(env[n.name]);
      bool result = universal;
      for (std::uint32_t x = 0; x < a.size(); ++x) {
        env[n.name] = x;
        if (eval(a, *n.children[0], env) != universal) {
          result = !universal;
          break;
        }
      }
      if (saved) env[n.name] = *saved;
      else env.erase(n.name);
      return result;
    }
  }
  return false;
}

}  // namespace

Formula::Formula(std::shared_ptr<const FormulaNode> root) : root_(std::move(root)) {
  std::vector<std::string> bound;
  collect_free(*root_, bound, free_);
}

Formula Formula::parse(std::string_view text) { return Formula(Parser(text).parse()); }

std::string Formula::to_string() const { return render(*root_); }

Formula Formula::negation(const Formula& f) { return Formula(make(Node::Kind::Not, {}, {}, {f.root_})); }

bool eval_formula(const RelStructure& a, const Formula& phi, const Assignment& assignment) {
  Assignment env = assignment;
  return eval(a, phi.root(), env);
}

std::vector<Tuple> satisfying_tuples(const RelStructure& a, const Formula& phi) {
  const auto& vars = phi.free_variables();
  const auto count = checked_power(a.size(), vars.size(), 1u << 24);
  std::vector<Tuple> out;
  Assignment env;
  for (std::uint64_t r = 0; r < count; ++r) {
    auto t = tuple_unrank(r, vars.size(), a.size());
    for (std::size_t i = 0; i < vars.size(); ++i) env[vars[i]] = t[i];
    if (eval(a, phi.root(), env)) out.push_back(std::move(t));
  }
  return out;
}

RelStructure hat_expand(const RelStructure& a, const std::vector<Formula>& formulas, bool nullary_free) {
  std::vector<RelSymbol> symbols;
  std::vector<std::vector<Tuple>> rels;
  std::set<std::string> seen;
  for (const auto& f : formulas) {
    const auto name = f.to_string();
    if (!seen.insert(name).second) continue;
    if (nullary_free && f.arity() == 0)
      throw PreconditionFailed("formula " + name + " has no free variables; nullary symbols are not allowed");
    symbols.push_back({name, f.arity()});
    rels.push_back(satisfying_tuples(a, f));
  }
  return RelStructure(RelLanguage(std::move(symbols)),
                      std::vector<std::string>(a.carrier().begin(), a.carrier().end()), std::move(rels));
}

}  // namespace coend
