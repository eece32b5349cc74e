#include "gzcr/fixtures.hpp"

#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>

namespace gzcr {

namespace {

constexpr std::string_view kBuiltin = "builtin:";

struct Line {
  int number;
  std::string text;
};

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

bool starts_with_word(const std::string& s, std::string_view word) {
  return s.size() > word.size() && s.compare(0, word.size(), word) == 0 &&
         std::isspace(static_cast<unsigned char>(s[word.size()]));
}

// Strips comments, joins `\` continuations, drops blank lines.
std::vector<Line> logical_lines(const std::string& text) {
  std::vector<Line> out;
  std::istringstream in(text);
  std::string raw;
  int number = 0;
  std::string pending;
  int pending_start = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::string t = trim(raw);
    bool cont = !t.empty() && t.back() == '\\';
    if (cont) t.pop_back();
    if (pending.empty()) pending_start = number;
    if (!t.empty()) pending += (pending.empty() ? "" : " ") + trim(t);
    if (cont) continue;
    if (!pending.empty()) out.push_back({pending_start, pending});
    pending.clear();
  }
  if (!pending.empty()) out.push_back({pending_start, pending});
  return out;
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

Parity parse_parity(const Source& src, const Line& l, const std::string& word) {
  if (word == "even") return Parity::Even;
  if (word == "odd") return Parity::Odd;
  throw FormatError(src.name, l.number, "expected `even` or `odd`, got `" + word + "`");
}

// Common header directives; returns false when the line is not one of them.
struct Header {
  std::string system_ref;
  std::vector<Variable> parameters;
  std::optional<std::string> family;
  Meta meta;

  bool consume(const Source& src, const Line& l) {
    if (starts_with_word(l.text, "meta")) {
      std::string rest = trim(std::string_view(l.text).substr(4));
      auto colon = rest.find(':');
      if (colon == std::string::npos) throw FormatError(src.name, l.number, "meta line needs `key: value`");
      meta.emplace_back(trim(std::string_view(rest).substr(0, colon)), trim(std::string_view(rest).substr(colon + 1)));
      return true;
    }
    auto w = words(l.text);
    if (w.empty()) return false;
    if (w[0] == "system") {
      if (w.size() != 2) throw FormatError(src.name, l.number, "usage: system <reference>");
      system_ref = w[1];
      return true;
    }
    if (w[0] == "parameter") {
      if (w.size() < 2 || w.size() > 3 || (w.size() == 3 && w[2] != "invertible")) {
        throw FormatError(src.name, l.number, "usage: parameter <name> [invertible]");
      }
      std::string name = w[1] == "ε" ? "eps" : w[1] == "λ" ? "lam" : w[1];
      parameters.push_back(Variable::parameter(name, w.size() == 3));
      return true;
    }
    if (w[0] == "family") {
      if (w.size() != 2) throw FormatError(src.name, l.number, "usage: family <parameter>");
      family = w[1] == "ε" ? "eps" : w[1] == "λ" ? "lam" : w[1];
      return true;
    }
    return false;
  }

  Variable family_parameter(const Source& src) const {
    if (!family) {
      if (parameters.size() == 1) return parameters.front();
      throw FormatError(src.name, 0, "missing `family <parameter>`");
    }
    for (const auto& p : parameters) {
      if (p.name() == *family) return p;
    }
    throw FormatError(src.name, 0, "family parameter " + *family + " is not declared");
  }

  void declare(const Source& src, SymbolTable& symbols) const {
    for (const auto& p : parameters) {
      try {
        symbols.declare(p);
      } catch (const std::invalid_argument& e) {
        throw FormatError(src.name, 0, e.what());
      }
    }
  }

  void print(std::ostream& out, bool with_system) const {
    if (with_system && !system_ref.empty()) out << "system " << system_ref << "\n";
    for (const auto& p : parameters) out << "parameter " << p.name() << (p.invertible() ? " invertible" : "") << "\n";
    if (family) out << "family " << *family << "\n";
    for (const auto& [k, v] : meta) out << "meta " << k << ": " << v << "\n";
  }
};

GradedPoly parse_at(const Source& src, const Line& l, std::size_t offset, std::string_view text,
                    const SymbolTable& symbols, const EvolutionarySystem* system) {
  try {
    return parse_expression(text, symbols, system, l.number, static_cast<int>(offset) + 1);
  } catch (const ParseError& e) {
    throw FormatError(src.name, e.line(), std::string(e.what()));
  } catch (const std::exception& e) {
    throw FormatError(src.name, l.number, e.what());
  }
}

std::optional<BlockSignature> parse_signature(std::string_view s) {
  std::string t = trim(s);
  int even = 0;
  int odd = 0;
  char c1 = 0;
  char c2 = 0;
  char c3 = 0;
  std::istringstream in(t);
  if (!(in >> c1 >> even >> c2 >> odd >> c3) || c1 != '(' || c2 != '|' || c3 != ')') return std::nullopt;
  std::string rest;
  if (in >> rest) return std::nullopt;
  if (even < 1 || odd < 0) return std::nullopt;
  return BlockSignature{even, odd};
}

std::vector<std::pair<std::size_t, std::string>> split_row(const std::string& row) {
  std::vector<std::pair<std::size_t, std::string>> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t k = 0; k <= row.size(); ++k) {
    if (k == row.size() || (row[k] == ',' && depth == 0)) {
      out.emplace_back(start, row.substr(start, k - start));
      start = k + 1;
    } else if (row[k] == '(') {
      ++depth;
    } else if (row[k] == ')') {
      --depth;
    }
  }
  return out;
}

// Reads `size` row lines starting at lines[pos].
SuperMatrix read_block(const Source& src, const std::vector<Line>& lines, std::size_t& pos, const BlockSignature& sig,
                       const SymbolTable& symbols, const EvolutionarySystem* system) {
  SuperMatrix m(sig);
  for (int i = 0; i < sig.size(); ++i, ++pos) {
    if (pos >= lines.size()) throw FormatError(src.name, lines.back().number, "matrix block ends early");
    const Line& l = lines[pos];
    auto entries = split_row(l.text);
    if (static_cast<int>(entries.size()) != sig.size()) {
      throw FormatError(src.name, l.number,
                        "row has " + std::to_string(entries.size()) + " entries, expected " + std::to_string(sig.size()));
    }
    for (int j = 0; j < sig.size(); ++j) {
      m.at(i, j) = parse_at(src, l, entries[static_cast<std::size_t>(j)].first, entries[static_cast<std::size_t>(j)].second,
                            symbols, system);
    }
  }
  return m;
}

void print_block(std::ostream& out, const SuperMatrix& m) {
  for (int i = 0; i < m.size(); ++i) {
    out << "  ";
    for (int j = 0; j < m.size(); ++j) out << (j ? ", " : "") << m.at(i, j).to_string();
    out << "\n";
  }
}

std::string dirname_of(const std::string& path) {
  auto slash = path.rfind('/');
  return slash == std::string::npos ? "" : path.substr(0, slash + 1);
}

std::mutex& cache_mutex() {
  static std::mutex m;
  return m;
}

std::map<std::string, SystemPtr>& system_cache() {
  static std::map<std::string, SystemPtr> cache;
  return cache;
}

Header read_header_only(const Source& src, const std::vector<Line>& lines, std::vector<Line>& body) {
  Header h;
  for (const auto& l : lines) {
    if (!h.consume(src, l)) body.push_back(l);
  }
  return h;
}

}  // namespace

FormatError::FormatError(const std::string& source, int line, const std::string& message)
    : std::runtime_error(source + (line > 0 ? ":" + std::to_string(line) : "") + ": " + message), line_(line) {}

const std::map<std::string, std::string>& system_registry() {
  static const std::map<std::string, std::string> registry = {
      {"kdv", "systems/kdv.sys"},
      {"kb3", "systems/kb3.sys"},
      {"skdv.a4", "systems/skdv_a4.sys"},
      {"skdv.a", "systems/skdv_a.sys"},
  };
  return registry;
}

std::vector<std::string> builtin_fixture_paths() {
  std::vector<std::string> out;
  for (const auto& [k, v] : detail::embedded_fixture_table()) out.push_back(k);
  return out;
}

Source load_source(const std::string& ref, const Source* from) {
  const auto& table = detail::embedded_fixture_table();
  auto builtin = [&](const std::string& path) {
    std::string norm = std::filesystem::path(path).lexically_normal().generic_string();
    auto it = table.find(norm);
    if (it == table.end()) throw std::runtime_error("no builtin fixture " + norm);
    return Source{std::string(kBuiltin) + norm, it->second, true};
  };
  if (auto it = system_registry().find(ref); it != system_registry().end()) return builtin(it->second);
  if (ref.rfind(kBuiltin, 0) == 0) return builtin(ref.substr(kBuiltin.size()));
  std::filesystem::path p(ref);
  if (from && p.is_relative()) {
    if (from->embedded) return builtin(dirname_of(from->name.substr(kBuiltin.size())) + ref);
    p = std::filesystem::path(dirname_of(from->name)) / p;
  }
  std::ifstream in(p);
  if (!in) throw std::runtime_error("cannot open " + p.string());
  std::ostringstream text;
  text << in.rdbuf();
  return Source{p.lexically_normal().string(), text.str(), false};
}

std::optional<std::string> meta_value(const Meta& meta, const std::string& key) {
  for (const auto& [k, v] : meta) {
    if (k == key) return v;
  }
  return std::nullopt;
}

SystemDocument parse_system(const Source& src) {
  auto lines = logical_lines(src.text);
  std::vector<Line> body;
  Header h = read_header_only(src, lines, body);
  if (!h.system_ref.empty()) throw FormatError(src.name, 0, "a system file cannot reference another system");
  std::string name;
  JetSpace space;
  std::vector<Line> equations;
  for (const auto& l : body) {
    auto w = words(l.text);
    if (w[0] == "name" && w.size() == 2) {
      name = w[1];
    } else if (w[0] == "independent") {
      if (w.size() != 3 || w[1] != "x" || w[2] != "t") {
        throw FormatError(src.name, l.number, "independent variables must be `x t`");
      }
    } else if (w[0] == "dependent") {
      if (w.size() != 3) throw FormatError(src.name, l.number, "usage: dependent <name> even|odd");
      space.dependents.push_back(Variable::jet(w[1], parse_parity(src, l, w[2])));
    } else if (l.text.find('=') != std::string::npos) {
      equations.push_back(l);
    } else {
      throw FormatError(src.name, l.number, "unrecognised line `" + l.text + "`");
    }
  }
  if (name.empty()) throw FormatError(src.name, 0, "missing `name <system name>`");

  SymbolTable symbols;
  symbols.declare(space.x);
  symbols.declare(space.t);
  for (const auto& d : space.dependents) symbols.declare(d);
  h.declare(src, symbols);

  std::map<Variable, GradedPoly> rhs;
  for (const auto& l : equations) {
    auto eq = l.text.find('=');
    std::string lhs = trim(std::string_view(l.text).substr(0, eq));
    if (lhs.size() < 3 || lhs.compare(lhs.size() - 2, 2, "_t") != 0) {
      throw FormatError(src.name, l.number, "left-hand side must read <dependent>_t");
    }
    const Variable* u = symbols.find(lhs.substr(0, lhs.size() - 2));
    if (!u || !u->is_jet()) throw FormatError(src.name, l.number, "unknown dependent in `" + lhs + "`");
    if (rhs.count(*u)) throw FormatError(src.name, l.number, "duplicate equation for " + u->label());
    rhs[*u] = parse_at(src, l, eq + 1, std::string_view(l.text).substr(eq + 1), symbols, nullptr);
  }
  try {
    auto sys = std::make_shared<const EvolutionarySystem>(name, space, h.parameters, rhs);
    return SystemDocument{sys, h.meta};
  } catch (const std::exception& e) {
    throw FormatError(src.name, 0, e.what());
  }
}

SystemPtr load_system(const std::string& ref, const Source* from) {
  Source src = load_source(ref, from);
  {
    std::lock_guard lock(cache_mutex());
    auto it = system_cache().find(src.name);
    if (it != system_cache().end()) return it->second;
  }
  SystemPtr sys = parse_system(src).system;
  std::lock_guard lock(cache_mutex());
  return system_cache().try_emplace(src.name, sys).first->second;
}

std::string format_system(const EvolutionarySystem& system, const Meta& meta) {
  std::ostringstream out;
  out << "name " << system.name() << "\n";
  out << "independent x t\n";
  for (const auto& d : system.space().dependents) out << "dependent " << d.name() << " " << to_string(d.parity()) << "\n";
  Header h;
  h.parameters = system.parameters();
  h.meta = meta;
  h.print(out, false);
  for (const auto& d : system.space().dependents) out << d.name() << "_t = " << system.rhs(d).to_string() << "\n";
  return out.str();
}

ZCRDocument parse_zcr(const Source& src) {
  auto lines = logical_lines(src.text);
  std::vector<Line> body;
  Header h = read_header_only(src, lines, body);
  if (h.system_ref.empty()) throw FormatError(src.name, 0, "missing `system <reference>`");
  SystemPtr sys = load_system(h.system_ref, &src);
  SymbolTable symbols = SymbolTable::for_system(*sys);
  h.declare(src, symbols);
  Variable param = h.family_parameter(src);

  std::optional<SuperMatrix> a;
  std::optional<SuperMatrix> b;
  for (std::size_t pos = 0; pos < body.size();) {
    const Line& l = body[pos];
    auto w = words(l.text);
    if ((w[0] == "A" || w[0] == "B") && w.size() >= 2) {
      auto sig = parse_signature(std::string_view(l.text).substr(1));
      if (!sig) throw FormatError(src.name, l.number, "expected a block signature such as (2|1)");
      auto& slot = w[0] == "A" ? a : b;
      if (slot) throw FormatError(src.name, l.number, "duplicate block " + w[0]);
      ++pos;
      slot = read_block(src, body, pos, *sig, symbols, sys.get());
      continue;
    }
    throw FormatError(src.name, l.number, "unrecognised line `" + l.text + "`");
  }
  if (!a || !b) throw FormatError(src.name, 0, "both blocks A and B are required");
  ZCRFamily family{sys, *a, *b, param};
  try {
    family.validate();
  } catch (const std::exception& e) {
    throw FormatError(src.name, 0, e.what());
  }
  if (!h.family) h.family = param.name();
  return ZCRDocument{h.system_ref, h.parameters, family, symbols, h.meta};
}

ZCRDocument load_zcr(const std::string& ref, const Source* from) { return parse_zcr(load_source(ref, from)); }

std::string format_zcr(const ZCRDocument& doc) {
  std::ostringstream out;
  Header h;
  h.system_ref = doc.system_ref;
  h.parameters = doc.parameters;
  h.family = doc.family.parameter.name();
  h.meta = doc.meta;
  h.print(out, true);
  out << "A " << doc.family.A.signature().to_string() << "\n";
  print_block(out, doc.family.A);
  out << "B " << doc.family.B.signature().to_string() << "\n";
  print_block(out, doc.family.B);
  return out.str();
}

MatrixDocument parse_matrix(const Source& src, const SymbolTable& context, const EvolutionarySystem* system) {
  auto lines = logical_lines(src.text);
  std::vector<Line> body;
  Header h = read_header_only(src, lines, body);
  if (h.family) throw FormatError(src.name, 0, "`family` is not allowed in a matrix file");
  SymbolTable symbols = context;
  SystemPtr own;
  if (!h.system_ref.empty()) {
    own = load_system(h.system_ref, &src);
    symbols.merge(SymbolTable::for_system(*own));
    system = own.get();
  }
  h.declare(src, symbols);
  if (body.empty()) throw FormatError(src.name, 0, "missing matrix block");
  auto sig = parse_signature(body.front().text);
  if (!sig) throw FormatError(src.name, body.front().number, "expected a block signature such as (2|1)");
  std::size_t pos = 1;
  SuperMatrix m = read_block(src, body, pos, *sig, symbols, system);
  if (pos != body.size()) throw FormatError(src.name, body[pos].number, "unexpected text after the matrix");
  return MatrixDocument{h.parameters, m, h.meta};
}

MatrixDocument load_matrix(const std::string& ref, const SymbolTable& context, const EvolutionarySystem* system,
                           const Source* from) {
  return parse_matrix(load_source(ref, from), context, system);
}

std::string format_matrix(const MatrixDocument& doc) {
  std::ostringstream out;
  Header h;
  h.parameters = doc.parameters;
  h.meta = doc.meta;
  h.print(out, false);
  out << doc.matrix.signature().to_string() << "\n";
  print_block(out, doc.matrix);
  return out.str();
}

CoveringDocument parse_covering(const Source& src) {
  auto lines = logical_lines(src.text);
  std::vector<Line> body;
  Header h = read_header_only(src, lines, body);
  if (h.system_ref.empty()) throw FormatError(src.name, 0, "missing `system <reference>`");
  SystemPtr sys = load_system(h.system_ref, &src);
  SymbolTable symbols = SymbolTable::for_system(*sys);
  h.declare(src, symbols);

  std::string name;
  std::vector<Variable> nonlocals;
  std::vector<Line> flows;
  for (const auto& l : body) {
    auto w = words(l.text);
    if (w[0] == "name" && w.size() == 2) {
      name = w[1];
    } else if (w[0] == "nonlocal") {
      if (w.size() != 3) throw FormatError(src.name, l.number, "usage: nonlocal <name> even|odd");
      Variable v = Variable::nonlocal(w[1], parse_parity(src, l, w[2]));
      try {
        symbols.declare(v);
      } catch (const std::invalid_argument& e) {
        throw FormatError(src.name, l.number, e.what());
      }
      nonlocals.push_back(v);
    } else if (l.text.find('=') != std::string::npos) {
      flows.push_back(l);
    } else {
      throw FormatError(src.name, l.number, "unrecognised line `" + l.text + "`");
    }
  }
  std::map<Variable, Covering::Flow> flow_map;
  std::map<Variable, int> seen;
  for (const auto& l : flows) {
    auto eq = l.text.find('=');
    std::string lhs = trim(std::string_view(l.text).substr(0, eq));
    auto us = lhs.rfind('_');
    std::string dir = us == std::string::npos ? "" : lhs.substr(us + 1);
    const Variable* v = us == std::string::npos ? nullptr : symbols.find(lhs.substr(0, us));
    if (!v || !v->is_nonlocal() || (dir != "x" && dir != "t")) {
      throw FormatError(src.name, l.number, "left-hand side must read <nonlocal>_x or <nonlocal>_t");
    }
    int bit = dir == "x" ? 1 : 2;
    if (seen[*v] & bit) throw FormatError(src.name, l.number, "duplicate flow " + lhs);
    seen[*v] |= bit;
    GradedPoly rhs = parse_at(src, l, eq + 1, std::string_view(l.text).substr(eq + 1), symbols, sys.get());
    (dir == "x" ? flow_map[*v].x : flow_map[*v].t) = rhs;
  }
  for (const auto& v : nonlocals) {
    if (seen[v] != 3) throw FormatError(src.name, 0, "both flows of " + v.label() + " are required");
  }
  std::optional<Variable> family;
  if (h.family || h.parameters.size() == 1) family = h.family_parameter(src);
  if (name.empty()) name = sys->name() + ".cover";
  try {
    auto cov = std::make_shared<const Covering>(name, sys, nonlocals, h.parameters, flow_map);
    return CoveringDocument{h.system_ref, h.parameters, family, cov, symbols, h.meta};
  } catch (const std::exception& e) {
    throw FormatError(src.name, 0, e.what());
  }
}

CoveringDocument load_covering(const std::string& ref, const Source* from) {
  return parse_covering(load_source(ref, from));
}

std::string format_covering(const CoveringDocument& doc) {
  std::ostringstream out;
  Header h;
  h.system_ref = doc.system_ref;
  h.parameters = doc.parameters;
  if (doc.family) h.family = doc.family->name();
  h.meta = doc.meta;
  h.print(out, true);
  out << "name " << doc.covering->name() << "\n";
  for (const auto& v : doc.covering->nonlocals()) out << "nonlocal " << v.name() << " " << to_string(v.parity()) << "\n";
  for (const auto& v : doc.covering->nonlocals()) {
    out << v.name() << "_x = " << doc.covering->flow(v).x.to_string() << "\n";
    out << v.name() << "_t = " << doc.covering->flow(v).t.to_string() << "\n";
  }
  return out.str();
}

ShadowDocument parse_shadow(const Source& src, const CoveringDocument& covering) {
  auto lines = logical_lines(src.text);
  ShadowDocument doc;
  const Covering& cov = *covering.covering;
  for (const auto& l : lines) {
    if (starts_with_word(l.text, "meta")) {
      Header h;
      h.consume(src, l);
      doc.meta.push_back(h.meta.front());
      continue;
    }
    auto w = words(l.text);
    if (w[0] == "covering" && w.size() == 2) {
      doc.covering_ref = w[1];
      continue;
    }
    auto eq = l.text.find('=');
    if (eq == std::string::npos) throw FormatError(src.name, l.number, "unrecognised line `" + l.text + "`");
    std::string lhs = trim(std::string_view(l.text).substr(0, eq));
    GradedPoly rhs = parse_at(src, l, eq + 1, std::string_view(l.text).substr(eq + 1), covering.symbols, cov.system().get());
    if (lhs == "rate") {
      doc.rate = rhs;
      continue;
    }
    if (lhs.size() < 4 || lhs.compare(0, 2, "X[") != 0 || lhs.back() != ']') {
      throw FormatError(src.name, l.number, "left-hand side must read X[<variable>] or rate");
    }
    std::string target = lhs.substr(2, lhs.size() - 3);
    if (target == "x") {
      doc.field.a = rhs;
    } else if (target == "t") {
      doc.field.b = rhs;
    } else {
      const Variable* v = covering.symbols.find(target);
      if (!v || !(v->is_nonlocal() || (v->is_jet() && v->order() == 0))) {
        throw FormatError(src.name, l.number, "X[" + target + "]: not a dependent or nonlocal variable");
      }
      auto& slot = v->is_nonlocal() ? doc.field.phi : doc.field.omega;
      if (slot.count(*v)) throw FormatError(src.name, l.number, "duplicate component X[" + target + "]");
      auto p = rhs.parity_if_homogeneous();
      if (!rhs.is_zero() && (!p || *p != v->parity())) {
        throw FormatError(src.name, l.number, "component X[" + target + "] has the wrong parity");
      }
      slot[*v] = rhs;
    }
  }
  return doc;
}

ShadowDocument load_shadow(const std::string& ref, const CoveringDocument& covering, const Source* from) {
  return parse_shadow(load_source(ref, from), covering);
}

std::string format_shadow(const ShadowDocument& doc, const CoveringDocument& covering) {
  std::ostringstream out;
  if (!doc.covering_ref.empty()) out << "covering " << doc.covering_ref << "\n";
  for (const auto& [k, v] : doc.meta) out << "meta " << k << ": " << v << "\n";
  if (!(doc.rate == GradedPoly(1))) out << "rate = " << doc.rate.to_string() << "\n";
  if (!doc.field.a.is_zero()) out << "X[x] = " << doc.field.a.to_string() << "\n";
  if (!doc.field.b.is_zero()) out << "X[t] = " << doc.field.b.to_string() << "\n";
  for (const auto& u : covering.covering->system()->space().dependents) {
    auto it = doc.field.omega.find(u);
    if (it != doc.field.omega.end() && !it->second.is_zero()) out << "X[" << u.name() << "] = " << it->second.to_string() << "\n";
  }
  for (const auto& v : covering.covering->nonlocals()) {
    auto it = doc.field.phi.find(v);
    if (it != doc.field.phi.end() && !it->second.is_zero()) out << "X[" << v.name() << "] = " << it->second.to_string() << "\n";
  }
  return out.str();
}

}  // namespace gzcr
