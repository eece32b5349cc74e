#include "gzcr/parser.hpp"

#include <cctype>
#include <optional>

namespace gzcr {

ParseError::ParseError(int line, int column, const std::string& message)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

SymbolTable SymbolTable::for_system(const EvolutionarySystem& system) {
  SymbolTable s;
  s.declare(system.space().x);
  s.declare(system.space().t);
  for (const auto& d : system.space().dependents) s.declare(d);
  for (const auto& p : system.parameters()) s.declare(p);
  return s;
}

void SymbolTable::declare(const Variable& v) {
  if (v.name() == "i") throw std::invalid_argument("`i` is reserved for the imaginary unit");
  auto [it, inserted] = by_name_.try_emplace(v.name(), v);
  if (!inserted && !(it->second == v && it->second.invertible() == v.invertible())) {
    throw std::invalid_argument("conflicting declaration of " + v.name());
  }
}

void SymbolTable::merge(const SymbolTable& other) {
  for (const auto& [n, v] : other.by_name_) declare(v);
}

const Variable* SymbolTable::find(std::string_view name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? nullptr : &it->second;
}

std::vector<Variable> SymbolTable::all() const {
  std::vector<Variable> out;
  for (const auto& [n, v] : by_name_) out.push_back(v);
  return out;
}

namespace {

enum class Tok { Number, Ident, Suffix, Op, End };

struct Token {
  Tok kind;
  std::string text;
  int column;
};

class Lexer {
 public:
  Lexer(std::string_view src, int line, int column) : src_(src), line_(line), col0_(column) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (pos_ < src_.size()) {
      unsigned char c = static_cast<unsigned char>(src_[pos_]);
      int col = col0_ + static_cast<int>(pos_);
      if (std::isspace(c)) {
        ++pos_;
      } else if (std::isdigit(c)) {
        std::size_t b = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        out.push_back({Tok::Number, std::string(src_.substr(b, pos_ - b)), col});
      } else if (std::isalpha(c) || c == 0xCE) {
        out.push_back({Tok::Ident, identifier(), col});
        if (pos_ < src_.size() && src_[pos_] == '_') out.push_back({Tok::Suffix, suffix(), col});
      } else if (c == '_') {
        out.push_back({Tok::Suffix, suffix(), col});
      } else if (std::string_view("+-*/^()").find(static_cast<char>(c)) != std::string_view::npos) {
        out.push_back({Tok::Op, std::string(1, static_cast<char>(c)), col});
        ++pos_;
      } else {
        throw ParseError(line_, col, std::string("unexpected character '") + static_cast<char>(c) + "'");
      }
    }
    out.push_back({Tok::End, "", col0_ + static_cast<int>(src_.size())});
    return out;
  }

 private:
  std::string identifier() {
    std::string name;
    while (pos_ < src_.size()) {
      unsigned char c = static_cast<unsigned char>(src_[pos_]);
      if (c == 0xCE && pos_ + 1 < src_.size()) {
        unsigned char d = static_cast<unsigned char>(src_[pos_ + 1]);
        if (d == 0xB5) name += "eps";
        else if (d == 0xBB) name += "lam";
        else throw ParseError(line_, col0_ + static_cast<int>(pos_), "unsupported character");
        pos_ += 2;
      } else if (std::isalnum(c)) {
        name += static_cast<char>(c);
        ++pos_;
      } else {
        break;
      }
    }
    return name;
  }

  std::string suffix() {
    int col = col0_ + static_cast<int>(pos_);
    ++pos_;  // '_'
    std::size_t b = pos_;
    while (pos_ < src_.size() && (src_[pos_] == 'x' || src_[pos_] == 't')) ++pos_;
    if (pos_ == b) throw ParseError(line_, col, "empty derivative suffix");
    if (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_]))) {
      throw ParseError(line_, col, "derivative suffix may contain only x and t");
    }
    return std::string(src_.substr(b, pos_ - b));
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_;
  int col0_;
};

class Parser {
 public:
  Parser(std::vector<Token> toks, const SymbolTable& symbols, const EvolutionarySystem* system, int line)
      : toks_(std::move(toks)), symbols_(symbols), system_(system), line_(line) {}

  GradedPoly parse() {
    if (peek().kind == Tok::End) fail("empty expression");
    GradedPoly r = expr();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
    return r;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  bool at_op(char c) const { return peek().kind == Tok::Op && peek().text[0] == c; }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line_, peek().column, msg); }

  GradedPoly expr() {
    GradedPoly r;
    bool negate = false;
    if (at_op('-') || at_op('+')) {
      negate = at_op('-');
      ++pos_;
    }
    r = term();
    if (negate) r = -r;
    while (at_op('+') || at_op('-')) {
      bool minus = at_op('-');
      ++pos_;
      GradedPoly t = term();
      if (minus) r -= t;
      else r += t;
    }
    return r;
  }

  GradedPoly term() {
    GradedPoly r = unary();
    while (at_op('*') || at_op('/')) {
      bool divide = at_op('/');
      const Token& op = peek();
      ++pos_;
      GradedPoly f = unary();
      if (divide) {
        auto inv = f.inverse();
        if (!inv) throw ParseError(line_, op.column, "division by non-unit " + f.to_string());
        r = r * *inv;
      } else {
        r = r * f;
      }
    }
    return r;
  }

  GradedPoly unary() {
    if (at_op('-')) {
      ++pos_;
      return -unary();
    }
    return power();
  }

  GradedPoly power() {
    GradedPoly b = atom();
    if (!at_op('^')) return b;
    const Token& op = peek();
    ++pos_;
    bool neg = false;
    if (at_op('-')) {
      neg = true;
      ++pos_;
    }
    if (peek().kind != Tok::Number) fail("integer exponent expected");
    int n = std::stoi(peek().text);
    ++pos_;
    if (neg) n = -n;
    try {
      return b.pow(n);
    } catch (const std::exception& e) {
      throw ParseError(line_, op.column, e.what());
    }
  }

  GradedPoly derive(GradedPoly p, const std::string& suffix, int column) {
    for (char c : suffix) {
      if (c == 'x') {
        p = system_ ? total_x(*system_, p) : free_total_x(p);
      } else {
        if (!system_) throw ParseError(line_, column, "t-derivative needs a system");
        p = total_t(*system_, p);
      }
    }
    return p;
  }

  GradedPoly atom() {
    const Token tok = peek();
    switch (tok.kind) {
      case Tok::Number: {
        ++pos_;
        return GradedPoly(GaussianRational(mpq_class(tok.text)));
      }
      case Tok::Ident: {
        ++pos_;
        std::optional<std::string> suffix;
        if (peek().kind == Tok::Suffix) {
          suffix = peek().text;
          ++pos_;
        }
        if (tok.text == "i") {
          if (suffix) throw ParseError(line_, tok.column, "derivative of a constant");
          return GradedPoly(GaussianRational::imaginary_unit());
        }
        const Variable* v = symbols_.find(tok.text);
        if (!v) throw ParseError(line_, tok.column, "undeclared variable '" + tok.text + "'");
        if (!suffix) return GradedPoly::variable(*v);
        if (!v->is_jet()) throw ParseError(line_, tok.column, "derivative suffix on non-dependent '" + tok.text + "'");
        int xs = 0;
        std::string rest;
        for (char c : *suffix) {
          if (c == 'x' && rest.empty()) ++xs;
          else rest += c;
        }
        return derive(GradedPoly::variable(v->prolonged(xs)), rest, tok.column);
      }
      case Tok::Op:
        if (tok.text == "(") {
          ++pos_;
          GradedPoly r = expr();
          if (!at_op(')')) fail("')' expected");
          ++pos_;
          if (peek().kind == Tok::Suffix) {
            std::string s = peek().text;
            ++pos_;
            try {
              r = derive(r, s, tok.column);
            } catch (const UnknownVariable& e) {
              throw ParseError(line_, tok.column, e.what());
            }
          }
          return r;
        }
        fail("unexpected '" + tok.text + "'");
      case Tok::Suffix:
        fail("derivative suffix without operand");
      case Tok::End:
        fail("unexpected end of expression");
    }
    fail("unreachable");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const SymbolTable& symbols_;
  const EvolutionarySystem* system_;
  int line_;
};

}  // namespace

GradedPoly parse_expression(std::string_view text, const SymbolTable& symbols, const EvolutionarySystem* system,
                            int line, int column) {
  Lexer lexer(text, line, column);
  Parser parser(lexer.run(), symbols, system, line);
  return parser.parse();
}

}  // namespace gzcr
