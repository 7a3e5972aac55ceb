#include "ngd/chain_dsl.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <exception>
#include <set>
#include <system_error>

#include "ngd/error.hpp"

namespace ngd {

namespace {

constexpr int kMaxRepeat = 1000;
constexpr int kMaxNesting = 64;
constexpr long kMaxBlocks = 4096;

enum class Tok { ident, number, lparen, rparen, comma, equals, star, caret, end };

struct Token {
  Tok kind = Tok::end;
  std::string text;
  double number = 0.0;
  bool integral = false;
  int line = 1;
  int column = 1;
};

std::string_view describe(const Token& t) {
  switch (t.kind) {
    case Tok::end: return "end of input";
    default: return t.text;
  }
}

struct Lexed {
  std::vector<Token> tokens;
  std::vector<std::string> leading_comments;
};

class Lexer {
 public:
  Lexer(std::string_view text, std::vector<ParseDiagnostic>& diags) : src_(text), diags_(diags) {}

  Lexed run() {
    Lexed out;
    bool seen_token = false;
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '\n') {
        advance();
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
        continue;
      }
      if (c == '#') {
        const std::size_t begin = pos_ + 1;
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
        if (!seen_token) out.leading_comments.push_back(trim(src_.substr(begin, pos_ - begin)));
        continue;
      }
      seen_token = true;
      Token t;
      t.line = line_;
      t.column = column_;
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        const std::size_t begin = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
          advance();
        t.kind = Tok::ident;
        t.text = std::string(src_.substr(begin, pos_ - begin));
      } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '+') {
        if (!lex_number(t)) continue;
      } else {
        t.text = std::string(1, c);
        switch (c) {
          case '(': t.kind = Tok::lparen; break;
          case ')': t.kind = Tok::rparen; break;
          case ',': t.kind = Tok::comma; break;
          case '=': t.kind = Tok::equals; break;
          case '*': t.kind = Tok::star; break;
          case '^': t.kind = Tok::caret; break;
          default:
            diags_.push_back({line_, column_, "unexpected character '" + printable(c) + "'", Severity::error});
            advance();
            continue;
        }
        advance();
      }
      out.tokens.push_back(std::move(t));
    }
    Token eof;
    eof.line = line_;
    eof.column = column_;
    out.tokens.push_back(eof);
    return out;
  }

 private:
  static std::string trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return std::string(s);
  }

  static std::string printable(char c) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isprint(u)) return std::string(1, c);
    static const char* hex = "0123456789abcdef";
    return std::string("\\x") + hex[u >> 4] + hex[u & 15];
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  bool digit_at(std::size_t i) const {
    return i < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i]));
  }

  // NUMBER := [+-]? (digits [. digits?] | . digits) ([eE] [+-]? digits)?
  bool lex_number(Token& t) {
    const std::size_t begin = pos_;
    std::size_t i = pos_;
    if (src_[i] == '+' || src_[i] == '-') ++i;
    bool mantissa = false;
    bool integral = true;
    while (digit_at(i)) ++i, mantissa = true;
    if (i < src_.size() && src_[i] == '.') {
      ++i;
      integral = false;
      while (digit_at(i)) ++i, mantissa = true;
    }
    if (mantissa && i < src_.size() && (src_[i] == 'e' || src_[i] == 'E')) {
      std::size_t j = i + 1;
      if (j < src_.size() && (src_[j] == '+' || src_[j] == '-')) ++j;
      if (digit_at(j)) {
        integral = false;
        i = j;
        while (digit_at(i)) ++i;
      }
    }
    if (!mantissa) {
      diags_.push_back({line_, column_, "malformed number", Severity::error});
      while (pos_ < i || (pos_ == begin && pos_ < src_.size())) advance();
      return false;
    }
    const std::string_view lexeme = src_.substr(begin, i - begin);
    std::string_view digits = lexeme;
    if (!digits.empty() && digits.front() == '+') digits.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec != std::errc() || ptr != digits.data() + digits.size() || !std::isfinite(value)) {
      diags_.push_back({line_, column_, "number out of range '" + std::string(lexeme) + "'", Severity::error});
      while (pos_ < i) advance();
      return false;
    }
    t.kind = Tok::number;
    t.text = std::string(lexeme);
    t.number = value;
    t.integral = integral;
    while (pos_ < i) advance();
    return true;
  }

  std::string_view src_;
  std::vector<ParseDiagnostic>& diags_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

struct SyntaxError {
  ParseDiagnostic diag;
};

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::vector<ParseDiagnostic>& diags)
      : toks_(std::move(tokens)), diags_(diags) {}

  std::optional<ChainSpec> chain(std::vector<std::string> comments) {
    ChainSpec spec;
    for (std::size_t i = 0; i < comments.size(); ++i) spec.description += (i ? "\n" : "") + comments[i];

    bool have_source = false;
    bool reported_missing = false;
    std::set<std::string> taps;
    const auto claim_tap = [&](const std::optional<std::string>& tap, const Token& at) {
      if (tap && !taps.insert(*tap).second) error(at, "duplicate tap name '" + *tap + "'");
    };

    while (peek().kind != Tok::end) {
      const Token& head = peek();
      try {
        if (is_keyword(head, "source")) {
          const Token kw = take();
          if (have_source) error(kw, "duplicate source");
          if (!spec.stages.empty() && !have_source) error(kw, "source must be the first statement");
          auto [src, tap, tap_tok] = source();
          if (!have_source) {
            spec.source = src;
            spec.source_tap = tap;
          }
          have_source = true;
          claim_tap(tap, tap_tok);
        } else if (is_keyword(head, "stage")) {
          const Token kw = take();
          if (!have_source && !reported_missing) {
            error(kw, "missing source");
            reported_missing = true;
          }
          Stage st;
          st.line = kw.line;
          st.column = kw.column;
          st.expr = expr(0);
          Token tap_tok = peek();
          st.tap = tap();
          claim_tap(st.tap, tap_tok);
          check_size(st.expr, kw);
          spec.stages.push_back(std::move(st));
        } else {
          throw SyntaxError{{head.line, head.column,
                             "expected 'source' or 'stage', found '" + std::string(describe(head)) + "'",
                             Severity::error}};
        }
      } catch (const SyntaxError& e) {
        diags_.push_back(e.diag);
        recover();
      }
    }
    if (!have_source && !reported_missing) error(peek(), "missing source");
    if (has_errors(diags_)) return std::nullopt;
    return spec;
  }

  std::optional<Expr> standalone_expr() {
    try {
      Expr e = expr(0);
      if (peek().kind != Tok::end) unexpected("end of expression");
      check_size(e, toks_.front());
      if (has_errors(diags_)) return std::nullopt;
      return e;
    } catch (const SyntaxError& e) {
      diags_.push_back(e.diag);
      return std::nullopt;
    }
  }

 private:
  struct SourceResult {
    SourceParams params;
    std::optional<std::string> tap;
    Token tap_token;
  };

  const Token& peek() const { return toks_[pos_]; }

  Token take() {
    Token t = toks_[pos_];
    if (t.kind != Tok::end) ++pos_;
    return t;
  }

  static bool is_keyword(const Token& t, std::string_view word) { return t.kind == Tok::ident && t.text == word; }

  void error(const Token& at, std::string msg) { diags_.push_back({at.line, at.column, std::move(msg), Severity::error}); }

  [[noreturn]] void unexpected(std::string_view wanted) const {
    const Token& t = peek();
    throw SyntaxError{{t.line, t.column, "expected " + std::string(wanted) + ", found '" + std::string(describe(t)) + "'",
                       Severity::error}};
  }

  Token expect(Tok kind, std::string_view wanted) {
    if (peek().kind != kind) unexpected(wanted);
    return take();
  }

  void recover() {
    if (peek().kind != Tok::end) take();
    while (peek().kind != Tok::end && !is_keyword(peek(), "source") && !is_keyword(peek(), "stage")) take();
  }

  std::vector<std::pair<Token, double>> kvpairs(std::vector<std::pair<std::string, double>>& out) {
    std::vector<std::pair<Token, double>> positions;
    if (peek().kind == Tok::rparen) return positions;
    while (true) {
      const Token name = expect(Tok::ident, "parameter name");
      expect(Tok::equals, "'='");
      const Token value = expect(Tok::number, "number");
      out.emplace_back(name.text, value.number);
      positions.emplace_back(name, value.number);
      if (peek().kind != Tok::comma) break;
      take();
    }
    return positions;
  }

  SourceResult source() {
    const Token kind = expect(Tok::ident, "source kind 'rect'");
    if (kind.text != "rect")
      throw SyntaxError{{kind.line, kind.column, "unknown source kind '" + kind.text + "' (expected 'rect')",
                         Severity::error}};
    expect(Tok::lparen, "'('");
    std::vector<std::pair<std::string, double>> kv;
    const auto positions = kvpairs(kv);
    expect(Tok::rparen, "')'");

    SourceResult r;
    bool have_width = false;
    std::set<std::string> seen;
    for (const auto& [tok, value] : positions) {
      if (!seen.insert(tok.text).second) error(tok, "parameter '" + tok.text + "' given twice to source");
      if (tok.text == "width") {
        have_width = true;
        if (!(value > 0.0)) error(tok, "source width must be positive");
        r.params.T_rec = value;
      } else if (tok.text == "height") {
        r.params.height = value;
      } else if (tok.text == "t0") {
        r.params.t0 = value;
      } else {
        error(tok, "source rect has no parameter '" + tok.text + "'");
      }
    }
    if (!have_width) error(kind, "source rect is missing parameter 'width'");
    r.tap_token = peek();
    r.tap = tap();
    return r;
  }

  std::optional<std::string> tap() {
    if (!is_keyword(peek(), "as")) return std::nullopt;
    take();
    return expect(Tok::ident, "tap name").text;
  }

  Expr expr(int depth) {
    if (depth > kMaxNesting) {
      const Token& t = peek();
      throw SyntaxError{{t.line, t.column, "expression nested too deeply", Severity::error}};
    }
    Expr e;
    e.factors.push_back(term(depth));
    while (peek().kind == Tok::star) {
      take();
      e.factors.push_back(term(depth));
    }
    return e;
  }

  Term term(int depth) {
    Term t;
    if (peek().kind == Tok::lparen) {
      take();
      t.body = std::make_shared<const Expr>(expr(depth + 1));
      expect(Tok::rparen, "')'");
    } else if (peek().kind == Tok::ident) {
      t.body = block();
    } else {
      unexpected("block or '('");
    }
    if (peek().kind == Tok::caret) {
      take();
      const Token n = expect(Tok::number, "repeat count");
      if (!n.integral) {
        error(n, "repeat count must be an integer");
      } else if (n.number < 1) {
        error(n, "repeat count must be >= 1");
      } else if (n.number > kMaxRepeat) {
        error(n, "repeat count exceeds " + std::to_string(kMaxRepeat));
      } else {
        t.repeat = static_cast<int>(n.number);
      }
    }
    return t;
  }

  BlockCall block() {
    const Token name = take();
    BlockCall call;
    call.kind = name.text;
    expect(Tok::lparen, "'(' after block name");
    kvpairs(call.params);
    expect(Tok::rparen, "')'");
    try {
      validate_block(call);
    } catch (const std::exception& e) {
      error(name, e.what());
    }
    return call;
  }

  static long block_count(const Expr& e) {
    long total = 0;
    for (const auto& t : e.factors) {
      const long inner = t.is_group() ? block_count(t.group()) : 1;
      total += inner * t.repeat;
      if (total > kMaxBlocks) return kMaxBlocks + 1;
    }
    return total;
  }

  void check_size(const Expr& e, const Token& at) {
    if (block_count(e) > kMaxBlocks) error(at, "stage expands to more than " + std::to_string(kMaxBlocks) + " blocks");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<ParseDiagnostic>& diags_;
};

bool is_low_pass(const BlockCall& b) { return b.kind == "bessel2" || b.kind == "bessel"; }

}  // namespace

std::string to_string(const ParseDiagnostic& d) {
  return std::to_string(d.line) + ":" + std::to_string(d.column) + ": " +
         (d.severity == Severity::error ? "error: " : "warning: ") + d.message;
}

bool has_errors(const std::vector<ParseDiagnostic>& diags) noexcept {
  for (const auto& d : diags)
    if (d.severity == Severity::error) return true;
  return false;
}

ParseResult<ChainSpec> parse_chain(std::string_view text) {
  ParseResult<ChainSpec> result;
  try {
    Lexed lexed = Lexer(text, result.diagnostics).run();
    Parser parser(std::move(lexed.tokens), result.diagnostics);
    auto spec = parser.chain(std::move(lexed.leading_comments));
    if (!has_errors(result.diagnostics)) result.value = std::move(spec);
  } catch (const std::exception& e) {
    result.diagnostics.push_back({1, 1, std::string("internal parser failure: ") + e.what(), Severity::error});
    result.value.reset();
  }
  return result;
}

ParseResult<Expr> parse_expr(std::string_view text) {
  ParseResult<Expr> result;
  try {
    Lexed lexed = Lexer(text, result.diagnostics).run();
    Parser parser(std::move(lexed.tokens), result.diagnostics);
    auto e = parser.standalone_expr();
    if (!has_errors(result.diagnostics)) result.value = std::move(e);
  } catch (const std::exception& e) {
    result.diagnostics.push_back({1, 1, std::string("internal parser failure: ") + e.what(), Severity::error});
    result.value.reset();
  }
  return result;
}

std::vector<ParseDiagnostic> validate_chain(const ChainSpec& chain) {
  std::vector<ParseDiagnostic> out;
  if (chain.stages.empty()) return out;

  const auto at = [](const Stage& st, std::string msg, Severity sev) {
    return ParseDiagnostic{std::max(st.line, 1), std::max(st.column, 1), std::move(msg), sev};
  };

  int nd_count = 0;
  int low_pass_order = 0;
  for (const auto& st : chain.stages) {
    for (const auto& b : flatten(st.expr)) {
      if (b.kind == "nd") ++nd_count;
      if (is_low_pass(b)) low_pass_order += to_tf(b).den().degree();
    }
  }
  if (nd_count > 0 && low_pass_order < nd_count)
    out.push_back(at(chain.stages.front(),
                     "low-pass order m=" + std::to_string(low_pass_order) + " is smaller than the number of "
                         "negative-delay stages n=" + std::to_string(nd_count) +
                         "; the output will contain derivatives of the source edges",
                     Severity::warning));

  bool unstable_reported = false;
  for (std::size_t i = 0; i < chain.stages.size(); ++i) {
    const auto& st = chain.stages[i];
    const bool is_last = i + 1 == chain.stages.size();
    const RationalTF composite = composite_through(chain, i);
    if ((st.tap || is_last) && !composite.is_proper()) {
      const std::string node = st.tap ? "tap '" + *st.tap + "'" : std::string("chain output");
      out.push_back(at(st, "composite transfer function at " + node + " is improper", Severity::warning));
    }
    if (!unstable_reported && poles(composite).classification == Stability::unstable) {
      out.push_back(at(st, "composite transfer function is unstable (right-half-plane pole)", Severity::error));
      unstable_reported = true;
    }
  }
  return out;
}

}  // namespace ngd
