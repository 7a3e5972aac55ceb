#include "ngd/chain.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "ngd/error.hpp"
#include "ngd/format.hpp"

namespace ngd {

namespace {

struct ParamSpec {
  std::string name;
  std::optional<double> fallback;  // nullopt = required
};

struct BlockSchema {
  std::vector<ParamSpec> params;
};

const std::map<std::string, BlockSchema, std::less<>>& schemas() {
  static const std::map<std::string, BlockSchema, std::less<>> table{
      {"nd", {{{"T", std::nullopt}}}},
      {"ndp", {{{"T", std::nullopt}, {"tau_in", std::nullopt}, {"tau_fb", std::nullopt}}}},
      {"bessel2", {{{"T", std::nullopt}, {"alpha", kBesselAlpha}}}},
      {"bessel", {{{"m", std::nullopt}, {"omega_c", std::nullopt}, {"alpha", kBesselAlpha}}}},
      {"allpass", {{{"T", std::nullopt}}}},
      {"napass", {{{"T", std::nullopt}}}},
      {"gain", {{{"k", std::nullopt}}}},
  };
  return table;
}

const BlockSchema& schema_for(const BlockCall& call) {
  const auto& table = schemas();
  const auto it = table.find(call.kind);
  if (it == table.end()) throw InvalidArgument("unknown block '" + call.kind + "'");
  return it->second;
}

double resolved(const BlockCall& call, const BlockSchema& schema, std::string_view name) {
  if (auto v = call.param(name)) return *v;
  for (const auto& p : schema.params)
    if (p.name == name && p.fallback) return *p.fallback;
  throw InvalidArgument("block '" + call.kind + "' is missing parameter '" + std::string(name) + "'");
}

int integer_param(const BlockCall& call, const BlockSchema& schema, std::string_view name) {
  const double v = resolved(call, schema, name);
  if (std::floor(v) != v || std::abs(v) > 1e6)
    throw InvalidArgument("parameter '" + std::string(name) + "' of block '" + call.kind + "' must be an integer");
  return static_cast<int>(v);
}

void append_expr(const Expr& expr, std::vector<BlockCall>& out) {
  for (const auto& term : expr.factors) {
    for (int r = 0; r < term.repeat; ++r) {
      if (term.is_group())
        append_expr(term.group(), out);
      else
        out.push_back(term.block());
    }
  }
}

}  // namespace

std::optional<double> BlockCall::param(std::string_view name) const {
  for (const auto& [k, v] : params)
    if (k == name) return v;
  return std::nullopt;
}

bool operator==(const Term& a, const Term& b) {
  if (a.repeat != b.repeat || a.body.index() != b.body.index()) return false;
  if (a.is_group()) return a.group() == b.group();
  return a.block() == b.block();
}

bool operator==(const Expr& a, const Expr& b) { return a.factors == b.factors; }

bool operator==(const Stage& a, const Stage& b) { return a.expr == b.expr && a.tap == b.tap; }

const std::vector<std::string>& block_kinds() {
  static const std::vector<std::string> kinds = [] {
    std::vector<std::string> k;
    for (const auto& [name, _] : schemas()) k.push_back(name);
    return k;
  }();
  return kinds;
}

void validate_block(const BlockCall& call) {
  const auto& schema = schema_for(call);
  for (std::size_t i = 0; i < call.params.size(); ++i) {
    const auto& name = call.params[i].first;
    const bool known = std::any_of(schema.params.begin(), schema.params.end(),
                                   [&](const ParamSpec& p) { return p.name == name; });
    if (!known) throw InvalidArgument("block '" + call.kind + "' has no parameter '" + name + "'");
    for (std::size_t j = 0; j < i; ++j)
      if (call.params[j].first == name)
        throw InvalidArgument("parameter '" + name + "' given twice to block '" + call.kind + "'");
  }
  (void)to_tf(call);
}

RationalTF to_tf(const BlockCall& call) {
  const auto& schema = schema_for(call);
  const auto get = [&](std::string_view name) { return resolved(call, schema, name); };
  if (call.kind == "nd") return nd(get("T"));
  if (call.kind == "ndp") return nd_practical(get("T"), get("tau_in"), get("tau_fb"));
  if (call.kind == "bessel2") return bessel2(get("T"), get("alpha"));
  if (call.kind == "bessel") return bessel_cascade(integer_param(call, schema, "m"), get("omega_c"), get("alpha"));
  if (call.kind == "allpass") return allpass(get("T"));
  if (call.kind == "napass") return neg_allpass(get("T"));
  if (call.kind == "gain") return RationalTF::gain(get("k"));
  throw InvalidArgument("unknown block '" + call.kind + "'");
}

RationalTF to_tf(const Expr& expr) {
  const auto blocks = flatten(expr);
  if (blocks.empty()) return RationalTF{};
  std::vector<RationalTF> tfs;
  tfs.reserve(blocks.size());
  for (const auto& b : blocks) tfs.push_back(to_tf(b));
  return cascade(tfs);
}

std::vector<BlockCall> flatten(const Expr& expr) {
  std::vector<BlockCall> out;
  append_expr(expr, out);
  return out;
}

RationalTF composite_through(const ChainSpec& chain, std::size_t last_stage) {
  if (last_stage >= chain.stages.size()) throw InvalidArgument("stage index out of range");
  std::vector<RationalTF> tfs;
  for (std::size_t i = 0; i <= last_stage; ++i) tfs.push_back(to_tf(chain.stages[i].expr));
  return cascade(tfs);
}

std::string source_node_name(const ChainSpec& chain) { return chain.source_tap.value_or("source"); }

std::string to_text(const BlockCall& call) {
  std::string s = call.kind + "(";
  for (std::size_t i = 0; i < call.params.size(); ++i) {
    if (i) s += ", ";
    s += call.params[i].first + "=" + format_number(call.params[i].second);
  }
  return s + ")";
}

std::string to_text(const Expr& expr) {
  std::string s;
  for (std::size_t i = 0; i < expr.factors.size(); ++i) {
    const auto& term = expr.factors[i];
    if (i) s += " * ";
    s += term.is_group() ? "(" + to_text(term.group()) + ")" : to_text(term.block());
    if (term.repeat != 1) s += "^" + std::to_string(term.repeat);
  }
  return s;
}

std::string to_text(const ChainSpec& chain) {
  std::ostringstream os;
  if (!chain.description.empty()) {
    std::istringstream lines(chain.description);
    for (std::string line; std::getline(lines, line);) os << "# " << line << '\n';
  }
  os << "source rect(width=" << format_number(chain.source.T_rec);
  if (chain.source.height != 1.0) os << ", height=" << format_number(chain.source.height);
  if (chain.source.t0 != 0.0) os << ", t0=" << format_number(chain.source.t0);
  os << ')';
  if (chain.source_tap) os << " as " << *chain.source_tap;
  os << '\n';
  for (const auto& st : chain.stages) {
    os << "stage " << to_text(st.expr);
    if (st.tap) os << " as " << *st.tap;
    os << '\n';
  }
  return os.str();
}

std::string design_chain_text(const DesignParams& d) {
  std::ostringstream os;
  os << "# n=" << d.n << " gamma=" << format_number(d.gamma) << " omega_c=" << format_number(d.omega_c)
     << " T_total=" << format_number(d.T_total) << '\n';
  os << "source rect(width=" << format_number(d.T_w) << ")\n";
  os << "stage bessel(m=" << d.m << ", omega_c=" << format_number(d.omega_c)
     << ", alpha=" << format_number(kBesselAlpha) << ") as input\n";
  os << "stage nd(T=" << format_number(d.T) << ")";
  if (d.n != 1) os << "^" << d.n;
  os << " as output\n";
  return os.str();
}

}  // namespace ngd
