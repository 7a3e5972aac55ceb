#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "ngd/blocks.hpp"
#include "ngd/rational_tf.hpp"

namespace ngd {

/// One block invocation, e.g. nd(T=0.22). Parameters keep their written order.
struct BlockCall {
  std::string kind;
  std::vector<std::pair<std::string, double>> params;

  [[nodiscard]] std::optional<double> param(std::string_view name) const;

  friend bool operator==(const BlockCall&, const BlockCall&) = default;
};

struct Expr;

/// A block or a parenthesized group, raised to a repeat count.
struct Term {
  std::variant<BlockCall, std::shared_ptr<const Expr>> body;
  int repeat = 1;

  [[nodiscard]] bool is_group() const noexcept { return body.index() == 1; }
  [[nodiscard]] const BlockCall& block() const { return std::get<BlockCall>(body); }
  [[nodiscard]] const Expr& group() const { return *std::get<1>(body); }
};

/// Product of terms, signal order left to right.
struct Expr {
  std::vector<Term> factors;
};

bool operator==(const Term& a, const Term& b);
bool operator==(const Expr& a, const Expr& b);

struct Stage {
  Expr expr;
  std::optional<std::string> tap;
  // 1-based position of the `stage` keyword, 0 when built in code. Not part
  // of equality.
  int line = 0;
  int column = 0;
};

bool operator==(const Stage& a, const Stage& b);

struct ChainSpec {
  SourceParams source;
  std::optional<std::string> source_tap;
  std::vector<Stage> stages;
  std::string description;

  friend bool operator==(const ChainSpec&, const ChainSpec&) = default;
};

/// Block kinds understood by the chain language.
[[nodiscard]] const std::vector<std::string>& block_kinds();

/// Throws InvalidArgument naming the problem: unknown kind, unknown or
/// missing parameter, or a value outside the block's preconditions.
void validate_block(const BlockCall& call);

[[nodiscard]] RationalTF to_tf(const BlockCall& call);
[[nodiscard]] RationalTF to_tf(const Expr& expr);

/// Every block in signal order with repeats expanded.
[[nodiscard]] std::vector<BlockCall> flatten(const Expr& expr);

/// Composite from the source through stage `last_stage` (inclusive).
[[nodiscard]] RationalTF composite_through(const ChainSpec& chain, std::size_t last_stage);

/// Name of the source node: its tap, or "source".
[[nodiscard]] std::string source_node_name(const ChainSpec& chain);

[[nodiscard]] std::string to_text(const BlockCall& call);
[[nodiscard]] std::string to_text(const Expr& expr);
/// Canonical chain-language text; parses back to an equal ChainSpec.
[[nodiscard]] std::string to_text(const ChainSpec& chain);

/// Chain text for a multi-stage design: rect of width T_w, an order-m
/// Bessel cascade tapped `input`, and nd(T)^n tapped `output`.
[[nodiscard]] std::string design_chain_text(const DesignParams& d);

}  // namespace ngd
