/******************************************************************************
 * Copyright 2026 The SDM Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *****************************************************************************/

#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "sdm/error.hpp"

namespace sdm {

/// Divisors with a magnitude below this raise Errc::kDivisionGuard.
inline constexpr double kDivisionEpsilon = 1e-9;
/// Absolute tolerance of the `==` comparison.
inline constexpr double kEqualityTolerance = 1e-9;

enum class CompareOp { kLess, kLessEqual, kGreater, kGreaterEqual, kEqual };
enum class LinkBoundary { kStart, kEnd };

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  enum class Kind {
    kNumber,
    kVariable,
    kNegate,
    kAdd,
    kSubtract,
    kMultiply,
    kDivide,
    kAbs,
    kCompare,
    kAnd,
    kOr,
    kNot,
    kCollision,  // names = {actor, actor}
    kLinked,     // names = {activity uid}
  };

  Kind kind = Kind::kNumber;
  double number = 0.0;
  CompareOp op = CompareOp::kLess;
  LinkBoundary boundary = LinkBoundary::kStart;
  std::vector<std::string> names;
  std::vector<ExprPtr> children;

  bool is_boolean() const;
};

/// Immutable, well-typed event condition: a boolean expression tree.
class ConditionExpr {
 public:
  /// Throws TypeError unless the root is boolean.
  explicit ConditionExpr(ExprPtr root);

  const ExprNode& root() const { return *root_; }
  const ExprPtr& root_ptr() const { return root_; }

  /// Structural equality.
  friend bool operator==(const ConditionExpr& a, const ConditionExpr& b);

 private:
  ExprPtr root_;
};

bool structurally_equal(const ExprNode& a, const ExprNode& b);

// Node builders. They type-check their operands and throw TypeError.
namespace expr {
ExprPtr number(double value);
ExprPtr variable(std::string name);
ExprPtr negate(ExprPtr operand);
ExprPtr arithmetic(ExprNode::Kind kind, ExprPtr lhs, ExprPtr rhs);
ExprPtr abs(ExprPtr operand);
ExprPtr compare(CompareOp op, ExprPtr lhs, ExprPtr rhs);
ExprPtr logical(ExprNode::Kind kind, std::vector<ExprPtr> operands);
ExprPtr logical_not(ExprPtr operand);
ExprPtr collision(std::string a, std::string b);
ExprPtr linked(std::string activity_uid, LinkBoundary boundary);
}  // namespace expr

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, std::vector<std::string> expected,
              const std::string& found);

  std::size_t position() const { return position_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::size_t position_;
  std::vector<std::string> expected_;
};

/// Parses the condition grammar (docs/grammar.ebnf). Throws SyntaxError with
/// the byte offset and the set of expected tokens, or Error{kTypeError}.
ConditionExpr parse(std::string_view text);

/// Canonical text; parse(print(e)) == e.
std::string print(const ConditionExpr& condition);
std::string print(const ExprNode& node);

/// Variable bindings and predicate oracles for evaluation.
class EvaluationContext {
 public:
  virtual ~EvaluationContext() = default;
  virtual std::optional<double> variable(std::string_view name) const = 0;
  /// Default throws InvalidArgument (no collision oracle).
  virtual bool collision(std::string_view a, std::string_view b) const;
  /// True once the activity boundary has occurred. Default throws.
  virtual bool linked(std::string_view activity_uid,
                      LinkBoundary boundary) const;
};

/// Boolean operators short-circuit left to right. Throws UnboundVariable and
/// DivisionGuard.
bool evaluate(const ConditionExpr& condition, const EvaluationContext& env);
bool evaluate(const ExprNode& node, const EvaluationContext& env);
double evaluate_numeric(const ExprNode& node, const EvaluationContext& env);

/// Variable references, excluding actor references of collision(...) and
/// activity references of linked(...).
std::set<std::string> free_variables(const ConditionExpr& condition);
std::set<std::string> free_variables(const ExprNode& node);

/// Actor references appearing in collision(...) predicates.
std::set<std::string> collision_actors(const ConditionExpr& condition);

struct LinkReference {
  std::string activity_uid;
  LinkBoundary boundary;
  auto operator<=>(const LinkReference&) const = default;
};
std::vector<LinkReference> link_references(const ConditionExpr& condition);

/// Set when the whole condition is a single linked(...) predicate, i.e. a
/// mode-transition event rather than a threshold event.
std::optional<LinkReference> as_mode_transition(const ConditionExpr& condition);

/// Operands of a root `||` (or the root itself when it is not a disjunction).
std::vector<ExprPtr> disjuncts(const ConditionExpr& condition);

}  // namespace sdm
