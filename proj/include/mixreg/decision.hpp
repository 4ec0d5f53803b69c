#pragma once

#include <array>
#include <cstddef>
#include <string_view>
#include <vector>

namespace mixreg {

using ActionId = std::size_t;

/// Loss L(a, z) for action a and latent regime z (column 0 = alternating,
/// column 1 = random).
class LossMatrix {
 public:
  using Row = std::array<double, 2>;

  /// Requires >= 2 rows, all entries finite and nonnegative.
  explicit LossMatrix(std::vector<Row> rows);

  /// Actions: 0 = declare alternating, 1 = declare random.
  static LossMatrix zero_one();

  /// zero_one() plus action 2 = abstain at a constant cost.
  static LossMatrix zero_one_with_abstain(double abstain_cost);

  /// JSON array of [L(a,0), L(a,1)] pairs, e.g. [[0,10],[1,0]].
  static LossMatrix from_json(std::string_view text);

  std::size_t actions() const noexcept { return rows_.size(); }
  const Row& row(ActionId action) const;
  const std::vector<Row>& rows() const noexcept { return rows_; }

  LossMatrix scaled(double factor) const;

 private:
  std::vector<Row> rows_;
};

double expected_loss(double pi0, const LossMatrix& loss, ActionId action);

/// Minimizer of expected_loss; ties go to the lowest action id.
ActionId bayes_action(double pi0, const LossMatrix& loss);

/// Excess loss, under the informed posterior, of acting on the text-only one.
double decision_regret(double pi0_textonly, double pi0_informed,
                       const LossMatrix& loss);

}  // namespace mixreg
