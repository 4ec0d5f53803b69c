#include "mixreg/decision.hpp"

#include <cmath>
#include <string>

#include <json.hpp>

#include "mixreg/error.hpp"

namespace mixreg {

LossMatrix::LossMatrix(std::vector<Row> rows) : rows_(std::move(rows)) {
  if (rows_.size() < 2) fail(ErrorCode::parameter, "loss matrix needs at least 2 actions");
  for (std::size_t a = 0; a < rows_.size(); ++a) {
    for (double v : rows_[a]) {
      if (!std::isfinite(v) || v < 0.0) {
        fail(ErrorCode::parameter,
             "loss entries must be finite and >= 0 (action " + std::to_string(a) + ")");
      }
    }
  }
}

LossMatrix LossMatrix::zero_one() { return LossMatrix({{0.0, 1.0}, {1.0, 0.0}}); }

LossMatrix LossMatrix::zero_one_with_abstain(double abstain_cost) {
  return LossMatrix({{0.0, 1.0}, {1.0, 0.0}, {abstain_cost, abstain_cost}});
}

LossMatrix LossMatrix::from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::parse, std::string("loss matrix: ") + e.what());
  }
  if (!j.is_array()) fail(ErrorCode::parse, "loss matrix must be an array of [L0, L1] rows");
  std::vector<Row> rows;
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != 2 || !row[0].is_number() || !row[1].is_number()) {
      fail(ErrorCode::parse, "loss matrix rows must be two-element numeric arrays");
    }
    rows.push_back({row[0].get<double>(), row[1].get<double>()});
  }
  return LossMatrix(std::move(rows));
}

const LossMatrix::Row& LossMatrix::row(ActionId action) const {
  if (action >= rows_.size()) {
    fail(ErrorCode::parameter, "unknown action id " + std::to_string(action));
  }
  return rows_[action];
}

LossMatrix LossMatrix::scaled(double factor) const {
  std::vector<Row> rows = rows_;
  for (auto& r : rows) {
    r[0] *= factor;
    r[1] *= factor;
  }
  return LossMatrix(std::move(rows));
}

double expected_loss(double pi0, const LossMatrix& loss, ActionId action) {
  require_in_closed(pi0, 0.0, 1.0, "pi0");
  const auto& r = loss.row(action);
  return pi0 * r[0] + (1.0 - pi0) * r[1];
}

ActionId bayes_action(double pi0, const LossMatrix& loss) {
  ActionId best = 0;
  double best_loss = expected_loss(pi0, loss, 0);
  for (ActionId a = 1; a < loss.actions(); ++a) {
    const double l = expected_loss(pi0, loss, a);
    if (l < best_loss) {
      best = a;
      best_loss = l;
    }
  }
  return best;
}

double decision_regret(double pi0_textonly, double pi0_informed, const LossMatrix& loss) {
  const ActionId acted = bayes_action(pi0_textonly, loss);
  const ActionId optimal = bayes_action(pi0_informed, loss);
  return expected_loss(pi0_informed, loss, acted) - expected_loss(pi0_informed, loss, optimal);
}

}  // namespace mixreg
