#pragma once

#include <gtest/gtest.h>

#include <functional>
#include <initializer_list>
#include <string>
#include <vector>

#include "stepal/error.hpp"
#include "stepal/pool.hpp"
#include "stepal/uncertainty.hpp"

namespace stepal::testing {

struct ClipSpec {
  std::vector<double> features;
  std::vector<double> logits;  // empty = none
  int truth = -1;              // -1 = none
};

inline VideoRecord make_video(std::string id, std::initializer_list<ClipSpec> clips,
                              PoolState state = PoolState::Unlabeled) {
  VideoRecord v{std::move(id), {}, state};
  for (const auto& c : clips) {
    ClipRecord r;
    r.clip_index = v.clips.size();
    r.features = c.features;
    if (!c.logits.empty()) {
      r.logits = c.logits;
      r.pseudo_step = pseudo_label(c.logits);
    }
    if (c.truth >= 0) r.true_step = StepId{static_cast<std::uint32_t>(c.truth)};
    v.clips.push_back(std::move(r));
  }
  return v;
}

// Single-clip video whose logits are the given values; features are `x`.
inline VideoRecord point_video(std::string id, std::vector<double> x, std::vector<double> logits,
                               PoolState state = PoolState::Unlabeled) {
  return make_video(std::move(id), {{std::move(x), std::move(logits), 0}}, state);
}

inline void expect_code(ErrorCode expected, const std::function<void()>& fn) {
  try {
    fn();
    ADD_FAILURE() << "expected error " << to_string(expected);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), expected) << e.what();
  }
}

}  // namespace stepal::testing
