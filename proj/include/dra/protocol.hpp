#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <variant>

#include "dra/channel.hpp"
#include "dra/hfunctions.hpp"

namespace dra {

/// Doubly randomized protocol with constant estimator moves: the
/// estimator gains `step` on failure and moves by `step * mult` on
/// success, up or down according to the coin.
struct A1Params {
  double step = 1.0;    // gain on failure (the protocol's C)
  double mult = 1.0;    // success move is step * mult (the protocol's D)
  double beta = 0.9;    // probability scale used when the coin shows 0
  double s_init = 1.0;  // initial estimator

  void validate() const {
    if (!(step > 0.0)) throw std::invalid_argument("A1: step must be > 0");
    if (!(mult > 0.0)) throw std::invalid_argument("A1: mult must be > 0");
    if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("A1: beta must be in (0,1)");
    if (!(s_init >= 1.0)) throw std::invalid_argument("A1: s_init must be >= 1");
  }
};

/// Like A1 but the success move magnitude is h(S) instead of a constant.
/// h_up / h_down may differ (the generalized split-pair variant); the
/// class validator only covers the single-h case, so split pairs are
/// accepted unchecked.
struct A2Params {
  double step = 1.0;
  double beta = 0.9;
  double s_init = 1.0;
  HFunction h_up = HFunction::sqrt_shift();
  HFunction h_down = HFunction::sqrt_shift();

  void validate() const {
    if (!(step > 0.0)) throw std::invalid_argument("A2: step must be > 0");
    if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("A2: beta must be in (0,1)");
    if (!(s_init >= 1.0)) throw std::invalid_argument("A2: s_init must be >= 1");
  }
};

/// Like A2 with the constant scale beta replaced by 1 - eps(S).
struct A3Params {
  double step = 1.0;
  double s_init = 1.0;
  HFunction h_up = HFunction::sqrt_shift();
  HFunction h_down = HFunction::sqrt_shift();
  EpsFunction eps = EpsFunction::power(0.125);

  void validate() const {
    if (!(step > 0.0)) throw std::invalid_argument("A3: step must be > 0");
    if (!(s_init >= 1.0)) throw std::invalid_argument("A3: s_init must be >= 1");
  }
};

/// Ternary-feedback baseline, multiplicative up/down moves on p itself.
struct TernaryMultParams {
  double up = 2.0;  // factor on empty
  double down = 0.5;  // factor on collision
  double p_min = 1e-9;
  double p_max = 1.0;
  double p_init = 0.5;

  void validate() const {
    if (!(up > 1.0)) throw std::invalid_argument("ternary_mult: up factor must be > 1");
    if (!(down > 0.0 && down < 1.0)) throw std::invalid_argument("ternary_mult: down factor must be in (0,1)");
    if (!(p_min > 0.0 && p_min <= p_max && p_max <= 1.0)) {
      throw std::invalid_argument("ternary_mult: need 0 < p_min <= p_max <= 1");
    }
    if (!(p_init >= p_min && p_init <= p_max)) {
      throw std::invalid_argument("ternary_mult: p_init outside bounds");
    }
  }
};

/// Ternary-feedback baseline, additive steps on p.
struct TernaryAddParams {
  double up_step = 0.01;
  double down_step = 0.01;
  double p_min = 1e-9;
  double p_max = 1.0;
  double p_init = 0.5;

  void validate() const {
    if (!(up_step > 0.0)) throw std::invalid_argument("ternary_add: up_step must be > 0");
    if (!(down_step > 0.0)) throw std::invalid_argument("ternary_add: down_step must be > 0");
    if (!(p_min > 0.0 && p_min <= p_max && p_max <= 1.0)) {
      throw std::invalid_argument("ternary_add: need 0 < p_min <= p_max <= 1");
    }
    if (!(p_init >= p_min && p_init <= p_max)) {
      throw std::invalid_argument("ternary_add: p_init outside bounds");
    }
  }
};

using Protocol = std::variant<A1Params, A2Params, A3Params, TernaryMultParams, TernaryAddParams>;

// --- transmission probability rules ---------------------------------------

inline double a1_probability(double s, int coin, double beta) {
  if (!(s >= 1.0)) throw std::invalid_argument("a1_probability: estimator below 1");
  return coin ? 1.0 / s : beta / s;
}

inline double a3_probability(double s, int coin, const EpsFunction& eps) {
  return coin ? 1.0 / s : (1.0 - eps(s)) / s;
}

// --- estimator update rules ------------------------------------------------

inline double a1_update(double s, bool success, int coin, double step, double mult) {
  if (!success) return s + step;
  if (coin == 0) return s + step * mult;
  return std::max(s - step * mult, 1.0);
}

inline double a2_update(double s, bool success, int coin, double step, const HFunction& h_up,
                        const HFunction& h_down) {
  if (!success) return s + step;
  if (coin == 0) return s + h_up(s);
  return std::max(s - h_down(s), 1.0);
}

inline double ternary_update(double p, TernaryFeedback fb, const TernaryMultParams& t) {
  double q = p;
  if (fb == TernaryFeedback::empty) q = p * t.up;
  if (fb == TernaryFeedback::collision) q = p * t.down;
  return std::clamp(q, t.p_min, t.p_max);
}

inline double ternary_update(double p, TernaryFeedback fb, const TernaryAddParams& t) {
  double q = p;
  if (fb == TernaryFeedback::empty) q = p + t.up_step;
  if (fb == TernaryFeedback::collision) q = p - t.down_step;
  return std::clamp(q, t.p_min, t.p_max);
}

// --- protocol dispatch -----------------------------------------------------
//
// The chain state keeps one scalar estimator S >= 1 for every protocol.
// The ternary baselines drive p directly; their S is stored as 1/p so the
// same state type serves both families. Binary protocols never see the
// empty/collision split and ternary baselines never see the coin: the rule
// signatures above enforce that separation.

inline void validate(const Protocol& proto) {
  std::visit([](const auto& p) { p.validate(); }, proto);
}

inline bool uses_binary_feedback(const Protocol& proto) {
  return !std::holds_alternative<TernaryMultParams>(proto) &&
         !std::holds_alternative<TernaryAddParams>(proto);
}

inline double initial_estimator(const Protocol& proto) {
  return std::visit(
      [](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, TernaryMultParams> || std::is_same_v<T, TernaryAddParams>) {
          return 1.0 / p.p_init;
        } else {
          return p.s_init;
        }
      },
      proto);
}

inline double transmit_probability(const Protocol& proto, double s, int coin) {
  return std::visit(
      [&](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, A1Params>) {
          return a1_probability(s, coin, p.beta);
        } else if constexpr (std::is_same_v<T, A2Params>) {
          return a1_probability(s, coin, p.beta);
        } else if constexpr (std::is_same_v<T, A3Params>) {
          return a3_probability(s, coin, p.eps);
        } else {
          return 1.0 / s;  // stored as inverse probability; coin unused
        }
      },
      proto);
}

inline double update_estimator(const Protocol& proto, double s, const FeedbackSymbol& fb,
                               int coin) {
  return std::visit(
      [&](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, A1Params>) {
          return a1_update(s, fb.success, coin, p.step, p.mult);
        } else if constexpr (std::is_same_v<T, A2Params>) {
          return a2_update(s, fb.success, coin, p.step, p.h_up, p.h_down);
        } else if constexpr (std::is_same_v<T, A3Params>) {
          return a2_update(s, fb.success, coin, p.step, p.h_up, p.h_down);
        } else {
          return 1.0 / ternary_update(1.0 / s, fb.ternary, p);
        }
      },
      proto);
}

inline std::string protocol_name(const Protocol& proto) {
  return std::visit(
      [](const auto& p) -> std::string {
        using T = std::decay_t<decltype(p)>;
        (void)p;
        if constexpr (std::is_same_v<T, A1Params>) return "A1";
        if constexpr (std::is_same_v<T, A2Params>) return "A2";
        if constexpr (std::is_same_v<T, A3Params>) return "A3";
        if constexpr (std::is_same_v<T, TernaryMultParams>) return "ternary_mult";
        if constexpr (std::is_same_v<T, TernaryAddParams>) return "ternary_add";
      },
      proto);
}

}  // namespace dra
