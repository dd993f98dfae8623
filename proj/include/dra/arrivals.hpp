#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "dra/rng.hpp"
#include "dra/sampling.hpp"

namespace dra {

/// Per-slot arrival law. Arrivals are i.i.d. across slots with finite
/// mean; the mean is the only quantity the analysis layer reads.
struct ArrivalProcess {
  enum class Kind { poisson, bernoulli_batch, deterministic };

  Kind kind = Kind::poisson;
  double rate = 0.0;          // poisson mean per slot
  std::int64_t batch = 1;     // bernoulli_batch: batch size
  double batch_prob = 0.0;    // bernoulli_batch: probability the batch arrives
  std::int64_t constant = 0;  // deterministic arrivals per slot

  static ArrivalProcess poisson(double rate) {
    if (!(rate >= 0.0) || !std::isfinite(rate)) {
      throw std::invalid_argument("ArrivalProcess::poisson: rate must be finite and >= 0");
    }
    ArrivalProcess p;
    p.kind = Kind::poisson;
    p.rate = rate;
    return p;
  }

  static ArrivalProcess bernoulli_batch(std::int64_t batch, double prob) {
    if (batch < 0) throw std::invalid_argument("ArrivalProcess::bernoulli_batch: negative batch");
    if (!(prob >= 0.0 && prob <= 1.0)) {
      throw std::invalid_argument("ArrivalProcess::bernoulli_batch: probability outside [0,1]");
    }
    ArrivalProcess p;
    p.kind = Kind::bernoulli_batch;
    p.batch = batch;
    p.batch_prob = prob;
    return p;
  }

  static ArrivalProcess deterministic(std::int64_t count) {
    if (count < 0) throw std::invalid_argument("ArrivalProcess::deterministic: negative count");
    ArrivalProcess p;
    p.kind = Kind::deterministic;
    p.constant = count;
    return p;
  }

  /// Mean arrivals per slot (the lambda the analysis sees).
  double mean_per_slot() const {
    switch (kind) {
      case Kind::poisson:
        return rate;
      case Kind::bernoulli_batch:
        return static_cast<double>(batch) * batch_prob;
      case Kind::deterministic:
        return static_cast<double>(constant);
    }
    return 0.0;
  }

  std::string describe() const {
    switch (kind) {
      case Kind::poisson:
        return "poisson";
      case Kind::bernoulli_batch:
        return "bernoulli_batch";
      case Kind::deterministic:
        return "deterministic";
    }
    return "?";
  }
};

inline std::int64_t sample_arrivals(const ArrivalProcess& proc, RngStream& rng) {
  switch (proc.kind) {
    case ArrivalProcess::Kind::poisson:
      return sample_poisson(proc.rate, rng);
    case ArrivalProcess::Kind::bernoulli_batch:
      return rng.bernoulli(proc.batch_prob) ? proc.batch : 0;
    case ArrivalProcess::Kind::deterministic:
      return proc.constant;
  }
  return 0;
}

}  // namespace dra
