#pragma once

// Synthetic entropy/PQM series with stop points worked out by hand from the
// rules: trailing mean of the last `window` differences turning + to -,
// `window` consecutive flat steps, a PQM fall below the running max, or the cap.

#include <cmath>
#include <string>
#include <vector>

#include "retinexad/engine.hpp"

namespace testsupport {

struct StopCase {
  std::string name;
  retinexad::EvolutionTrace trace;
  retinexad::StoppingCriteria crit;
  int max_iter = 0;
  retinexad::StopReason reason = retinexad::StopReason::kNone;
  int stop_n = 0;
  int best_n = 0;
};

inline retinexad::EvolutionTrace make_trace(const std::vector<double>& e, const std::vector<double>& pqm) {
  retinexad::EvolutionTrace t;
  for (std::size_t k = 0; k < e.size(); ++k) {
    retinexad::IterationRecord r;
    r.n = static_cast<int>(k) + 1;
    r.entropy = e[k];
    r.pqm = pqm[k];
    t.records.push_back(r);
  }
  return t;
}

inline std::vector<StopCase> stopping_cases() {
  using retinexad::StopReason;
  std::vector<StopCase> out;

  // Rise by `a` per step up to the peak at p, then fall by `b`. With k falling
  // differences in the window the mean is ((w-k)a - kb)/w, negative first
  // when k > w a/(a+b).
  for (double a : {0.05, 0.12, 0.2}) {
    for (double b : {0.03, 0.1, 0.25}) {
      for (int w : {1, 2, 3}) {
        const double ratio = w * a / (a + b);
        if (std::abs(ratio - std::round(ratio)) < 0.05) continue;
        const int p = 3 + (out.size() % 4);
        const int k = static_cast<int>(std::floor(ratio)) + 1;
        std::vector<double> e, q;
        for (int n = 1; n <= p + w + 4; ++n) {
          e.push_back(n <= p ? 6.0 + a * n : 6.0 + a * p - b * (n - p));
          q.push_back(9.0);
        }
        StopCase c;
        c.name = "peak a=" + std::to_string(a) + " b=" + std::to_string(b) + " w=" + std::to_string(w);
        c.trace = make_trace(e, q);
        c.crit.window = w;
        c.max_iter = 200;
        c.reason = StopReason::kEntropyPeak;
        c.stop_n = p + k;
        c.best_n = p;
        out.push_back(c);
      }
    }
  }

  // Strictly increasing: nothing fires before the cap; the last iterate wins.
  for (int cap : {5, 9, 14, 20}) {
    for (double a : {0.01, 0.3}) {
      std::vector<double> e, q;
      for (int n = 1; n <= cap; ++n) {
        e.push_back(5.0 + a * n);
        q.push_back(8.0);
      }
      StopCase c;
      c.name = "rising cap=" + std::to_string(cap);
      c.trace = make_trace(e, q);
      c.max_iter = cap;
      c.reason = StopReason::kMaxIter;
      c.stop_n = cap;
      c.best_n = cap;
      out.push_back(c);
    }
  }

  // Strictly decreasing: the slope never was positive, so no peak; n* = 1.
  for (int cap : {6, 11}) {
    std::vector<double> e, q;
    for (int n = 1; n <= cap; ++n) {
      e.push_back(7.5 - 0.05 * n);
      q.push_back(8.0);
    }
    StopCase c;
    c.name = "falling cap=" + std::to_string(cap);
    c.trace = make_trace(e, q);
    c.max_iter = cap;
    c.reason = StopReason::kMaxIter;
    c.stop_n = cap;
    c.best_n = 1;
    out.push_back(c);
  }

  // Flat from the start: differences at n = 2..1+w are all below threshold.
  for (int w : {1, 2, 3, 4, 5}) {
    for (double drift : {0.0, 0.0003}) {
      std::vector<double> e, q;
      for (int n = 1; n <= 12; ++n) {
        e.push_back(7.2 - drift * n);
        q.push_back(9.5 + (n % 2 ? 0.01 : 0.0));
      }
      StopCase c;
      c.name = "flat w=" + std::to_string(w);
      c.trace = make_trace(e, q);
      c.crit.window = w;
      c.max_iter = 200;
      c.reason = StopReason::kFlatness;
      c.stop_n = 1 + w;
      c.best_n = 1;
      out.push_back(c);
    }
  }

  // Rising entropy, flat after a ramp: first m steps rise, then flat.
  for (int m : {2, 4, 6}) {
    for (int w : {2, 3}) {
      std::vector<double> e, q;
      for (int n = 1; n <= m + w + 5; ++n) {
        e.push_back(6.0 + 0.1 * std::min(n, m));
        q.push_back(9.0);
      }
      StopCase c;
      c.name = "plateau m=" + std::to_string(m) + " w=" + std::to_string(w);
      c.trace = make_trace(e, q);
      c.crit.window = w;
      c.max_iter = 200;
      c.reason = StopReason::kFlatness;
      c.stop_n = m + w;
      c.best_n = m;
      out.push_back(c);
    }
  }

  // PQM climbs, then drops by more than the allowed amount at step d.
  for (int d : {3, 5, 8, 12}) {
    for (double drop : {0.3, 0.5}) {
      std::vector<double> e, q;
      for (int n = 1; n <= d + 3; ++n) {
        e.push_back(6.0 + 0.05 * n);
        q.push_back(n < d ? 8.0 + 0.1 * n : 8.0 + 0.1 * (d - 1) - drop - 0.05);
      }
      StopCase c;
      c.name = "pqm drop d=" + std::to_string(d);
      c.trace = make_trace(e, q);
      c.crit.pqm_drop = drop;
      c.max_iter = 200;
      c.reason = StopReason::kPqmDrop;
      c.stop_n = d;
      c.best_n = d;
      out.push_back(c);
    }
  }
  return out;
}

}  // namespace testsupport
