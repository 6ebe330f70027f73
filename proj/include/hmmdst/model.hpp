#pragma once

#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "hmmdst/matrix.hpp"
#include "hmmdst/random.hpp"

namespace hmmdst {

// Probability containers. Stochastic-ness (entries in [0,1], rows summing to
// one within kStochasticTolerance) is a contract checked by validate_model,
// not enforced by the type.
using StochasticVector = std::vector<double>;
using StochasticMatrix = Matrix;

using ObservationSequence = std::vector<std::size_t>;  // symbol indices
using StatePath = std::vector<std::size_t>;            // state indices

inline constexpr double kStochasticTolerance = 1e-9;

// Index sets of the hidden and observable alphabets, with optional
// human-readable labels (used as corpus keys, so duplicates are rejected).
struct StateSpace {
  std::size_t num_states = 0;
  std::size_t num_symbols = 0;
  std::vector<std::string> state_labels;   // empty or exactly num_states
  std::vector<std::string> symbol_labels;  // empty or exactly num_symbols

  friend bool operator==(const StateSpace&, const StateSpace&) = default;
};

// Full parameter set: initial distribution, transition matrix (num_states x
// num_states) and emission matrix (num_states x num_symbols).
struct HmmModel {
  StateSpace space;
  StochasticVector initial;
  StochasticMatrix transition;
  StochasticMatrix emission;

  friend bool operator==(const HmmModel&, const HmmModel&) = default;
};

struct ValidationResult {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

namespace detail {

inline void check_stochastic_row(std::span<const double> row, const std::string& name,
                                 std::vector<std::string>& out) {
  double sum = 0.0;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (!(row[i] >= 0.0))
      out.push_back(name + " entry " + std::to_string(i) + " is negative (" +
                    std::to_string(row[i]) + ")");
    else if (row[i] > 1.0)
      out.push_back(name + " entry " + std::to_string(i) + " exceeds 1 (" +
                    std::to_string(row[i]) + ")");
    sum += row[i];
  }
  if (std::abs(sum - 1.0) > kStochasticTolerance)
    out.push_back(name + " sums to " + std::to_string(sum) + ", expected 1");
}

inline void check_labels(const std::vector<std::string>& labels, std::size_t expected,
                         const std::string& name, std::vector<std::string>& out) {
  if (labels.empty()) return;
  if (labels.size() != expected) {
    out.push_back(name + " has " + std::to_string(labels.size()) + " entries, expected " +
                  std::to_string(expected));
    return;
  }
  std::set<std::string> seen;
  for (const auto& l : labels)
    if (!seen.insert(l).second) out.push_back(name + " contains duplicate \"" + l + "\"");
}

}  // namespace detail

// Checks every structural and stochastic invariant. Violations are data, not
// faults: each one names the offending row or index.
inline ValidationResult validate_model(const HmmModel& m) {
  ValidationResult r;
  const std::size_t S = m.space.num_states;
  const std::size_t M = m.space.num_symbols;
  if (S < 1) r.violations.push_back("num_states must be >= 1");
  if (M < 1) r.violations.push_back("num_symbols must be >= 1");
  detail::check_labels(m.space.state_labels, S, "state_labels", r.violations);
  detail::check_labels(m.space.symbol_labels, M, "symbol_labels", r.violations);

  if (m.initial.size() != S)
    r.violations.push_back("initial has dimension " + std::to_string(m.initial.size()) +
                           ", expected " + std::to_string(S));
  else
    detail::check_stochastic_row(m.initial, "initial", r.violations);

  if (m.transition.rows() != S || m.transition.cols() != S)
    r.violations.push_back("transition is " + std::to_string(m.transition.rows()) + "x" +
                           std::to_string(m.transition.cols()) + ", expected " +
                           std::to_string(S) + "x" + std::to_string(S));
  else
    for (std::size_t i = 0; i < S; ++i)
      detail::check_stochastic_row(m.transition.row(i), "transition row " + std::to_string(i),
                                   r.violations);

  if (m.emission.rows() != S || m.emission.cols() != M)
    r.violations.push_back("emission is " + std::to_string(m.emission.rows()) + "x" +
                           std::to_string(m.emission.cols()) + ", expected " +
                           std::to_string(S) + "x" + std::to_string(M));
  else
    for (std::size_t i = 0; i < S; ++i)
      detail::check_stochastic_row(m.emission.row(i), "emission row " + std::to_string(i),
                                   r.violations);
  return r;
}

inline bool sequence_in_range(const ObservationSequence& seq, const StateSpace& space) {
  if (seq.empty()) return false;
  for (auto s : seq)
    if (s >= space.num_symbols) return false;
  return true;
}

inline HmmModel uniform_model(const StateSpace& space) {
  HmmModel m;
  m.space = space;
  m.initial.assign(space.num_states, 1.0 / static_cast<double>(space.num_states));
  m.transition = Matrix(space.num_states, space.num_states,
                        1.0 / static_cast<double>(space.num_states));
  m.emission = Matrix(space.num_states, space.num_symbols,
                      1.0 / static_cast<double>(space.num_symbols));
  return m;
}

namespace detail {

// Normalized independent uniform(eps, 1) draws. eps keeps every entry
// strictly positive so EM cannot lock onto a structural zero.
inline void fill_random_row(std::span<double> row, CounterRng& rng) {
  constexpr double eps = 1e-3;
  double sum = 0.0;
  for (auto& v : row) {
    v = rng.uniform(eps, 1.0);
    sum += v;
  }
  for (auto& v : row) v /= sum;
}

}  // namespace detail

// Deterministic for a fixed seed; draw order is initial, transition rows,
// emission rows.
inline HmmModel random_model(const StateSpace& space, std::uint64_t seed) {
  CounterRng rng(seed);
  HmmModel m;
  m.space = space;
  m.initial.resize(space.num_states);
  m.transition = Matrix(space.num_states, space.num_states);
  m.emission = Matrix(space.num_states, space.num_symbols);
  detail::fill_random_row(m.initial, rng);
  for (std::size_t i = 0; i < space.num_states; ++i)
    detail::fill_random_row(m.transition.row(i), rng);
  for (std::size_t i = 0; i < space.num_states; ++i)
    detail::fill_random_row(m.emission.row(i), rng);
  return m;
}

// Samples a hidden path of the given length from initial/transition.
inline StatePath sample_path(const HmmModel& m, std::size_t length, CounterRng& rng) {
  StatePath path;
  path.reserve(length);
  if (length == 0) return path;
  path.push_back(rng.sample(m.initial));
  for (std::size_t k = 1; k < length; ++k)
    path.push_back(rng.sample(m.transition.row(path.back())));
  return path;
}

// Samples a full (path, observations) pair from the model's own emission.
inline ObservationSequence sample_observations(const HmmModel& m, std::size_t length,
                                               CounterRng& rng) {
  ObservationSequence seq;
  seq.reserve(length);
  for (auto state : sample_path(m, length, rng)) seq.push_back(rng.sample(m.emission.row(state)));
  return seq;
}

}  // namespace hmmdst
