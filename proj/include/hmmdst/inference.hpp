#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "hmmdst/errors.hpp"
#include "hmmdst/matrix.hpp"
#include "hmmdst/model.hpp"

namespace hmmdst {

// Scaled alpha recursion. Row k of scaled_alpha is the filtered posterior
// Pr(X_k | Y_{1:k}); multiplying it by prod_{j<=k} c_j recovers the joint
// Pr(X_k, Y_{1:k}). log_likelihood = sum_k ln c_k.
struct ScaledForwardResult {
  Matrix scaled_alpha;                  // N x num_states, each row sums to 1
  std::vector<double> scaling_factors;  // c_k, the pre-normalization row masses
  double log_likelihood = 0.0;
};

// Scaled beta recursion sharing the forward pass's c_k. Row k holds
// beta_k / prod_{j>=k} c_j, so the final unscaled row is all ones and
// gamma_k(i) = scaled_alpha_k(i) * scaled_beta_k(i) * c_k with no further
// normalizer.
struct ScaledBackwardResult {
  Matrix scaled_beta;  // N x num_states
};

struct PosteriorMarginals {
  Matrix gamma;             // N x num_states, smoothed Pr(X_k | Y)
  std::vector<Matrix> xi;   // N-1 slices of Pr(X_k, X_{k+1} | Y)
  double log_likelihood = 0.0;
};

namespace detail {

// Runs the alpha recursion; returns the 1-based step whose mass vanished, if
// any, instead of throwing, so likelihood evaluation can map it to -inf.
inline std::optional<std::size_t> forward_core(const HmmModel& m, const ObservationSequence& seq,
                                               ScaledForwardResult& out) {
  const std::size_t N = seq.size();
  const std::size_t S = m.space.num_states;
  out.scaled_alpha = Matrix(N, S);
  out.scaling_factors.assign(N, 0.0);
  out.log_likelihood = 0.0;

  auto first = out.scaled_alpha.row(0);
  for (std::size_t i = 0; i < S; ++i) first[i] = m.initial[i] * m.emission(i, seq[0]);
  for (std::size_t k = 0; k < N; ++k) {
    auto row = out.scaled_alpha.row(k);
    if (k > 0) {
      auto prev = out.scaled_alpha.row(k - 1);
      for (std::size_t j = 0; j < S; ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < S; ++i) acc += prev[i] * m.transition(i, j);
        row[j] = acc * m.emission(j, seq[k]);
      }
    }
    const double c = row_sum(row);
    if (!(c > 0.0)) return k + 1;
    out.scaling_factors[k] = c;
    for (auto& v : row) v /= c;
    out.log_likelihood += std::log(c);
  }
  return std::nullopt;
}

}  // namespace detail

inline ScaledForwardResult forward(const HmmModel& m, const ObservationSequence& seq) {
  ScaledForwardResult out;
  if (auto zero_step = detail::forward_core(m, seq, out))
    throw ZeroProbabilitySequence(*zero_step);
  return out;
}

inline ScaledBackwardResult backward(const HmmModel& m, const ObservationSequence& seq,
                                     const std::vector<double>& scaling_factors) {
  const std::size_t N = seq.size();
  const std::size_t S = m.space.num_states;
  if (scaling_factors.size() != N)
    throw DimensionMismatch("scaling_factors has length " +
                            std::to_string(scaling_factors.size()) + ", expected " +
                            std::to_string(N));
  ScaledBackwardResult out;
  out.scaled_beta = Matrix(N, S);
  auto last = out.scaled_beta.row(N - 1);
  for (auto& v : last) v = 1.0 / scaling_factors[N - 1];
  for (std::size_t k = N - 1; k-- > 0;) {
    auto row = out.scaled_beta.row(k);
    auto next = out.scaled_beta.row(k + 1);
    for (std::size_t i = 0; i < S; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < S; ++j)
        acc += m.transition(i, j) * m.emission(j, seq[k + 1]) * next[j];
      row[i] = acc / scaling_factors[k];
    }
  }
  return out;
}

namespace detail {

inline void normalize_in_place(std::span<double> row) {
  const double s = row_sum(row);
  if (s > 0.0)
    for (auto& v : row) v /= s;
}

}  // namespace detail

inline PosteriorMarginals posteriors(const HmmModel& m, const ObservationSequence& seq) {
  const auto fwd = forward(m, seq);
  const auto bwd = backward(m, seq, fwd.scaling_factors);
  const std::size_t N = seq.size();
  const std::size_t S = m.space.num_states;

  PosteriorMarginals out;
  out.log_likelihood = fwd.log_likelihood;
  out.gamma = Matrix(N, S);
  for (std::size_t k = 0; k < N; ++k) {
    auto g = out.gamma.row(k);
    auto a = fwd.scaled_alpha.row(k);
    auto b = bwd.scaled_beta.row(k);
    for (std::size_t i = 0; i < S; ++i) g[i] = a[i] * b[i] * fwd.scaling_factors[k];
    detail::normalize_in_place(g);
  }
  out.xi.reserve(N - 1);
  for (std::size_t k = 0; k + 1 < N; ++k) {
    Matrix slice(S, S);
    auto a = fwd.scaled_alpha.row(k);
    auto b = bwd.scaled_beta.row(k + 1);
    for (std::size_t i = 0; i < S; ++i)
      for (std::size_t j = 0; j < S; ++j)
        slice(i, j) = a[i] * m.transition(i, j) * m.emission(j, seq[k + 1]) * b[j];
    detail::normalize_in_place({slice.data(), S * S});
    out.xi.push_back(std::move(slice));
  }
  return out;
}

// Total log-probability of the sequence. Impossibility is a value here, not
// an error: evaluation harnesses average these.
inline double sequence_log_likelihood(const HmmModel& m, const ObservationSequence& seq) {
  ScaledForwardResult tmp;
  if (detail::forward_core(m, seq, tmp)) return -std::numeric_limits<double>::infinity();
  return tmp.log_likelihood;
}

// Max-product decoding in log space. Ties are broken toward the lowest state
// index, both at the final step and in each stored backpointer.
inline std::pair<StatePath, double> viterbi_decode(const HmmModel& m,
                                                   const ObservationSequence& seq) {
  const std::size_t N = seq.size();
  const std::size_t S = m.space.num_states;
  constexpr double neg_inf = -std::numeric_limits<double>::infinity();

  Matrix log_trans(S, S);
  for (std::size_t i = 0; i < S; ++i)
    for (std::size_t j = 0; j < S; ++j) log_trans(i, j) = std::log(m.transition(i, j));

  Matrix delta(N, S, neg_inf);
  std::vector<std::vector<std::size_t>> psi(N, std::vector<std::size_t>(S, 0));
  for (std::size_t i = 0; i < S; ++i)
    delta(0, i) = std::log(m.initial[i]) + std::log(m.emission(i, seq[0]));
  for (std::size_t k = 1; k < N; ++k) {
    bool any_finite = false;
    for (std::size_t j = 0; j < S; ++j) {
      double best = neg_inf;
      std::size_t arg = 0;
      for (std::size_t i = 0; i < S; ++i) {
        const double cand = delta(k - 1, i) + log_trans(i, j);
        if (cand > best) {
          best = cand;
          arg = i;
        }
      }
      delta(k, j) = best + std::log(m.emission(j, seq[k]));
      psi[k][j] = arg;
      any_finite = any_finite || delta(k, j) > neg_inf;
    }
    if (!any_finite) throw ZeroProbabilitySequence(k + 1);
  }

  double best = neg_inf;
  std::size_t arg = 0;
  for (std::size_t j = 0; j < S; ++j)
    if (delta(N - 1, j) > best) {
      best = delta(N - 1, j);
      arg = j;
    }
  if (best == neg_inf) throw ZeroProbabilitySequence(1);

  StatePath path(N);
  path[N - 1] = arg;
  for (std::size_t k = N - 1; k-- > 0;) path[k] = psi[k + 1][path[k + 1]];
  return {std::move(path), best};
}

}  // namespace hmmdst
