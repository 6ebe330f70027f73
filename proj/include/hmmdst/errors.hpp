#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hmmdst {

// The observation sequence has probability zero under the model. `step` is
// the 1-based index of the first step whose pre-normalization mass vanished.
class ZeroProbabilitySequence : public std::runtime_error {
public:
  explicit ZeroProbabilitySequence(std::size_t step)
      : std::runtime_error("sequence has zero probability at step " + std::to_string(step)),
        step_(step) {}

  std::size_t step() const { return step_; }

private:
  std::size_t step_;
};

class DimensionMismatch : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// A training sequence is impossible under the current model.
class DegenerateCorpus : public std::runtime_error {
public:
  DegenerateCorpus(std::size_t sequence_index, std::size_t step)
      : std::runtime_error("sequence " + std::to_string(sequence_index) +
                           " has zero probability (step " + std::to_string(step) + ")"),
        sequence_index_(sequence_index) {}

  std::size_t sequence_index() const { return sequence_index_; }

private:
  std::size_t sequence_index_;
};

// A count row summed to zero with no smoothing: the state was never reached.
class DegenerateRow : public std::runtime_error {
public:
  DegenerateRow(const std::string& which, std::size_t row)
      : std::runtime_error(which + " row " + std::to_string(row) +
                           " has zero expected count and smoothing is disabled"),
        row_(row) {}

  std::size_t row() const { return row_; }

private:
  std::size_t row_;
};

// Malformed or inconsistent input file. `where` identifies the offending
// line or field for the CLI's diagnostics.
class ParseError : public std::runtime_error {
public:
  explicit ParseError(const std::string& where, const std::string& what)
      : std::runtime_error(where + ": " + what) {}
};

}  // namespace hmmdst
