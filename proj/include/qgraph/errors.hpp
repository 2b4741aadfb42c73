#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qgraph {

enum class ErrorCode {
  InvalidGraph,
  InvalidCut,
  ParseError,
  EpsilonTooLarge,
  DuplicatePoint,
  ScanStepTooCoarse,
  NotSelfAdjointFamily,
  DegenerateEigenvalue,
  NotAnEigenvalue,
  VertexZero,
  ConditionMismatch,
  DirichletResonance,
  PathNotFound,
  BranchLost,
  DegenerateAtZero,
  ZeroAtCut,
  SignFlipAtCut,
  EvaluationFailed,
  ImproperPartition,
};

std::string_view to_string(ErrorCode code);

// All library failures are reported through this type; the code tells
// callers whether a genericity hypothesis failed or the input was bad.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qgraph
