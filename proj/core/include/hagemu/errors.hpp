#pragma once

#include <stdexcept>
#include <string>

namespace hagemu {

// Machine-checkable failure categories. Messages carry the human detail
// (offending nodes, edges, time indices); tests dispatch on the code.
enum class ErrorCode {
  CycleDetected,
  DanglingEdge,
  BadProbability,
  MissingPhysicalRoot,
  MissingEntryPoint,
  NonContiguousIds,
  PhysicalNotSink,
  DimensionMismatch,
  UnknownNode,
  UnknownAction,
  IllegalAction,
  HorizonExceeded,
  DivergedWeights,
  IndexOutOfRange,
  NoEntryExploits,
  TooLargeForExhaustive,
  ZeroCostTrace,
  BadGridStep,
  IncompatibleWeights,
  BadConfig,
  ParseError,
};

class HagError : public std::runtime_error {
 public:
  HagError(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& what) {
  throw HagError(code, what);
}

}  // namespace hagemu
