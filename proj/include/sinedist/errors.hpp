#pragma once

#include <stdexcept>
#include <string>

namespace sinedist {

enum class Errc {
  NotSquare,
  NotHermitian,
  NotPositive,
  ConvergenceFailure,
  DimensionMismatch,
  DimensionOverflow,
  ThetaOutOfRange,
  BadRank,
  IndexOutOfRange,
  DegeneratePair,
  InvalidState,
  InvalidChannel,
  InvalidPovm,
  ParseError,
  IoError,
};

// All fatal conditions are reported through this one exception type; the
// code tells callers (and the CLI exit-status mapping) what went wrong.
class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::NotSquare: return "NotSquare";
    case Errc::NotHermitian: return "NotHermitian";
    case Errc::NotPositive: return "NotPositive";
    case Errc::ConvergenceFailure: return "ConvergenceFailure";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::DimensionOverflow: return "DimensionOverflow";
    case Errc::ThetaOutOfRange: return "ThetaOutOfRange";
    case Errc::BadRank: return "BadRank";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::DegeneratePair: return "DegeneratePair";
    case Errc::InvalidState: return "InvalidState";
    case Errc::InvalidChannel: return "InvalidChannel";
    case Errc::InvalidPovm: return "InvalidPovm";
    case Errc::ParseError: return "ParseError";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace sinedist
