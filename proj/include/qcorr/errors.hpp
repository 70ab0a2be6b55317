#pragma once

#include <stdexcept>
#include <string>

namespace qcorr {

enum class Errc {
  NotHermitian,
  NotUnitTrace,
  NotPositive,
  DimensionMismatch,
  UnknownLabel,
  TargetNotQubit,
  IncompleteChannel,
  InvalidParams,
  EmptyDecomposition,
  TooLarge,
  UnknownName,
  MeasuredNotQubit,
  WrongDims,
  BadSplit,
  UnsupportedMeasure,
  MeasureVanishesOnInput,
  ChainViolated,
  ParseError,
  ValidationError,
  IoError,
  UsageError,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::NotHermitian: return "NotHermitian";
    case Errc::NotUnitTrace: return "NotUnitTrace";
    case Errc::NotPositive: return "NotPositive";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::UnknownLabel: return "UnknownLabel";
    case Errc::TargetNotQubit: return "TargetNotQubit";
    case Errc::IncompleteChannel: return "IncompleteChannel";
    case Errc::InvalidParams: return "InvalidParams";
    case Errc::EmptyDecomposition: return "EmptyDecomposition";
    case Errc::TooLarge: return "TooLarge";
    case Errc::UnknownName: return "UnknownName";
    case Errc::MeasuredNotQubit: return "MeasuredNotQubit";
    case Errc::WrongDims: return "WrongDims";
    case Errc::BadSplit: return "BadSplit";
    case Errc::UnsupportedMeasure: return "UnsupportedMeasure";
    case Errc::MeasureVanishesOnInput: return "MeasureVanishesOnInput";
    case Errc::ChainViolated: return "ChainViolated";
    case Errc::ParseError: return "ParseError";
    case Errc::ValidationError: return "ValidationError";
    case Errc::IoError: return "IoError";
    case Errc::UsageError: return "UsageError";
  }
  return "Error";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace qcorr
