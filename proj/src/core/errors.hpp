#pragma once

#include <stdexcept>
#include <string>

namespace xlab {

enum class Errc {
  NonFinite,
  NotSymmetric,
  NotDiagonal,
  NotBalanced,
  JacobiNoConvergence,
  IllConditionedVandermonde,
  WindowOutOfRange,
  DegenerateDenominator,
  ZeroSystem,
  RankDeficientHankel,
  ComplexOrOutOfRangeRoots,
  NegativeWeight,
  SearchFailed,
  DegenerateTeacher,
  BadConfig,
  Io,
};

const char* errc_name(Errc c);

struct Error : std::runtime_error {
  Errc code;
  Error(Errc c, const std::string& msg)
      : std::runtime_error(std::string(errc_name(c)) + ": " + msg), code(c) {}
};

[[noreturn]] inline void fail(Errc c, const std::string& msg) { throw Error(c, msg); }

}  // namespace xlab
