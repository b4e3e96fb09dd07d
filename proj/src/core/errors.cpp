#include "core/errors.hpp"

namespace xlab {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::NonFinite: return "NonFinite";
    case Errc::NotSymmetric: return "NotSymmetric";
    case Errc::NotDiagonal: return "NotDiagonal";
    case Errc::NotBalanced: return "NotBalanced";
    case Errc::JacobiNoConvergence: return "JacobiNoConvergence";
    case Errc::IllConditionedVandermonde: return "IllConditionedVandermonde";
    case Errc::WindowOutOfRange: return "WindowOutOfRange";
    case Errc::DegenerateDenominator: return "DegenerateDenominator";
    case Errc::ZeroSystem: return "ZeroSystem";
    case Errc::RankDeficientHankel: return "RankDeficientHankel";
    case Errc::ComplexOrOutOfRangeRoots: return "ComplexOrOutOfRangeRoots";
    case Errc::NegativeWeight: return "NegativeWeight";
    case Errc::SearchFailed: return "SearchFailed";
    case Errc::DegenerateTeacher: return "DegenerateTeacher";
    case Errc::BadConfig: return "BadConfig";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace xlab
