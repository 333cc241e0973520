#pragma once

#include <stdexcept>
#include <string>

namespace tropcover {

/// Every failure the library can diagnose. Checks that guard mathematical
/// preconditions throw Error with one of these codes; callers that want a
/// verdict rather than an exception use the report-returning entry points.
enum class Errc {
  // input / format
  ParseError,
  UnknownReference,
  DuplicateName,
  // model validation
  EmptyGraph,
  Disconnected,
  NonpositiveLength,
  InfinityOnNonLeafEdge,
  AmbiguousInfiniteEnd,
  BadIndex,
  // refinement
  OffsetOutOfRange,
  RefinementDiverged,
  // morphisms
  NotAMorphism,
  NotFiniteHarmonic,
  SourceModelMismatch,
  IncompatibleMiddleCurve,
  // actions and groups
  NotBijective,
  LengthNotPreserved,
  InfinityNotPreserved,
  EndpointMismatch,
  NotClosedUnderComposition,
  GroupTooLarge,
  RequiresEquivariantModel,
  CutsNotInvariant,
  NotASubgroup,
  NotNormal,
  // galois layer
  NotInvariant,
  PsiNotInvariant,
  NotGaloisCovering,
  PhiNotNormal,
  PsiNotInAPrime,
  InducedActionIllDefined,
  CompositionMismatch,
  // consistency failures inside the library itself
  Internal,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::ParseError: return "ParseError";
    case Errc::UnknownReference: return "UnknownReference";
    case Errc::DuplicateName: return "DuplicateName";
    case Errc::EmptyGraph: return "EmptyGraph";
    case Errc::Disconnected: return "Disconnected";
    case Errc::NonpositiveLength: return "NonpositiveLength";
    case Errc::InfinityOnNonLeafEdge: return "InfinityOnNonLeafEdge";
    case Errc::AmbiguousInfiniteEnd: return "AmbiguousInfiniteEnd";
    case Errc::BadIndex: return "BadIndex";
    case Errc::OffsetOutOfRange: return "OffsetOutOfRange";
    case Errc::RefinementDiverged: return "RefinementDiverged";
    case Errc::NotAMorphism: return "NotAMorphism";
    case Errc::NotFiniteHarmonic: return "NotFiniteHarmonic";
    case Errc::SourceModelMismatch: return "SourceModelMismatch";
    case Errc::IncompatibleMiddleCurve: return "IncompatibleMiddleCurve";
    case Errc::NotBijective: return "NotBijective";
    case Errc::LengthNotPreserved: return "LengthNotPreserved";
    case Errc::InfinityNotPreserved: return "InfinityNotPreserved";
    case Errc::EndpointMismatch: return "EndpointMismatch";
    case Errc::NotClosedUnderComposition: return "NotClosedUnderComposition";
    case Errc::GroupTooLarge: return "GroupTooLarge";
    case Errc::RequiresEquivariantModel: return "RequiresEquivariantModel";
    case Errc::CutsNotInvariant: return "CutsNotInvariant";
    case Errc::NotASubgroup: return "NotASubgroup";
    case Errc::NotNormal: return "NotNormal";
    case Errc::NotInvariant: return "NotInvariant";
    case Errc::PsiNotInvariant: return "PsiNotInvariant";
    case Errc::NotGaloisCovering: return "NotGaloisCovering";
    case Errc::PhiNotNormal: return "PhiNotNormal";
    case Errc::PsiNotInAPrime: return "PsiNotInAPrime";
    case Errc::InducedActionIllDefined: return "InducedActionIllDefined";
    case Errc::CompositionMismatch: return "CompositionMismatch";
    case Errc::Internal: return "Internal";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

/// Internal-consistency guard: conditions that are mathematically forced
/// (certified elsewhere) but still verified at runtime.
inline void ensure(bool cond, const std::string& what) {
  if (!cond) throw Error(Errc::Internal, what);
}

}  // namespace tropcover
