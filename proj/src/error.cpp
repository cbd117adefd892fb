#include "parshin/error.hpp"

namespace parshin {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::DivisionByZero: return "DIVISION_BY_ZERO";
    case ErrorCode::ZeroElement: return "ZERO_ELEMENT";
    case ErrorCode::PrecisionExhausted: return "PRECISION_EXHAUSTED";
    case ErrorCode::UnitConstantRequired: return "UNIT_CONSTANT_REQUIRED";
    case ErrorCode::ExactFormRequired: return "EXACT_FORM_REQUIRED";
    case ErrorCode::MixedModulus: return "MIXED_MODULUS";
    case ErrorCode::NotAHomomorphism: return "NOT_A_HOMOMORPHISM";
    case ErrorCode::UnsupportedField: return "UNSUPPORTED_FIELD";
    case ErrorCode::WildCoefficients: return "WILD_COEFFICIENTS";
    case ErrorCode::UnsupportedPrime: return "UNSUPPORTED_PRIME";
    case ErrorCode::AnalyticSplittingUnsupported: return "ANALYTIC_SPLITTING_UNSUPPORTED";
    case ErrorCode::NotMaximalChain: return "NOT_MAXIMAL_CHAIN";
    case ErrorCode::UnsupportedElementForm: return "UNSUPPORTED_ELEMENT_FORM";
    case ErrorCode::NotStabilized: return "NOT_STABILIZED";
    case ErrorCode::FaceMapIncompatible: return "FACE_MAP_INCOMPATIBLE";
    case ErrorCode::DegreeOutOfRange: return "DEGREE_OUT_OF_RANGE";
    case ErrorCode::GoldenMismatch: return "GOLDEN_MISMATCH";
    case ErrorCode::InvalidInput: return "INVALID_INPUT";
    case ErrorCode::ParseError: return "PARSE_ERROR";
  }
  return "UNKNOWN";
}

}  // namespace parshin
