#include "vnroles/error.hpp"

namespace vnroles {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedXml: return "MalformedXml";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::CycleDetected: return "CycleDetected";
    case ErrorCode::EmptyLexicon: return "EmptyLexicon";
    case ErrorCode::UnknownRole: return "UnknownRole";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::EmptyVocabulary: return "EmptyVocabulary";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::BadK: return "BadK";
    case ErrorCode::BadPerplexity: return "BadPerplexity";
    case ErrorCode::UnsatisfiableSpec: return "UnsatisfiableSpec";
    case ErrorCode::ScaleExceeded: return "ScaleExceeded";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Config: return "Config";
  }
  return "Unknown";
}

}  // namespace vnroles
