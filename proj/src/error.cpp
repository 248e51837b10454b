#include "mircorpus/error.hpp"

namespace mircorpus {

const char* to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::io: return "io";
    case ErrorCode::malformed_header: return "malformed header";
    case ErrorCode::unsupported_encoding: return "unsupported encoding";
    case ErrorCode::too_short: return "input too short";
    case ErrorCode::invalid_argument: return "invalid argument";
    case ErrorCode::parse: return "parse error";
    case ErrorCode::duplicate_id: return "duplicate id";
    case ErrorCode::length_mismatch: return "length mismatch";
    case ErrorCode::undefined: return "undefined result";
    case ErrorCode::insufficient_data: return "insufficient data";
    }
    return "unknown";
}

}  // namespace mircorpus
