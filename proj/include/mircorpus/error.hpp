#pragma once

#include <stdexcept>
#include <string>

namespace mircorpus {

enum class ErrorCode {
    io,                    // file could not be opened/read/written
    malformed_header,      // RIFF/WAVE structure broken or truncated
    unsupported_encoding,  // valid WAV but a sample format we do not decode
    too_short,             // input shorter than the operation requires
    invalid_argument,
    parse,                 // textual input (CSV, spec files) did not parse
    duplicate_id,
    length_mismatch,
    undefined,             // result is mathematically undefined (e.g. x/0)
    insufficient_data,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace mircorpus
