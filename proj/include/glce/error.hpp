#ifndef GLCE_ERROR_HPP
#define GLCE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace glce {

enum class errc {
    cyclic_reference,
    dangling_symbol,
    bad_root,
    length_mismatch,
    too_large,
    out_of_range,
    empty_input,
    parse_error,
    unknown_symbol,
    io,
    param_error,
    not_perfect_square,
    too_small,
    empty_set,
    unsampled_position,
    cursor_exhausted,
    checksum,
    format,
};

inline const char* errc_name(errc c) {
    switch (c) {
    case errc::cyclic_reference: return "CyclicReference";
    case errc::dangling_symbol: return "DanglingSymbol";
    case errc::bad_root: return "BadRoot";
    case errc::length_mismatch: return "LengthMismatch";
    case errc::too_large: return "TooLarge";
    case errc::out_of_range: return "OutOfRange";
    case errc::empty_input: return "EmptyInput";
    case errc::parse_error: return "ParseError";
    case errc::unknown_symbol: return "UnknownSymbol";
    case errc::io: return "Io";
    case errc::param_error: return "ParamError";
    case errc::not_perfect_square: return "NotPerfectSquare";
    case errc::too_small: return "TooSmall";
    case errc::empty_set: return "EmptySet";
    case errc::unsampled_position: return "UnsampledPosition";
    case errc::cursor_exhausted: return "CursorExhausted";
    case errc::checksum: return "ChecksumError";
    case errc::format: return "FormatError";
    }
    return "Unknown";
}

// Every failure in the library is reported through this type; code() is the
// stable part, what() carries a human-readable detail.
class error : public std::runtime_error {
public:
    error(errc code, const std::string& detail)
        : std::runtime_error(std::string(errc_name(code)) + ": " + detail), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

} // namespace glce

#endif
