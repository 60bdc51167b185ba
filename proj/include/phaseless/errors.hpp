#pragma once

#include <stdexcept>
#include <string>

namespace phaseless
{
    /// Failure categories. The numeric values double as CLI exit codes.
    enum class ErrorCode : int
    {
        ParseError = 2,
        NearZeroOnLine = 3,
        QuadratureNonConvergence = 4,
        InvalidConfig = 5,
        Io = 6,
    };

    inline const char* to_string(ErrorCode code) noexcept
    {
        switch (code)
        {
            case ErrorCode::ParseError: return "ParseError";
            case ErrorCode::NearZeroOnLine: return "NearZeroOnLine";
            case ErrorCode::QuadratureNonConvergence: return "QuadratureNonConvergence";
            case ErrorCode::InvalidConfig: return "InvalidConfig";
            case ErrorCode::Io: return "Io";
        }
        return "Unknown";
    }

    class Error : public std::runtime_error
    {
    public:
        Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

        ErrorCode code() const noexcept { return code_; }
        int exit_code() const noexcept { return static_cast<int>(code_); }

    private:
        ErrorCode code_;
    };

    struct ParseError : Error
    {
        explicit ParseError(const std::string& what) : Error(ErrorCode::ParseError, what) {}
    };

    /// g_M came too close to zero on the line Im = c; retry with another offset.
    struct NearZeroOnLine : Error
    {
        explicit NearZeroOnLine(const std::string& what) : Error(ErrorCode::NearZeroOnLine, what) {}
    };

    struct QuadratureNonConvergence : Error
    {
        explicit QuadratureNonConvergence(const std::string& what)
            : Error(ErrorCode::QuadratureNonConvergence, what)
        {
        }
    };

    /// Bad parameters, including a sampling rate at or below twice the bandwidth.
    struct InvalidConfig : Error
    {
        explicit InvalidConfig(const std::string& what) : Error(ErrorCode::InvalidConfig, what) {}
    };

    struct InvalidRate : InvalidConfig
    {
        explicit InvalidRate(const std::string& what) : InvalidConfig(what) {}
    };

    struct DomainMismatch : InvalidConfig
    {
        explicit DomainMismatch(const std::string& what) : InvalidConfig(what) {}
    };

    struct EmptySpec : InvalidConfig
    {
        explicit EmptySpec(const std::string& what) : InvalidConfig(what) {}
    };

    struct IoError : Error
    {
        explicit IoError(const std::string& what) : Error(ErrorCode::Io, what) {}
    };
}  // namespace phaseless
