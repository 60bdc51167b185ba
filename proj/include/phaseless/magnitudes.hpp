#pragma once

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "phaseless/errors.hpp"
#include "phaseless/kernels.hpp"

namespace phaseless
{
    /// Unsigned samples a_k = |f(k/s)| for k in [-M, M].
    class MagnitudeSamples
    {
    public:
        MagnitudeSamples() = default;

        explicit MagnitudeSamples(std::vector<double> a) : a_(std::move(a))
        {
            if (a_.size() < 5 || a_.size() % 2 == 0)
                throw InvalidConfig("magnitudes: need 2M+1 samples with M >= 2");
            for (double v : a_)
                if (!std::isfinite(v) || v < 0.0)
                    throw InvalidConfig("magnitudes: entries must be finite and nonnegative");
        }

        int M() const noexcept { return static_cast<int>(a_.size() / 2); }
        std::size_t size() const noexcept { return a_.size(); }
        const std::vector<double>& values() const noexcept { return a_; }
        double operator[](int k) const noexcept { return a_[static_cast<std::size_t>(k + M())]; }

        bool operator==(const MagnitudeSamples&) const = default;

    private:
        std::vector<double> a_;
    };

    // Sample file:
    //   M=<M> s=<s>
    //   <k> <magnitude>      (2M+1 lines, ascending k from -M)

    struct SampleFile
    {
        MagnitudeSamples magnitudes;
        double s = 1.0;
    };

    inline void write_sample_file(std::ostream& out, const MagnitudeSamples& mags, double s)
    {
        out << "M=" << mags.M() << " s=" << format_shortest(s) << '\n';
        for (int k = -mags.M(); k <= mags.M(); ++k)
            out << k << ' ' << format_17g(mags[k]) << '\n';
    }

    inline SampleFile read_sample_file(std::istream& in)
    {
        std::string line;
        if (!std::getline(in, line))
            throw ParseError("sample file: missing header");

        int M = 0;
        double s = 0.0;
        {
            std::istringstream hs(line);
            std::string m_tok, s_tok, extra;
            if (!(hs >> m_tok >> s_tok) || (hs >> extra) || m_tok.rfind("M=", 0) != 0 || s_tok.rfind("s=", 0) != 0)
                throw ParseError("sample file: header must read 'M=<M> s=<s>'");
            try
            {
                std::size_t used = 0;
                M = std::stoi(m_tok.substr(2), &used);
                if (used != m_tok.size() - 2)
                    throw ParseError("");
                s = std::stod(s_tok.substr(2), &used);
                if (used != s_tok.size() - 2)
                    throw ParseError("");
            }
            catch (const std::exception&)
            {
                throw ParseError("sample file: malformed header '" + line + "'");
            }
        }
        if (M < 2)
            throw ParseError("sample file: M must be >= 2");
        if (!(s > 0.0) || !std::isfinite(s))
            throw ParseError("sample file: s must be positive");

        std::vector<double> a;
        a.reserve(static_cast<std::size_t>(2 * M + 1));
        int expected = -M;
        int line_no = 1;
        while (std::getline(in, line))
        {
            ++line_no;
            if (line.find_first_not_of(" \t\r") == std::string::npos)
                continue;
            std::istringstream ls(line);
            long k = 0;
            double v = 0.0;
            std::string extra;
            if (!(ls >> k))
                throw ParseError("sample file line " + std::to_string(line_no) + ": missing index");
            if (!(ls >> v))
                throw ParseError("sample file line " + std::to_string(line_no) + ": missing magnitude");
            if (ls >> extra)
                throw ParseError("sample file line " + std::to_string(line_no) + ": trailing data");
            if (k != expected)
                throw ParseError("sample file line " + std::to_string(line_no) + ": expected index " +
                                 std::to_string(expected));
            if (!std::isfinite(v) || v < 0.0)
                throw ParseError("sample file line " + std::to_string(line_no) + ": magnitude must be >= 0");
            a.push_back(v);
            ++expected;
            if (expected > M + 1)
                break;
        }
        if (expected != M + 1)
            throw ParseError("sample file: expected " + std::to_string(2 * M + 1) + " samples, found " +
                             std::to_string(a.size()));
        return {MagnitudeSamples(std::move(a)), s};
    }
}  // namespace phaseless
