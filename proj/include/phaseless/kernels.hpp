#pragma once

// Sinc-Gaussian kernel family used by every stage of the reconstruction:
//
//   G(z, M)  = sin(pi z) / (pi z) * exp(-pi z^2 / (2M))
//   G'(z, M) = dG/dz
//   G*(m, M) = (1/M) * integral_{m-M}^{m} G(t, M) dt
//
// G* has no closed form; it is tabulated once per (M, tol) on the integers
// [-M, 2M], which is exactly the argument range the phase-increment step reads.

#include <charconv>
#include <cmath>
#include <complex>
#include <cstdio>
#include <istream>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "phaseless/errors.hpp"
#include "phaseless/quadrature.hpp"

namespace phaseless
{
    using cplx = std::complex<double>;

    namespace detail
    {
        // sin(pi x) and cos(pi x) with exact zeros at integers and half-integers.
        inline double sin_pi(double x) noexcept
        {
            double r = x - 2.0 * std::nearbyint(0.5 * x);  // r in [-1, 1], exact
            double sign = 1.0;
            if (r < 0.0)
            {
                r = -r;
                sign = -1.0;
            }
            if (r > 0.5)
                r = 1.0 - r;
            if (r == 0.0)
                return 0.0;
            if (r == 0.5)
                return sign;
            return sign * std::sin(std::numbers::pi * r);
        }

        inline double cos_pi(double x) noexcept
        {
            const double r = std::abs(x - 2.0 * std::nearbyint(0.5 * x));  // [0, 1]
            if (r == 0.5)
                return 0.0;
            if (r == 0.0)
                return 1.0;
            if (r == 1.0)
                return -1.0;
            return sin_pi(0.5 - r);
        }

        inline cplx sin_pi(cplx z) noexcept
        {
            const double y = std::numbers::pi * z.imag();
            return {sin_pi(z.real()) * std::cosh(y), cos_pi(z.real()) * std::sinh(y)};
        }

        inline cplx cos_pi(cplx z) noexcept
        {
            const double y = std::numbers::pi * z.imag();
            return {cos_pi(z.real()) * std::cosh(y), -sin_pi(z.real()) * std::sinh(y)};
        }

        inline cplx gaussian_window(cplx z, int M) noexcept
        {
            return std::exp(-std::numbers::pi / (2.0 * M) * z * z);
        }

        constexpr double kSincSeriesRadius = 1e-6;
        constexpr double kSincDerivSeriesRadius = 0.25;

        // d/dz [sin(pi z)/(pi z)] as a Taylor series; |pi z| <= pi/4 converges fast.
        inline cplx sinc_deriv_series(cplx z) noexcept
        {
            const double pi = std::numbers::pi;
            const cplx w2 = (pi * z) * (pi * z);
            // term_j = (-1)^j 2j pi^{2j} z^{2j-1} / (2j+1)!
            cplx power = pi * pi * z;  // pi^{2j} z^{2j-1} at j = 1
            double factorial = 6.0;     // (2j+1)! at j = 1
            cplx sum = 0.0;
            for (int j = 1; j <= 14; ++j)
            {
                const double sign = (j % 2 == 1) ? -1.0 : 1.0;
                sum += sign * (2.0 * j) * power / factorial;
                power *= w2;
                factorial *= (2.0 * j + 2.0) * (2.0 * j + 3.0);
            }
            return sum;
        }
    }  // namespace detail

    /// The regularized sinc kernel G(z, M). Even in z, G(0) = 1, and G vanishes
    /// exactly at nonzero integers.
    inline cplx eval_G(cplx z, int M) noexcept
    {
        const double pi = std::numbers::pi;
        cplx sinc;
        if (std::abs(z) < detail::kSincSeriesRadius)
        {
            const cplx w2 = (pi * z) * (pi * z);
            sinc = 1.0 - w2 / 6.0 + w2 * w2 / 120.0;
        }
        else
        {
            sinc = detail::sin_pi(z) / (pi * z);
        }
        return sinc * detail::gaussian_window(z, M);
    }

    inline double eval_G(double x, int M) noexcept
    {
        const double pi = std::numbers::pi;
        double sinc;
        if (std::abs(x) < detail::kSincSeriesRadius)
        {
            const double w2 = (pi * x) * (pi * x);
            sinc = 1.0 - w2 / 6.0 + w2 * w2 / 120.0;
        }
        else
        {
            sinc = detail::sin_pi(x) / (pi * x);
        }
        return sinc * std::exp(-pi / (2.0 * M) * x * x);
    }

    /// Analytic derivative dG/dz:
    ///   [cos(pi z)/z - sin(pi z)/(pi z^2) - sin(pi z)/M] * exp(-pi z^2 / (2M)).
    /// The first two terms cancel near the origin, so a Taylor series is used
    /// for |z| < 1/4.
    inline cplx eval_G_deriv(cplx z, int M) noexcept
    {
        const double pi = std::numbers::pi;
        cplx bracket;
        if (std::abs(z) < detail::kSincDerivSeriesRadius)
        {
            bracket = detail::sinc_deriv_series(z) - detail::sin_pi(z) / static_cast<double>(M);
        }
        else
        {
            const cplx s = detail::sin_pi(z);
            bracket = detail::cos_pi(z) / z - s / (pi * z * z) - s / static_cast<double>(M);
        }
        return bracket * detail::gaussian_window(z, M);
    }

    /// G*(m, M) on the integers m in [-M, 2M].
    class GStarTable
    {
    public:
        GStarTable(int M, double quad_tol, std::vector<double> values)
            : M_(M), quad_tol_(quad_tol), values_(std::move(values))
        {
            if (M_ < 2)
                throw InvalidConfig("G* table requires M >= 2");
            if (values_.size() != static_cast<std::size_t>(3 * M_ + 1))
                throw InvalidConfig("G* table must hold 3M+1 entries");
        }

        int M() const noexcept { return M_; }
        double quad_tol() const noexcept { return quad_tol_; }
        int min_arg() const noexcept { return -M_; }
        int max_arg() const noexcept { return 2 * M_; }
        const std::vector<double>& values() const noexcept { return values_; }

        double operator[](int m) const noexcept { return values_[static_cast<std::size_t>(m + M_)]; }

        double at(int m) const
        {
            if (m < min_arg() || m > max_arg())
                throw std::out_of_range("G* argument " + std::to_string(m) + " outside [-M, 2M]");
            return (*this)[m];
        }

        bool operator==(const GStarTable&) const = default;

    private:
        int M_;
        double quad_tol_;
        std::vector<double> values_;
    };

    /// Tabulates G*(m, M) for m in [-M, 2M]; each entry is one adaptive
    /// quadrature over [m - M, m] with absolute tolerance `tol` (after the 1/M
    /// scaling).
    inline GStarTable tabulate_G_star(int M, double tol = 1e-12, int max_depth = 40)
    {
        if (M < 2)
            throw InvalidConfig("tabulate_G_star: M must be >= 2");
        if (!(tol > 0.0))
            throw InvalidConfig("tabulate_G_star: tolerance must be positive");

        const quadrature::AdaptiveOptions opts{tol * M, max_depth};
        const auto integrand = [M](double t) { return eval_G(t, M); };

        std::vector<double> values;
        values.reserve(static_cast<std::size_t>(3 * M + 1));
        for (int m = -M; m <= 2 * M; ++m)
        {
            const auto r = quadrature::integrate(integrand, static_cast<double>(m - M),
                                                 static_cast<double>(m), opts);
            values.push_back(r.value / M);
        }
        return GStarTable(M, tol, std::move(values));
    }

    /// Process-wide cache of G* tables keyed by (M, tol). Tables are immutable
    /// and shared.
    inline std::shared_ptr<const GStarTable> cached_G_star(int M, double tol = 1e-12)
    {
        static std::mutex mutex;
        static std::map<std::pair<int, double>, std::shared_ptr<const GStarTable>> cache;

        const auto key = std::make_pair(M, tol);
        {
            std::lock_guard lock(mutex);
            if (auto it = cache.find(key); it != cache.end())
                return it->second;
        }
        auto table = std::make_shared<const GStarTable>(tabulate_G_star(M, tol));
        std::lock_guard lock(mutex);
        return cache.emplace(key, std::move(table)).first->second;
    }

    // --- on-disk cache format ---------------------------------------------
    //
    //   M=<M> tol=<tol>
    //   <m>\t<value>        (3M+1 lines, ascending m, %.17g)

    inline std::string format_shortest(double v)
    {
        char buf[64];
        const auto res = std::to_chars(buf, buf + sizeof buf, v);
        return std::string(buf, res.ptr);
    }

    inline std::string format_17g(double v)
    {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return buf;
    }

    inline void write_G_star_table(std::ostream& out, const GStarTable& table)
    {
        out << "M=" << table.M() << " tol=" << format_shortest(table.quad_tol()) << '\n';
        for (int m = table.min_arg(); m <= table.max_arg(); ++m)
            out << m << '\t' << format_17g(table[m]) << '\n';
    }

    inline GStarTable read_G_star_table(std::istream& in)
    {
        std::string header;
        if (!std::getline(in, header))
            throw ParseError("G* table: missing header");

        int M = 0;
        double tol = 0.0;
        {
            std::istringstream hs(header);
            std::string m_tok, tol_tok;
            if (!(hs >> m_tok >> tol_tok) || m_tok.rfind("M=", 0) != 0 || tol_tok.rfind("tol=", 0) != 0)
                throw ParseError("G* table: header must read 'M=<M> tol=<tol>'");
            try
            {
                M = std::stoi(m_tok.substr(2));
                tol = std::stod(tol_tok.substr(4));
            }
            catch (const std::exception&)
            {
                throw ParseError("G* table: malformed header values");
            }
        }
        if (M < 2)
            throw ParseError("G* table: M must be >= 2");

        std::vector<double> values;
        values.reserve(static_cast<std::size_t>(3 * M + 1));
        std::string line;
        int expected = -M;
        while (std::getline(in, line))
        {
            if (line.empty())
                continue;
            std::istringstream ls(line);
            int m = 0;
            double v = 0.0;
            if (!(ls >> m >> v))
                throw ParseError("G* table: malformed line '" + line + "'");
            if (m != expected)
                throw ParseError("G* table: expected argument " + std::to_string(expected) + ", got " +
                                 std::to_string(m));
            values.push_back(v);
            ++expected;
        }
        if (expected != 2 * M + 1)
            throw ParseError("G* table: expected " + std::to_string(3 * M + 1) + " entries");
        return GStarTable(M, tol, std::move(values));
    }
}  // namespace phaseless
