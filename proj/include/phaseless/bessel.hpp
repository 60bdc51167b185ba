#pragma once

// Bessel functions of the first kind, integer order. Ascending series for
// |x| <= 12, Miller's backward recurrence normalized by
// J_0 + 2 sum_k J_{2k} = 1 elsewhere. Both run in long double; the target is
// 1e-12 absolute on [-120, 120].

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace phaseless
{
    namespace detail
    {
        inline long double bessel_j_series(int n, long double x)
        {
            const long double half = x / 2.0L;
            const long double half_sq = half * half;
            long double term = 1.0L;
            for (int i = 1; i <= n; ++i)
                term *= half / i;  // (x/2)^n / n!
            long double sum = term;
            for (int k = 1; k < 200; ++k)
            {
                term *= -half_sq / (static_cast<long double>(k) * (k + n));
                sum += term;
                if (std::fabs(term) < 1e-24L * std::fabs(sum) && k > 4)
                    break;
            }
            return sum;
        }

        inline long double bessel_j_miller(int n, long double x)
        {
            const long double ax = std::fabs(x);
            int start = static_cast<int>(1.2L * std::max<long double>(n, ax)) + 40;
            start += start % 2;

            long double next = 0.0L;  // j_{k+1}
            long double cur = 1e-300L;  // j_k
            long double norm = 0.0L;
            long double wanted = 0.0L;
            for (int k = start; k > 0; --k)
            {
                const long double prev = (2.0L * k / ax) * cur - next;  // j_{k-1}
                next = cur;
                cur = prev;
                if (k - 1 == n)
                    wanted = cur;
                if ((k - 1) % 2 == 0 && k - 1 > 0)
                    norm += 2.0L * cur;
                if (std::fabs(cur) > 1e300L)
                {
                    cur *= 1e-300L;
                    next *= 1e-300L;
                    norm *= 1e-300L;
                    wanted *= 1e-300L;
                }
            }
            norm += cur;  // j_0
            return wanted / norm;
        }
    }  // namespace detail

    /// J_n(x) for integer n >= 0.
    inline double bessel_j(int n, double x)
    {
        if (n < 0)
            throw std::domain_error("bessel_j: order must be nonnegative");
        if (x == 0.0)
            return n == 0 ? 1.0 : 0.0;
        const double sign = (x < 0.0 && n % 2 == 1) ? -1.0 : 1.0;
        const long double ax = std::fabs(static_cast<long double>(x));
        const long double v = ax <= 12.0L ? detail::bessel_j_series(n, ax) : detail::bessel_j_miller(n, ax);
        return sign * static_cast<double>(v);
    }

    inline double bessel_j0(double x) { return bessel_j(0, x); }
    inline double bessel_j1(double x) { return bessel_j(1, x); }
}  // namespace phaseless
