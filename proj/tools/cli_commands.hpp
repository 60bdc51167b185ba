#pragma once

// Subcommand implementations for the `phaseless` tool. Each command writes to
// the given stream (or to manifest.output_path) and throws phaseless::Error on
// failure; main() maps error codes to exit statuses.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "phaseless/phaseless.hpp"

namespace phaseless::cli
{
    enum class Command
    {
        Reconstruct,
        Benchmark,
        DemoCounterexample,
        TabulateKernel,
    };

    /// Parsed invocation. Optional fields fall back to file headers or preset defaults.
    struct RunManifest
    {
        Command command = Command::Reconstruct;
        std::optional<int> M;
        std::optional<double> s;
        std::optional<double> b;
        std::optional<double> c;
        int fine_factor = 8;
        double quad_tol = 1e-12;
        double delta = 0.1;
        std::string input_path;
        std::string output_path;  ///< empty: write to the provided stream
        std::optional<std::string> signal_preset;
        std::uint64_t seed = 1;
        std::string format;  ///< "" means the command's default
        std::vector<int> Ms = {10, 20, 30, 40, 50};
        bool timing = true;
    };

    namespace detail
    {
        // Writes to output_path when set, otherwise to `fallback`.
        class Sink
        {
        public:
            Sink(const std::string& path, std::ostream& fallback) : out_(&fallback)
            {
                if (!path.empty())
                {
                    file_.open(path, std::ios::binary | std::ios::trunc);
                    if (!file_)
                        throw IoError("cannot open output file '" + path + "'");
                    out_ = &file_;
                }
            }
            std::ostream& stream() { return *out_; }

        private:
            std::ofstream file_;
            std::ostream* out_;
        };

        inline nlohmann::json diagnostics_json(const Diagnostics& d)
        {
            nlohmann::json j;
            j["min_abs_g"] = d.min_abs_g;
            j["max_abs_g"] = d.max_abs_g;
            j["imag_residue"] = d.imag_residue;
            j["imag_residue_edge"] = d.imag_residue_edge;
            j["predicted_rate"] = d.predicted_rate;
            j["predicted_offset"] = d.predicted_offset;
            j["predicted_bound"] = d.predicted_bound;
            j["fitted_decay_rate"] = d.fitted_decay_rate ? nlohmann::json(*d.fitted_decay_rate) : nlohmann::json();
            j["warnings"] = d.warnings;
            return j;
        }

        inline std::string fmt(const char* spec, double v)
        {
            char buf[64];
            std::snprintf(buf, sizeof buf, spec, v);
            return buf;
        }
    }  // namespace detail

    inline nlohmann::json result_json(const ReconstructionResult& r, const ReconstructionConfig& cfg)
    {
        nlohmann::json j;
        j["config"] = {{"M", cfg.M},
                       {"s", cfg.s},
                       {"b", cfg.b},
                       {"c", cfg.c},
                       {"fine_factor", cfg.fine_factor},
                       {"quad_tol", cfg.quad_tol}};
        j["grid"] = r.grid;
        j["values"] = r.values;
        j["sign_resolved"] = r.sign_resolved;
        j["eta_hint"] = r.eta_hint ? nlohmann::json(*r.eta_hint) : nlohmann::json();
        j["diagnostics"] = detail::diagnostics_json(r.diagnostics);
        return j;
    }

    inline ReconstructionConfig config_from(const RunManifest& m, int M, double s, double b, double c)
    {
        ReconstructionConfig cfg;
        cfg.M = M;
        cfg.s = s;
        cfg.b = b;
        cfg.c = c;
        cfg.fine_factor = m.fine_factor;
        cfg.quad_tol = m.quad_tol;
        cfg.delta = m.delta;
        return cfg;
    }

    /// Reads a sample file, reconstructs, and writes the JSON result.
    inline int cmd_reconstruct(const RunManifest& m, std::ostream& out)
    {
        if (m.input_path.empty())
            throw InvalidConfig("reconstruct requires an input sample file");
        std::ifstream in(m.input_path);
        if (!in)
            throw IoError("cannot open input file '" + m.input_path + "'");
        const SampleFile file = read_sample_file(in);

        if (m.M && *m.M != file.magnitudes.M())
            throw InvalidConfig("--M " + std::to_string(*m.M) + " disagrees with the file header M=" +
                                std::to_string(file.magnitudes.M()));
        if (m.s && *m.s != file.s)
            throw InvalidConfig("--s disagrees with the file header");

        const ReconstructionConfig cfg =
            config_from(m, file.magnitudes.M(), file.s, m.b.value_or(0.0), m.c.value_or(0.1));
        const ReconstructionResult result = reconstruct(cfg, file.magnitudes);

        detail::Sink sink(m.output_path, out);
        sink.stream() << result_json(result, cfg).dump() << '\n';
        return 0;
    }

    struct Preset
    {
        TestSignal signal;
        double s;
        double c;
    };

    inline Preset make_preset(const std::string& name, std::uint64_t seed)
    {
        if (name == "bessel")
            return {bessel_j1_shifted(20.0), 1.0, 0.1};
        if (name == "multitone")
            return {multitone_preset(seed), 1.0, 0.04};
        if (name == "sine")
            return {shifted_sine(), 4.0, 0.1};
        throw InvalidConfig("unknown preset '" + name + "' (expected bessel, multitone or sine)");
    }

    struct BenchmarkRow
    {
        int M = 0;
        bool ok = false;
        double error = 0.0;
        int eta = 1;
        double predicted_rate = 0.0;
        double runtime_ms = 0.0;
        std::string failure;
    };

    inline std::vector<BenchmarkRow> run_benchmark(const RunManifest& m)
    {
        if (!m.signal_preset)
            throw InvalidConfig("benchmark requires --preset");
        const Preset preset = make_preset(*m.signal_preset, m.seed);
        const double s = m.s.value_or(preset.s);
        const double b = m.b.value_or(preset.signal.b);
        const double c = m.c.value_or(preset.c);

        std::vector<int> Ms = m.Ms;
        std::sort(Ms.begin(), Ms.end());
        Ms.erase(std::unique(Ms.begin(), Ms.end()), Ms.end());

        std::vector<BenchmarkRow> rows;
        for (int M : Ms)
        {
            BenchmarkRow row;
            row.M = M;
            const auto start = std::chrono::steady_clock::now();
            try
            {
                const ReconstructionConfig cfg = config_from(m, M, s, b, c);
                cfg.validate();
                row.predicted_rate = main_rate_bound(cfg.bound_inputs()).rate;
                const ReconstructionResult result = reconstruct(cfg, sample_magnitudes(preset.signal, s, M));
                const SignedError err = worst_case_error(result, preset.signal.eval, ErrorDomain::for_reconstruction(M));
                row.ok = true;
                row.error = err.error;
                row.eta = err.eta;
            }
            catch (const Error& e)
            {
                row.failure = to_string(e.code());
            }
            if (m.timing)
                row.runtime_ms =
                    std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
            rows.push_back(row);
        }
        return rows;
    }

    /// Error table over M: CSV "M,error,predicted_rate,runtime_ms" (or JSON).
    /// A failing row is reported as FAILED:<code> and the run continues.
    inline int cmd_benchmark(const RunManifest& m, std::ostream& out)
    {
        const auto rows = run_benchmark(m);
        detail::Sink sink(m.output_path, out);
        std::ostream& os = sink.stream();
        if (m.format == "json")
        {
            nlohmann::json j = nlohmann::json::array();
            for (const auto& r : rows)
            {
                nlohmann::json row = {{"M", r.M}, {"predicted_rate", r.predicted_rate}, {"runtime_ms", r.runtime_ms}};
                if (r.ok)
                {
                    row["error"] = r.error;
                    row["eta"] = r.eta;
                }
                else
                {
                    row["error"] = nullptr;
                    row["failure"] = r.failure;
                }
                j.push_back(row);
            }
            os << nlohmann::json{{"preset", *m.signal_preset}, {"rows", j}}.dump(2) << '\n';
            return 0;
        }
        if (!m.format.empty() && m.format != "csv")
            throw InvalidConfig("benchmark --format must be csv or json");
        os << "M,error,predicted_rate,runtime_ms\n";
        for (const auto& r : rows)
        {
            os << r.M << ',' << (r.ok ? detail::fmt("%.6e", r.error) : "FAILED:" + r.failure) << ','
               << detail::fmt("%.6f", r.predicted_rate) << ',' << detail::fmt("%.3f", r.runtime_ms) << '\n';
        }
        return 0;
    }

    struct CounterexampleReport
    {
        double sampling_rate = 2.0;
        double critical_rate = 2.0;  ///< 2b with b = 1
        double bandwidth = 1.0;
        int samples = 0;
        double magnitude_discrepancy = 0.0;  ///< max | |f1(k/2)| - |f2(k/2)| |, |k| <= 100
        double function_gap = 0.0;           ///< sup over [-10, 10] of |f1 - f2|
    };

    inline CounterexampleReport counterexample_report()
    {
        const auto [f1, f2] = counterexample_pair();
        CounterexampleReport rep;
        rep.bandwidth = f1.b;
        rep.critical_rate = 2.0 * f1.b;
        rep.sampling_rate = 2.0;
        for (int k = -100; k <= 100; ++k)
        {
            const double x = k / rep.sampling_rate;
            rep.magnitude_discrepancy = std::max(rep.magnitude_discrepancy, std::abs(std::abs(f1(x)) - std::abs(f2(x))));
            ++rep.samples;
        }
        for (int i = -20000; i <= 20000; ++i)
        {
            const double x = i * 5e-4;
            rep.function_gap = std::max(rep.function_gap, std::abs(f1(x) - f2(x)));
        }
        return rep;
    }

    /// Prints the magnitude agreement and function gap of the critical-rate pair.
    inline int cmd_demo_counterexample(const RunManifest& m, std::ostream& out)
    {
        const CounterexampleReport rep = counterexample_report();
        detail::Sink sink(m.output_path, out);
        std::ostream& os = sink.stream();
        if (m.format == "json")
        {
            nlohmann::json j = {{"signals", {"sin(pi (x + 1/4))", "cos(pi (x + 1/4))"}},
                                {"bandwidth", rep.bandwidth},
                                {"sampling_rate", rep.sampling_rate},
                                {"critical_rate", rep.critical_rate},
                                {"samples", rep.samples},
                                {"magnitude_discrepancy", rep.magnitude_discrepancy},
                                {"function_gap", rep.function_gap}};
            os << j.dump(2) << '\n';
            return 0;
        }
        if (!m.format.empty() && m.format != "text")
            throw InvalidConfig("demo-counterexample --format must be text or json");
        os << "f1(x) = sin(pi (x + 1/4)), f2(x) = cos(pi (x + 1/4)), bandwidth b = "
           << format_shortest(rep.bandwidth) << '\n'
           << "sampling rate s = " << format_shortest(rep.sampling_rate)
           << ", threshold 2b = " << format_shortest(rep.critical_rate) << '\n'
           << "max ||f1(k/2)| - |f2(k/2)|| over " << rep.samples
           << " samples: " << detail::fmt("%.3e", rep.magnitude_discrepancy) << '\n'
           << "sup |f1 - f2| on [-10, 10]: " << detail::fmt("%.6f", rep.function_gap) << '\n'
           << "identical magnitudes, different functions: unsigned samples at s = 2b do not determine f\n";
        return 0;
    }

    /// Writes the G* table for --M in the cache file format.
    inline int cmd_tabulate_kernel(const RunManifest& m, std::ostream& out)
    {
        if (!m.M)
            throw InvalidConfig("tabulate-kernel requires --M");
        const GStarTable table = tabulate_G_star(*m.M, m.quad_tol);
        detail::Sink sink(m.output_path, out);
        write_G_star_table(sink.stream(), table);
        return 0;
    }

    inline int run(const RunManifest& m, std::ostream& out)
    {
        switch (m.command)
        {
            case Command::Reconstruct: return cmd_reconstruct(m, out);
            case Command::Benchmark: return cmd_benchmark(m, out);
            case Command::DemoCounterexample: return cmd_demo_counterexample(m, out);
            case Command::TabulateKernel: return cmd_tabulate_kernel(m, out);
        }
        return 1;
    }
}  // namespace phaseless::cli
