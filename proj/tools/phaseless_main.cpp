// phaseless: reconstruct a real bandlimited signal (up to sign) from the
// absolute values of its samples.
//
// Exit codes: 0 success, 1 internal error, 2 parse error, 3 near-zero on the
// lifting line, 4 quadrature non-convergence, 5 invalid configuration,
// 6 I/O error.

#include <iostream>

#include <CLI11.hpp>

#include "cli_commands.hpp"

namespace
{
    using phaseless::cli::Command;
    using phaseless::cli::RunManifest;

    void add_common(CLI::App* sub, RunManifest& m)
    {
        sub->add_option("--M", m.M, "half the sample count (2M+1 samples)");
        sub->add_option("--s", m.s, "sampling rate");
        sub->add_option("--b", m.b, "bandwidth, type(f) <= pi b");
        sub->add_option("--c", m.c, "imaginary offset of the lifting line (default 0.1)");
        sub->add_option("--fine-factor", m.fine_factor, "output points per sample spacing")->capture_default_str();
        sub->add_option("--quad-tol", m.quad_tol, "G* quadrature tolerance")->capture_default_str();
        sub->add_option("--delta", m.delta, "assumed zero-free strip half-width (bound diagnostics)")
            ->capture_default_str();
        sub->add_option("--out", m.output_path, "output file (default stdout)");
        sub->add_option("--format", m.format, "output format");
    }
}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Sign-blind reconstruction of bandlimited signals from unsigned samples"};
    app.require_subcommand(1);

    RunManifest m;

    auto* rec = app.add_subcommand("reconstruct", "reconstruct from a sample file, write JSON");
    add_common(rec, m);
    rec->add_option("input", m.input_path, "sample file: header 'M=<M> s=<s>', then '<k> <magnitude>' lines")
        ->required();

    auto* bench = app.add_subcommand("benchmark", "error table over M for a preset signal");
    add_common(bench, m);
    bench->add_option("--preset", m.signal_preset, "bessel | multitone | sine")->required();
    bench->add_option("--seed", m.seed, "seed for multitone phases")->capture_default_str();
    bench->add_option("--Ms", m.Ms, "comma-separated list of M values")->delimiter(',');
    bench->add_flag("!--no-timing", m.timing, "write runtime_ms as 0 for byte-stable output");

    auto* demo = app.add_subcommand("demo-counterexample", "two signals with equal magnitudes at s = 2b");
    add_common(demo, m);

    auto* tab = app.add_subcommand("tabulate-kernel", "write the G* lookup table");
    add_common(tab, m);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : static_cast<int>(phaseless::ErrorCode::ParseError);
    }

    if (rec->parsed())
        m.command = Command::Reconstruct;
    else if (bench->parsed())
        m.command = Command::Benchmark;
    else if (demo->parsed())
        m.command = Command::DemoCounterexample;
    else
        m.command = Command::TabulateKernel;

    try
    {
        return phaseless::cli::run(m, std::cout);
    }
    catch (const phaseless::Error& e)
    {
        std::cerr << "error[" << phaseless::to_string(e.code()) << "]: " << e.what() << '\n';
        return e.exit_code();
    }
    catch (const std::exception& e)
    {
        std::cerr << "internal error: " << e.what() << '\n';
        return 1;
    }
}
