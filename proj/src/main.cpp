#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "bald/cli.hpp"
#include "bald/errors.hpp"

#ifndef BALD_VERSION
#define BALD_VERSION "0.0.0"
#endif

int main(int argc, char** argv) {
    using namespace bald;

    CLI::App app{"bald: blind adaptive denoising for multi-offset spectral sequences"};
    app.set_version_flag("--version", BALD_VERSION);
    app.require_subcommand(1);

    cli::DenoiseOpts den;
    auto* cmd_denoise = app.add_subcommand("denoise", "Estimate noise and denoise a sequence");
    cmd_denoise->add_option("input", den.input, "input container")->required();
    cmd_denoise->add_option("output", den.output, "output container")->required();
    cmd_denoise->add_option("--t1", den.t1, "intensity bins for noise estimation");
    cmd_denoise->add_option("--t2", den.t2, "knots in the resampled noise curve");
    cmd_denoise->add_option("--patch", den.patch, "patch size in pixels");
    cmd_denoise->add_option("--stride", den.stride, "patch stride (default patch/2)");
    cmd_denoise->add_option("--threads", den.threads, "worker threads (0 = auto)");
    cmd_denoise->add_option("--curve-out", den.curve_out, "write the noise curve CSV here");
    cmd_denoise->add_option("--curve-in", den.curve_in,
                            "reuse a noise curve CSV instead of estimating");

    cli::SimulateOpts sim;
    auto* cmd_simulate = app.add_subcommand("simulate", "Generate a synthetic phantom");
    cmd_simulate->add_option("spec", sim.spec, "phantom config path, or 'default'")
        ->required();
    cmd_simulate->add_option("output", sim.output, "output container")->required();
    cmd_simulate->add_option("--noise", sim.noise, "none, rician, or a model id A-D");
    cmd_simulate->add_option("--level", sim.level, "rician sigma");
    cmd_simulate->add_option("--seed", sim.seed, "random seed");
    cmd_simulate->add_option("--clean-out", sim.clean_out, "also write the noiseless copy");

    cli::FitOpts fit;
    auto* cmd_fit = app.add_subcommand("fit", "Per-pixel multi-pool spectral fit");
    cmd_fit->add_option("input", fit.input, "input container")->required();
    cmd_fit->add_option("output", fit.output, "output amplitude-map container")->required();
    cmd_fit->add_option("--pools", fit.pools, "pool config path, or 'default'");
    cmd_fit->add_option("--threads", fit.threads, "worker threads (0 = auto)");

    cli::AptwOpts aptw;
    auto* cmd_aptw = app.add_subcommand("aptw", "Asymmetry-weighted contrast map");
    cmd_aptw->add_option("input", aptw.input, "input container")->required();
    cmd_aptw->add_option("output", aptw.output, "output map container")->required();

    cli::EvalOpts ev;
    auto* cmd_eval = app.add_subcommand("eval", "Compare a test container to a reference");
    cmd_eval->add_option("reference", ev.reference, "reference container")->required();
    cmd_eval->add_option("test", ev.test, "test container")->required();
    cmd_eval->add_option("--metrics-out", ev.metrics_out, "write metrics CSV here");
    cmd_eval->add_option("--peak", ev.peak, "PSNR peak (default: reference maximum)");
    cmd_eval->add_option("--rois", ev.rois, "label-map container for ROI summaries");
    cmd_eval->add_option("--roi-stats-out", ev.roi_stats_out, "write ROI stats CSV here");

    cli::ImportOpts imp;
    auto* cmd_import =
        app.add_subcommand("import-nifti", "Convert a single-file .nii volume");
    cmd_import->add_option("input", imp.input, "input .nii file")->required();
    cmd_import->add_option("offsets", imp.offsets, "ppm offsets file (CSV)")->required();
    cmd_import->add_option("output", imp.output, "output container")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_validation;
    }

    try {
        if (cmd_denoise->parsed()) cli::run_denoise(den);
        if (cmd_simulate->parsed()) cli::run_simulate(sim);
        if (cmd_fit->parsed()) cli::run_fit(fit);
        if (cmd_aptw->parsed()) cli::run_aptw(aptw);
        if (cmd_eval->parsed()) cli::run_eval(ev);
        if (cmd_import->parsed()) cli::run_import(imp);
        return exit_ok;
    } catch (const ConfigError& e) {
        std::cerr << "error (validation): " << e.what() << "\n";
        return exit_validation;
    } catch (const IoError& e) {
        std::cerr << "error (i/o): " << e.what() << "\n";
        return exit_io;
    } catch (const DataError& e) {
        std::cerr << "error (data): " << e.what() << "\n";
        return exit_data;
    } catch (const EstimationError& e) {
        std::cerr << "error (estimation): " << e.what() << "\n";
        return exit_estimation;
    } catch (const std::exception& e) {
        std::cerr << "error (internal): " << e.what() << "\n";
        return exit_internal;
    }
}
