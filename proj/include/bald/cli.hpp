#pragma once

#include <cstdint>
#include <string>

namespace bald::cli {

// Each subcommand is a plain function over an options struct so the same
// entry points drive the binary, the tests, and scripted batch use. All of
// them throw the library error types; the binary maps those to exit codes.

struct DenoiseOpts {
    std::string input;
    std::string output;
    int t1 = 10;
    int t2 = 100;
    int patch = 8;
    int stride = 0;  // 0 -> patch / 2
    int threads = 0; // 0 -> hardware concurrency
    std::string curve_out;  // optional noise-curve CSV export
    std::string curve_in;   // optional noise-curve CSV to reuse (skips estimation)
};
void run_denoise(const DenoiseOpts& opts);

struct SimulateOpts {
    std::string spec = "default";  // phantom config path, or "default"
    std::string output;
    std::string noise = "none";    // none | rician | A | B | C | D
    double level = 0.05;           // rician sigma
    std::uint64_t seed = 0;
    std::string clean_out;         // optional noiseless copy
};
void run_simulate(const SimulateOpts& opts);

struct FitOpts {
    std::string input;
    std::string output;            // stack of per-pool amplitude maps
    std::string pools = "default"; // pool config path, or "default"
    int threads = 0;
};
void run_fit(const FitOpts& opts);

struct AptwOpts {
    std::string input;
    std::string output;
};
void run_aptw(const AptwOpts& opts);

struct EvalOpts {
    std::string reference;
    std::string test;
    std::string metrics_out;   // optional metrics CSV
    std::string rois;          // optional label-map container
    std::string roi_stats_out; // optional ROI stats CSV
    double peak = 0.0;         // 0 -> reference maximum
};
void run_eval(const EvalOpts& opts);

struct ImportOpts {
    std::string input;    // single-file .nii
    std::string offsets;  // ppm list (comma/newline separated)
    std::string output;
};
void run_import(const ImportOpts& opts);

}  // namespace bald::cli
