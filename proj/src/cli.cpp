#include "bald/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "bald/analysis.hpp"
#include "bald/container.hpp"
#include "bald/errors.hpp"
#include "bald/eval.hpp"
#include "bald/nifti.hpp"
#include "bald/phantom.hpp"
#include "bald/pipeline.hpp"

#ifndef BALD_VERSION
#define BALD_VERSION "0.0.0"
#endif

namespace bald::cli {

namespace {

using nlohmann::json;

// Provenance records basenames, not full paths, so identical runs into
// different directories stay byte-identical.
std::string base_name(const std::string& path) {
    return std::filesystem::path(path).filename().string();
}

json provenance_base(const std::string& command) {
    json prov;
    prov["command"] = command;
    prov["tool_version"] = BALD_VERSION;
    return prov;
}

std::vector<PoolSpec> load_pools(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for reading: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed pool config: ") + e.what());
    }
    if (!doc.is_array() || doc.empty())
        throw ConfigError("pool config must be a non-empty array of pool objects: " + path);

    std::vector<PoolSpec> pools;
    std::set<std::string> seen;
    try {
        for (const auto& item : doc) {
            PoolSpec p;
            p.name = item.at("name").get<std::string>();
            p.center = item.value("center", p.center);
            p.center_tol = item.value("center_tol", p.center_tol);
            p.amp_lo = item.value("amp_lo", p.amp_lo);
            p.amp_hi = item.value("amp_hi", p.amp_hi);
            p.width_lo = item.value("width_lo", p.width_lo);
            p.width_hi = item.value("width_hi", p.width_hi);
            p.amp_init = item.value("amp_init", p.amp_init);
            p.width_init = item.value("width_init", p.width_init);
            if (!seen.insert(p.name).second)
                throw ConfigError("duplicate pool name '" + p.name + "' in " + path);
            pools.push_back(std::move(p));
        }
    } catch (const json::exception& e) {
        throw DataError(std::string("invalid pool config: ") + e.what());
    }
    return pools;
}

}  // namespace

void run_denoise(const DenoiseOpts& opts) {
    const ContainerData data = read_container(opts.input);
    const SpectralSequence seq = sequence_from_container(data);

    BaldParams params;
    params.t1 = opts.t1;
    params.t2 = opts.t2;
    params.patch_size = opts.patch;
    params.stride = opts.stride > 0 ? opts.stride : -1;
    params.threads = opts.threads;

    NoiseCurve imported;
    const NoiseCurve* curve_override = nullptr;
    if (!opts.curve_in.empty()) {
        imported = read_noise_curve_csv(opts.curve_in);
        curve_override = &imported;
    }

    const BaldResult res = bald(seq, params, curve_override);

    json prov = provenance_base("denoise");
    prov["input"] = base_name(opts.input);
    prov["t1"] = opts.t1;
    prov["t2"] = opts.t2;
    prov["patch"] = opts.patch;
    prov["stride"] = opts.stride > 0 ? opts.stride : std::max(1, opts.patch / 2);
    prov["threads"] = opts.threads;
    prov["noise_curve"] =
        opts.curve_in.empty() ? std::string("estimated") : base_name(opts.curve_in);
    prov["sigma_target"] = res.sigma_target;
    write_container(opts.output, to_container(res.denoised, std::move(prov)));

    if (!opts.curve_out.empty()) write_noise_curve_csv(opts.curve_out, res.curve);
    std::cout << "denoised " << base_name(opts.input) << " -> " << base_name(opts.output)
              << " (sigma target " << format_double(res.sigma_target) << ")\n";
}

void run_simulate(const SimulateOpts& opts) {
    const bool default_spec = opts.spec.empty() || opts.spec == "default";
    const PhantomSpec spec = default_spec ? PhantomSpec{} : load_phantom_spec(opts.spec);
    const SpectralSequence clean = generate_phantom(spec);

    json prov = provenance_base("simulate");
    prov["spec"] = default_spec ? std::string("default") : base_name(opts.spec);
    prov["seed"] = opts.seed;

    if (!opts.clean_out.empty()) {
        json clean_prov = prov;
        clean_prov["noise"] = "none";
        write_container(opts.clean_out, to_container(clean, std::move(clean_prov)));
    }

    prov["noise"] = opts.noise;
    SpectralSequence out = clean.like();
    if (opts.noise == "none") {
        out = clean;
    } else if (opts.noise == "rician") {
        if (!(opts.level > 0.0))
            throw ConfigError("rician noise needs a positive --level");
        prov["level"] = opts.level;
        out = add_rician_noise(clean, opts.level, opts.seed);
    } else if (opts.noise.size() == 1) {
        out = add_model_noise(clean, opts.noise[0], opts.seed);
    } else {
        throw ConfigError("unknown noise kind '" + opts.noise +
                          "' (expected none, rician, or a model id A-D)");
    }

    write_container(opts.output, to_container(out, std::move(prov)));
    std::cout << "simulated " << spec.width << "x" << spec.height << "x"
              << clean.n_offsets() << " phantom -> " << base_name(opts.output) << "\n";
}

void run_fit(const FitOpts& opts) {
    const SpectralSequence seq = sequence_from_container(read_container(opts.input));
    const bool default_pools_used = opts.pools.empty() || opts.pools == "default";
    const std::vector<PoolSpec> pools =
        default_pools_used ? default_pools() : load_pools(opts.pools);

    const ContrastMaps maps = contrast_maps(seq, pools, {}, opts.threads);

    // One frame per pool amplitude plus a trailing convergence plane.
    ContainerData out;
    out.c = static_cast<int>(maps.pool_names.size()) + 1;
    out.h = maps.height;
    out.w = maps.width;
    const std::size_t plane = static_cast<std::size_t>(out.h) * out.w;
    out.payload.reserve(plane * out.c);
    for (std::size_t pi = 0; pi < maps.pool_names.size(); ++pi) {
        out.axis.push_back(static_cast<double>(pi));
        out.frame_names.push_back(maps.pool_names[pi]);
        for (double v : maps.amplitude[pi]) out.payload.push_back(static_cast<float>(v));
    }
    out.axis.push_back(static_cast<double>(maps.pool_names.size()));
    out.frame_names.push_back("converged");
    for (std::uint8_t c : maps.converged) out.payload.push_back(c ? 1.0f : 0.0f);

    json prov = provenance_base("fit");
    prov["input"] = base_name(opts.input);
    prov["pools"] = default_pools_used ? std::string("default") : base_name(opts.pools);
    prov["threads"] = opts.threads;
    out.provenance = std::move(prov);
    write_container(opts.output, out);

    std::size_t ok = 0;
    for (std::uint8_t c : maps.converged) ok += c ? 1 : 0;
    std::cout << "fitted " << maps.pool_names.size() << " pools over " << plane
              << " pixels (" << ok << " converged) -> " << base_name(opts.output) << "\n";
}

void run_aptw(const AptwOpts& opts) {
    const SpectralSequence seq = sequence_from_container(read_container(opts.input));
    const ScalarMap map = aptw_map(seq);

    ContainerData out;
    out.c = 2;
    out.h = map.height;
    out.w = map.width;
    out.axis = {0.0, 1.0};
    out.frame_names = {"aptw_percent", "valid"};
    out.payload.reserve(map.values.size() * 2);
    for (double v : map.values) out.payload.push_back(static_cast<float>(v));
    for (std::uint8_t v : map.valid) out.payload.push_back(v ? 1.0f : 0.0f);

    json prov = provenance_base("aptw");
    prov["input"] = base_name(opts.input);
    out.provenance = std::move(prov);
    write_container(opts.output, out);
    std::cout << "aptw map -> " << base_name(opts.output) << "\n";
}

void run_eval(const EvalOpts& opts) {
    const ContainerData ref = read_container(opts.reference);
    const ContainerData test = read_container(opts.test);
    if (ref.c != test.c || ref.h != test.h || ref.w != test.w)
        throw ConfigError("eval: reference and test dimensions differ");

    std::vector<double> rv(ref.payload.begin(), ref.payload.end());
    std::vector<double> tv(test.payload.begin(), test.payload.end());
    double sq = 0.0;
    for (std::size_t i = 0; i < rv.size(); ++i) {
        const double d = rv[i] - tv[i];
        sq += d * d;
    }
    const double mse = sq / static_cast<double>(rv.size());
    const double p = psnr(rv, tv, opts.peak);

    std::vector<std::pair<std::string, double>> metrics{{"psnr", p}, {"mse", mse}};
    std::cout << std::left << std::setw(12) << "metric" << "value\n";
    for (const auto& [name, value] : metrics)
        std::cout << std::left << std::setw(12) << name << format_double(value) << "\n";
    if (!opts.metrics_out.empty()) write_metrics_csv(opts.metrics_out, metrics);

    if (opts.rois.empty()) return;

    const ContainerData labels = read_container(opts.rois);
    if (labels.h != test.h || labels.w != test.w)
        throw ConfigError("eval: ROI label map dimensions differ from test");
    // Distinct nonzero labels in the first plane, row-major pixel order.
    std::map<long long, Roi> rois;
    for (int y = 0; y < labels.h; ++y)
        for (int x = 0; x < labels.w; ++x) {
            const long long lab =
                std::llround(labels.payload[static_cast<std::size_t>(y) * labels.w + x]);
            if (lab == 0) continue;
            auto& roi = rois[lab];
            if (roi.label.empty()) roi.label = std::to_string(lab);
            roi.pixels.emplace_back(y, x);
        }
    if (rois.empty()) throw DataError("eval: ROI label map has no nonzero labels");

    // ROI summaries are taken over the first frame of the test container
    // (the value plane for map stacks).
    const std::vector<double> plane(
        tv.begin(), tv.begin() + static_cast<std::ptrdiff_t>(
                                     static_cast<std::size_t>(test.h) * test.w));
    std::vector<RoiStats> stats;
    for (const auto& [lab, roi] : rois)
        stats.push_back(roi_stats(plane, test.w, test.h, roi));

    std::cout << std::left << std::setw(12) << "roi" << std::setw(8) << "n"
              << std::setw(14) << "mean" << std::setw(14) << "std" << std::setw(14)
              << "q1" << std::setw(14) << "q2" << "q3\n";
    for (const auto& s : stats)
        std::cout << std::left << std::setw(12) << s.label << std::setw(8) << s.n
                  << std::setw(14) << format_double(s.mean) << std::setw(14)
                  << format_double(s.stddev) << std::setw(14) << format_double(s.q1)
                  << std::setw(14) << format_double(s.q2) << format_double(s.q3) << "\n";
    if (!opts.roi_stats_out.empty()) write_roi_stats_csv(opts.roi_stats_out, stats);
}

void run_import(const ImportOpts& opts) {
    const std::vector<double> offsets = read_offsets_csv(opts.offsets);
    const SpectralSequence seq = import_nifti(opts.input, offsets);

    json prov = provenance_base("import-nifti");
    prov["input"] = base_name(opts.input);
    prov["offsets"] = base_name(opts.offsets);
    write_container(opts.output, to_container(seq, std::move(prov)));
    std::cout << "imported " << seq.width() << "x" << seq.height() << "x"
              << seq.n_offsets() << " -> " << base_name(opts.output) << "\n";
}

}  // namespace bald::cli
