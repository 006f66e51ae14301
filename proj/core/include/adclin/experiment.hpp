#pragma once

#include <adclin/distortion.hpp>
#include <adclin/linearizer.hpp>
#include <adclin/metrics.hpp>
#include <adclin/signal.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace adclin {

struct ExperimentConfig {
    std::uint64_t master_seed = 1;
    int R = 1;
    int M = 100;  // desk scale; full-scale evaluation uses 2500
    std::size_t L = 8192;
    std::vector<int> N_sweep = {2, 4, 8, 12, 16, 20, 24, 28, 32};
    double lambda = 2e-4;
    int signal_bits = 8;
    int coeff_bits = 12;
    double headroom = 0.0078125;  // 2^-7: distorted peak <= top quantizer code
    std::vector<double> bmax_grid = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    double distortion_scale = 0.15;  // 0 -> identity model
    int distortion_P = 10;
    std::string output_dir = "out";

    PolynomialDistortion distortion() const;
    bool operator==(const ExperimentConfig&) const = default;
};

enum class SignalStage : std::uint64_t { Multitone = 1, NullSub = 2, BandpassNoise = 3 };

// One fully prepared pipeline signal: clean x (gain-normalized), distorted
// 8-bit observation v = Q(model(x)), and quantized clean xq = Q(x). The gain
// search bounds the distorted peak, and the model compresses large negative
// excursions, so a skewed realization (bandpass noise) can have |x| > 1; xq
// is left empty in that case.
struct EvalSignal {
    Signal x;
    Signal v;
    Signal xq;
    double gain = 1.0;
};

EvalSignal make_pipeline_signal(const ExperimentConfig& config, SignalStage stage,
                                std::uint64_t index);

// Training signals are indices 0..R-1 of the Multitone stage; evaluation
// signals are indices R..R+M-1 of the requested stage.
std::vector<EvalSignal> make_ensemble(const ExperimentConfig& config, SignalStage stage);

EnsembleStats evaluate_linearizer(const LinearizerVariant& lin,
                                  const std::vector<EvalSignal>& ensemble,
                                  std::vector<double>* per_signal_db = nullptr);

struct RunManifest {
    ExperimentConfig config;
    std::string tool;
    std::vector<std::pair<std::string, std::uint64_t>> stage_seeds;
    std::vector<std::pair<std::string, std::string>> linearizer_paths;
    std::vector<std::pair<std::string, std::string>> notes;
    std::vector<std::pair<std::string, double>> summary;
};

// Designs every method over config.N_sweep on R multitone training signals,
// evaluates each over the M-signal ensemble, and writes sndr_vs_N.csv,
// sndr_vs_mults.csv, baseline.csv, per-signal and spectrum CSVs, saved
// linearizers, and manifest.txt under config.output_dir.
RunManifest run_example1(const ExperimentConfig& config);

// Loads the largest-N onebit linearizer recorded in example1_dir/manifest.txt
// and evaluates it, unchanged, on null-subcarrier and bandpass-noise
// ensembles; writes SNDR and spectrum CSVs plus its own manifest.txt under
// config.output_dir.
RunManifest run_example2(const ExperimentConfig& config, const std::string& example1_dir);

struct LutVerifyResult {
    int N = 0;
    int levels = 0;
    double max_discrepancy = 0.0;
};

// For each N in config.N_sweep: design the onebit linearizer, build its LUT,
// and compare branch vs LUT output on every 2^signal_bits quantizer level.
std::vector<LutVerifyResult> verify_lut(const ExperimentConfig& config);

void write_manifest(const std::string& path, const RunManifest& manifest);

// Config serialization shared by config files and the manifest's config echo.
// Keys: master_seed, R, M, L, N_sweep, lambda, signal_bits, coeff_bits,
// headroom, bmax_grid, distortion_scale, distortion_P, output_dir.
std::string serialize_config(const ExperimentConfig& config, const std::string& key_prefix);
ExperimentConfig parse_config_kv(const std::map<std::string, std::string>& kv,
                                 const std::string& key_prefix);
ExperimentConfig parse_config_file(const std::string& path);

} // namespace adclin
