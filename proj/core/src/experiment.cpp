#include <adclin/experiment.hpp>

#include <adclin/design.hpp>
#include <adclin/io.hpp>
#include <adclin/noise.hpp>
#include <adclin/rng.hpp>
#include <adclin/version.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>
#include <stdexcept>

namespace fs = std::filesystem;

namespace adclin {

namespace {

const char* stage_name(SignalStage stage) {
    switch (stage) {
        case SignalStage::Multitone: return "multitone";
        case SignalStage::NullSub: return "nullsub";
        case SignalStage::BandpassNoise: return "noise";
    }
    return "unknown";
}

Signal scaled(const Signal& base, double g, std::uint64_t seed) {
    Signal out = base;
    for (double& s : out.samples) s *= g;
    out.gain = g;
    out.seed = seed;
    return out;
}

std::string csv_comment(const ExperimentConfig& config) {
    return std::string("adclin ") + version_string +
           " seed=" + std::to_string(config.master_seed);
}

std::string method_label(int method) {
    switch (method) {
        case 0: return "hammerstein";
        case 1: return "relu";
        case 2: return "modulus";
        case 3: return "onebit";
    }
    return "?";
}

Method method_datapath(int method) {
    switch (method) {
        case 0: return Method::Hammerstein;
        case 1:
        case 2: return Method::Branch;
        default: return Method::Lut;
    }
}

std::vector<int> parse_int_list(const std::string& text, const char* what) {
    std::vector<int> out;
    std::string item;
    std::istringstream is(text);
    while (std::getline(is, item, ',')) {
        std::size_t pos = 0;
        const int v = std::stoi(item, &pos);
        if (pos != item.size())
            throw std::runtime_error(std::string("config: bad integer in ") + what);
        out.push_back(v);
    }
    if (out.empty()) throw std::runtime_error(std::string("config: empty list for ") + what);
    return out;
}

std::vector<double> parse_double_csv(const std::string& text, const char* what) {
    std::vector<double> out;
    std::string item;
    std::istringstream is(text);
    while (std::getline(is, item, ',')) {
        std::size_t pos = 0;
        const double v = std::stod(item, &pos);
        if (pos != item.size())
            throw std::runtime_error(std::string("config: bad number in ") + what);
        out.push_back(v);
    }
    if (out.empty()) throw std::runtime_error(std::string("config: empty list for ") + what);
    return out;
}

std::string join_ints(const std::vector<int>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(values[i]);
    }
    return out;
}

std::string join_doubles_csv(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += format_double(values[i]);
    }
    return out;
}

void validate_config(const ExperimentConfig& c) {
    if (c.R < 1) throw std::invalid_argument("config: R must be at least 1");
    if (c.M < 1) throw std::invalid_argument("config: M must be at least 1");
    if (c.L == 0) throw std::invalid_argument("config: L must be at least 1");
    if (c.N_sweep.empty()) throw std::invalid_argument("config: N_sweep must be nonempty");
    for (int n : c.N_sweep)
        if (n < 1) throw std::invalid_argument("config: N_sweep entries must be at least 1");
    if (c.lambda < 0.0) throw std::invalid_argument("config: lambda must be nonnegative");
    if (c.signal_bits < 1) throw std::invalid_argument("config: signal_bits must be at least 1");
    if (c.coeff_bits < 2) throw std::invalid_argument("config: coeff_bits must be at least 2");
    if (!(c.headroom > 0.0 && c.headroom < 1.0))
        throw std::invalid_argument("config: headroom must lie in (0, 1)");
}

} // namespace

PolynomialDistortion ExperimentConfig::distortion() const {
    if (distortion_scale == 0.0) return PolynomialDistortion::identity();
    return PolynomialDistortion::alternating(distortion_scale, distortion_P);
}

EvalSignal make_pipeline_signal(const ExperimentConfig& config, SignalStage stage,
                                std::uint64_t index) {
    validate_config(config);
    const PolynomialDistortion model = config.distortion();
    const std::uint64_t seed =
        derive_seed(config.master_seed, static_cast<std::uint64_t>(stage), index);

    Signal base;
    switch (stage) {
        case SignalStage::Multitone:
            base = gen_multitone(MultiToneSpec::standard(), config.L, seed);
            break;
        case SignalStage::NullSub:
            base = gen_nullsub_multitone(MultiToneSpec::standard(), 8, config.L, seed);
            break;
        case SignalStage::BandpassNoise:
            base = gen_bandpass_noise(BandpassNoiseSpec{}, config.L, seed);
            break;
    }

    const double g = normalize_gain_base(base.samples, model, config.headroom);
    EvalSignal out;
    out.gain = g;
    out.x = scaled(base, g, seed);
    out.v = quantize_uniform(apply_distortion(model, out.x), config.signal_bits);
    double xpeak = 0.0;
    for (double s : out.x.samples) xpeak = std::max(xpeak, std::abs(s));
    if (xpeak <= 1.0) out.xq = quantize_uniform(out.x, config.signal_bits);
    return out;
}

std::vector<EvalSignal> make_ensemble(const ExperimentConfig& config, SignalStage stage) {
    validate_config(config);
    std::vector<EvalSignal> out;
    out.reserve(static_cast<std::size_t>(config.M));
    for (int i = 0; i < config.M; ++i)
        out.push_back(make_pipeline_signal(config, stage,
                                           static_cast<std::uint64_t>(config.R + i)));
    return out;
}

EnsembleStats evaluate_linearizer(const LinearizerVariant& lin,
                                  const std::vector<EvalSignal>& ensemble,
                                  std::vector<double>* per_signal_db) {
    if (ensemble.empty()) throw std::invalid_argument("evaluate_linearizer: empty ensemble");
    std::vector<double> values;
    values.reserve(ensemble.size());
    for (const EvalSignal& e : ensemble)
        values.push_back(sndr(e.x, apply_linearizer(lin, e.v)).sndr_db);
    if (per_signal_db) *per_signal_db = values;
    return ensemble_stats(values);
}

std::string serialize_config(const ExperimentConfig& config, const std::string& key_prefix) {
    std::string out;
    auto put = [&](const std::string& key, const std::string& value) {
        out += key_prefix + key + " = " + value + "\n";
    };
    put("master_seed", std::to_string(config.master_seed));
    put("R", std::to_string(config.R));
    put("M", std::to_string(config.M));
    put("L", std::to_string(config.L));
    put("N_sweep", join_ints(config.N_sweep));
    put("lambda", format_double(config.lambda));
    put("signal_bits", std::to_string(config.signal_bits));
    put("coeff_bits", std::to_string(config.coeff_bits));
    put("headroom", format_double(config.headroom));
    put("bmax_grid", join_doubles_csv(config.bmax_grid));
    put("distortion_scale", format_double(config.distortion_scale));
    put("distortion_P", std::to_string(config.distortion_P));
    put("output_dir", config.output_dir);
    return out;
}

ExperimentConfig parse_config_kv(const std::map<std::string, std::string>& kv,
                                 const std::string& key_prefix) {
    ExperimentConfig c;
    auto get = [&](const char* key) -> const std::string* {
        const auto it = kv.find(key_prefix + key);
        return it == kv.end() ? nullptr : &it->second;
    };
    if (const auto* v = get("master_seed")) c.master_seed = std::stoull(*v);
    if (const auto* v = get("R")) c.R = std::stoi(*v);
    if (const auto* v = get("M")) c.M = std::stoi(*v);
    if (const auto* v = get("L")) c.L = static_cast<std::size_t>(std::stoull(*v));
    if (const auto* v = get("N_sweep")) c.N_sweep = parse_int_list(*v, "N_sweep");
    if (const auto* v = get("lambda")) c.lambda = std::stod(*v);
    if (const auto* v = get("signal_bits")) c.signal_bits = std::stoi(*v);
    if (const auto* v = get("coeff_bits")) c.coeff_bits = std::stoi(*v);
    if (const auto* v = get("headroom")) c.headroom = std::stod(*v);
    if (const auto* v = get("bmax_grid")) c.bmax_grid = parse_double_csv(*v, "bmax_grid");
    if (const auto* v = get("distortion_scale")) c.distortion_scale = std::stod(*v);
    if (const auto* v = get("distortion_P")) c.distortion_P = std::stoi(*v);
    if (const auto* v = get("output_dir")) c.output_dir = *v;
    validate_config(c);
    return c;
}

ExperimentConfig parse_config_file(const std::string& path) {
    return parse_config_kv(parse_kv_file(path), "");
}

void write_manifest(const std::string& path, const RunManifest& manifest) {
    std::string out = "# adclin manifest\n";
    out += "tool = " + manifest.tool + "\n";
    out += serialize_config(manifest.config, "config.");
    for (const auto& [key, seed] : manifest.stage_seeds)
        out += "seed." + key + " = " + std::to_string(seed) + "\n";
    for (const auto& [key, p] : manifest.linearizer_paths)
        out += "linearizer." + key + " = " + p + "\n";
    for (const auto& [key, note] : manifest.notes)
        out += "note." + key + " = " + note + "\n";
    for (const auto& [key, value] : manifest.summary)
        out += "summary." + key + " = " + format_double(value) + "\n";
    write_text_file(path, out);
}

namespace {

TrainingSet make_training(const ExperimentConfig& config) {
    TrainingSet ts;
    for (int r = 0; r < config.R; ++r) {
        EvalSignal s = make_pipeline_signal(config, SignalStage::Multitone,
                                            static_cast<std::uint64_t>(r));
        ts.pairs.emplace_back(std::move(s.x), std::move(s.v));
    }
    return ts;
}

LinearizerVariant design_method(int method, int N, const TrainingSet& ts,
                                const ExperimentConfig& config, DesignReport* report) {
    DesignConfig dc;
    dc.lambda = config.lambda;
    dc.N = N;
    dc.coeff_bits = config.coeff_bits;
    dc.bmax_grid = config.bmax_grid;
    switch (method) {
        case 0: return design_hammerstein(ts, N + 1, config.lambda, config.coeff_bits, report);
        case 1:
            dc.activation = ActivationKind::ReLU;
            return design_branch_sweep(ts, dc, report);
        case 2:
            dc.activation = ActivationKind::Modulus;
            return design_branch_sweep(ts, dc, report);
        default:
            dc.activation = ActivationKind::OneBit;
            return design_onebit(ts, dc, report);
    }
}

} // namespace

RunManifest run_example1(const ExperimentConfig& config) {
    validate_config(config);
    const fs::path dir(config.output_dir);
    fs::create_directories(dir / "linearizers");

    RunManifest manifest;
    manifest.config = config;
    manifest.tool = std::string("adclin ") + version_string;
    manifest.stage_seeds.emplace_back(
        "multitone.train0", derive_seed(config.master_seed,
                                        static_cast<std::uint64_t>(SignalStage::Multitone), 0));
    manifest.stage_seeds.emplace_back(
        "multitone.eval_first",
        derive_seed(config.master_seed, static_cast<std::uint64_t>(SignalStage::Multitone),
                    static_cast<std::uint64_t>(config.R)));

    const std::string comment = csv_comment(config);
    const TrainingSet training = make_training(config);
    const std::vector<EvalSignal> ensemble = make_ensemble(config, SignalStage::Multitone);

    // Reference levels: uncorrected (y = v) and quantization-limited (y = Q(x)).
    std::vector<double> uncorrected_db, undistorted_db;
    for (const EvalSignal& e : ensemble) {
        uncorrected_db.push_back(sndr(e.x, e.v).sndr_db);
        if (e.xq.size() == 0)
            throw std::runtime_error(
                "example1: clean signal exceeds the quantizer domain; lower the headroom");
        undistorted_db.push_back(sndr(e.x, e.xq).sndr_db);
    }
    const EnsembleStats uncorrected = ensemble_stats(uncorrected_db);
    const EnsembleStats undistorted = ensemble_stats(undistorted_db);
    {
        std::vector<std::vector<std::string>> rows;
        for (std::size_t i = 0; i < uncorrected_db.size(); ++i)
            rows.push_back({std::to_string(config.R + static_cast<int>(i)),
                            format_double(uncorrected_db[i]), format_double(undistorted_db[i])});
        write_table_csv((dir / "baseline.csv").string(), comment,
                        "signal_index,uncorrected_sndr_db,undistorted_snr_db", rows);
    }
    manifest.summary.emplace_back("uncorrected.mean_db", uncorrected.mean_db);
    manifest.summary.emplace_back("uncorrected.var_db", uncorrected.variance_db);
    manifest.summary.emplace_back("undistorted.mean_db", undistorted.mean_db);
    manifest.summary.emplace_back("undistorted.var_db", undistorted.variance_db);

    const int N_star = *std::max_element(config.N_sweep.begin(), config.N_sweep.end());
    std::vector<std::vector<std::string>> sndr_rows, mult_rows;
    std::vector<LinearizerVariant> spectra_lins(4);
    std::vector<bool> spectra_ok(4, false);

    for (int method = 0; method < 4; ++method) {
        for (int N : config.N_sweep) {
            const std::string label = method_label(method);
            const std::string cell = label + ".N" + std::to_string(N);
            LinearizerVariant lin;
            try {
                lin = design_method(method, N, training, config, nullptr);
            } catch (const std::exception& e) {
                manifest.notes.emplace_back(cell, std::string("design failed: ") + e.what());
                continue;
            }

            const std::string fname = "linearizers/" + label + "_N" + std::to_string(N) + ".lin";
            save_linearizer((dir / fname).string(), lin);
            manifest.linearizer_paths.emplace_back(cell, fname);
            if (method == 3) {
                const std::string lutname =
                    "linearizers/onebit_N" + std::to_string(N) + ".lut";
                save_linearizer((dir / lutname).string(),
                                build_lut(std::get<BranchLinearizer>(lin)));
                manifest.linearizer_paths.emplace_back(label + ".N" + std::to_string(N) + ".lut",
                                                       lutname);
            }

            std::vector<double> per_signal;
            const EnsembleStats st = evaluate_linearizer(lin, ensemble, &per_signal);
            manifest.summary.emplace_back(cell + ".mean_db", st.mean_db);
            manifest.summary.emplace_back(cell + ".var_db", st.variance_db);

            sndr_rows.push_back({label, std::to_string(N), format_double(st.mean_db),
                                 format_double(st.variance_db)});
            const OpCount ops = complexity_count(method_datapath(method), N);
            mult_rows.push_back({label, std::to_string(N), std::to_string(ops.mults),
                                 std::to_string(ops.adds), format_double(st.mean_db)});

            if (N == N_star) {
                spectra_lins[static_cast<std::size_t>(method)] = lin;
                spectra_ok[static_cast<std::size_t>(method)] = true;
                if (method == 3) {
                    std::vector<std::vector<std::string>> rows;
                    for (std::size_t i = 0; i < per_signal.size(); ++i)
                        rows.push_back({std::to_string(config.R + static_cast<int>(i)),
                                        format_double(per_signal[i])});
                    write_table_csv(
                        (dir / ("sndr_onebit_N" + std::to_string(N) + ".csv")).string(), comment,
                        "signal_index,sndr_db", rows);
                }
            }
        }
    }

    write_table_csv((dir / "sndr_vs_N.csv").string(), comment,
                    "method,N,mean_sndr_db,var_db", sndr_rows);
    write_table_csv((dir / "sndr_vs_mults.csv").string(), comment,
                    "method,N,mults,adds,mean_sndr_db", mult_rows);

    // Spectra for one representative evaluation signal at the largest N.
    const bool spectral = (config.L & (config.L - 1)) == 0 && config.L >= 2;
    if (spectral) {
        const EvalSignal& rep = ensemble.front();
        write_spectrum_csv((dir / "spectrum_clean.csv").string(),
                           periodogram(rep.x, Window::Hann), comment);
        write_spectrum_csv((dir / "spectrum_distorted.csv").string(),
                           periodogram(rep.v, Window::Hann), comment);
        for (int method = 0; method < 4; ++method) {
            if (!spectra_ok[static_cast<std::size_t>(method)]) continue;
            const Signal y =
                apply_linearizer(spectra_lins[static_cast<std::size_t>(method)], rep.v);
            write_spectrum_csv(
                (dir / ("spectrum_" + method_label(method) + "_N" + std::to_string(N_star) +
                        ".csv"))
                    .string(),
                periodogram(y, Window::Hann), comment);
        }
    } else {
        manifest.notes.emplace_back("spectra", "skipped: L is not a power of two");
    }

    write_manifest((dir / "manifest.txt").string(), manifest);
    return manifest;
}

RunManifest run_example2(const ExperimentConfig& config, const std::string& example1_dir) {
    validate_config(config);
    const fs::path src(example1_dir);
    if (!fs::exists(src / "manifest.txt"))
        throw std::runtime_error("example2: no manifest.txt in " + example1_dir +
                                 " (run example1 first)");
    const auto kv = parse_kv_file((src / "manifest.txt").string());
    const ExperimentConfig cfg1 = parse_config_kv(kv, "config.");
    const int N_star = *std::max_element(cfg1.N_sweep.begin(), cfg1.N_sweep.end());
    const std::string lin_key = "linearizer.onebit.N" + std::to_string(N_star);
    const std::string mean_key = "summary.onebit.N" + std::to_string(N_star) + ".mean_db";
    const auto lin_it = kv.find(lin_key);
    const auto mean_it = kv.find(mean_key);
    if (lin_it == kv.end() || mean_it == kv.end())
        throw std::runtime_error("example2: manifest lacks the designed onebit linearizer at N=" +
                                 std::to_string(N_star));
    const LinearizerVariant lin = load_linearizer((src / lin_it->second).string());
    const double ref_mean = std::stod(mean_it->second);

    const fs::path dir(config.output_dir);
    fs::create_directories(dir);
    const std::string comment = csv_comment(config);

    RunManifest manifest;
    manifest.config = config;
    manifest.tool = std::string("adclin ") + version_string;
    manifest.summary.emplace_back("example1.onebit.mean_db", ref_mean);
    manifest.linearizer_paths.emplace_back("onebit.N" + std::to_string(N_star),
                                           (src / lin_it->second).string());

    const bool spectral = (config.L & (config.L - 1)) == 0 && config.L >= 2;
    for (SignalStage stage : {SignalStage::NullSub, SignalStage::BandpassNoise}) {
        const std::string name = stage_name(stage);
        manifest.stage_seeds.emplace_back(
            name + ".eval_first",
            derive_seed(config.master_seed, static_cast<std::uint64_t>(stage),
                        static_cast<std::uint64_t>(config.R)));
        const std::vector<EvalSignal> ensemble = make_ensemble(config, stage);
        std::vector<double> per_signal;
        const EnsembleStats st = evaluate_linearizer(lin, ensemble, &per_signal);

        std::vector<std::vector<std::string>> rows;
        for (std::size_t i = 0; i < per_signal.size(); ++i)
            rows.push_back({std::to_string(config.R + static_cast<int>(i)),
                            format_double(per_signal[i])});
        write_table_csv((dir / ("sndr_" + name + ".csv")).string(), comment,
                        "signal_index,sndr_db", rows);

        manifest.summary.emplace_back(name + ".mean_db", st.mean_db);
        manifest.summary.emplace_back(name + ".var_db", st.variance_db);
        manifest.summary.emplace_back(name + ".degradation_db", ref_mean - st.mean_db);

        if (spectral) {
            const EvalSignal& rep = ensemble.front();
            write_spectrum_csv((dir / ("spectrum_" + name + "_clean.csv")).string(),
                               periodogram(rep.x, Window::Hann), comment);
            write_spectrum_csv((dir / ("spectrum_" + name + "_distorted.csv")).string(),
                               periodogram(rep.v, Window::Hann), comment);
            write_spectrum_csv((dir / ("spectrum_" + name + "_onebit.csv")).string(),
                               periodogram(apply_linearizer(lin, rep.v), Window::Hann), comment);
        }
    }
    if (!spectral) manifest.notes.emplace_back("spectra", "skipped: L is not a power of two");

    write_manifest((dir / "manifest.txt").string(), manifest);
    return manifest;
}

std::vector<LutVerifyResult> verify_lut(const ExperimentConfig& config) {
    validate_config(config);
    const TrainingSet training = make_training(config);
    const int levels = 1 << config.signal_bits;
    const double step = quantize_step(config.signal_bits);

    std::vector<LutVerifyResult> results;
    for (int N : config.N_sweep) {
        DesignConfig dc;
        dc.lambda = config.lambda;
        dc.N = N;
        dc.coeff_bits = config.coeff_bits;
        dc.activation = ActivationKind::OneBit;
        const BranchLinearizer lin = design_onebit(training, dc);
        const LutLinearizer lut = build_lut(lin);

        Signal grid;
        grid.samples.resize(static_cast<std::size_t>(levels));
        for (int k = 0; k < levels; ++k) grid.samples[static_cast<std::size_t>(k)] = -1.0 + k * step;

        const Signal yb = apply_branch(lin, grid);
        const Signal yl = apply_lut(lut, grid);
        LutVerifyResult res{N, levels, 0.0};
        for (int k = 0; k < levels; ++k) {
            const double d = std::abs(yb.samples[static_cast<std::size_t>(k)] -
                                      yl.samples[static_cast<std::size_t>(k)]);
            res.max_discrepancy = std::max(res.max_discrepancy, d);
        }
        results.push_back(res);
    }
    return results;
}

} // namespace adclin
