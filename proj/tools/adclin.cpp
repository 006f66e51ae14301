// adclin command-line tool: linearizer design, application, and the two
// evaluation experiments, all driven by a shared experiment config.

#include <adclin/design.hpp>
#include <adclin/experiment.hpp>
#include <adclin/io.hpp>
#include <adclin/version.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace adclin;

// Experiment-config flags shared by example1/example2/verify-lut. Flag values
// override config-file values, which override the built-in defaults.
struct ConfigFlags {
    std::string config_file;
    std::optional<std::uint64_t> master_seed;
    std::optional<int> R, M, signal_bits, coeff_bits, distortion_P;
    std::optional<std::size_t> L;
    std::optional<std::string> N_sweep, bmax_grid, output_dir;
    std::optional<double> lambda, headroom, distortion_scale;

    void attach(CLI::App* app) {
        app->add_option("--config", config_file, "Config file (key = value lines)");
        app->add_option("--seed", master_seed, "Master seed");
        app->add_option("--R", R, "Training signals");
        app->add_option("--M", M, "Evaluation signals");
        app->add_option("--L", L, "Samples per signal");
        app->add_option("--N-sweep", N_sweep, "Comma-separated branch counts");
        app->add_option("--lambda", lambda, "Ridge regularization weight");
        app->add_option("--signal-bits", signal_bits, "Signal quantizer word length");
        app->add_option("--coeff-bits", coeff_bits, "Coefficient word length");
        app->add_option("--headroom", headroom, "Peak headroom for gain normalization");
        app->add_option("--bmax-grid", bmax_grid, "Comma-separated b_max sweep values");
        app->add_option("--distortion-scale", distortion_scale,
                        "Distortion coefficient scale (0 = identity model)");
        app->add_option("--distortion-P", distortion_P, "Distortion polynomial order");
        app->add_option("--out-dir", output_dir, "Output directory");
    }

    ExperimentConfig resolve() const {
        ExperimentConfig cfg;
        if (!config_file.empty()) cfg = parse_config_file(config_file);
        std::map<std::string, std::string> kv;
        if (master_seed) kv["master_seed"] = std::to_string(*master_seed);
        if (R) kv["R"] = std::to_string(*R);
        if (M) kv["M"] = std::to_string(*M);
        if (L) kv["L"] = std::to_string(*L);
        if (N_sweep) kv["N_sweep"] = *N_sweep;
        if (lambda) kv["lambda"] = format_double(*lambda);
        if (signal_bits) kv["signal_bits"] = std::to_string(*signal_bits);
        if (coeff_bits) kv["coeff_bits"] = std::to_string(*coeff_bits);
        if (headroom) kv["headroom"] = format_double(*headroom);
        if (bmax_grid) kv["bmax_grid"] = *bmax_grid;
        if (distortion_scale) kv["distortion_scale"] = format_double(*distortion_scale);
        if (distortion_P) kv["distortion_P"] = std::to_string(*distortion_P);
        if (output_dir) kv["output_dir"] = *output_dir;
        if (kv.empty()) return cfg;
        // Re-serialize the base config, overlay the flag values, re-parse.
        auto base = parse_kv_text(serialize_config(cfg, ""));
        for (const auto& [k, v] : kv) base[k] = v;
        return parse_config_kv(base, "");
    }
};

ActivationKind activation_for(const std::string& method) {
    if (method == "onebit") return ActivationKind::OneBit;
    if (method == "relu") return ActivationKind::ReLU;
    if (method == "modulus") return ActivationKind::Modulus;
    throw std::runtime_error("unknown method '" + method + "'");
}

std::string activation_name(ActivationKind kind) {
    switch (kind) {
        case ActivationKind::OneBit: return "onebit";
        case ActivationKind::ReLU: return "relu";
        case ActivationKind::Modulus: return "modulus";
    }
    return "?";
}

void print_summary(const RunManifest& manifest) {
    for (const auto& [key, value] : manifest.summary)
        std::printf("%s = %.4f\n", key.c_str(), value);
    for (const auto& [key, note] : manifest.notes)
        std::printf("note %s: %s\n", key.c_str(), note.c_str());
}

int run_design(const std::string& method, const std::vector<std::string>& x_paths,
               const std::vector<std::string>& v_paths, int N, int K, double lambda,
               int coeff_bits, const std::string& bmax_grid, const std::string& out_path,
               const std::string& report_path) {
    if (x_paths.size() != v_paths.size() || x_paths.empty())
        throw std::runtime_error("design needs matching --x and --v signal files");
    TrainingSet ts;
    for (std::size_t i = 0; i < x_paths.size(); ++i)
        ts.pairs.emplace_back(read_signal_csv(x_paths[i]), read_signal_csv(v_paths[i]));

    DesignReport report;
    LinearizerVariant lin;
    if (method == "hammerstein") {
        lin = design_hammerstein(ts, K, lambda, coeff_bits, &report);
    } else {
        DesignConfig dc;
        dc.lambda = lambda;
        dc.N = N;
        dc.coeff_bits = coeff_bits;
        dc.activation = activation_for(method);
        if (dc.activation == ActivationKind::OneBit) {
            lin = design_onebit(ts, dc, &report);
        } else {
            std::string item;
            std::istringstream is(bmax_grid);
            dc.bmax_grid.clear();
            while (std::getline(is, item, ',')) dc.bmax_grid.push_back(std::stod(item));
            lin = design_branch_sweep(ts, dc, &report);
        }
    }
    save_linearizer(out_path, lin);
    std::printf("wrote %s\n", out_path.c_str());

    std::string rep = "# adclin design report\n";
    rep += "method = " + method + "\n";
    rep += (method == "hammerstein" ? "K = " : "N = ") + std::to_string(report.order) + "\n";
    if (method != "hammerstein") rep += "activation = " + activation_name(report.activation) + "\n";
    rep += "lambda = " + format_double(report.lambda) + "\n";
    if (report.chosen_bmax) rep += "chosen_bmax = " + format_double(*report.chosen_bmax) + "\n";
    rep += "training_mse_before = " + format_double(report.mse_before) + "\n";
    rep += "training_mse_after = " + format_double(report.mse_after) + "\n";
    rep += "solve_residual_norm = " + format_double(report.residual_norm) + "\n";
    rep += "rhs_norm = " + format_double(report.rhs_norm) + "\n";
    if (!report_path.empty()) {
        write_text_file(report_path, rep);
        std::printf("wrote %s\n", report_path.c_str());
    } else {
        std::fputs(rep.c_str(), stdout);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        CLI::App app{std::string("adclin ") + version_string +
                     " - memoryless ADC linearizer design and evaluation"};
        app.require_subcommand(1);

        // design
        auto* design = app.add_subcommand("design", "Fit a linearizer from signal CSV pairs");
        std::string method = "onebit";
        std::vector<std::string> x_paths, v_paths;
        int N = 32, K = 33, coeff_bits = 12;
        double lambda = 2e-4;
        std::string bmax_grid = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9";
        std::string out_path = "linearizer.lin", report_path;
        design->add_option("--method", method, "onebit|relu|modulus|hammerstein")
            ->check(CLI::IsMember({"onebit", "relu", "modulus", "hammerstein"}));
        design->add_option("--x", x_paths, "Reference signal CSV (repeatable)")->required();
        design->add_option("--v", v_paths, "Distorted signal CSV (repeatable)")->required();
        design->add_option("--N", N, "Branch count (branch methods)");
        design->add_option("--K", K, "Polynomial order (hammerstein)");
        design->add_option("--lambda", lambda, "Ridge regularization weight");
        design->add_option("--coeff-bits", coeff_bits, "Coefficient word length");
        design->add_option("--bmax-grid", bmax_grid, "b_max sweep (relu/modulus)");
        design->add_option("--out", out_path, "Output linearizer file");
        design->add_option("--report", report_path, "Design report file (default: stdout)");

        // apply
        auto* apply = app.add_subcommand("apply", "Apply a saved linearizer to a signal CSV");
        std::string lin_path, in_path, out_csv;
        apply->add_option("--linearizer", lin_path, "Linearizer file")->required();
        apply->add_option("--input", in_path, "Input signal CSV")->required();
        apply->add_option("--output", out_csv, "Output signal CSV")->required();

        // spectrum
        auto* spectrum = app.add_subcommand("spectrum", "Periodogram of a signal CSV");
        std::string spec_in, spec_out, window = "hann";
        spectrum->add_option("--input", spec_in, "Input signal CSV")->required();
        spectrum->add_option("--output", spec_out, "Output spectrum CSV")->required();
        spectrum->add_option("--window", window, "hann|rect")
            ->check(CLI::IsMember({"hann", "rect"}));

        // example1 / example2 / verify-lut
        auto* ex1 = app.add_subcommand("example1", "Design sweep + ensemble evaluation");
        ConfigFlags ex1_flags;
        ex1_flags.attach(ex1);

        auto* ex2 = app.add_subcommand("example2",
                                       "Robustness evaluation of the example1 onebit design");
        ConfigFlags ex2_flags;
        ex2_flags.attach(ex2);
        std::string example1_dir = "out";
        ex2->add_option("--example1-dir", example1_dir, "Directory holding example1 outputs");

        auto* vlut = app.add_subcommand("verify-lut",
                                        "Branch vs LUT bit-exactness over all quantizer levels");
        ConfigFlags vlut_flags;
        vlut_flags.attach(vlut);

        app.parse(argc, argv);

        if (design->parsed())
            return run_design(method, x_paths, v_paths, N, K, lambda, coeff_bits, bmax_grid,
                              out_path, report_path);

        if (apply->parsed()) {
            const LinearizerVariant lin = load_linearizer(lin_path);
            const Signal y = apply_linearizer(lin, read_signal_csv(in_path));
            write_signal_csv(out_csv, y, std::string("adclin ") + version_string);
            std::printf("wrote %s\n", out_csv.c_str());
            return 0;
        }

        if (spectrum->parsed()) {
            const Signal s = read_signal_csv(spec_in);
            const Spectrum sp =
                periodogram(s, window == "hann" ? Window::Hann : Window::Rectangular);
            write_spectrum_csv(spec_out, sp, std::string("adclin ") + version_string);
            std::printf("wrote %s\n", spec_out.c_str());
            return 0;
        }

        if (ex1->parsed()) {
            const ExperimentConfig cfg = ex1_flags.resolve();
            const RunManifest manifest = run_example1(cfg);
            print_summary(manifest);
            std::printf("outputs in %s\n", cfg.output_dir.c_str());
            return 0;
        }

        if (ex2->parsed()) {
            ExperimentConfig cfg = ex2_flags.resolve();
            if (!ex2_flags.output_dir)
                cfg.output_dir = (std::filesystem::path(example1_dir) / "example2").string();
            const RunManifest manifest = run_example2(cfg, example1_dir);
            print_summary(manifest);
            std::printf("outputs in %s\n", cfg.output_dir.c_str());
            return 0;
        }

        if (vlut->parsed()) {
            const ExperimentConfig cfg = vlut_flags.resolve();
            const std::vector<LutVerifyResult> results = verify_lut(cfg);
            std::filesystem::create_directories(cfg.output_dir);
            std::vector<std::vector<std::string>> rows;
            bool ok = true;
            for (const LutVerifyResult& r : results) {
                std::printf("N=%d levels=%d max_discrepancy=%s %s\n", r.N, r.levels,
                            format_double(r.max_discrepancy).c_str(),
                            r.max_discrepancy == 0.0 ? "PASS" : "FAIL");
                ok = ok && r.max_discrepancy == 0.0;
                rows.push_back({std::to_string(r.N), std::to_string(r.levels),
                                format_double(r.max_discrepancy)});
            }
            write_table_csv((std::filesystem::path(cfg.output_dir) / "verify_lut.csv").string(),
                            std::string("adclin ") + version_string + " seed=" +
                                std::to_string(cfg.master_seed),
                            "N,levels,max_discrepancy", rows);
            if (!ok) throw std::runtime_error("branch/LUT discrepancy detected");
            return 0;
        }

        return 0;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return 0;  // --help
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
