#include <adclin/design.hpp>
#include <adclin/experiment.hpp>
#include <adclin/io.hpp>
#include <adclin/multitone.hpp>
#include <adclin/rng.hpp>

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>

using namespace adclin;
namespace fs = std::filesystem;

namespace {

ExperimentConfig tiny_config(const std::string& out_name) {
    ExperimentConfig c;
    c.M = 3;
    c.L = 512;
    // At short lengths the per-realization gain search can push the clean
    // multitone peak past full scale; the extra headroom keeps Q(x) defined.
    c.headroom = 0.25;
    c.N_sweep = {2, 4};
    c.output_dir = (fs::temp_directory_path() / "adclin_exp_tests" / out_name).string();
    fs::remove_all(c.output_dir);
    return c;
}

double summary_value(const RunManifest& m, const std::string& key) {
    for (const auto& [k, v] : m.summary)
        if (k == key) return v;
    FAIL(("missing summary key " + key));
    return 0.0;
}

bool has_note(const RunManifest& m, const std::string& key) {
    for (const auto& [k, v] : m.notes)
        if (k == key) return true;
    return false;
}

} // namespace

TEST_CASE("config validation rejects bad fields") {
    ExperimentConfig c;
    c.R = 0;
    CHECK_THROWS_AS((void)make_pipeline_signal(c, SignalStage::Multitone, 0),
                    std::invalid_argument);
    c = ExperimentConfig{};
    c.M = 0;
    CHECK_THROWS_AS((void)make_ensemble(c, SignalStage::Multitone), std::invalid_argument);
    c = ExperimentConfig{};
    c.headroom = 0.0;
    CHECK_THROWS_AS((void)make_pipeline_signal(c, SignalStage::Multitone, 0),
                    std::invalid_argument);
    c = ExperimentConfig{};
    c.N_sweep = {4, 0};
    CHECK_THROWS_AS((void)run_example1(c), std::invalid_argument);
}

TEST_CASE("config serialization round-trips") {
    ExperimentConfig c;
    c.master_seed = 42;
    c.R = 2;
    c.M = 5;
    c.L = 1024;
    c.N_sweep = {3, 5};
    c.lambda = 1e-3;
    c.signal_bits = 10;
    c.coeff_bits = 9;
    c.headroom = 0.015625;
    c.bmax_grid = {0.25, 0.75};
    c.distortion_scale = 0.12;
    c.distortion_P = 8;
    c.output_dir = "somewhere/else";
    const ExperimentConfig back = parse_config_kv(parse_kv_text(serialize_config(c, "")), "");
    CHECK(back == c);
    const ExperimentConfig pref =
        parse_config_kv(parse_kv_text(serialize_config(c, "config.")), "config.");
    CHECK(pref == c);

    // Unknown keys are ignored; partial files inherit defaults.
    const ExperimentConfig partial = parse_config_kv(parse_kv_text("M = 7\nwhatever = 3\n"), "");
    CHECK(partial.M == 7);
    CHECK(partial.L == ExperimentConfig{}.L);
    CHECK_THROWS_AS((void)parse_config_kv(parse_kv_text("M = 0\n"), ""), std::invalid_argument);
}

TEST_CASE("experiment distortion factory honors the scale switch") {
    ExperimentConfig c;
    CHECK(c.distortion().ap.size() == 9);
    c.distortion_scale = 0.0;
    CHECK(c.distortion().ap.empty());
    CHECK(c.distortion().eval(0.3) == 0.3);
}

TEST_CASE("pipeline signals are reproducible and internally consistent") {
    ExperimentConfig c;
    c.L = 512;
    const EvalSignal es = make_pipeline_signal(c, SignalStage::Multitone, 0);
    const EvalSignal es2 = make_pipeline_signal(c, SignalStage::Multitone, 0);
    CHECK(es.x.samples == es2.x.samples);
    CHECK(es.v.samples == es2.v.samples);
    CHECK(es.gain == es2.gain);

    // x is the seeded multitone draw scaled by the searched gain.
    const std::uint64_t seed =
        derive_seed(c.master_seed, static_cast<std::uint64_t>(SignalStage::Multitone), 0);
    Signal base = gen_multitone(MultiToneSpec::standard(), c.L, seed);
    for (double& s : base.samples) s *= es.gain;
    CHECK(es.x.samples == base.samples);
    CHECK(es.x.seed == seed);

    // v is the quantized distorted observation; xq the quantized clean signal.
    const Signal v_ref = quantize_uniform(apply_distortion(c.distortion(), es.x), c.signal_bits);
    CHECK(es.v.samples == v_ref.samples);
    REQUIRE(es.xq.size() == es.x.size());
    CHECK(es.xq.samples == quantize_uniform(es.x, c.signal_bits).samples);

    // The distorted peak respects the headroom limit.
    double peak = 0.0;
    const PolynomialDistortion model = c.distortion();
    for (double s : es.x.samples) peak = std::max(peak, std::abs(model.eval(s)));
    CHECK(peak <= 1.0 - c.headroom);

    const EvalSignal other = make_pipeline_signal(c, SignalStage::Multitone, 1);
    CHECK(other.x.samples != es.x.samples);
}

TEST_CASE("ensembles start at index R") {
    ExperimentConfig c;
    c.M = 2;
    c.L = 256;
    const std::vector<EvalSignal> ens = make_ensemble(c, SignalStage::Multitone);
    REQUIRE(ens.size() == 2);
    const EvalSignal first = make_pipeline_signal(c, SignalStage::Multitone, 1);
    CHECK(ens[0].x.samples == first.x.samples);
    CHECK(ens[0].v.samples == first.v.samples);

    // Training index 0 never appears in the evaluation ensemble.
    const EvalSignal train = make_pipeline_signal(c, SignalStage::Multitone, 0);
    CHECK(ens[0].x.samples != train.x.samples);
    CHECK(ens[1].x.samples != train.x.samples);
}

TEST_CASE("example1 writes its outputs and is deterministic") {
    const ExperimentConfig cfg_a = tiny_config("ex1_a");
    const RunManifest a = run_example1(cfg_a);
    const fs::path dir(cfg_a.output_dir);

    for (const char* name :
         {"baseline.csv", "sndr_vs_N.csv", "sndr_vs_mults.csv", "manifest.txt",
          "sndr_onebit_N4.csv", "spectrum_clean.csv", "spectrum_distorted.csv",
          "spectrum_onebit_N4.csv", "spectrum_hammerstein_N4.csv", "spectrum_relu_N4.csv",
          "spectrum_modulus_N4.csv"})
        CHECK_MESSAGE(fs::exists(dir / name), name);
    for (const char* name :
         {"hammerstein_N2.lin", "hammerstein_N4.lin", "relu_N2.lin", "relu_N4.lin",
          "modulus_N2.lin", "modulus_N4.lin", "onebit_N2.lin", "onebit_N4.lin", "onebit_N2.lut",
          "onebit_N4.lut"})
        CHECK_MESSAGE(fs::exists(dir / "linearizers" / name), name);

    // The manifest echoes the exact configuration and the stage seeds.
    const auto kv = parse_kv_file((dir / "manifest.txt").string());
    CHECK(parse_config_kv(kv, "config.") == cfg_a);
    CHECK(kv.at("seed.multitone.train0") ==
          std::to_string(derive_seed(cfg_a.master_seed, 1, 0)));
    CHECK(kv.at("seed.multitone.eval_first") ==
          std::to_string(derive_seed(cfg_a.master_seed, 1, 1)));

    // Identical run into another directory reproduces every summary number.
    ExperimentConfig cfg_b = tiny_config("ex1_b");
    const RunManifest b = run_example1(cfg_b);
    CHECK(a.summary == b.summary);

    // The saved lut matches the saved branch linearizer.
    const LinearizerVariant lin =
        load_linearizer((dir / "linearizers" / "onebit_N4.lin").string());
    const LinearizerVariant lut =
        load_linearizer((dir / "linearizers" / "onebit_N4.lut").string());
    const auto* branch = std::get_if<BranchLinearizer>(&lin);
    const auto* table = std::get_if<LutLinearizer>(&lut);
    REQUIRE(branch != nullptr);
    REQUIRE(table != nullptr);
    const LutLinearizer rebuilt = build_lut(*branch);
    CHECK(rebuilt.table == table->table);
    CHECK(rebuilt.c1 == table->c1);

    // Sweep rows: one per (method, N).
    const std::string sndr_rows = read_text_file((dir / "sndr_vs_N.csv").string());
    CHECK(std::count(sndr_rows.begin(), sndr_rows.end(), '\n') == 10);
}

TEST_CASE("example1 skips spectra for non-power-of-two lengths") {
    ExperimentConfig c = tiny_config("ex1_np2");
    c.L = 500;
    c.M = 2;
    c.N_sweep = {2};
    const RunManifest m = run_example1(c);
    CHECK(has_note(m, "spectra"));
    CHECK_FALSE(fs::exists(fs::path(c.output_dir) / "spectrum_clean.csv"));
    CHECK(fs::exists(fs::path(c.output_dir) / "baseline.csv"));
}

TEST_CASE("example2 evaluates the stored linearizer consistently") {
    const ExperimentConfig cfg1 = tiny_config("ex2_src");
    const RunManifest m1 = run_example1(cfg1);

    ExperimentConfig cfg2 = tiny_config("ex2_out");
    const RunManifest m2 = run_example2(cfg2, cfg1.output_dir);

    const double ref = summary_value(m1, "onebit.N4.mean_db");
    CHECK(summary_value(m2, "example1.onebit.mean_db") == ref);
    for (const char* stage : {"nullsub", "noise"}) {
        const double mean = summary_value(m2, std::string(stage) + ".mean_db");
        const double deg = summary_value(m2, std::string(stage) + ".degradation_db");
        CHECK(deg == ref - mean);
    }

    const fs::path dir(cfg2.output_dir);
    for (const char* name :
         {"sndr_nullsub.csv", "sndr_noise.csv", "spectrum_nullsub_onebit.csv",
          "spectrum_noise_onebit.csv", "manifest.txt"})
        CHECK_MESSAGE(fs::exists(dir / name), name);

    // Degradation recomputed from scratch: load the linearizer, evaluate the
    // nullsub ensemble directly.
    const auto kv1 = parse_kv_file((fs::path(cfg1.output_dir) / "manifest.txt").string());
    const LinearizerVariant lin = load_linearizer(
        (fs::path(cfg1.output_dir) / kv1.at("linearizer.onebit.N4")).string());
    const EnsembleStats st = evaluate_linearizer(lin, make_ensemble(cfg2, SignalStage::NullSub));
    CHECK(st.mean_db == summary_value(m2, "nullsub.mean_db"));
}

TEST_CASE("example2 requires a completed example1 directory") {
    ExperimentConfig c = tiny_config("ex2_missing");
    CHECK_THROWS_WITH_AS((void)run_example2(c, c.output_dir + "/void"),
                         doctest::Contains("manifest"), std::runtime_error);
}

TEST_CASE("lut verification is exact on the quantizer grid") {
    ExperimentConfig c = tiny_config("vlut");
    c.M = 1;
    const std::vector<LutVerifyResult> res = verify_lut(c);
    REQUIRE(res.size() == 2);
    CHECK(res[0].N == 2);
    CHECK(res[1].N == 4);
    for (const LutVerifyResult& r : res) {
        CHECK(r.levels == 256);
        CHECK(r.max_discrepancy == 0.0);
    }
}

TEST_CASE("zero-distortion designs collapse to near-identity corrections") {
    ExperimentConfig c = tiny_config("zerodist");
    c.distortion_scale = 0.0;
    c.M = 2;

    TrainingSet ts;
    for (int r = 0; r < c.R; ++r) {
        EvalSignal s =
            make_pipeline_signal(c, SignalStage::Multitone, static_cast<std::uint64_t>(r));
        ts.pairs.emplace_back(std::move(s.x), std::move(s.v));
    }
    const std::vector<EvalSignal> ensemble = make_ensemble(c, SignalStage::Multitone);

    DesignConfig dc;
    dc.lambda = c.lambda;
    dc.N = 4;
    dc.coeff_bits = c.coeff_bits;
    dc.bmax_grid = c.bmax_grid;

    std::vector<LinearizerVariant> designs;
    designs.push_back(design_onebit(ts, dc));
    designs.push_back(design_hammerstein(ts, 5, c.lambda, c.coeff_bits));
    dc.activation = ActivationKind::Modulus;
    designs.push_back(design_branch_sweep(ts, dc));

    const double bound = std::ldexp(1.0, -10);
    for (const LinearizerVariant& lin : designs) {
        double worst = 0.0;
        for (const EvalSignal& e : ensemble) {
            const Signal y = apply_linearizer(lin, e.v);
            for (std::size_t i = 0; i < y.size(); ++i)
                worst = std::max(worst, std::abs(y.samples[i] - e.v.samples[i]));
        }
        CHECK(worst <= bound);
    }
}
