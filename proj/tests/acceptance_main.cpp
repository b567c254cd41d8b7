// Acceptance suite: end-to-end checks of the toolkit's headline behaviors,
// one pass/fail line per criterion. Heavier than the unit tests; run via
// ctest or directly.

#include "calmet/binned_ece.hpp"
#include "calmet/exact_ece.hpp"
#include "calmet/experiments.hpp"
#include "calmet/io.hpp"
#include "calmet/ls_ece.hpp"
#include "calmet/synthetic.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace calmet;
namespace fs = std::filesystem;

namespace {

int failures = 0;

class Timer {
public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

void report(int index, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] %2d. %s (%s)\n", pass ? "PASS" : "FAIL", index, name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

// --- 1 & 2: parity oscillation of binned ECE, flatness of LS-ECE ----------

void criterion_parity_and_flatness() {
    const LinkFunction& link = LinkFunction::sigmoid();
    const auto data = to_predictions(sample_two_point(1000, RandomSeed{2024}), 1e-3);

    Timer t1;
    double worst_even = 1.0, worst_odd = 0.0;
    for (std::size_t m = 1; m <= 100; ++m) {
        const double value = binned_ece(data, link, BinningScheme::uniform(m));
        if (m % 2 == 0) worst_even = std::min(worst_even, value);
        else worst_odd = std::max(worst_odd, value);
    }
    const double t1s = t1.seconds();
    report(1, "binned ECE oscillates with bin parity on two-point data",
           worst_even >= 0.45 && worst_odd <= 0.05 && t1s < 5.0,
           "min even " + fmt(worst_even) + " >= 0.45, max odd " + fmt(worst_odd) +
               " <= 0.05, " + fmt(t1s) + " s < 5 s");

    Timer t2;
    double lo = 1.0, hi = 0.0;
    for (std::size_t m = 10; m <= 100; ++m) {
        const double sigma = 1.0 / static_cast<double>(m);
        const double value = ls_ece(data, link, NoiseKernel::gaussian(sigma), 10000,
                                    derive_seed(RandomSeed{2024}, m))
                                 .value;
        lo = std::min(lo, value);
        hi = std::max(hi, value);
    }
    const double t2s = t2.seconds();
    report(2, "LS-ECE stays flat near zero across sigma = 1/bins",
           hi <= 0.05 && hi - lo <= 0.04 && t2s < 30.0,
           "max " + fmt(hi) + " <= 0.05, spread " + fmt(hi - lo) + " <= 0.04, " + fmt(t2s) +
               " s < 30 s");
}

// --- 3: exact discrete ECE and discontinuity witnesses --------------------

void criterion_discrete_exact() {
    const DiscreteDistributionSpec degenerate({0.5, 0.5}, {0.0, 1.0}, {0.5, 0.5});
    const DiscreteDistributionSpec split({0.5, 0.5}, {0.0, 1.0}, {0.4, 0.6});

    const double zero = population_ece(degenerate);
    const double point4 = population_ece(split);
    const auto witnesses = discontinuity_witnesses(degenerate);
    const auto none = discontinuity_witnesses(split);

    const bool pass = std::abs(zero) <= 1e-12 && std::abs(point4 - 0.4) <= 1e-12 &&
                      witnesses == std::vector<std::size_t>{0, 1} && none.empty();
    report(3, "exact ECE and witnesses on the two-point spec", pass,
           "ece(g=.5,.5) = " + fmt(zero) + ", ece(g=.4,.6) = " + fmt(point4) + ", witnesses " +
               std::to_string(witnesses.size()) + "/2 and " + std::to_string(none.size()) + "/0");
}

// --- 4: brute-force oracle equivalence -------------------------------------

void criterion_oracle_equivalence() {
    Rng rng(RandomSeed{404});
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng.index(8);
        std::vector<double> mass(n), cond(n), pred(n);
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            mass[i] = 0.05 + rng.uniform01();
            total += mass[i];
            cond[i] = static_cast<double>(rng.index(10)) / 9.0;
            pred[i] = static_cast<double>(rng.index(10)) / 9.0;
        }
        for (double& m : mass) m /= total;
        double sum = 0.0;
        for (double m : mass) sum += m;
        mass[0] += 1.0 - sum;
        const DiscreteDistributionSpec spec(mass, cond, pred);

        // independent oracle: level sets rebuilt per point by pairwise comparison
        double expected = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double gm = 0.0, gw = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (pred[j] == pred[i]) {
                    gm += mass[j];
                    gw += mass[j] * cond[j];
                }
            }
            expected += mass[i] * std::abs(gw / gm - pred[i]);
        }
        worst = std::max(worst, std::abs(population_ece(spec) - expected));
    }
    report(4, "population ECE matches the pairwise brute-force oracle", worst <= 1e-12,
           "200 random specs, worst |diff| = " + fmt(worst) + " <= 1e-12");
}

// --- 5: counterexample discontinuity ---------------------------------------

void criterion_counterexample() {
    Timer timer;
    const LinkFunction& link = LinkFunction::sigmoid();
    const double delta = 0.01;
    const auto sample = sample_counterexample(100000, RandomSeed{505});
    const auto plain = to_predictions(sample, link);
    const auto perturbed = to_predictions(sample, perturbed_predictor(delta), link);

    const double grouped_plain = empirical_exact_ece(plain, link);
    const double binned_plain = binned_ece(plain, link, BinningScheme::uniform(10));
    const double grouped_perturbed = empirical_exact_ece(perturbed, link);

    const NoiseKernel kernel = NoiseKernel::gaussian(0.05);
    const double ls_plain = ls_ece(plain, link, kernel, 10000, RandomSeed{506}).value;
    const double ls_perturbed = ls_ece(perturbed, link, kernel, 10000, RandomSeed{506}).value;

    const double ts = timer.seconds();
    const bool pass = std::abs(grouped_plain - 1.0 / 3.0) <= 0.02 && binned_plain <= 0.02 &&
                      grouped_perturbed >= 1.0 / 3.0 - 2.0 * delta - 0.02 &&
                      std::abs(ls_plain - ls_perturbed) <= 0.05 && ts < 60.0;
    report(5, "perturbation is visible to grouped exact ECE, invisible to LS-ECE", pass,
           "grouped(x1) = " + fmt(grouped_plain) + " ~ 1/3, binned(x1) = " + fmt(binned_plain) +
               " <= 0.02, grouped(g_delta) = " + fmt(grouped_perturbed) + " >= " +
               fmt(1.0 / 3.0 - 2.0 * delta - 0.02) + ", |LS diff| = " +
               fmt(std::abs(ls_plain - ls_perturbed)) + " <= 0.05, " + fmt(ts) + " s < 60 s");
}

// --- 6: consistency rate ----------------------------------------------------

void criterion_consistency_rate() {
    Timer timer;
    ConsistencyOptions options;
    options.dist = SyntheticDistribution::two_point;
    options.n_list = {100, 400, 1600, 6400};
    options.sigma = 0.1;
    options.repeats = 20;
    options.mc_samples = 10000;
    options.seed = RandomSeed{606};

    const auto rows = run_consistency(options);

    // least-squares slope of log(error) against log(n)
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double k = static_cast<double>(rows.size());
    for (const auto& row : rows) {
        const double x = std::log(static_cast<double>(row.n));
        const double y = std::log(row.mean_abs_error);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    const double ts = timer.seconds();
    report(6, "estimation error decays with sample size", slope <= -0.35 && ts < 180.0,
           "log-log slope " + fmt(slope) + " <= -0.35, errors " + fmt(rows[0].mean_abs_error) +
               " -> " + fmt(rows[3].mean_abs_error) + ", " + fmt(ts) + " s < 180 s");
}

// --- 7: shrinking-sigma limit ------------------------------------------------

void criterion_sigma_limit() {
    SigmaLimitOptions options;
    options.n = 100000;
    options.sigma_list = {0.2, 0.1, 0.05, 0.02};
    options.mc_samples = 10000;
    options.seed = RandomSeed{707};
    options.ref_bins = 10;

    const auto rows = run_sigma_limit(options);
    const auto& last = rows.back();
    const double gap = std::abs(last.ls_ece - last.binned_reference);

    // successive-sigma movements stay within Monte-Carlo noise of each other
    double worst_step = 0.0;
    for (std::size_t i = 1; i < rows.size(); ++i)
        worst_step = std::max(worst_step, std::abs(rows[i].ls_ece - rows[i - 1].ls_ece));

    report(7, "LS-ECE approaches the binned reference as sigma shrinks",
           gap <= 0.03 && worst_step <= 0.02,
           "|ls(0.02) - binned| = " + fmt(gap) + " <= 0.03, max successive step " +
               fmt(worst_step) + " <= 0.02");
}

// --- 8: binned ECE tracks LS-ECE across synthetic models ----------------------

void criterion_model_tracking() {
    const LinkFunction& link = LinkFunction::sigmoid();
    std::vector<ComparisonInput> inputs;
    for (std::uint64_t model = 0; model < 3; ++model)
        inputs.push_back(
            {"model" + std::to_string(model),
             to_predictions(sample_counterexample(10000, RandomSeed{808 + model}), link)});

    SweepOptions options;
    for (int m = 10; m <= 100; m += 10) options.bins.push_back(m);
    options.mc_samples = 10000;
    options.seed = RandomSeed{809};

    const auto result = run_comparison(inputs, options);
    double worst = 0.0;
    for (const auto& row : result.rows) worst = std::max(worst, row.mean_abs_diff_ls);
    report(8, "binned ECE tracks LS-ECE across synthetic models", worst <= 0.03,
           "3 models, bins 10..100, worst mean |binned - LS| = " + fmt(worst) + " <= 0.03");
}

// --- 9: CLI determinism --------------------------------------------------------

struct CliHarness {
    fs::path dir;
    std::string cli;

    CliHarness() : dir(fs::current_path() / "acceptance_tmp"), cli(CALMET_CLI_PATH) {
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    ~CliHarness() {
        std::error_code ec;
        fs::remove_all(dir, ec);
    }

    std::string path(const std::string& name) const { return (dir / name).string(); }

    bool run(const std::string& args) const {
        const std::string command = cli + " " + args + " >/dev/null 2>&1";
        return std::system(command.c_str()) == 0;
    }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void criterion_cli_determinism() {
    CliHarness h;

    // prepared inputs
    const std::string tp = h.path("tp.csv");
    const std::string cx = h.path("cx.csv");
    const std::string mc = h.path("mc.csv");
    const std::string spec = h.path("spec.csv");
    const std::string smece = h.path("smece.csv");
    bool ok = h.run("synth --dist two-point --n 400 --seed 1 --out " + tp) &&
              h.run("synth --dist counterexample --n 400 --seed 2 --out " + cx);
    {
        std::ofstream out(mc);
        out << "label,p_0,p_1,p_2\n0,0.6,0.2,0.2\n1,0.3,0.5,0.2\n2,0.25,0.25,0.5\n";
        std::ofstream sp(spec);
        sp << "mass,true_conditional,predictor\n0.5,0,0.5\n0.5,1,0.5\n";
        std::ofstream sm(smece);
        sm << "model,smece\ncx,0.021\n";
    }

    // every seeded command, run twice into separate files
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"synth", "synth --dist counterexample --n 300 --seed 5 --delta 0.05 --out OUT"},
        {"ece", "ece --input " + tp + " --bins 7 --output csv --out OUT"},
        {"reliability", "reliability --input " + cx + " --bins 9 --scheme equal-mass --out OUT"},
        {"ls-ece", "ls-ece --input " + cx + " --sigma 0.1 --samples 800 --seed 9 --output csv " +
                       "--curve-out CURVE --out OUT"},
        {"top-class", "top-class --input " + mc + " --out OUT"},
        {"exact", "exact --spec " + spec + " --output csv --out OUT"},
        {"sweep", "sweep --input " + cx + " --bins 1,4,9 --samples 600 --seed 3 --out OUT"},
        {"compare", "compare --inputs " + tp + " " + cx + " --bins 5,10 --samples 500 --seed 4 " +
                        "--smece-file " + smece + " --quiet --out OUT"},
        {"consistency", "consistency --dist two-point --n-list 50,100 --repeats 5 --samples 400 "
                        "--seed 6 --reference-n 2000 --out OUT"},
        {"sigma-limit", "sigma-limit --dist counterexample --n 800 --sigma-list 0.2,0.1 "
                        "--samples 500 --seed 7 --out OUT"},
    };

    std::string first_mismatch;
    for (const auto& [name, templ] : commands) {
        for (int round = 0; round < 2 && ok; ++round) {
            std::string cmd = templ;
            const std::string out = h.path(name + "_" + std::to_string(round) + ".csv");
            const std::string curve = h.path(name + "_curve_" + std::to_string(round) + ".csv");
            if (auto pos = cmd.find("CURVE"); pos != std::string::npos) cmd.replace(pos, 5, curve);
            if (auto pos = cmd.find("OUT"); pos != std::string::npos) cmd.replace(pos, 3, out);
            ok = h.run(cmd);
        }
        if (!ok) {
            first_mismatch = name + " failed to run";
            break;
        }
        const std::string a = slurp(h.path(name + "_0.csv"));
        const std::string b = slurp(h.path(name + "_1.csv"));
        if (a.empty() || a != b) {
            ok = false;
            first_mismatch = name + " output differs between runs";
            break;
        }
        if (name == "ls-ece" &&
            slurp(h.path("ls-ece_curve_0.csv")) != slurp(h.path("ls-ece_curve_1.csv"))) {
            ok = false;
            first_mismatch = "ls-ece curve differs between runs";
            break;
        }
    }

    report(9, "every seeded command replays byte-identically", ok,
           ok ? std::to_string(commands.size()) + " subcommands, 2 runs each" : first_mismatch);
}

// --- 10: numerical stability far from the data ----------------------------------

void criterion_log_space_stability() {
    const double sigma = 0.1;
    const std::vector<double> logits{0.0, 0.01, 0.02, 0.05, 0.07, 0.11, 0.13, 0.17, 0.19, 0.23};
    const std::vector<int> labels{0, 1, 0, 1, 1, 0, 1, 0, 1, 1};
    const BinaryPredictionSet data(logits, labels);

    const double t = 0.23 + 50.0 * sigma;
    const double value = nw_conditional_mean(t, data, NoiseKernel::gaussian(sigma));

    // high-precision oracle: direct long-double sums, no log-space shift
    long double total = 0.0L, positives = 0.0L;
    const long double inv2s = 1.0L / (2.0L * static_cast<long double>(sigma) * sigma);
    for (std::size_t i = 0; i < logits.size(); ++i) {
        const long double d = static_cast<long double>(t) - logits[i];
        const long double w = expl(-d * d * inv2s);
        total += w;
        if (labels[i] == 1) positives += w;
    }
    const double expected = static_cast<double>(positives / total);

    const bool pass = std::isfinite(value) && value >= 0.0 && value <= 1.0 &&
                      std::abs(value - expected) <= 1e-6;
    report(10, "kernel regression stays exact 50 sigma from the data", pass,
           "value " + fmt(value) + " vs oracle " + fmt(expected) + ", |diff| = " +
               fmt(std::abs(value - expected)) + " <= 1e-6");
}

} // namespace

int main() {
    std::printf("calmet acceptance suite\n");
    criterion_parity_and_flatness();
    criterion_discrete_exact();
    criterion_oracle_equivalence();
    criterion_counterexample();
    criterion_consistency_rate();
    criterion_sigma_limit();
    criterion_model_tracking();
    criterion_cli_determinism();
    criterion_log_space_stability();
    if (failures == 0) {
        std::printf("all criteria passed\n");
        return EXIT_SUCCESS;
    }
    std::printf("%d criterion(s) failed\n", failures);
    return EXIT_FAILURE;
}
