// calmet - calibration metrics CLI: binned/exact/smoothed ECE, reliability
// data, synthetic generators and the experiment harness.

#include "calmet/binned_ece.hpp"
#include "calmet/errors.hpp"
#include "calmet/exact_ece.hpp"
#include "calmet/experiments.hpp"
#include "calmet/io.hpp"
#include "calmet/ls_ece.hpp"
#include "calmet/synthetic.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace calmet;

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitPrecondition = 3;
constexpr int kExitNumeric = 4;

struct GlobalOptions {
    std::uint64_t seed = 1;
    double clamp_tol = kDefaultClampTol;
    bool quiet = false;
};

void note(const GlobalOptions& global, const std::string& message) {
    if (!global.quiet) std::cerr << message << '\n';
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw parse_error(path + ": cannot open for writing");
    return out;
}

// write to --out when given, else stdout
void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
    } else {
        auto out = open_out(out_path);
        out << content;
    }
}

std::string model_id_from_path(const std::string& path) {
    std::string stem = path;
    const std::size_t slash = stem.find_last_of("/\\");
    if (slash != std::string::npos) stem = stem.substr(slash + 1);
    const std::size_t dot = stem.find_last_of('.');
    if (dot != std::string::npos && dot > 0) stem = stem.substr(0, dot);
    return stem;
}

NoiseKernel::Base parse_kernel_base(const std::string& name) {
    if (name == "gaussian") return NoiseKernel::Base::gaussian;
    if (name == "uniform") return NoiseKernel::Base::uniform;
    throw precondition_error("unknown kernel '" + name + "' (expected gaussian or uniform)");
}

BinningScheme parse_scheme(const std::string& name, std::size_t bins) {
    if (name == "uniform") return BinningScheme::uniform(bins);
    if (name == "equal-mass") return BinningScheme::equal_mass(bins);
    throw precondition_error("unknown scheme '" + name + "' (expected uniform or equal-mass)");
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = "model,bins,sigma,binned_ece,ls_ece,smece\n";
    for (const SweepRow& row : rows) {
        out += row.model + ',' + std::to_string(row.bins) + ',' + format_double(row.sigma) + ',' +
               format_double(row.binned_ece) + ',' + format_double(row.ls_ece) + ',';
        if (row.smece) out += format_double(*row.smece);
        out += '\n';
    }
    return out;
}

std::string comparison_csv(const std::vector<ComparisonRow>& rows) {
    std::string out =
        "bins,sigma,mean_abs_diff_ls,std_abs_diff_ls,mean_abs_diff_smece,std_abs_diff_smece,"
        "n_models\n";
    for (const ComparisonRow& row : rows) {
        out += std::to_string(row.bins) + ',' + format_double(row.sigma) + ',' +
               format_double(row.mean_abs_diff_ls) + ',' + format_double(row.std_abs_diff_ls) +
               ',';
        if (row.mean_abs_diff_smece) out += format_double(*row.mean_abs_diff_smece);
        out += ',';
        if (row.std_abs_diff_smece) out += format_double(*row.std_abs_diff_smece);
        out += ',' + std::to_string(row.n_models) + '\n';
    }
    return out;
}

std::string consistency_csv(const std::vector<ConsistencyRow>& rows) {
    std::string out = "n,mean_abs_error,std_abs_error,reference\n";
    for (const ConsistencyRow& row : rows)
        out += std::to_string(row.n) + ',' + format_double(row.mean_abs_error) + ',' +
               format_double(row.std_abs_error) + ',' + format_double(row.reference) + '\n';
    return out;
}

std::string sigma_limit_csv(const std::vector<SigmaLimitRow>& rows) {
    std::string out = "sigma,ls_ece,exact_grouped,binned_reference\n";
    for (const SigmaLimitRow& row : rows)
        out += format_double(row.sigma) + ',' + format_double(row.ls_ece) + ',' +
               format_double(row.exact_grouped) + ',' + format_double(row.binned_reference) +
               '\n';
    return out;
}

int run(int argc, char** argv) {
    CLI::App app{"calmet: calibration metrics toolkit"};
    app.require_subcommand(1);

    GlobalOptions global;
    app.add_option("--seed", global.seed, "random seed for every randomized operation");
    app.add_option("--clamp-tol", global.clamp_tol,
                   "tolerance pulling probabilities away from 0 and 1 before taking logits");
    app.add_flag("--quiet", global.quiet, "suppress informational notes on stderr");

    // ---- ece ------------------------------------------------------------
    auto* ece_cmd = app.add_subcommand("ece", "binned ECE of a prediction file");
    struct {
        std::string input, format = "csv", scheme = "uniform", output = "json", out;
        std::size_t bins = 15;
    } ece_opt;
    ece_cmd->add_option("--input", ece_opt.input, "prediction file")->required();
    ece_cmd->add_option("--format", ece_opt.format, "csv|jsonl");
    ece_cmd->add_option("--bins", ece_opt.bins, "number of bins");
    ece_cmd->add_option("--scheme", ece_opt.scheme, "uniform|equal-mass");
    ece_cmd->add_option("--output", ece_opt.output, "json|csv");
    ece_cmd->add_option("--out", ece_opt.out, "output file (default stdout)");

    // ---- reliability -----------------------------------------------------
    auto* rel_cmd = app.add_subcommand("reliability", "per-bin reliability diagram data");
    struct {
        std::string input, format = "csv", scheme = "uniform", out;
        std::size_t bins = 15;
    } rel_opt;
    rel_cmd->add_option("--input", rel_opt.input, "prediction file")->required();
    rel_cmd->add_option("--format", rel_opt.format, "csv|jsonl");
    rel_cmd->add_option("--bins", rel_opt.bins, "number of bins");
    rel_cmd->add_option("--scheme", rel_opt.scheme, "uniform|equal-mass");
    rel_cmd->add_option("--out", rel_opt.out, "output CSV (default stdout)");

    // ---- ls-ece ----------------------------------------------------------
    auto* ls_cmd = app.add_subcommand("ls-ece", "logit-smoothed ECE estimate");
    struct {
        std::string input, format = "csv", kernel = "gaussian", output = "json", out, curve_out;
        double sigma = 0.1;
        std::size_t samples = kDefaultMcSamples;
        std::size_t curve_grid = 201;
    } ls_opt;
    ls_cmd->add_option("--input", ls_opt.input, "prediction file")->required();
    ls_cmd->add_option("--format", ls_opt.format, "csv|jsonl");
    ls_cmd->add_option("--sigma", ls_opt.sigma, "noise scale");
    ls_cmd->add_option("--kernel", ls_opt.kernel, "gaussian|uniform");
    ls_cmd->add_option("--samples", ls_opt.samples, "Monte-Carlo samples");
    ls_cmd->add_option("--curve-out", ls_opt.curve_out, "smooth reliability CSV output");
    ls_cmd->add_option("--curve-grid", ls_opt.curve_grid, "grid size of the smooth curve");
    ls_cmd->add_option("--output", ls_opt.output, "json|csv");
    ls_cmd->add_option("--out", ls_opt.out, "output file (default stdout)");

    // ---- top-class ---------------------------------------------------------
    auto* top_cmd = app.add_subcommand("top-class", "reduce a multiclass file to binary");
    struct {
        std::string input, format = "csv", out;
    } top_opt;
    top_cmd->add_option("--input", top_opt.input, "multiclass prediction file")->required();
    top_cmd->add_option("--format", top_opt.format, "csv|jsonl");
    top_cmd->add_option("--out", top_opt.out, "output CSV (default stdout)");

    // ---- exact --------------------------------------------------------------
    auto* exact_cmd = app.add_subcommand(
        "exact", "exact ECE of a finite-support spec or of an empirical sample");
    struct {
        std::string spec, input, format = "csv", output = "json", out;
        double witness_tol = 1e-9;
    } exact_opt;
    exact_cmd->add_option("--spec", exact_opt.spec,
                          "population spec CSV (mass,true_conditional,predictor)");
    exact_cmd->add_option("--input", exact_opt.input, "prediction file (empirical grouping)");
    exact_cmd->add_option("--format", exact_opt.format, "csv|jsonl");
    exact_cmd->add_option("--witness-tol", exact_opt.witness_tol, "discontinuity witness tolerance");
    exact_cmd->add_option("--output", exact_opt.output, "json|csv");
    exact_cmd->add_option("--out", exact_opt.out, "output file (default stdout)");

    // ---- synth ---------------------------------------------------------------
    auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic prediction file");
    struct {
        std::string dist, out;
        std::size_t n = 1000;
        double alpha = 1e-3;
        std::optional<double> delta;
        bool quarter_offset = false;
    } synth_opt;
    synth_cmd->add_option("--dist", synth_opt.dist, "two-point|counterexample")->required();
    synth_cmd->add_option("--n", synth_opt.n, "sample count");
    synth_cmd->add_option("--alpha", synth_opt.alpha, "two-point logit scale");
    synth_cmd->add_option("--delta", synth_opt.delta,
                          "counterexample perturbation (emits the perturbed confidences)");
    synth_cmd->add_flag("--quarter-offset", synth_opt.quarter_offset,
                        "use the 1/4 inner offset variant of the perturbed predictor");
    synth_cmd->add_option("--out", synth_opt.out, "output CSV (default stdout)");

    // ---- sweep ------------------------------------------------------------------
    auto* sweep_cmd = app.add_subcommand("sweep", "binned vs LS-ECE across bin counts");
    struct {
        std::string input, format = "csv", kernel = "gaussian", out;
        std::vector<int> bins;
        std::vector<double> sigma_list;
        std::size_t samples = kDefaultMcSamples;
    } sweep_opt;
    sweep_cmd->add_option("--input", sweep_opt.input, "prediction file")->required();
    sweep_cmd->add_option("--format", sweep_opt.format, "csv|jsonl");
    sweep_cmd->add_option("--bins", sweep_opt.bins, "bin counts (default 1..100)")
        ->delimiter(',');
    sweep_cmd->add_option("--sigma-list", sweep_opt.sigma_list,
                          "decouple sigma from 1/bins (one sigma per bin count)")
        ->delimiter(',');
    sweep_cmd->add_option("--kernel", sweep_opt.kernel, "gaussian|uniform");
    sweep_cmd->add_option("--samples", sweep_opt.samples, "Monte-Carlo samples per row");
    sweep_cmd->add_option("--out", sweep_opt.out, "output CSV (default stdout)");

    // ---- compare -------------------------------------------------------------------
    auto* cmp_cmd = app.add_subcommand("compare", "aggregate |binned - LS| over model files");
    struct {
        std::vector<std::string> inputs;
        std::string format = "csv", kernel = "gaussian", smece_file, out;
        std::vector<int> bins;
        std::size_t samples = kDefaultMcSamples;
    } cmp_opt;
    cmp_cmd->add_option("--inputs", cmp_opt.inputs, "prediction files (one per model)")
        ->required()
        ->expected(-1);
    cmp_cmd->add_option("--format", cmp_opt.format, "csv|jsonl");
    cmp_cmd->add_option("--bins", cmp_opt.bins, "bin counts (default 1,10,20,...,100)")
        ->delimiter(',');
    cmp_cmd->add_option("--kernel", cmp_opt.kernel, "gaussian|uniform");
    cmp_cmd->add_option("--samples", cmp_opt.samples, "Monte-Carlo samples per row");
    cmp_cmd->add_option("--smece-file", cmp_opt.smece_file,
                        "externally computed smECE values (model,smece)");
    cmp_cmd->add_option("--out", cmp_opt.out, "output CSV (default stdout)");

    // ---- consistency -----------------------------------------------------------------
    auto* cons_cmd = app.add_subcommand(
        "consistency", "estimation error vs sample size against a large-n reference");
    struct {
        std::string dist = "two-point", kernel = "gaussian", out;
        std::vector<std::size_t> n_list{100, 400, 1600, 6400};
        double sigma = 0.1;
        double alpha = 1e-3;
        std::size_t repeats = 20;
        std::size_t samples = kDefaultMcSamples;
        std::size_t reference_n = 1000000;
    } cons_opt;
    cons_cmd->add_option("--dist", cons_opt.dist, "two-point|counterexample");
    cons_cmd->add_option("--n-list", cons_opt.n_list, "sample sizes, strictly increasing")
        ->delimiter(',');
    cons_cmd->add_option("--sigma", cons_opt.sigma, "noise scale");
    cons_cmd->add_option("--alpha", cons_opt.alpha, "two-point logit scale");
    cons_cmd->add_option("--kernel", cons_opt.kernel, "gaussian|uniform");
    cons_cmd->add_option("--repeats", cons_opt.repeats, "resamples per n");
    cons_cmd->add_option("--samples", cons_opt.samples, "Monte-Carlo samples per estimate");
    cons_cmd->add_option("--reference-n", cons_opt.reference_n, "reference sample size");
    cons_cmd->add_option("--out", cons_opt.out, "output CSV (default stdout)");

    // ---- sigma-limit --------------------------------------------------------------------
    auto* sl_cmd = app.add_subcommand(
        "sigma-limit", "LS-ECE across shrinking sigma against exact/binned references");
    struct {
        std::string dist = "counterexample", kernel = "gaussian", out;
        std::size_t n = 100000;
        std::vector<double> sigma_list{0.2, 0.1, 0.05, 0.02};
        std::size_t samples = kDefaultMcSamples;
        std::size_t ref_bins = 10;
    } sl_opt;
    sl_cmd->add_option("--dist", sl_opt.dist, "counterexample (two-point is rejected)");
    sl_cmd->add_option("--n", sl_opt.n, "sample count");
    sl_cmd->add_option("--sigma-list", sl_opt.sigma_list, "sigmas, strictly decreasing")
        ->delimiter(',');
    sl_cmd->add_option("--kernel", sl_opt.kernel, "gaussian|uniform");
    sl_cmd->add_option("--samples", sl_opt.samples, "Monte-Carlo samples per sigma");
    sl_cmd->add_option("--ref-bins", sl_opt.ref_bins, "bins of the binned reference");
    sl_cmd->add_option("--out", sl_opt.out, "output CSV (default stdout)");

    // let --seed/--clamp-tol/--quiet appear after the subcommand name too
    for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; }))
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitParse;
    }

    if (!(global.clamp_tol > 0.0) || !(global.clamp_tol < 0.5))
        throw precondition_error("--clamp-tol must lie in (0, 0.5)");

    const RandomSeed seed{global.seed};
    const LinkFunction& link = LinkFunction::sigmoid();

    if (ece_cmd->parsed()) {
        const auto data = load_binary(ece_opt.input, parse_file_format(ece_opt.format));
        const BinningScheme scheme = parse_scheme(ece_opt.scheme, ece_opt.bins);
        const double value = binned_ece(data, link, scheme);
        if (ece_opt.output == "json") {
            nlohmann::json j{{"bins", ece_opt.bins},
                             {"scheme", ece_opt.scheme},
                             {"n", data.size()},
                             {"binned_ece", value}};
            emit(ece_opt.out, j.dump() + "\n");
        } else if (ece_opt.output == "csv") {
            emit(ece_opt.out, "bins,scheme,n,binned_ece\n" + std::to_string(ece_opt.bins) + ',' +
                                  ece_opt.scheme + ',' + std::to_string(data.size()) + ',' +
                                  format_double(value) + '\n');
        } else {
            throw precondition_error("unknown output '" + ece_opt.output + "'");
        }
    } else if (rel_cmd->parsed()) {
        const auto data = load_binary(rel_opt.input, parse_file_format(rel_opt.format));
        const auto diagram = reliability(data, link, parse_scheme(rel_opt.scheme, rel_opt.bins));
        std::ostringstream os;
        write_reliability_csv(os, diagram);
        emit(rel_opt.out, os.str());
    } else if (ls_cmd->parsed()) {
        const auto data = load_binary(ls_opt.input, parse_file_format(ls_opt.format));
        const NoiseKernel kernel = NoiseKernel::make(ls_opt.kernel, ls_opt.sigma);
        const SmoothedEstimate est = ls_ece(data, link, kernel, ls_opt.samples, seed);
        if (!ls_opt.curve_out.empty()) {
            const auto curve = smooth_reliability(data, link, kernel, ls_opt.curve_grid);
            auto out = open_out(ls_opt.curve_out);
            write_curve_csv(out, curve);
        }
        if (ls_opt.output == "json") {
            nlohmann::json j{{"ls_ece", est.value},   {"samples", est.samples_used},
                             {"sigma", est.sigma},    {"kernel", est.kernel},
                             {"seed", est.seed},      {"chunk_size", est.chunk_size},
                             {"n", data.size()}};
            emit(ls_opt.out, j.dump() + "\n");
        } else if (ls_opt.output == "csv") {
            emit(ls_opt.out, "ls_ece,samples,sigma,kernel,seed,chunk_size,n\n" +
                                 format_double(est.value) + ',' +
                                 std::to_string(est.samples_used) + ',' +
                                 format_double(est.sigma) + ',' + est.kernel + ',' +
                                 std::to_string(est.seed) + ',' +
                                 std::to_string(est.chunk_size) + ',' +
                                 std::to_string(data.size()) + '\n');
        } else {
            throw precondition_error("unknown output '" + ls_opt.output + "'");
        }
    } else if (top_cmd->parsed()) {
        const auto data = load_multiclass(top_opt.input, parse_file_format(top_opt.format));
        const auto reduced = top_class_reduce(data, link, global.clamp_tol);
        std::ostringstream os;
        write_binary_csv(os, reduced);
        emit(top_opt.out, os.str());
    } else if (exact_cmd->parsed()) {
        if (exact_opt.spec.empty() == exact_opt.input.empty())
            throw precondition_error("exact: give exactly one of --spec or --input");
        nlohmann::json j;
        std::string csv;
        if (!exact_opt.spec.empty()) {
            const auto spec = load_spec(exact_opt.spec);
            const double value = population_ece(spec);
            const auto witnesses = discontinuity_witnesses(spec, exact_opt.witness_tol);
            j = {{"population_ece", value}, {"witnesses", witnesses}, {"n", spec.size()}};
            std::string wit;
            for (std::size_t k = 0; k < witnesses.size(); ++k)
                wit += (k ? ";" : "") + std::to_string(witnesses[k]);
            csv = "population_ece,n,witnesses\n" + format_double(value) + ',' +
                  std::to_string(spec.size()) + ',' + wit + '\n';
        } else {
            const auto data = load_binary(exact_opt.input, parse_file_format(exact_opt.format));
            const double value = empirical_exact_ece(data, link);
            j = {{"empirical_exact_ece", value}, {"n", data.size()}};
            csv = "empirical_exact_ece,n\n" + format_double(value) + ',' +
                  std::to_string(data.size()) + '\n';
        }
        if (exact_opt.output == "json")
            emit(exact_opt.out, j.dump() + "\n");
        else if (exact_opt.output == "csv")
            emit(exact_opt.out, csv);
        else
            throw precondition_error("unknown output '" + exact_opt.output + "'");
    } else if (synth_cmd->parsed()) {
        const SyntheticDistribution dist = parse_distribution(synth_opt.dist);
        std::ostringstream os;
        if (dist == SyntheticDistribution::two_point) {
            write_binary_csv(os, to_predictions(sample_two_point(synth_opt.n, seed),
                                                synth_opt.alpha));
        } else {
            const auto sample = sample_counterexample(synth_opt.n, seed);
            if (synth_opt.delta) {
                const auto predictor =
                    perturbed_predictor(*synth_opt.delta, synth_opt.quarter_offset);
                write_binary_csv(os, to_predictions(sample, predictor, link, global.clamp_tol));
            } else {
                write_binary_csv(os, to_predictions(sample, link, global.clamp_tol));
            }
        }
        emit(synth_opt.out, os.str());
    } else if (sweep_cmd->parsed()) {
        const auto data = load_binary(sweep_opt.input, parse_file_format(sweep_opt.format));
        SweepOptions options;
        options.bins = sweep_opt.bins;
        if (options.bins.empty())
            for (int m = 1; m <= 100; ++m) options.bins.push_back(m);
        options.sigma_override = sweep_opt.sigma_list;
        options.kernel = parse_kernel_base(sweep_opt.kernel);
        options.mc_samples = sweep_opt.samples;
        options.seed = seed;
        options.clamp_tol = global.clamp_tol;
        const auto rows = run_sweep(data, model_id_from_path(sweep_opt.input), options);
        emit(sweep_opt.out, sweep_csv(rows));
    } else if (cmp_cmd->parsed()) {
        const FileFormat format = parse_file_format(cmp_opt.format);
        std::vector<ComparisonInput> inputs;
        for (const std::string& path : cmp_opt.inputs)
            inputs.push_back(ComparisonInput{model_id_from_path(path), load_binary(path, format)});
        SweepOptions options;
        options.bins = cmp_opt.bins;
        if (options.bins.empty()) {
            options.bins.push_back(1);
            for (int m = 10; m <= 100; m += 10) options.bins.push_back(m);
        }
        options.kernel = parse_kernel_base(cmp_opt.kernel);
        options.mc_samples = cmp_opt.samples;
        options.seed = seed;
        options.clamp_tol = global.clamp_tol;
        std::map<std::string, double> smece;
        const bool have_smece = !cmp_opt.smece_file.empty();
        if (have_smece) smece = load_smece(cmp_opt.smece_file);
        const ComparisonResult result =
            run_comparison(inputs, options, have_smece ? &smece : nullptr);
        for (const std::string& model : result.models_without_smece)
            note(global, "compare: no smece value for model '" + model + "', skipped");
        emit(cmp_opt.out, comparison_csv(result.rows));
    } else if (cons_cmd->parsed()) {
        ConsistencyOptions options;
        options.dist = parse_distribution(cons_opt.dist);
        options.n_list = cons_opt.n_list;
        options.sigma = cons_opt.sigma;
        options.kernel = parse_kernel_base(cons_opt.kernel);
        options.repeats = cons_opt.repeats;
        options.mc_samples = cons_opt.samples;
        options.seed = seed;
        options.alpha = cons_opt.alpha;
        options.clamp_tol = global.clamp_tol;
        options.reference_n = cons_opt.reference_n;
        emit(cons_opt.out, consistency_csv(run_consistency(options)));
    } else if (sl_cmd->parsed()) {
        SigmaLimitOptions options;
        options.dist = parse_distribution(sl_opt.dist);
        options.n = sl_opt.n;
        options.sigma_list = sl_opt.sigma_list;
        options.kernel = parse_kernel_base(sl_opt.kernel);
        options.mc_samples = sl_opt.samples;
        options.seed = seed;
        options.ref_bins = sl_opt.ref_bins;
        options.clamp_tol = global.clamp_tol;
        emit(sl_opt.out, sigma_limit_csv(run_sigma_limit(options)));
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const calmet::parse_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParse;
    } catch (const calmet::precondition_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitPrecondition;
    } catch (const calmet::numeric_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumeric;
    }
}
