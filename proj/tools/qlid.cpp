// Command-line surface for the quantum-like influence diagram engine:
// inference, expected utility, phase fitting, sweeps, and the experiment
// reproduction report.

#include <algorithm>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qlid/calibration.hpp"
#include "qlid/errors.hpp"
#include "qlid/experiment.hpp"
#include "qlid/inference.hpp"
#include "qlid/report.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitDegenerate = 3;
constexpr int kExitNoSolution = 4;

double require_theta(const qlid::ExperimentRecord& record, const std::optional<double>& theta) {
    if (theta) {
        return *theta;
    }
    if (record.theta) {
        return *record.theta;
    }
    throw qlid::ValidationError("spec has no theta; pass --theta");
}

void print_inference(const qlid::InferenceResult& result) {
    std::cout << std::left << std::setw(16) << "outcome" << std::right << std::setw(14)
              << "classical" << std::setw(14) << "interference" << std::setw(14) << "unnormalized"
              << std::setw(14) << "probability" << "\n";
    for (std::size_t i = 0; i < result.outcomes().size(); ++i) {
        const qlid::OutcomeScore& s = result.scores()[i];
        std::cout << std::left << std::setw(16) << result.outcomes()[i] << std::right
                  << std::setw(14) << qlid::format_number(s.classical_part) << std::setw(14)
                  << qlid::format_number(s.interference_part) << std::setw(14)
                  << qlid::format_number(s.unnormalized) << std::setw(14)
                  << qlid::format_number(result.normalized()[i]) << "\n";
    }
    std::cout << "gamma = " << qlid::format_number(result.gamma()) << "\n";
}

void print_meu(const qlid::MeuResult& meu) {
    std::cout << std::left << std::setw(16) << "context";
    for (const std::string& action : meu.actions()) {
        std::cout << std::right << std::setw(14) << action;
    }
    std::cout << std::right << std::setw(14) << "chosen" << "\n";
    for (const std::string& context : meu.contexts()) {
        std::cout << std::left << std::setw(16) << context;
        for (const std::string& action : meu.actions()) {
            std::cout << std::right << std::setw(14)
                      << qlid::format_number(meu.expected_utility(context, action));
        }
        std::cout << std::right << std::setw(14) << meu.chosen(context) << "\n";
    }
}

std::vector<qlid::ExperimentRecord> resolve_dataset(const std::string& dataset) {
    if (dataset == "builtin") {
        return qlid::builtin_corpus();
    }
    const std::filesystem::path path(dataset);
    std::vector<qlid::ExperimentRecord> records;
    if (std::filesystem::is_directory(path)) {
        std::vector<std::filesystem::path> files;
        for (const auto& entry : std::filesystem::directory_iterator(path)) {
            if (entry.path().extension() == ".spec") {
                files.push_back(entry.path());
            }
        }
        std::sort(files.begin(), files.end());
        for (const auto& file : files) {
            records.push_back(qlid::parse_spec(file));
        }
        if (records.empty()) {
            throw qlid::ValidationError("no .spec files in '" + dataset + "'");
        }
    } else {
        records.push_back(qlid::parse_spec(path));
    }
    return records;
}

void print_report(const qlid::RunReport& report) {
    std::cout << std::left << std::setw(16) << "experiment" << std::setw(38) << "quantity"
              << std::right << std::setw(13) << "paper" << std::setw(13) << "computed"
              << std::setw(12) << "delta" << std::setw(11) << "tolerance" << std::setw(6)
              << "pass" << "\n";
    for (const qlid::ReportRow& row : report.rows) {
        const std::string paper =
            row.paper_value ? qlid::format_number(*row.paper_value) : row.paper_label;
        const std::string computed =
            row.computed_value ? qlid::format_number(*row.computed_value) : row.computed_label;
        std::cout << std::left << std::setw(16) << row.experiment << std::setw(38) << row.quantity
                  << std::right << std::setw(13) << paper << std::setw(13) << computed
                  << std::setw(12) << (row.delta ? qlid::format_number(*row.delta) : "")
                  << std::setw(11) << (row.tolerance ? qlid::format_number(*row.tolerance) : "")
                  << std::setw(6) << (row.pass ? (*row.pass ? "yes" : "NO") : "") << "\n";
    }
}

int run(int argc, char** argv) {
    CLI::App app{"Exact inference and expected utility for quantum-like influence diagrams"};
    app.require_subcommand(1);

    std::string spec_path;
    std::optional<double> theta;
    bool classical = false;
    std::string mode;
    double target = 0.0;
    std::size_t grid = qlid::kDefaultFitGrid;
    std::string what;
    std::size_t steps = 0;
    std::string out_path;
    std::string dataset = "builtin";
    bool parallel = false;

    CLI::App* cmd_infer = app.add_subcommand("infer", "Unknown-condition inference for a spec");
    cmd_infer->add_option("--spec", spec_path, "experiment spec file")->required();
    auto* infer_theta = cmd_infer->add_option("--theta", theta, "phase difference in radians");
    cmd_infer->add_flag("--classical", classical, "drop the interference terms")
        ->excludes(infer_theta);

    CLI::App* cmd_meu = app.add_subcommand("meu", "Maximum expected utility table");
    cmd_meu->add_option("--spec", spec_path, "experiment spec file")->required();
    cmd_meu->add_option("--mode", mode, "classical or quantum")
        ->required()
        ->check(CLI::IsMember({"classical", "quantum"}));
    cmd_meu->add_option("--theta", theta, "phase difference in radians");

    CLI::App* cmd_fit = app.add_subcommand("fit-theta", "Fit the phase to a target probability");
    cmd_fit->add_option("--spec", spec_path, "experiment spec file")->required();
    cmd_fit->add_option("--target", target, "target defect probability")->required();
    cmd_fit->add_option("--grid", grid, "grid points for the scan");

    CLI::App* cmd_sweep = app.add_subcommand("sweep", "Sample a quantity over the phase range");
    cmd_sweep->add_option("--spec", spec_path, "experiment spec file")->required();
    cmd_sweep->add_option("--what", what, "prob or eu")
        ->required()
        ->check(CLI::IsMember({"prob", "eu"}));
    cmd_sweep->add_option("--steps", steps, "number of samples")->required();
    cmd_sweep->add_option("--out", out_path, "output CSV path")->required();

    CLI::App* cmd_repro = app.add_subcommand("reproduce", "Reproduce the experiment corpus");
    cmd_repro->add_option("--dataset", dataset, "builtin, a spec file, or a directory of specs");
    cmd_repro->add_option("--out", out_path, "also write the report as CSV");
    cmd_repro->add_option("--grid", grid, "grid points for the phase refits");
    cmd_repro->add_flag("--parallel", parallel, "run experiments concurrently");

    CLI::App* cmd_validate = app.add_subcommand("validate", "Check a spec file");
    cmd_validate->add_option("--spec", spec_path, "experiment spec file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    if (cmd_infer->parsed()) {
        qlid::LoadedSpec spec = qlid::load_spec(spec_path);
        const auto& net = spec.problem.network();
        const std::string query(qlid::pd::kContextVariable);
        if (classical) {
            print_inference(qlid::infer_classical(net, query, {}));
        } else {
            const double t = require_theta(spec.record, theta);
            std::cout << "theta = " << qlid::format_number(t) << "\n";
            print_inference(qlid::infer(net, query, {}, t));
        }
    } else if (cmd_meu->parsed()) {
        qlid::LoadedSpec spec = qlid::load_spec(spec_path);
        if (mode == "classical") {
            print_meu(qlid::classical_meu(spec.problem));
        } else {
            const double t = require_theta(spec.record, theta);
            std::cout << "theta = " << qlid::format_number(t) << "\n";
            print_meu(qlid::quantum_meu(spec.problem, t));
        }
    } else if (cmd_fit->parsed()) {
        qlid::LoadedSpec spec = qlid::load_spec(spec_path);
        qlid::ThetaFitResult fit =
            qlid::fit_theta(spec.problem.network(), qlid::pd::kContextVariable, {},
                            qlid::pd::kRiskAverse, target, grid);
        std::cout << "grid_resolution = " << qlid::format_number(fit.grid_resolution) << "\n";
        std::cout << "attainable = [" << qlid::format_number(fit.attainable_min) << ", "
                  << qlid::format_number(fit.attainable_max) << "]\n";
        for (std::size_t i = 0; i < fit.solutions.size(); ++i) {
            std::cout << "theta = " << qlid::format_number(fit.solutions[i])
                      << "  residual = " << qlid::format_number(fit.residuals[i]) << "\n";
        }
    } else if (cmd_sweep->parsed()) {
        qlid::LoadedSpec spec = qlid::load_spec(spec_path);
        if (what == "prob") {
            qlid::SweepCurve curve =
                qlid::sweep_probability(spec.problem.network(), qlid::pd::kContextVariable, {},
                                        qlid::pd::kRiskAverse, steps);
            qlid::write_curve_csv(curve, out_path);
            std::cout << "wrote " << out_path << "\n";
        } else {
            qlid::EuSweepResult sweep = qlid::sweep_expected_utility(spec.problem, steps);
            std::filesystem::path dominance(out_path);
            dominance.replace_extension(".dominance.csv");
            qlid::write_eu_sweep_csv(sweep, out_path, dominance);
            std::cout << "wrote " << out_path << " and " << dominance.string() << "\n";
        }
    } else if (cmd_repro->parsed()) {
        qlid::ReproduceOptions options;
        options.fit_grid = grid;
        options.parallel = parallel;
        qlid::RunReport report = qlid::reproduce(resolve_dataset(dataset), options);
        print_report(report);
        if (!out_path.empty()) {
            qlid::write_report_csv(report, out_path);
            std::cout << "wrote " << out_path << "\n";
        }
    } else if (cmd_validate->parsed()) {
        qlid::LoadedSpec spec = qlid::load_spec(spec_path);
        std::cout << spec_path << ": ok (experiment '" << spec.record.name << "')\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const qlid::NoSolutionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNoSolution;
    } catch (const qlid::DegenerateQueryError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDegenerate;
    } catch (const qlid::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
