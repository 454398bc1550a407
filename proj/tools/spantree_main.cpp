// Command-line front end: train / classify / evaluate / sweep / grid.
//
// Configuration comes from an optional JSON file (--config) overridden by
// flags. Every run writes a manifest (config echo + output hashes) next to
// its outputs so experiments can be reproduced byte for byte.

#include <chrono>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "json.hpp"
#include "spantree/dataset.hpp"
#include "spantree/evaluation.hpp"
#include "spantree/inference.hpp"
#include "spantree/training.hpp"
#include "spantree/util.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;
using namespace spantree;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string dataset;
    std::string label_col = "-1";
    std::string positive_label;
    HyperParams hp;
    int folds = 5;
    std::vector<double> ratios = {0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    std::string out = "out";
    int jobs = 0;
    std::string objective = "closest";
    bool paper_literal_tiebreak = false;
    bool scale = false;
    int gamma_cap = kDefaultGammaCap;
    std::string model_path;
    std::string input_path;

    // grid sweep lists; singles above act as defaults when a list is absent
    std::map<std::string, std::vector<double>> grid;
};

const std::set<std::string> kKnownKeys = {
    "dataset",      "label_col", "positive_label", "gamma",   "boundary_alpha",
    "beta_alpha",   "best_spt",  "k_neighbours",   "k1",      "s_fraction",
    "seed",         "folds",     "ratios",         "out",     "jobs",
    "objective",    "paper_literal_tiebreak",      "scale",   "gamma_cap",
    "model",        "input",     "grid"};

const std::set<std::string> kKnownGridKeys = {"gamma",        "boundary_alpha", "beta_alpha",
                                              "best_spt",     "k_neighbours",   "k1"};

void apply_config_file(RunConfig& cfg, const std::string& path) {
    ordered_json j;
    try {
        j = ordered_json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw UsageError("config file is not valid JSON: " + std::string(e.what()));
    }
    if (!j.is_object()) throw UsageError("config root must be a JSON object");

    for (const auto& [key, value] : j.items()) {
        if (!kKnownKeys.count(key)) throw UsageError("unknown config key: " + key);
        if (key == "dataset") cfg.dataset = value.get<std::string>();
        else if (key == "label_col") cfg.label_col = value.is_string()
                                                         ? value.get<std::string>()
                                                         : std::to_string(value.get<long>());
        else if (key == "positive_label") cfg.positive_label = value.get<std::string>();
        else if (key == "gamma") cfg.hp.gamma = value.get<int>();
        else if (key == "boundary_alpha") cfg.hp.boundary_alpha = value.get<double>();
        else if (key == "beta_alpha") cfg.hp.beta_alpha = value.get<double>();
        else if (key == "best_spt") cfg.hp.best_spt = value.get<int>();
        else if (key == "k_neighbours") cfg.hp.k_neighbours = value.get<int>();
        else if (key == "k1") cfg.hp.k1 = value.get<int>();
        else if (key == "s_fraction") cfg.hp.s_fraction = value.get<double>();
        else if (key == "seed") cfg.hp.seed = value.get<std::uint64_t>();
        else if (key == "folds") cfg.folds = value.get<int>();
        else if (key == "ratios") cfg.ratios = value.get<std::vector<double>>();
        else if (key == "out") cfg.out = value.get<std::string>();
        else if (key == "jobs") cfg.jobs = value.get<int>();
        else if (key == "objective") cfg.objective = value.get<std::string>();
        else if (key == "paper_literal_tiebreak") cfg.paper_literal_tiebreak = value.get<bool>();
        else if (key == "scale") cfg.scale = value.get<bool>();
        else if (key == "gamma_cap") cfg.gamma_cap = value.get<int>();
        else if (key == "model") cfg.model_path = value.get<std::string>();
        else if (key == "input") cfg.input_path = value.get<std::string>();
        else if (key == "grid") {
            if (!value.is_object()) throw UsageError("grid must be a JSON object");
            for (const auto& [gkey, gval] : value.items()) {
                if (!kKnownGridKeys.count(gkey))
                    throw UsageError("unknown grid key: " + gkey);
                cfg.grid[gkey] = gval.get<std::vector<double>>();
            }
        }
    }
}

Objective parse_objective(const std::string& s) {
    if (s == "closest") return Objective::closest;
    if (s == "farthest") return Objective::farthest;
    throw UsageError("objective must be 'closest' or 'farthest', got '" + s + "'");
}

InferOptions infer_options(const RunConfig& cfg) {
    return {parse_objective(cfg.objective), cfg.paper_literal_tiebreak};
}

ordered_json config_echo(const RunConfig& cfg, const std::string& command) {
    ordered_json j;
    j["command"] = command;
    j["dataset"] = cfg.dataset;
    j["label_col"] = cfg.label_col;
    j["positive_label"] = cfg.positive_label;
    j["gamma"] = cfg.hp.gamma;
    j["boundary_alpha"] = format_full(cfg.hp.boundary_alpha);
    j["beta_alpha"] = format_full(cfg.hp.beta_alpha);
    j["best_spt"] = cfg.hp.best_spt;
    j["k_neighbours"] = cfg.hp.k_neighbours;
    j["k1"] = cfg.hp.k1;
    j["s_fraction"] = format_full(cfg.hp.s_fraction);
    j["seed"] = cfg.hp.seed;
    j["folds"] = cfg.folds;
    ordered_json ratios = ordered_json::array();
    for (double r : cfg.ratios) ratios.push_back(format_full(r));
    j["ratios"] = std::move(ratios);
    j["out"] = cfg.out;
    j["jobs"] = cfg.jobs;
    j["objective"] = cfg.objective;
    j["paper_literal_tiebreak"] = cfg.paper_literal_tiebreak;
    j["scale"] = cfg.scale;
    j["gamma_cap"] = cfg.gamma_cap;
    j["model"] = cfg.model_path;
    j["input"] = cfg.input_path;
    return j;
}

// Writes manifest.json with the effective config and a hash per output file.
// Entries are either names inside the output directory or explicit paths.
void write_manifest(const RunConfig& cfg, const std::string& command,
                    const std::vector<std::string>& output_files) {
    ordered_json manifest;
    manifest["config"] = config_echo(cfg, command);
    ordered_json outputs;
    for (const auto& file : output_files) {
        const fs::path p = fs::path(file).is_absolute() || fs::path(file).has_parent_path()
                               ? fs::path(file)
                               : fs::path(cfg.out) / file;
        outputs[file] = "fnv1a:" + fnv1a_hex(read_file(p.string()));
    }
    manifest["outputs"] = std::move(outputs);
    write_file((fs::path(cfg.out) / "manifest.json").string(), manifest.dump(1) + "\n");
}

Dataset load_dataset(const RunConfig& cfg) {
    if (cfg.dataset.empty()) throw UsageError("missing --dataset");
    if (cfg.positive_label.empty()) throw UsageError("missing --positive-label");
    return load_csv(cfg.dataset, cfg.label_col, cfg.positive_label);
}

void ensure_out_dir(const RunConfig& cfg) {
    std::error_code ec;
    fs::create_directories(cfg.out, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + cfg.out + ": " +
                                     ec.message());
}

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string headline(const std::string& dataset, const std::string& unit,
                     const MetricReport& m) {
    const auto cell = [](const std::optional<double>& v) {
        return v ? format_fixed(*v) : std::string("undefined");
    };
    std::ostringstream out;
    out << dataset << " [" << unit << "]  acc=" << cell(m.accuracy)
        << " sens=" << cell(m.sensitivity) << " spec=" << cell(m.specificity)
        << " prec=" << cell(m.precision) << " f1=" << cell(m.f1) << " auc=" << cell(m.auc);
    return out.str();
}

int cmd_train(const RunConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    validate(cfg.hp, cfg.gamma_cap);
    const Dataset d = load_dataset(cfg);
    ensure_out_dir(cfg);

    const auto split = make_class_split(d, cfg.hp.s_fraction, cfg.hp.seed);
    const auto model =
        train(split, cfg.hp, TrainOptions{cfg.paper_literal_tiebreak, cfg.gamma_cap});

    const std::string model_file =
        cfg.model_path.empty() ? (fs::path(cfg.out) / "model.json").string() : cfg.model_path;
    save_model(model, model_file);

    // Survivor statistics over both dictionaries.
    long min_s = -1;
    long max_s = 0;
    long total_s = 0;
    for (const auto* dict : {&model.zeta0, &model.zeta1}) {
        for (const auto& [owner, recs] : *dict) {
            const auto n = static_cast<long>(recs.size());
            min_s = (min_s < 0) ? n : std::min(min_s, n);
            max_s = std::max(max_s, n);
            total_s += n;
        }
    }
    const double mean_s =
        model.owners.empty() ? 0.0
                             : static_cast<double>(total_s) /
                                   (2.0 * static_cast<double>(model.owners.size()));

    std::cout << "trained on " << d.name << ": owners=" << model.owners.size()
              << " survivors/owner min=" << std::max(min_s, 0L) << " mean=" << format_fixed(mean_s)
              << " max=" << max_s << "\n";
    std::cout << "model written to " << model_file << "\n";
    std::cout << "wall_clock_s=" << format_fixed(elapsed_seconds(start)) << "\n";

    write_manifest(cfg, "train", {cfg.model_path.empty() ? "model.json" : model_file});
    return 0;
}

// Feature rows for classification: every row must carry exactly the model's
// feature count; a header row is auto-detected and skipped.
std::vector<std::vector<double>> load_feature_rows(const std::string& path, int expected_m) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open input file: " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        const auto cells = split(line, ',');
        std::vector<double> row;
        row.reserve(cells.size());
        bool numeric = true;
        for (const auto& c : cells) {
            const auto v = parse_finite_double(c);
            if (!v) {
                numeric = false;
                break;
            }
            row.push_back(*v);
        }
        if (!numeric) {
            if (first) {
                first = false;
                continue;  // header
            }
            throw std::runtime_error("non-numeric cell in input row: " + line);
        }
        first = false;
        if (static_cast<int>(row.size()) != expected_m) {
            std::ostringstream msg;
            msg << "feature dimension mismatch: expected " << expected_m << ", found "
                << row.size();
            throw std::runtime_error(msg.str());
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

int cmd_classify(const RunConfig& cfg) {
    if (cfg.model_path.empty()) throw UsageError("missing --model");
    if (cfg.input_path.empty()) throw UsageError("missing --input");
    ensure_out_dir(cfg);

    const auto model = load_model(cfg.model_path);
    const auto rows = load_feature_rows(cfg.input_path, model.feature_count);
    const auto preds = classify_batch(rows, model, infer_options(cfg));

    std::ostringstream out;
    out << "row,label,vote_share\n";
    for (std::size_t i = 0; i < preds.size(); ++i)
        out << i << ',' << preds[i].label << ',' << format_fixed(preds[i].vote_share()) << '\n';
    write_file((fs::path(cfg.out) / "predictions.csv").string(), out.str());

    std::cout << "classified " << preds.size() << " rows -> "
              << (fs::path(cfg.out) / "predictions.csv").string() << "\n";
    write_manifest(cfg, "classify", {"predictions.csv"});
    return 0;
}

int cmd_evaluate(const RunConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    validate(cfg.hp, cfg.gamma_cap);
    const Dataset d = load_dataset(cfg);
    ensure_out_dir(cfg);

    EvalOptions opts;
    opts.infer = infer_options(cfg);
    opts.scale = cfg.scale;
    opts.gamma_cap = cfg.gamma_cap;
    const auto cv = cross_validate(d, cfg.hp, cfg.folds, opts);

    std::vector<std::string> outputs;
    write_file((fs::path(cfg.out) / "metrics.csv").string(), metrics_csv(d.name, cv));
    outputs.push_back("metrics.csv");
    for (const auto& f : cv.folds) {
        const std::string name = "roc_fold" + std::to_string(f.fold) + ".tsv";
        write_file((fs::path(cfg.out) / name).string(), roc_tsv(f.metrics.roc_points));
        outputs.push_back(name);
    }
    write_file((fs::path(cfg.out) / "roc_pooled.tsv").string(), roc_tsv(cv.pooled.roc_points));
    outputs.push_back("roc_pooled.tsv");

    std::cout << headline(d.name, "pooled", cv.pooled) << "\n";
    std::cout << headline(d.name, "fold-mean", cv.mean) << "\n";
    std::cout << "wall_clock_s=" << format_fixed(elapsed_seconds(start)) << "\n";
    write_manifest(cfg, "evaluate", outputs);
    return 0;
}

int cmd_sweep(const RunConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    validate(cfg.hp, cfg.gamma_cap);
    if (cfg.ratios.empty()) throw UsageError("empty ratios list");
    const Dataset d = load_dataset(cfg);
    ensure_out_dir(cfg);

    EvalOptions opts;
    opts.infer = infer_options(cfg);
    opts.scale = cfg.scale;
    opts.gamma_cap = cfg.gamma_cap;
    const auto rows = train_ratio_sweep(d, cfg.hp, cfg.ratios, opts);

    write_file((fs::path(cfg.out) / "sweep.csv").string(), sweep_csv(d.name, rows));
    for (const auto& row : rows) {
        std::cout << d.name << " ratio=" << format_fixed(row.ratio) << " ";
        if (row.ok)
            std::cout << "mean=" << format_fixed(row.mean_accuracy)
                      << " min=" << format_fixed(row.min_accuracy)
                      << " max=" << format_fixed(row.max_accuracy) << "\n";
        else
            std::cout << "error: " << row.error << "\n";
    }
    std::cout << "wall_clock_s=" << format_fixed(elapsed_seconds(start)) << "\n";
    write_manifest(cfg, "sweep", {"sweep.csv"});
    return 0;
}

int cmd_grid(const RunConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    const Dataset d = load_dataset(cfg);
    ensure_out_dir(cfg);

    const auto list_of = [&](const std::string& key,
                             std::vector<double> fallback) -> std::vector<double> {
        const auto it = cfg.grid.find(key);
        return it != cfg.grid.end() ? it->second : fallback;
    };
    const auto gammas = list_of("gamma", {2, 3});
    const auto boundary_alphas = list_of("boundary_alpha", {0.3, 0.5, 0.7});
    const auto beta_alphas = list_of("beta_alpha", {0.3, 0.5, 0.7});
    const auto best_spts = list_of("best_spt", {1, 3, 8});
    const auto k_neighbours_list = list_of("k_neighbours", {1, 3, 5});
    const auto k1s = list_of("k1", {1, 2});

    EvalOptions opts;
    opts.infer = infer_options(cfg);
    opts.scale = cfg.scale;
    opts.gamma_cap = cfg.gamma_cap;

    std::ostringstream out;
    out << "dataset,gamma,boundary_alpha,beta_alpha,best_spt,k_neighbours,k1,"
           "pooled_accuracy,mean_auc\n";
    std::optional<HyperParams> best;
    double best_acc = -1.0;
    double best_auc = -1.0;
    long combos = 0;

    for (double g : gammas)
        for (double ba : boundary_alphas)
            for (double bb : beta_alphas)
                for (double bs : best_spts)
                    for (double kn : k_neighbours_list)
                        for (double k1 : k1s) {
                            HyperParams hp = cfg.hp;
                            hp.gamma = static_cast<int>(g);
                            hp.boundary_alpha = ba;
                            hp.beta_alpha = bb;
                            hp.best_spt = static_cast<int>(bs);
                            hp.k_neighbours = static_cast<int>(kn);
                            hp.k1 = static_cast<int>(k1);
                            ++combos;
                            std::string row_err;
                            double acc = 0.0;
                            double auc = 0.0;
                            try {
                                const auto cv = cross_validate(d, hp, cfg.folds, opts);
                                acc = cv.pooled.accuracy.value_or(0.0);
                                auc = cv.mean.auc.value_or(0.0);
                            } catch (const std::exception& e) {
                                row_err = e.what();
                            }
                            out << d.name << ',' << hp.gamma << ',' << format_fixed(ba) << ','
                                << format_fixed(bb) << ',' << hp.best_spt << ','
                                << hp.k_neighbours << ',' << hp.k1 << ',';
                            if (row_err.empty()) {
                                out << format_fixed(acc) << ',' << format_fixed(auc) << '\n';
                                if (acc > best_acc || (acc == best_acc && auc > best_auc)) {
                                    best = hp;
                                    best_acc = acc;
                                    best_auc = auc;
                                }
                            } else {
                                std::replace(row_err.begin(), row_err.end(), ',', ';');
                                out << ",error: " << row_err << '\n';
                            }
                        }

    write_file((fs::path(cfg.out) / "grid.csv").string(), out.str());
    if (best) {
        std::cout << "best of " << combos << " configs on " << d.name << ": gamma="
                  << best->gamma << " boundary_alpha=" << format_fixed(best->boundary_alpha)
                  << " beta_alpha=" << format_fixed(best->beta_alpha)
                  << " best_spt=" << best->best_spt << " k_neighbours=" << best->k_neighbours
                  << " k1=" << best->k1 << " -> accuracy=" << format_fixed(best_acc)
                  << " auc=" << format_fixed(best_auc) << "\n";
    } else {
        std::cout << "no grid combination completed successfully\n";
    }
    std::cout << "wall_clock_s=" << format_fixed(elapsed_seconds(start)) << "\n";
    write_manifest(cfg, "grid", {"grid.csv"});
    return 0;
}

void add_common_flags(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--config", "JSON config file (flags override it)")
        ->check(CLI::ExistingFile);
    sub->add_option("--dataset", cfg.dataset, "CSV dataset path");
    sub->add_option("--label-col", cfg.label_col,
                    "label column: 0-based index, 'last'/-1, or header name");
    sub->add_option("--positive-label", cfg.positive_label, "raw label mapped to +1");
    sub->add_option("--gamma", cfg.hp.gamma, "neighborhood size");
    sub->add_option("--boundary-alpha", cfg.hp.boundary_alpha,
                    "quantile of sorted edge lengths used as tree boundary");
    sub->add_option("--beta-alpha", cfg.hp.beta_alpha,
                    "quantile of harvested weight sums used as beta");
    sub->add_option("--best-spt", cfg.hp.best_spt, "trees kept per class at test time");
    sub->add_option("--k-neighbours", cfg.hp.k_neighbours,
                    "dictionary owners consulted for beta");
    sub->add_option("--k1", cfg.hp.k1, "edges compared in the pairwise tie-break");
    sub->add_option("--s-fraction", cfg.hp.s_fraction, "fraction of train drawn as probes");
    sub->add_option("--seed", cfg.hp.seed, "random seed");
    sub->add_option("--folds", cfg.folds, "cross-validation folds");
    sub->add_option("--ratios", cfg.ratios, "train ratios for sweep")->delimiter(',');
    sub->add_option("--out", cfg.out, "output directory");
    sub->add_option("--jobs", cfg.jobs, "worker threads (0 = library default)");
    sub->add_option("--objective", cfg.objective, "tree selection: closest|farthest");
    sub->add_flag("--paper-literal-tiebreak", cfg.paper_literal_tiebreak,
                  "use the inverted tie-break orientation");
    sub->add_flag("--scale", cfg.scale, "min-max scale features (fit on train only)");
    sub->add_option("--gamma-cap", cfg.gamma_cap, "enumeration cap on gamma");
    sub->add_option("--model", cfg.model_path, "model file path");
    sub->add_option("--input", cfg.input_path, "feature rows to classify");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spanning-tree neighborhood classifier"};
    app.require_subcommand(1);

    RunConfig cfg;

    // Pre-scan for --config so flag values override file values.
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            try {
                apply_config_file(cfg, argv[i + 1]);
            } catch (const UsageError& e) {
                std::cerr << "error: " << e.what() << "\n";
                return 2;
            } catch (const std::exception& e) {
                std::cerr << "error: " << e.what() << "\n";
                return 2;
            }
        }
    }

    auto* train_cmd = app.add_subcommand("train", "fit a model and save it");
    auto* classify_cmd = app.add_subcommand("classify", "label feature rows with a model");
    auto* evaluate_cmd = app.add_subcommand("evaluate", "k-fold cross-validation report");
    auto* sweep_cmd = app.add_subcommand("sweep", "accuracy across train ratios");
    auto* grid_cmd = app.add_subcommand("grid", "hyperparameter grid search");
    for (auto* sub : {train_cmd, classify_cmd, evaluate_cmd, sweep_cmd, grid_cmd})
        add_common_flags(sub, cfg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

#ifdef _OPENMP
    if (cfg.jobs > 0) omp_set_num_threads(cfg.jobs);
#endif

    try {
        if (train_cmd->parsed()) return cmd_train(cfg);
        if (classify_cmd->parsed()) return cmd_classify(cfg);
        if (evaluate_cmd->parsed()) return cmd_evaluate(cfg);
        if (sweep_cmd->parsed()) return cmd_sweep(cfg);
        if (grid_cmd->parsed()) return cmd_grid(cfg);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
