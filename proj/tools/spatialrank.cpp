// Command-line front end wiring the pipeline end to end: dataset prep,
// augmentation, training, prior construction, clause ranking, evaluation,
// synthetic data generation, and gradient checking. Every subcommand is
// deterministic given its flags and seed, and writes a config-echo file
// recording the effective settings.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "spatialrank/core.hpp"
#include "spatialrank/dataset.hpp"
#include "spatialrank/eval.hpp"
#include "spatialrank/mlp.hpp"
#include "spatialrank/ranking.hpp"
#include "spatialrank/synthgen.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace spatialrank;

namespace {

void write_config_echo(const fs::path& path, const std::string& subcommand, json settings) {
    settings["subcommand"] = subcommand;
    write_text_atomic(path, settings.dump(2) + "\n");
}

json load_json_file(const fs::path& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open: " + path.string());
    json j;
    f >> j;
    return j;
}

ClauseInstance load_single_instance(const fs::path& path) {
    auto records = parse_records_file(path);
    if (records.empty()) throw std::runtime_error("no record found in " + path.string());
    auto [instances, summary] = prepare(records);
    if (instances.empty())
        throw std::runtime_error("record in " + path.string() +
                                 " did not survive preparation (label/relation/grounding)");
    return instances.front();
}

int run_prep(const fs::path& input, const fs::path& out_dir, double ratio, std::uint64_t seed,
             double min_conf) {
    fs::create_directories(out_dir);
    auto records = parse_records_file(input);
    auto [instances, summary] = prepare(records, PrepareOptions{min_conf});
    SplitPair split = stratified_split(instances, ratio, seed);
    write_instances_jsonl(out_dir / "train.jsonl", split.train);
    write_instances_jsonl(out_dir / "test.jsonl", split.test);
    json sj = summary_to_json(summary);
    sj["train_size"] = split.train.size();
    sj["test_size"] = split.test.size();
    write_text_atomic(out_dir / "summary.json", sj.dump(2) + "\n");
    write_config_echo(out_dir / "config.json", "prep",
                      {{"input", input.string()},
                       {"out_dir", out_dir.string()},
                       {"ratio", ratio},
                       {"seed", seed},
                       {"min_confidence", min_conf}});
    std::cout << "kept " << summary.kept << " of " << summary.input << " records; split "
              << split.train.size() << "/" << split.test.size() << "\n";
    return 0;
}

int run_augment(const fs::path& input, const fs::path& output, bool outside_symmetric) {
    auto instances = read_instances_jsonl(input);
    auto augmented = augment(instances, outside_symmetric);
    write_instances_jsonl(output, augmented);
    write_config_echo(fs::path(output.string() + ".config.json"), "augment",
                      {{"input", input.string()},
                       {"output", output.string()},
                       {"outside_symmetric", outside_symmetric}});
    std::cout << instances.size() << " -> " << augmented.size() << " instances\n";
    return 0;
}

int run_train(const fs::path& input, const fs::path& checkpoint_out, const TrainConfig& config) {
    auto instances = read_instances_jsonl(input);
    auto [model, losses] = train(instances, config);
    for (std::size_t e = 0; e < losses.size(); ++e)
        std::cout << "epoch " << (e + 1) << " loss " << losses[e] << "\n";
    save_checkpoint_file(checkpoint_out, model);
    write_config_echo(fs::path(checkpoint_out.string() + ".config.json"), "train",
                      {{"input", input.string()},
                       {"checkpoint", checkpoint_out.string()},
                       {"epochs", config.epochs},
                       {"batch_size", config.batch_size},
                       {"learning_rate", config.learning_rate},
                       {"seed", config.seed},
                       {"use_geo", config.use_geo},
                       {"shuffle", config.shuffle}});
    return 0;
}

int run_priors(const fs::path& input, const fs::path& output, double alpha) {
    auto instances = read_instances_jsonl(input);
    PriorTable priors = build_priors(instances, alpha);
    save_priors_file(output, priors);
    write_config_echo(fs::path(output.string() + ".config.json"), "priors",
                      {{"input", input.string()},
                       {"output", output.string()},
                       {"alpha", alpha},
                       {"pairs", priors.table.size()}});
    std::cout << "built priors for " << priors.table.size() << " name pairs\n";
    return 0;
}

int run_rank(const fs::path& checkpoint, const fs::path& instance_path,
             const std::string& priors_path, bool use_geo, const fs::path& echo) {
    MlpModel model = load_checkpoint_file(checkpoint);
    ClauseInstance instance = load_single_instance(instance_path);
    PriorTable priors;
    const bool use_priors = !priors_path.empty();
    if (use_priors) priors = load_priors_file(priors_path);
    auto scored = rank_clause(model, instance, use_priors ? &priors : nullptr, use_geo);
    for (const ScoredRelation& sr : scored)
        std::cout << relation_name(sr.relation) << "\t" << sr.score << "\n";
    write_config_echo(echo, "rank",
                      {{"checkpoint", checkpoint.string()},
                       {"instance", instance_path.string()},
                       {"priors", priors_path},
                       {"use_geo", use_geo}});
    return 0;
}

int run_eval(const fs::path& checkpoint, const fs::path& test_path,
             const std::string& priors_path, bool use_geo, const fs::path& report_out) {
    MlpModel model = load_checkpoint_file(checkpoint);
    auto test = read_instances_jsonl(test_path);
    PriorTable priors;
    const bool use_priors = !priors_path.empty();
    if (use_priors) priors = load_priors_file(priors_path);
    RankingReport report = evaluate(model, test, use_priors ? &priors : nullptr, use_geo);
    write_text_atomic(report_out, report_to_json(report).dump(2) + "\n");
    const std::string text = report_to_text(report);
    write_text_atomic(fs::path(report_out.string() + ".txt"), text);
    std::cout << text;
    write_config_echo(fs::path(report_out.string() + ".config.json"), "eval",
                      {{"checkpoint", checkpoint.string()},
                       {"test", test_path.string()},
                       {"priors", priors_path},
                       {"use_geo", use_geo},
                       {"report", report_out.string()}});
    return 0;
}

int run_synth(const SynthConfig& config, const fs::path& output) {
    auto instances = generate(config);
    write_instances_jsonl(output, instances);
    write_config_echo(fs::path(output.string() + ".config.json"), "synth",
                      {{"output", output.string()},
                       {"per_class", config.per_class},
                       {"seed", config.seed},
                       {"near_threshold", config.near_threshold},
                       {"far_threshold", config.far_threshold},
                       {"directional_gap", config.directional_gap},
                       {"containment_margin", config.containment_margin},
                       {"name_skew", config.name_skew}});
    std::cout << "generated " << instances.size() << " instances\n";
    return 0;
}

int run_gradcheck(std::uint64_t seed, int trials, const fs::path& echo) {
    double worst = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
        const std::uint64_t trial_seed = mix_seed(seed, static_cast<std::uint64_t>(trial));
        const bool use_geo = trial % 2 == 1;
        MlpModel model = MlpModel::init(feature_dim(use_geo), trial_seed);
        std::mt19937_64 rng(mix_seed(trial_seed, 0xBA7C4));
        std::vector<FeatureVector> batch;
        std::vector<int> labels;
        for (int i = 0; i < 12; ++i) {
            const double w = uniform_in(rng, 0.05, 0.5);
            const double h = uniform_in(rng, 0.05, 0.5);
            const BoundingBox a{uniform_in(rng, 0.0, 1.0 - w), uniform_in(rng, 0.0, 1.0 - h), h, w};
            const double w2 = uniform_in(rng, 0.05, 0.5);
            const double h2 = uniform_in(rng, 0.05, 0.5);
            const BoundingBox b{uniform_in(rng, 0.0, 1.0 - w2), uniform_in(rng, 0.0, 1.0 - h2), h2,
                                w2};
            batch.push_back(assemble_features(a, b, use_geo));
            labels.push_back(static_cast<int>(uniform_index(rng, kNumRelations)));
        }
        const double err = gradient_check(model, batch, labels, 1e-5, 200, trial_seed);
        worst = std::max(worst, err);
        std::cout << "trial " << trial << " max relative error " << err << "\n";
    }
    std::cout << "worst " << worst << (worst < 1e-4 ? " (ok)" : " (FAIL)") << "\n";
    write_config_echo(echo, "gradcheck", {{"seed", seed}, {"trials", trials}, {"worst", worst}});
    return worst < 1e-4 ? 0 : 1;
}

int run_coverage(const fs::path& cases_path, const fs::path& lexicon_path,
                 const fs::path& output) {
    std::ifstream f(cases_path);
    if (!f) throw std::runtime_error("cannot open: " + cases_path.string());
    std::vector<CoverageCase> cases;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j;
        try {
            j = json::parse(line);
            CoverageCase c;
            c.correct = j.at("correct").get<bool>();
            c.subject = j.at("subject").get<std::string>();
            c.object = j.at("object").get<std::string>();
            for (const auto& label : j.at("detected_labels"))
                c.detected_labels.insert(label.get<std::string>());
            cases.push_back(std::move(c));
        } catch (const json::exception& e) {
            throw ParseError(lineno, e.what());
        }
    }
    SynonymLexicon lexicon;
    const json lexicon_json = load_json_file(lexicon_path);  // items() must not outlive this
    for (const auto& [phrase, syns] : lexicon_json.items())
        lexicon[detail::normalize_phrase(phrase)] = syns.get<std::vector<std::string>>();
    CoverageBreakdown breakdown = detector_coverage_analysis(cases, lexicon);
    write_text_atomic(output, coverage_to_json(breakdown).dump(2) + "\n");
    std::cout << coverage_to_text(breakdown);
    write_config_echo(fs::path(output.string() + ".config.json"), "coverage",
                      {{"cases", cases_path.string()},
                       {"lexicon", lexicon_path.string()},
                       {"output", output.string()}});
    return 0;
}

int run_binary(const fs::path& input, const fs::path& echo) {
    std::ifstream f(input);
    if (!f) throw std::runtime_error("cannot open: " + input.string());
    std::vector<int> preds, labels;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            json j = json::parse(line);
            preds.push_back(j.at("prediction").get<int>());
            labels.push_back(j.at("label").get<int>());
        } catch (const json::exception& e) {
            throw ParseError(lineno, e.what());
        }
    }
    BinaryAccuracy acc = binary_accuracy(preds, labels);
    std::cout << "accuracy " << format_pct(acc.accuracy) << "% delta over chance "
              << format_pct(acc.delta_over_chance) << "%\n";
    write_config_echo(echo, "binary-acc",
                      {{"input", input.string()},
                       {"accuracy", acc.accuracy},
                       {"delta_over_chance", acc.delta_over_chance}});
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Compositional spatial-relationship ranking pipeline"};
    app.require_subcommand(1);

    // prep
    std::string in_path, out_path, out_dir, priors_path, lexicon_path, echo_path;
    double ratio = 0.8, min_conf = 0.0, alpha = 1.0;
    std::uint64_t seed = 0;
    bool use_geo = false, outside_symmetric = true, no_shuffle = false;
    TrainConfig train_cfg;
    SynthConfig synth_cfg;
    int trials = 20;

    auto* prep = app.add_subcommand("prep", "parse, filter/merge, and stratified-split a grounding JSONL");
    prep->add_option("input", in_path, "grounding JSONL")->required();
    prep->add_option("out_dir", out_dir, "output directory")->required();
    prep->add_option("--ratio", ratio, "train fraction")->capture_default_str();
    prep->add_option("--seed", seed, "split seed")->capture_default_str();
    prep->add_option("--min-conf", min_conf, "minimum grounding confidence")->capture_default_str();

    auto* aug = app.add_subcommand("augment", "factor-2 swap augmentation of a train JSONL");
    aug->add_option("input", in_path, "train JSONL")->required();
    aug->add_option("output", out_path, "augmented JSONL")->required();
    aug->add_flag("!--outside-asymmetric", outside_symmetric,
                  "treat 'outside' as asymmetric (errors during augmentation)");

    auto* tr = app.add_subcommand("train", "train the relation classifier");
    tr->add_option("input", in_path, "train JSONL")->required();
    tr->add_option("checkpoint", out_path, "checkpoint output path")->required();
    tr->add_flag("--geo", use_geo, "append geometry features");
    tr->add_option("--epochs", train_cfg.epochs)->capture_default_str();
    tr->add_option("--batch-size", train_cfg.batch_size)->capture_default_str();
    tr->add_option("--lr", train_cfg.learning_rate)->capture_default_str();
    tr->add_option("--seed", train_cfg.seed)->capture_default_str();
    tr->add_flag("--no-shuffle", no_shuffle, "disable per-epoch shuffling");

    auto* pr = app.add_subcommand("priors", "build smoothed co-occurrence priors");
    pr->add_option("input", in_path, "train JSONL")->required();
    pr->add_option("output", out_path, "prior table JSON")->required();
    pr->add_option("--alpha", alpha, "additive smoothing constant")->capture_default_str();

    auto* rk = app.add_subcommand("rank", "rank the 9 relations for one grounded clause");
    rk->add_option("checkpoint", in_path, "model checkpoint")->required();
    rk->add_option("instance", out_path, "single-instance JSON")->required();
    rk->add_option("--priors", priors_path, "prior table JSON");
    rk->add_flag("--geo", use_geo, "model expects geometry features");
    rk->add_option("--echo", echo_path, "config echo path")->default_val("rank.config.json");

    auto* ev = app.add_subcommand("eval", "evaluate a checkpoint on a test JSONL");
    ev->add_option("checkpoint", in_path, "model checkpoint")->required();
    ev->add_option("test", out_dir, "test JSONL")->required();
    ev->add_option("report", out_path, "report JSON output")->required();
    ev->add_option("--priors", priors_path, "prior table JSON");
    ev->add_flag("--geo", use_geo, "model expects geometry features");

    auto* sy = app.add_subcommand("synth", "generate the synthetic oracle dataset");
    sy->add_option("output", out_path, "output JSONL")->required();
    sy->add_option("--n", synth_cfg.per_class, "instances per class")->capture_default_str();
    sy->add_option("--seed", synth_cfg.seed)->capture_default_str();
    sy->add_option("--near", synth_cfg.near_threshold)->capture_default_str();
    sy->add_option("--far", synth_cfg.far_threshold)->capture_default_str();
    sy->add_option("--gap", synth_cfg.directional_gap)->capture_default_str();
    sy->add_option("--margin", synth_cfg.containment_margin)->capture_default_str();
    sy->add_option("--skew", synth_cfg.name_skew, "class-skewed name assignment probability")
        ->capture_default_str();

    auto* gc = app.add_subcommand("gradcheck", "finite-difference check of the backward pass");
    gc->add_option("--seed", seed)->capture_default_str();
    gc->add_option("--trials", trials)->capture_default_str();
    gc->add_option("--echo", echo_path, "config echo path")->default_val("gradcheck.config.json");

    auto* cov = app.add_subcommand("coverage", "detector-coverage breakdown of prediction cases");
    cov->add_option("cases", in_path, "cases JSONL")->required();
    cov->add_option("lexicon", lexicon_path, "synonym lexicon JSON")->required();
    cov->add_option("output", out_path, "breakdown JSON output")->required();

    auto* ba = app.add_subcommand("binary-acc", "accuracy and delta-over-chance of binary predictions");
    ba->add_option("input", in_path, "JSONL with {prediction, label} per line")->required();
    ba->add_option("--echo", echo_path, "config echo path")->default_val("binary-acc.config.json");

    CLI11_PARSE(app, argc, argv);

    try {
        if (prep->parsed()) return run_prep(in_path, out_dir, ratio, seed, min_conf);
        if (aug->parsed()) return run_augment(in_path, out_path, outside_symmetric);
        if (tr->parsed()) {
            train_cfg.use_geo = use_geo;
            train_cfg.shuffle = !no_shuffle;
            return run_train(in_path, out_path, train_cfg);
        }
        if (pr->parsed()) return run_priors(in_path, out_path, alpha);
        if (rk->parsed()) return run_rank(in_path, out_path, priors_path, use_geo, echo_path);
        if (ev->parsed()) return run_eval(in_path, out_dir, priors_path, use_geo, out_path);
        if (sy->parsed()) return run_synth(synth_cfg, out_path);
        if (gc->parsed()) return run_gradcheck(seed, trials, echo_path);
        if (cov->parsed()) return run_coverage(in_path, lexicon_path, out_path);
        if (ba->parsed()) return run_binary(in_path, echo_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
