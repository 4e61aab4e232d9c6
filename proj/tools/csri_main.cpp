#include <iostream>

#include "CLI11.hpp"
#include "csri/cli/commands.hpp"
#include "csri/synth/faces.hpp"

namespace {

csri::cli::ExperimentConfig load_with_overrides(const std::string& config_path,
                                                const std::optional<uint64_t>& seed,
                                                const std::string& workspace) {
    csri::cli::ExperimentConfig cfg = csri::cli::load_config(config_path);
    if (seed) cfg.seed = *seed;
    if (!workspace.empty()) cfg.workspace = workspace;
    cfg.train.seed = csri::cli::train_seed(cfg);
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Joint super-resolution and identity training with a 1:N "
                 "identification benchmark harness"};
    app.require_subcommand(1);

    std::string config_path, workspace, variant_name = "csri", checkpoint_path;
    std::optional<uint64_t> seed_override;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "experiment config file")->required();
        cmd->add_option("--seed", seed_override, "override the experiment seed");
        cmd->add_option("--workspace", workspace, "override the workspace directory");
    };

    CLI::App* prepare = app.add_subcommand("prepare", "synthesize domains and write manifests");
    add_common(prepare);

    CLI::App* train = app.add_subcommand("train", "train one variant");
    add_common(train);
    train->add_option("--variant", variant_name,
                      "fr_only | independent_sr_fr | joint_sr_fr | csri");

    CLI::App* eval = app.add_subcommand("eval", "evaluate a trained checkpoint");
    add_common(eval);
    eval->add_option("--variant", variant_name, "variant whose checkpoint to evaluate");
    eval->add_option("--checkpoint", checkpoint_path, "explicit checkpoint path");

    CLI::App* compare = app.add_subcommand("compare", "tabulate evaluated variants");
    add_common(compare);

    csri::synth::CorpusSpec spec;
    std::string corpus_out;
    CLI::App* makec = app.add_subcommand("make-corpus", "generate a synthetic face corpus");
    makec->add_option("--out", corpus_out, "output directory")->required();
    makec->add_option("--identities", spec.identities, "number of labelled identities");
    makec->add_option("--images-per-id", spec.images_per_identity, "images per identity");
    makec->add_option("--size", spec.image_size, "square image size in pixels");
    makec->add_option("--distractors", spec.distractor_images, "unlabelled distractor images");
    makec->add_option("--seed", spec.seed, "generator seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (makec->parsed()) {
            csri::synth::generate_corpus(spec, corpus_out);
            std::cout << "make-corpus: " << spec.identities << " identities x "
                      << spec.images_per_identity << " images + " << spec.distractor_images
                      << " distractors -> " << corpus_out << "\n";
            return 0;
        }

        csri::cli::ExperimentConfig cfg =
            load_with_overrides(config_path, seed_override, workspace);

        if (prepare->parsed()) {
            csri::cli::cmd_prepare(cfg);
        } else if (train->parsed()) {
            csri::cli::cmd_train(cfg, csri::train::variant_from_string(variant_name));
        } else if (eval->parsed()) {
            std::optional<std::filesystem::path> ckpt;
            if (!checkpoint_path.empty()) ckpt = checkpoint_path;
            csri::cli::cmd_eval(cfg, csri::train::variant_from_string(variant_name), ckpt);
        } else if (compare->parsed()) {
            csri::cli::cmd_compare(cfg);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: invalid-input: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: runtime: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
