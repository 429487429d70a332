#include "lcsvm/cli.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lcsvm/ensemble.hpp"
#include "lcsvm/evaluation.hpp"
#include "lcsvm/model_io.hpp"
#include "lcsvm/model_selection.hpp"
#include "lcsvm/synthetic.hpp"

namespace lcsvm {

namespace {

struct SolverFlags {
    double kkt_tol = 1e-3;
    std::uint64_t max_passes = 0;  // 0 = automatic

    void attach(CLI::App* cmd) {
        cmd->add_option("--kkt-tol", kkt_tol, "Solver KKT stopping tolerance")
            ->capture_default_str();
        cmd->add_option("--max-passes", max_passes,
                        "Pairwise update budget (0 = max(1000000, 100n))")
            ->capture_default_str();
    }

    SolverSettings settings() const {
        SolverSettings s;
        s.kkt_tolerance = kkt_tol;
        if (max_passes > 0) s.max_passes = max_passes;
        return s;
    }
};

KernelSpec make_kernel(const std::string& name, double gamma, int degree,
                       double scale, double coef0) {
    if (name == "linear") return LinearKernel{};
    if (name == "rbf") return RbfKernel{gamma};
    if (name == "polynomial") return PolynomialKernel{degree, scale, coef0};
    throw InputError("unknown kernel '" + name + "'");
}

KernelFamily make_family(const std::string& name) {
    if (name == "linear") return KernelFamily::Linear;
    if (name == "rbf") return KernelFamily::Rbf;
    if (name == "polynomial") return KernelFamily::Polynomial;
    throw InputError("unknown kernel '" + name + "'");
}

std::size_t model_support_vector_count(const MulticlassModel& model) {
    std::size_t count = 0;
    for (const auto& pair : model.pairs) count += pair.model.support_vectors.size();
    return count;
}

void write_json_file(const nlohmann::json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write report file " + path);
    out << j.dump(2) << "\n";
    if (!out) throw IoError("failed writing report file " + path);
}

void add_gensynth(CLI::App& app) {
    auto* cmd = app.add_subcommand(
        "gensynth", "Generate a seeded synthetic scene with training samples");
    auto spec = std::make_shared<SyntheticSpec>();
    auto out_samples = std::make_shared<std::string>();
    auto out_raster = std::make_shared<std::string>();
    auto out_reference = std::make_shared<std::string>();
    cmd->add_option("--seed", spec->seed, "Random seed")->capture_default_str();
    cmd->add_option("--classes", spec->classes, "Number of classes")
        ->capture_default_str();
    cmd->add_option("--bands", spec->bands, "Number of bands")
        ->capture_default_str();
    cmd->add_option("--per-class", spec->samples_per_class,
                    "Training samples per class")
        ->capture_default_str();
    cmd->add_option("--rows", spec->rows, "Raster rows")->capture_default_str();
    cmd->add_option("--cols", spec->cols, "Raster columns")->capture_default_str();
    cmd->add_option("--spread", spec->mean_spread,
                    "Class means drawn uniform in [-spread, spread]")
        ->capture_default_str();
    cmd->add_option("--noise", spec->noise_std, "Per-band noise std")
        ->capture_default_str();
    cmd->add_option("--out-samples", *out_samples, "Training sample CSV path")
        ->required();
    cmd->add_option("--out-raster", *out_raster, "Scene raster header path (.hdr)")
        ->required();
    cmd->add_option("--out-reference", *out_reference,
                    "Reference class map header path (.hdr)")
        ->required();
    cmd->callback([spec, out_samples, out_raster, out_reference]() {
        const SyntheticScene scene = gen_synthetic(*spec);
        write_samples_csv(scene.samples, *out_samples);
        write_raster(scene.raster, *out_raster);
        write_class_raster(scene.reference, *out_reference);
        std::cout << "wrote " << *out_samples << " (" << scene.samples.size()
                  << " samples, " << scene.samples.classes.size() << " classes)\n";
        std::cout << "wrote " << *out_raster << " (" << scene.raster.rows << "x"
                  << scene.raster.cols << "x" << scene.raster.bands << ")\n";
        std::cout << "wrote " << *out_reference << "\n";
    });
}

void add_train(CLI::App& app) {
    auto* cmd = app.add_subcommand(
        "train", "Train a one-vs-one multiclass SVM on labeled samples");
    auto samples_path = std::make_shared<std::string>();
    auto kernel_name = std::make_shared<std::string>();
    auto out_path = std::make_shared<std::string>();
    auto cost = std::make_shared<double>(10.0);
    auto gamma = std::make_shared<double>(0.5);
    auto degree = std::make_shared<int>(2);
    auto scale = std::make_shared<double>(1.0);
    auto coef0 = std::make_shared<double>(1.0);
    auto solver = std::make_shared<SolverFlags>();
    cmd->add_option("--samples", *samples_path, "Training sample CSV")->required();
    cmd->add_option("--kernel", *kernel_name, "Kernel type")
        ->required()
        ->check(CLI::IsMember({"linear", "rbf", "polynomial"}));
    cmd->add_option("--c", *cost, "Soft-margin cost C")->capture_default_str();
    cmd->add_option("--gamma", *gamma, "RBF gamma")->capture_default_str();
    cmd->add_option("--degree", *degree, "Polynomial degree")->capture_default_str();
    cmd->add_option("--scale", *scale, "Polynomial scale")->capture_default_str();
    cmd->add_option("--coef0", *coef0, "Polynomial coef0")->capture_default_str();
    cmd->add_option("--out", *out_path, "Model JSON output path")->required();
    solver->attach(cmd);
    cmd->callback([=]() {
        const SampleSet samples = read_samples_csv(*samples_path);
        const KernelSpec kernel =
            make_kernel(*kernel_name, *gamma, *degree, *scale, *coef0);
        const MulticlassModel model =
            train_multiclass(samples, kernel, *cost, solver->settings());
        save_model(model, *out_path);
        std::cout << "trained " << describe(kernel) << " model: "
                  << model.classes.size() << " classes, " << model.pairs.size()
                  << " pair models, " << model_support_vector_count(model)
                  << " support vectors\n";
        std::cout << "wrote " << *out_path << "\n";
    });
}

void add_cv(CLI::App& app) {
    auto* cmd = app.add_subcommand(
        "cv", "Grid-search C (and kernel parameters) by stratified k-fold CV");
    auto samples_path = std::make_shared<std::string>();
    auto kernel_name = std::make_shared<std::string>();
    auto grid = std::make_shared<GridSpec>();
    grid->c_values = {1.0, 10.0, 100.0};
    grid->gamma_values = {0.01, 0.1, 1.0};
    grid->coef0_values = {0.0, 1.0};
    auto json_path = std::make_shared<std::string>();
    auto solver = std::make_shared<SolverFlags>();
    cmd->add_option("--samples", *samples_path, "Training sample CSV")->required();
    cmd->add_option("--kernel", *kernel_name, "Kernel type")
        ->required()
        ->check(CLI::IsMember({"linear", "rbf", "polynomial"}));
    cmd->add_option("--c-values", grid->c_values, "C grid")
        ->delimiter(',')
        ->capture_default_str();
    cmd->add_option("--gamma-values", grid->gamma_values, "RBF gamma grid")
        ->delimiter(',')
        ->capture_default_str();
    cmd->add_option("--coef0-values", grid->coef0_values, "Polynomial coef0 grid")
        ->delimiter(',')
        ->capture_default_str();
    cmd->add_option("--degree", grid->degree, "Polynomial degree")
        ->capture_default_str();
    cmd->add_option("--scale", grid->scale, "Polynomial scale")
        ->capture_default_str();
    cmd->add_option("--folds", grid->folds, "Cross-validation folds")
        ->capture_default_str();
    cmd->add_option("--seed", grid->seed, "Partition shuffle seed")
        ->capture_default_str();
    cmd->add_option("--json", *json_path, "Also write the cell table as JSON");
    solver->attach(cmd);
    cmd->callback([=]() {
        const SampleSet samples = read_samples_csv(*samples_path);
        const CvResult result = grid_search_cv(samples, make_family(*kernel_name),
                                               *grid, solver->settings());
        std::cout << format_cv_report(result);
        if (!json_path->empty()) {
            write_json_file(cv_report_json(result), *json_path);
            std::cout << "wrote " << *json_path << "\n";
        }
    });
}

void add_classify(CLI::App& app) {
    auto* cmd = app.add_subcommand(
        "classify", "Classify a raster with a trained model (multiclass or ensemble)");
    auto model_path = std::make_shared<std::string>();
    auto raster_path = std::make_shared<std::string>();
    auto out_path = std::make_shared<std::string>();
    auto member_prefix = std::make_shared<std::string>();
    cmd->add_option("--model", *model_path, "Model JSON path")->required();
    cmd->add_option("--raster", *raster_path, "Input raster header (.hdr)")
        ->required();
    cmd->add_option("--out", *out_path, "Output class map header (.hdr)")
        ->required();
    cmd->add_option("--member-prefix", *member_prefix,
                    "Ensemble only: also write <prefix><member>.hdr maps");
    cmd->callback([=]() {
        const Raster raster = read_raster(*raster_path);
        LoadedModel loaded = load_model(*model_path);
        if (auto* model = std::get_if<MulticlassModel>(&loaded)) {
            ClassifyStats stats;
            const ClassRaster map = classify_raster(*model, raster, &stats);
            write_class_raster(map, *out_path);
            std::cout << "wrote " << *out_path << " (unclassified pixels: "
                      << stats.unclassified << ")\n";
        } else {
            const auto& ensemble = std::get<EnsembleModel>(loaded);
            const EnsemblePrediction prediction = predict_ensemble(ensemble, raster);
            write_class_raster(prediction.final_map, *out_path);
            std::cout << "wrote " << *out_path << " (unclassified pixels: "
                      << prediction.unclassified << ", vote ties: "
                      << prediction.tie_pixels << ")\n";
            if (!member_prefix->empty()) {
                for (std::size_t m = 0; m < ensemble.members.size(); ++m) {
                    const std::string path =
                        *member_prefix + ensemble.members[m].name + ".hdr";
                    write_class_raster(prediction.member_maps[m], path);
                    std::cout << "wrote " << path << "\n";
                }
            }
        }
    });
}

void add_ensemble_train(CLI::App& app) {
    auto* cmd = app.add_subcommand(
        "ensemble-train",
        "Train the linear + rbf + quadratic committee on one sample set");
    auto samples_path = std::make_shared<std::string>();
    auto out_path = std::make_shared<std::string>();
    auto cost = std::make_shared<double>(10.0);
    auto gamma = std::make_shared<double>(0.5);
    auto coef0 = std::make_shared<double>(1.0);
    auto weights_mode = std::make_shared<std::string>("none");
    auto folds = std::make_shared<std::size_t>(5);
    auto seed = std::make_shared<std::uint64_t>(0);
    auto solver = std::make_shared<SolverFlags>();
    cmd->add_option("--samples", *samples_path, "Training sample CSV")->required();
    cmd->add_option("--out", *out_path, "Ensemble model JSON output path")
        ->required();
    cmd->add_option("--c", *cost, "Soft-margin cost C for every member")
        ->capture_default_str();
    cmd->add_option("--gamma", *gamma, "RBF member gamma")->capture_default_str();
    cmd->add_option("--coef0", *coef0, "Quadratic member coef0")
        ->capture_default_str();
    cmd->add_option("--weights", *weights_mode,
                    "Vote weights: none, cv-kappa, or w1,w2,w3")
        ->capture_default_str();
    cmd->add_option("--folds", *folds, "Folds for --weights cv-kappa")
        ->capture_default_str();
    cmd->add_option("--seed", *seed, "Partition seed for --weights cv-kappa")
        ->capture_default_str();
    solver->attach(cmd);
    cmd->callback([=]() {
        const SampleSet samples = read_samples_csv(*samples_path);
        const auto specs = default_member_specs(*cost, *gamma, *coef0);
        EnsembleModel ensemble =
            train_ensemble(samples, specs, solver->settings());

        if (*weights_mode == "cv-kappa") {
            std::vector<double> weights;
            for (const auto& member : specs) {
                GridSpec grid;
                grid.c_values = {member.cost};
                grid.folds = *folds;
                grid.seed = *seed;
                if (const auto* rbf = std::get_if<RbfKernel>(&member.kernel))
                    grid.gamma_values = {rbf->gamma};
                if (const auto* poly =
                        std::get_if<PolynomialKernel>(&member.kernel)) {
                    grid.coef0_values = {poly->coef0};
                    grid.degree = poly->degree;
                    grid.scale = poly->scale;
                }
                const CvResult cv = grid_search_cv(
                    samples, family_of(member.kernel), grid, solver->settings());
                const double kappa_weight = *cv.best().mean_kappa;
                if (!(kappa_weight > 0.0))
                    throw InputError("member '" + member.name +
                                     "' has non-positive CV kappa " +
                                     std::to_string(kappa_weight) +
                                     "; supply explicit --weights");
                weights.push_back(kappa_weight);
                std::cout << "member " << member.name
                          << " cv-kappa weight: " << kappa_weight << "\n";
            }
            ensemble.weights = weights;
        } else if (*weights_mode != "none") {
            std::vector<double> weights;
            std::stringstream stream(*weights_mode);
            std::string item;
            while (std::getline(stream, item, ','))
                weights.push_back(std::stod(item));
            ensemble.weights = weights;
        }
        ensemble.validate();
        save_model(ensemble, *out_path);
        std::cout << "trained ensemble:";
        for (const auto& member : ensemble.members)
            std::cout << " " << member.name;
        std::cout << "\nwrote " << *out_path << "\n";
    });
}

void add_vote(CLI::App& app) {
    auto* cmd = app.add_subcommand(
        "vote", "Combine saved class maps by per-pixel majority vote");
    auto map_paths = std::make_shared<std::vector<std::string>>();
    auto out_path = std::make_shared<std::string>();
    auto weights = std::make_shared<std::vector<double>>();
    auto verbose = std::make_shared<bool>(false);
    cmd->add_option("maps", *map_paths, "Class map headers (.hdr), member order")
        ->required()
        ->expected(2, -1);
    cmd->add_option("--out", *out_path, "Output class map header (.hdr)")
        ->required();
    cmd->add_option("--weights", *weights, "Per-map vote weights")->delimiter(',');
    cmd->add_flag("--verbose", *verbose, "Also print the pairwise disagreement matrix");
    cmd->callback([=]() {
        std::vector<ClassRaster> maps;
        for (const auto& path : *map_paths)
            maps.push_back(read_class_raster(path));
        const VoteMapsResult result = vote_maps(maps, *weights);
        write_class_raster(result.map, *out_path);
        std::cout << "wrote " << *out_path << " (vote ties: " << result.tie_pixels
                  << ")\n";
        if (*verbose) {
            const Matrix d = disagreement(maps);
            std::cout << "pairwise disagreement:\n";
            std::cout << std::fixed << std::setprecision(4);
            for (std::size_t a = 0; a < d.rows; ++a) {
                for (std::size_t b = 0; b < d.cols; ++b)
                    std::cout << (b ? " " : "") << d.at(a, b);
                std::cout << "\n";
            }
        }
    });
}

void add_evaluate(CLI::App& app) {
    auto* cmd = app.add_subcommand(
        "evaluate", "Error matrix and kappa of a predicted map against reference");
    auto reference_path = std::make_shared<std::string>();
    auto predicted_path = std::make_shared<std::string>();
    auto json_path = std::make_shared<std::string>();
    cmd->add_option("--reference", *reference_path, "Reference class map (.hdr)")
        ->required();
    cmd->add_option("--predicted", *predicted_path, "Predicted class map (.hdr)")
        ->required();
    cmd->add_option("--json", *json_path, "Also write the report as JSON");
    cmd->callback([=]() {
        const ClassRaster reference = read_class_raster(*reference_path);
        const ClassRaster predicted = read_class_raster(*predicted_path);
        const ErrorMatrix matrix = build_error_matrix(reference, predicted);
        std::cout << format_report(matrix);
        if (!json_path->empty()) {
            write_json_file(report_json(matrix), *json_path);
            std::cout << "wrote " << *json_path << "\n";
        }
    });
}

void add_render(CLI::App& app) {
    auto* cmd = app.add_subcommand("render", "Render a class map to a PPM image");
    auto map_path = std::make_shared<std::string>();
    auto out_path = std::make_shared<std::string>();
    auto palette_path = std::make_shared<std::string>();
    cmd->add_option("--map", *map_path, "Class map header (.hdr)")->required();
    cmd->add_option("--out", *out_path, "Output PPM path")->required();
    cmd->add_option("--palette", *palette_path,
                    "Palette file ('classname R G B' per line); default colors "
                    "when omitted");
    cmd->callback([=]() {
        const ClassRaster map = read_class_raster(*map_path);
        const ClassPalette palette =
            palette_path->empty() ? default_palette(map.classes.size())
                                  : read_palette(*palette_path, map.classes);
        render_ppm(map, palette, *out_path);
        std::cout << "wrote " << *out_path << "\n";
    });
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{
        "lcsvm - SVM committee training and per-pixel raster classification"};
    app.require_subcommand(1);
    add_gensynth(app);
    add_cv(app);
    add_train(app);
    add_classify(app);
    add_ensemble_train(app);
    add_vote(app);
    add_evaluate(app);
    add_render(app);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace lcsvm
