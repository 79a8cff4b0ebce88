// Command-line front end: op-counting benchmarks, training runs, corner
// locus extraction, component labeling, and approximator fitting.
// Exit codes: 0 success, 1 usage error, 2 data or domain error.

#include "tropical/bench.hpp"
#include "tropical/io.hpp"
#include "tropical/topology.hpp"
#include "tropical/training.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> parts;
    std::string part;
    for (char c : text) {
        if (c == ',') {
            parts.push_back(part);
            part.clear();
        } else {
            part += c;
        }
    }
    parts.push_back(part);
    return parts;
}

std::vector<double> parse_double_list(const std::string& text, const char* what) {
    std::vector<double> out;
    for (const auto& part : split_list(text)) {
        const tropical::TropicalScalar v = tropical::parse_scalar(part);
        if (v.is_neg_inf()) throw std::runtime_error(std::string(what) + ": entries must be finite");
        out.push_back(v.v);
    }
    return out;
}

std::vector<long> parse_long_list(const std::string& text, const char* what) {
    std::vector<long> out;
    for (const auto& part : split_list(text)) {
        std::size_t used = 0;
        long v = 0;
        try {
            v = std::stol(part, &used);
        } catch (const std::exception&) {
            throw std::runtime_error(std::string(what) + ": invalid integer '" + part + "'");
        }
        if (used != part.size())
            throw std::runtime_error(std::string(what) + ": invalid integer '" + part + "'");
        out.push_back(v);
    }
    return out;
}

// --bbox lo,hi per axis; --res one value for all axes or one per axis.
tropical::GridSpec grid_from_flags(const std::string& bbox, const std::string& res) {
    const auto bounds = parse_double_list(bbox, "--bbox");
    if (bounds.empty() || bounds.size() % 2 != 0)
        throw std::runtime_error("--bbox: need lo,hi per axis (an even number of values)");
    const std::size_t dims = bounds.size() / 2;
    auto resolutions = parse_long_list(res, "--res");
    if (resolutions.size() == 1) resolutions.assign(dims, resolutions.front());
    if (resolutions.size() != dims)
        throw std::runtime_error("--res: need one value, or one per axis");
    tropical::GridSpec grid;
    for (std::size_t a = 0; a < dims; ++a) {
        grid.lower.push_back(bounds[2 * a]);
        grid.upper.push_back(bounds[2 * a + 1]);
        grid.resolution.push_back(static_cast<int>(resolutions[a]));
    }
    grid.validate();
    return grid;
}

void write_text(const std::string& path, const std::string& content) {
    if (path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
    out << content;
    if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open input file '" + path + "'");
    return in;
}

std::uint64_t env_seed() {
    const char* env = std::getenv("TROPICAL_SEED");
    if (!env) return 0;
    const std::string text(env);
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
        v = std::stoull(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text.size() || text.empty())
        throw CLI::ValidationError("TROPICAL_SEED", "must be an unsigned integer");
    return v;
}

} // namespace

int main(int argc, char** argv) {
    using namespace tropical;

    CLI::App app{"max-plus (tropical) arithmetic toolkit"};
    app.require_subcommand(1);

    // bench ---------------------------------------------------------------
    auto* bench = app.add_subcommand("bench", "count operations of classical vs max-plus matrix products");
    std::string bench_sizes = "4,16,64";
    std::size_t bench_reps = 3;
    std::uint64_t seed = 0;
    std::string bench_out = "-";
    bench->add_option("--sizes", bench_sizes, "comma-separated matrix sizes");
    bench->add_option("--reps", bench_reps, "repetitions per row (median wall time)");
    auto* bench_seed_opt = bench->add_option("--seed", seed, "RNG seed (overrides TROPICAL_SEED)");
    bench->add_option("--out", bench_out, "output CSV path, - for stdout");

    // train ---------------------------------------------------------------
    auto* train = app.add_subcommand("train", "train a one-hidden-layer network");
    std::string train_mode = "classical";
    double train_hbar = 0.0;
    std::size_t train_epochs = 100;
    double train_epsilon = 0.01;
    std::string train_data;
    bool train_header = false;
    std::size_t train_hidden = 8;
    std::string train_out = "-";
    std::string train_net_out;
    std::string train_config;
    train->add_option("--mode", train_mode, "classical | tropical | dequantized");
    auto* train_hbar_opt = train->add_option("--hbar", train_hbar, "dequantization base (> e), dequantized mode");
    auto* train_epochs_opt = train->add_option("--epochs", train_epochs, "training epochs");
    auto* train_epsilon_opt = train->add_option("--epsilon", train_epsilon, "learning rate");
    train->add_option("--data", train_data, "dataset CSV: feature columns then an integer label")->required();
    train->add_flag("--has-header", train_header, "skip the first CSV line");
    auto* train_seed_opt = train->add_option("--seed", seed, "RNG seed (overrides TROPICAL_SEED)");
    auto* train_hidden_opt = train->add_option("--hidden", train_hidden, "hidden layer width");
    train->add_option("--out", train_out, "loss history CSV path, - for stdout");
    train->add_option("--net-out", train_net_out, "write the trained network here");
    train->add_option("--config", train_config, "JSON config; explicit flags override it");

    // cornerlocus ----------------------------------------------------------
    auto* locus = app.add_subcommand("cornerlocus", "mark grid cells crossed by a tropical polynomial's corner locus");
    std::string locus_poly, locus_bbox, locus_res = "101", locus_out = "-";
    locus->add_option("--poly", locus_poly, "polynomial JSON file")->required();
    locus->add_option("--bbox", locus_bbox, "lo,hi per axis")->required();
    locus->add_option("--res", locus_res, "nodes per axis (one value or one per axis)");
    locus->add_option("--out", locus_out, "output JSON path, - for stdout");

    // components -----------------------------------------------------------
    auto* comp = app.add_subcommand("components", "label connected components of a zero locus' complement");
    std::string comp_field, comp_bbox, comp_res = "101", comp_out = "-";
    double comp_zero_tol = -1.0;
    comp->add_option("--field", comp_field,
                     "poly:<file>, net:<file>, or a builtin: circle | x-1 | xy-1")
        ->required();
    comp->add_option("--bbox", comp_bbox, "lo,hi per axis")->required();
    comp->add_option("--res", comp_res, "nodes per axis (one value or one per axis)");
    auto* comp_tol_opt = comp->add_option("--zero-tol", comp_zero_tol,
                                          "flat zero-cell threshold (default: adaptive per cell)");
    comp->add_option("--out", comp_out, "output JSON path, - for stdout");

    // approx ---------------------------------------------------------------
    auto* approx = app.add_subcommand("approx", "fit a one-layer tropical-unit approximator");
    std::string approx_csv, approx_out = "-";
    std::size_t approx_units = 8;
    bool approx_header = false;
    approx->add_option("--target-csv", approx_csv, "samples CSV: feature columns then a target column")
        ->required();
    approx->add_option("--units", approx_units, "number of units");
    approx->add_flag("--has-header", approx_header, "skip the first CSV line");
    auto* approx_seed_opt = approx->add_option("--seed", seed, "RNG seed (overrides TROPICAL_SEED)");
    approx->add_option("--out", approx_out, "approximator output path, - for stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (app.got_subcommand(bench)) {
            if (bench_seed_opt->count() == 0) seed = env_seed();
            std::cerr << "seed: " << seed << '\n';
            std::vector<std::size_t> sizes;
            for (long n : parse_long_list(bench_sizes, "--sizes")) {
                if (n <= 0) throw std::runtime_error("--sizes: sizes must be positive");
                sizes.push_back(static_cast<std::size_t>(n));
            }
            const auto rows =
                bench_sweep({MatmulKind::Classical, MatmulKind::TropicalLimit}, sizes, bench_reps, seed);
            write_text(bench_out, bench_csv(rows));
        } else if (app.got_subcommand(train)) {
            if (!train_config.empty()) {
                auto in = open_input(train_config);
                const Json cfg = Json::parse(in);
                if (cfg.contains("mode") && train->count("--mode") == 0)
                    train_mode = cfg.at("mode").get<std::string>();
                if (cfg.contains("hbar") && train_hbar_opt->count() == 0)
                    train_hbar = cfg.at("hbar").get<double>();
                if (cfg.contains("epochs") && train_epochs_opt->count() == 0)
                    train_epochs = cfg.at("epochs").get<std::size_t>();
                if (cfg.contains("epsilon") && train_epsilon_opt->count() == 0)
                    train_epsilon = cfg.at("epsilon").get<double>();
                if (cfg.contains("seed") && train_seed_opt->count() == 0) {
                    seed = cfg.at("seed").get<std::uint64_t>();
                    train_seed_opt->add_result(std::to_string(seed)); // mark as explicitly set
                }
                if (cfg.contains("hidden") && train_hidden_opt->count() == 0)
                    train_hidden = cfg.at("hidden").get<std::size_t>();
            }
            if (train_seed_opt->count() == 0) seed = env_seed();
            std::cerr << "seed: " << seed << '\n';

            TrainConfig cfg;
            cfg.epsilon = train_epsilon;
            cfg.epochs = train_epochs;
            cfg.seed = seed;
            NetMode net_mode = NetMode::Classical;
            if (train_mode == "classical") {
                cfg.mode = TrainMode::Classical;
            } else if (train_mode == "tropical") {
                cfg.mode = TrainMode::TropicalLimit;
                net_mode = NetMode::Tropical;
            } else if (train_mode == "dequantized") {
                cfg.mode = TrainMode::Dequantized;
                if (train_hbar_opt->count() == 0 && train_hbar == 0.0)
                    throw std::runtime_error("--mode dequantized needs --hbar");
                cfg.hbar = HbarParam::finite(train_hbar);
            } else {
                throw std::runtime_error("--mode must be classical, tropical, or dequantized");
            }

            auto data_in = open_input(train_data);
            const Dataset data = read_dataset_csv(data_in, train_header);
            const std::size_t input_dim = data.features.front().size();
            const LayeredNetwork net =
                init_network({input_dim, train_hidden, 1}, net_mode, seed);
            const TrainResult result = train_loop(net, data, cfg);

            if (cfg.mode == TrainMode::TropicalLimit) {
                bool monotone = true;
                for (std::size_t k = 0; k < net.layers().size(); ++k) {
                    const auto& before = net.layers()[k].weights;
                    const auto& after = result.net.layers()[k].weights;
                    for (std::size_t i = 0; i < before.data().size(); ++i)
                        if (after.data()[i].v < before.data()[i].v) monotone = false;
                }
                if (!monotone) throw std::logic_error("monotone-weight assertion failed");
                std::cerr << "monotone-weight assertion held: no weight entry decreased\n";
            }
            if (cfg.mode == TrainMode::Dequantized)
                std::cerr << "dequantized chain discrepancy: "
                          << format_double(*result.dequantized_max_discrepancy) << '\n';

            std::ostringstream losses;
            write_loss_csv(losses, result.loss_history);
            write_text(train_out, losses.str());
            if (!train_net_out.empty()) {
                std::ostringstream nets;
                write_network(nets, result.net);
                write_text(train_net_out, nets.str());
            }
        } else if (app.got_subcommand(locus)) {
            auto in = open_input(locus_poly);
            const TropicalPolynomial poly = read_polynomial(in);
            const GridSpec grid = grid_from_flags(locus_bbox, locus_res);
            const CellMask mask = corner_locus_grid(poly, grid);
            std::ostringstream out;
            write_cell_mask(out, mask);
            write_text(locus_out, out.str());
            std::cerr << "marked cells: " << mask.count_marked() << " of " << grid.num_cells() << '\n';
        } else if (app.got_subcommand(comp)) {
            const GridSpec grid = grid_from_flags(comp_bbox, comp_res);
            std::optional<double> tol;
            if (comp_tol_opt->count() > 0) {
                if (comp_zero_tol < 0.0) throw std::runtime_error("--zero-tol must be >= 0");
                tol = comp_zero_tol;
            }
            ComponentLabeling labeling;
            if (comp_field.rfind("poly:", 0) == 0) {
                auto in = open_input(comp_field.substr(5));
                labeling = label_components(read_polynomial(in), grid);
            } else {
                ScalarField field;
                if (comp_field.rfind("net:", 0) == 0) {
                    auto in = open_input(comp_field.substr(4));
                    auto net = std::make_shared<LayeredNetwork>(read_network(in));
                    if (net->output_dim() != 1)
                        throw std::runtime_error("--field net: needs a single-output network");
                    // Decision surface of a single-output net at threshold 1/2.
                    field = [net](const std::vector<double>& x) {
                        return network_forward(*net, x)[0].v - 0.5;
                    };
                } else if (comp_field == "circle") {
                    field = [](const std::vector<double>& x) {
                        return x[0] * x[0] + x[1] * x[1] - 1.0;
                    };
                } else if (comp_field == "x-1") {
                    field = [](const std::vector<double>& x) { return x[0] - 1.0; };
                } else if (comp_field == "xy-1") {
                    field = [](const std::vector<double>& x) { return x[0] * x[1] - 1.0; };
                } else {
                    throw std::runtime_error("--field: expected poly:<file>, net:<file>, circle, x-1, or xy-1");
                }
                if ((comp_field == "circle" || comp_field == "xy-1") && grid.dims() != 2)
                    throw std::runtime_error("--field " + comp_field + ": needs a 2-D grid");
                if (comp_field == "x-1" && grid.dims() != 1)
                    throw std::runtime_error("--field x-1: needs a 1-D grid");
                labeling = label_components(field, grid, tol);
            }
            std::ostringstream out;
            write_labeling(out, labeling);
            write_text(comp_out, out.str());
            std::cerr << "components: " << labeling.num_components << '\n';
        } else if (app.got_subcommand(approx)) {
            if (approx_seed_opt->count() == 0) seed = env_seed();
            std::cerr << "seed: " << seed << '\n';
            auto in = open_input(approx_csv);
            const auto samples = read_xy_csv(in, approx_header);
            const ApproxFit fit = approx_fit(samples, approx_units, seed);
            std::ostringstream out;
            write_approximator(out, fit.approximator);
            write_text(approx_out, out.str());
            std::cerr << "max abs residual: " << format_double(fit.max_abs_residual) << '\n';
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
