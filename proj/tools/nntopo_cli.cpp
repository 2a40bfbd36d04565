// nntopo command-line front end.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical error.

#include <nntopo/nntopo.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <thread>
#include <vector>

namespace fs = std::filesystem;
using namespace nntopo;

namespace {

struct GlobalOptions {
    std::uint64_t seed = 0;
    std::size_t neuron_cap = kDefaultNeuronCap;
    std::size_t k = 5;
    std::size_t jobs = 1;
    fs::path out = ".";

    PipelineOptions pipeline() const { return {neuron_cap, seed, k}; }
};

// Runs f(i) for i in [0, n) on up to `jobs` threads. Results are indexed, so
// output order never depends on scheduling; the lowest-index failure is rethrown.
template <class F>
void parallel_for(std::size_t n, std::size_t jobs, F&& f) {
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                f(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t threads = std::min(std::max<std::size_t>(jobs, 1), std::max<std::size_t>(n, 1));
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

std::string extension(const fs::path& p) {
    auto ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext;
}

ActivationMatrix load_activation(const fs::path& path) {
    const auto bytes = detail::read_file(path);
    const auto format = extension(path) == ".actm" ? ActivationFormat::binary : ActivationFormat::csv;
    try {
        return parse_activation(bytes, format);
    } catch (const data_error& e) {
        throw data_error(path.string() + ": " + e.what());
    }
}

// `.cdmx` and (with as_distance) square CSV files are distance matrices;
// anything else is an activation file that is subsampled and correlated.
CondensedDistanceMatrix load_distance(const fs::path& path, bool as_distance, const GlobalOptions& g) {
    if (extension(path) == ".cdmx") return parse_cdmx(detail::read_file(path));
    if (as_distance) return parse_square_csv(detail::read_file(path));
    return distance_matrix(subsample_neurons(load_activation(path), g.neuron_cap, g.seed));
}

fs::path output_path(const GlobalOptions& g, const std::string& name) { return g.out / name; }

void write_output(const GlobalOptions& g, const std::string& name, std::string_view contents) {
    detail::write_file_atomic(output_path(g, name), contents);
}

// A directory contributes its `.actm` files (sorted by name); a file is read
// as a signature CSV.
std::vector<TopologySignature> load_cohort_signatures(const fs::path& path, const GlobalOptions& g) {
    if (!fs::exists(path)) throw data_error("cannot open '" + path.string() + "'");
    if (!fs::is_directory(path)) return parse_signatures_csv(detail::read_file(path));
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path)) {
        if (entry.is_regular_file() && extension(entry.path()) == ".actm") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw data_error("cohort directory '" + path.string() + "' has no .actm files");
    std::vector<TopologySignature> sigs(files.size());
    parallel_for(files.size(), g.jobs, [&](std::size_t i) {
        sigs[i] = activation_signature(load_activation(files[i]), files[i].stem().string(), g.pipeline());
    });
    return sigs;
}

// Signatures for a list of inputs. Directories expand to their `.actm` files,
// a CSV whose header names `topk_pd1` is a signature table, and any other file
// is an activation matrix.
std::vector<TopologySignature> load_signatures(const std::vector<fs::path>& inputs, const GlobalOptions& g) {
    std::vector<TopologySignature> out;
    std::vector<fs::path> activations;
    std::vector<std::size_t> slots;
    for (const auto& p : inputs) {
        if (fs::is_directory(p)) {
            for (auto& s : load_cohort_signatures(p, g)) out.push_back(std::move(s));
            continue;
        }
        if (extension(p) == ".csv") {
            const auto text = detail::read_file(p);
            if (text.substr(0, text.find('\n')).find("topk_pd1") != std::string::npos) {
                for (auto& s : parse_signatures_csv(text)) out.push_back(std::move(s));
                continue;
            }
        }
        slots.push_back(out.size());
        activations.push_back(p);
        out.emplace_back();
    }
    parallel_for(activations.size(), g.jobs, [&](std::size_t i) {
        out[slots[i]] = activation_signature(load_activation(activations[i]), activations[i].stem().string(), g.pipeline());
    });
    return out;
}

std::string cohort_label(const fs::path& p) {
    auto q = p;
    if (!q.has_filename()) q = q.parent_path();
    return q.stem().string();
}

std::string report_text(const CohortComparison& c, const std::string& la, const std::string& lb, std::size_t na,
                        std::size_t nb, const ThresholdFit& fit) {
    using detail::format_double;
    std::string s;
    s += "statistic = " + std::string(to_string(*c.statistic)) + "\n";
    s += "test = welch_two_sided\n";
    s += "cohort_a = " + la + " (n=" + std::to_string(na) + ", mean=" + format_double(c.mean_a) +
         ", std=" + format_double(c.std_a) + ")\n";
    s += "cohort_b = " + lb + " (n=" + std::to_string(nb) + ", mean=" + format_double(c.mean_b) +
         ", std=" + format_double(c.std_b) + ")\n";
    s += "t_statistic = " + format_double(c.t_statistic) + "\n";
    s += "dof = " + format_double(c.dof) + "\n";
    s += "p_value = " + format_double(c.p_value) + "\n";
    s += "threshold = " + format_double(fit.threshold) + "\n";
    s += "balanced_accuracy = " + format_double(fit.balanced_accuracy) + "\n";
    return s;
}

struct ThresholdFile {
    Statistic statistic = Statistic::topk_pd1;
    double threshold = 0.0;
    std::string label_low = "benign", label_high = "shortcut";
};

constexpr std::string_view kThresholdHeader = "statistic,threshold,label_low,label_high";

std::string threshold_to_csv(const ThresholdFile& t) {
    return std::string(kThresholdHeader) + "\n" + std::string(to_string(t.statistic)) + "," +
           detail::format_double(t.threshold) + "," + t.label_low + "," + t.label_high + "\n";
}

ThresholdFile parse_threshold_csv(std::string_view text) {
    const auto rows = detail::lines(text);
    if (rows.size() != 2 || detail::trim(rows[0].second) != kThresholdHeader) {
        throw data_error(std::string("threshold file: expected header '") + std::string(kThresholdHeader) +
                         "' and one row");
    }
    const auto cells = detail::split(rows[1].second, ',');
    if (cells.size() != 4) throw data_error("threshold file: expected 4 columns");
    ThresholdFile t;
    try {
        t.statistic = parse_statistic(detail::trim(cells[0]));
    } catch (const usage_error& e) {
        throw data_error(std::string("threshold file: ") + e.what());
    }
    const auto thr = detail::parse_double(cells[1]);
    if (!thr || !std::isfinite(*thr)) throw data_error("threshold file: malformed threshold");
    t.threshold = *thr;
    t.label_low = std::string(detail::trim(cells[2]));
    t.label_high = std::string(detail::trim(cells[3]));
    return t;
}

struct Predictions {
    std::vector<int> y_true, y_pred;
    std::vector<std::string> group;
};

Predictions parse_predictions_csv(std::string_view text) {
    const auto rows = detail::lines(text);
    if (rows.empty()) throw data_error("predictions CSV: empty input");
    const auto header = detail::split(rows.front().second, ',');
    const auto column = [&](std::string_view name) -> std::size_t {
        for (std::size_t c = 0; c < header.size(); ++c) {
            if (detail::trim(header[c]) == name) return c;
        }
        throw data_error("predictions CSV: missing column '" + std::string(name) + "'");
    };
    const std::size_t ct = column("y_true"), cp = column("y_pred"), cg = column("group");
    Predictions p;
    const auto label = [](std::string_view cell, const std::string& where) {
        const auto v = detail::trim(cell);
        if (v == "0") return 0;
        if (v == "1") return 1;
        throw data_error("predictions CSV: label must be 0 or 1" + where);
    };
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto cells = detail::split(rows[r].second, ',');
        const auto where = " on line " + std::to_string(rows[r].first);
        if (cells.size() != header.size()) throw data_error("predictions CSV: wrong column count" + where);
        p.y_true.push_back(label(cells[ct], where));
        p.y_pred.push_back(label(cells[cp], where));
        p.group.emplace_back(detail::trim(cells[cg]));
    }
    return p;
}

std::string pad_index(std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04zu", i);
    return buf;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Topological signatures of neural-network activations"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    app.add_option("--seed", g.seed, "Seed for neuron subsampling and synthetic data")->capture_default_str();
    app.add_option("--neuron-cap", g.neuron_cap, "Maximum neurons per model before subsampling")
        ->check(CLI::Range(std::size_t{2}, std::size_t{1} << 21))
        ->capture_default_str();
    app.add_option("--k", g.k, "Number of top 1D features averaged in topk_pd1")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--jobs", g.jobs, "Worker threads for cohort operations")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--out", g.out, "Output directory")->capture_default_str();

    // distance
    fs::path dist_in;
    std::string dist_format = "cdmx";
    auto* distance = app.add_subcommand("distance", "Correlation-distance matrix of an activation file");
    distance->add_option("input", dist_in, "Activation file (.actm or .csv)")->required();
    distance->add_option("--format", dist_format, "Output format")
        ->check(CLI::IsMember({"cdmx", "csv"}))
        ->capture_default_str();

    // persistence
    fs::path pers_in;
    bool pers_distance = false, pers_svg = false;
    int pers_max_dim = 1;
    auto* persistence = app.add_subcommand("persistence", "Persistence diagram in dimensions 0 and 1");
    persistence->add_option("input", pers_in, "Activation file, .cdmx, or square distance CSV")->required();
    persistence->add_flag("--distance", pers_distance, "Read a CSV input as a square distance matrix");
    persistence->add_flag("--svg", pers_svg, "Also write a diagram scatter plot");
    persistence->add_option("--max-dim", pers_max_dim, "Highest homology dimension")
        ->check(CLI::Range(0, 1))
        ->capture_default_str();

    // signature
    std::vector<fs::path> sig_in;
    auto* sig = app.add_subcommand("signature", "Topology signature rows for activation files");
    sig->add_option("inputs", sig_in, "Activation files (.actm or .csv)")->required();

    // cycles
    fs::path cyc_in;
    bool cyc_distance = false;
    std::size_t cyc_count = 3;
    auto* cycles = app.add_subcommand("cycles", "Representative cycles of the most persistent 1D features");
    cycles->add_option("input", cyc_in, "Activation file, .cdmx, or square distance CSV")->required();
    cycles->add_flag("--distance", cyc_distance, "Read a CSV input as a square distance matrix");
    cycles->add_option("--count", cyc_count, "Number of cycles")->check(CLI::PositiveNumber)->capture_default_str();

    // compare
    fs::path cmp_a, cmp_b;
    std::string cmp_stat = "topk_pd1", cmp_label_a, cmp_label_b;
    std::size_t cmp_bins = 20;
    auto* compare = app.add_subcommand("compare", "Welch t-test between two cohorts");
    compare->add_option("cohort_a", cmp_a, "Directory of .actm files or signature CSV")->required();
    compare->add_option("cohort_b", cmp_b, "Directory of .actm files or signature CSV")->required();
    compare->add_option("--statistic", cmp_stat, "Signature statistic")
        ->check(CLI::IsMember({"avg_pd1", "topk_pd1"}))
        ->capture_default_str();
    compare->add_option("--label-a", cmp_label_a, "Name of cohort A (default: path stem)");
    compare->add_option("--label-b", cmp_label_b, "Name of cohort B (default: path stem)");
    compare->add_option("--bins", cmp_bins, "Histogram bins")->check(CLI::PositiveNumber)->capture_default_str();

    // wasserstein
    fs::path w_a, w_b;
    int w_dim = 1;
    auto* wass = app.add_subcommand("wasserstein", "Order-1 Wasserstein distance between two diagram CSVs");
    wass->add_option("diagram_a", w_a, "Diagram CSV")->required();
    wass->add_option("diagram_b", w_b, "Diagram CSV")->required();
    wass->add_option("--dim", w_dim, "Homology dimension")->check(CLI::Range(0, 1))->capture_default_str();

    // classify
    fs::path cls_threshold, cls_train_a, cls_train_b;
    std::vector<fs::path> cls_in;
    std::string cls_stat = "topk_pd1", cls_label_a = "benign", cls_label_b = "shortcut";
    auto* classify = app.add_subcommand("classify", "Label models by a threshold on a signature statistic");
    classify->add_option("inputs", cls_in, "Activation files, cohort directories, or signature CSVs")->required();
    auto* thr_opt = classify->add_option("--threshold-file", cls_threshold, "Threshold CSV written by a previous run");
    auto* ta_opt = classify->add_option("--train-a", cls_train_a, "Training cohort labelled low (directory or CSV)");
    auto* tb_opt = classify->add_option("--train-b", cls_train_b, "Training cohort labelled high (directory or CSV)");
    classify->add_option("--statistic", cls_stat, "Signature statistic when training")
        ->check(CLI::IsMember({"avg_pd1", "topk_pd1"}))
        ->capture_default_str();
    classify->add_option("--label-a", cls_label_a, "Label for values at or below the threshold")->capture_default_str();
    classify->add_option("--label-b", cls_label_b, "Label for values above the threshold")->capture_default_str();
    thr_opt->excludes(ta_opt)->excludes(tb_opt);
    ta_opt->needs(tb_opt);
    tb_opt->needs(ta_opt);

    // fairness
    fs::path fair_in;
    auto* fairness = app.add_subcommand("fairness", "Group fairness metrics from a predictions CSV");
    fairness->add_option("input", fair_in, "CSV with columns y_true,y_pred,group")->required();

    // synth
    SyntheticSpec spec;
    std::string synth_label;
    auto* synth = app.add_subcommand("synth", "Write a synthetic cohort of ACTM files");
    synth->add_option("--label", synth_label, "Cohort label used in file names")->required();
    synth->add_option("--n-models", spec.n_models, "Models in the cohort")->capture_default_str();
    synth->add_option("--n-samples", spec.n_samples, "Samples per model")->capture_default_str();
    synth->add_option("--n-neurons", spec.n_neurons, "Neurons per model")->capture_default_str();
    synth->add_option("--ring-size", spec.ring_size, "Planted ring size (0 for benign)")->capture_default_str();
    synth->add_option("--signal", spec.signal_strength, "Ring latent scale")->capture_default_str();
    synth->add_option("--noise", spec.noise_std, "Per-neuron noise std")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (!fs::exists(g.out)) fs::create_directories(g.out);
        if (!fs::is_directory(g.out)) throw usage_error("--out '" + g.out.string() + "' is not a directory");

        if (*distance) {
            const auto d = load_distance(dist_in, false, g);
            const auto stem = dist_in.stem().string();
            const auto name = stem + (dist_format == "cdmx" ? ".cdmx" : "_distance.csv");
            write_output(g, name, dist_format == "cdmx" ? to_cdmx(d) : to_square_csv(d));
            std::cout << "wrote " << output_path(g, name).string() << " (" << d.n_points() << " points)\n";
        } else if (*persistence) {
            const auto d = load_distance(pers_in, pers_distance, g);
            const auto diag = vr_persistence(d, pers_max_dim);
            const auto stem = pers_in.stem().string();
            write_output(g, stem + "_diagram.csv", diagram_to_csv(diag));
            if (pers_svg) write_output(g, stem + "_diagram.svg", svg::diagram(diag, "Persistence Diagram: " + stem));
            std::cout << diagram_to_csv(diag);
        } else if (*sig) {
            const auto sigs = load_signatures(sig_in, g);
            const auto csv = signatures_to_csv(sigs);
            write_output(g, "signatures.csv", csv);
            std::cout << csv;
        } else if (*cycles) {
            const auto d = load_distance(cyc_in, cyc_distance, g);
            const auto cs = representative_cycles(d, cyc_count);
            const auto stem = cyc_in.stem().string();
            write_output(g, stem + "_cycles.csv", cycles_to_csv(cs));
            write_output(g, stem + "_cycles.svg",
                         svg::cycles(d.n_points(), cs, "Top-" + std::to_string(cyc_count) + " persistent cycles"));
            std::cout << cycles_to_csv(cs);
        } else if (*compare) {
            const auto stat = parse_statistic(cmp_stat);
            Cohort a{cmp_label_a.empty() ? cohort_label(cmp_a) : cmp_label_a, load_cohort_signatures(cmp_a, g)};
            Cohort b{cmp_label_b.empty() ? cohort_label(cmp_b) : cmp_label_b, load_cohort_signatures(cmp_b, g)};
            const auto cmp = compare_cohorts(a, b, stat);
            const auto fit = fit_threshold(a, b, stat);
            const auto text = report_text(cmp, a.label, b.label, a.signatures.size(), b.signatures.size(), fit);
            write_output(g, "cohort_a_signatures.csv", signatures_to_csv(a.signatures));
            write_output(g, "cohort_b_signatures.csv", signatures_to_csv(b.signatures));
            write_output(g, "compare_report.txt", text);
            write_output(g, "compare_report.csv",
                         "statistic,t_statistic,dof,p_value,mean_a,std_a,mean_b,std_b,threshold,balanced_accuracy\n" +
                             std::string(to_string(stat)) + "," + detail::format_double(cmp.t_statistic) + "," +
                             detail::format_double(cmp.dof) + "," + detail::format_double(cmp.p_value) + "," +
                             detail::format_double(cmp.mean_a) + "," + detail::format_double(cmp.std_a) + "," +
                             detail::format_double(cmp.mean_b) + "," + detail::format_double(cmp.std_b) + "," +
                             detail::format_double(fit.threshold) + "," +
                             detail::format_double(fit.balanced_accuracy) + "\n");
            write_output(g, "compare_histogram.svg",
                         svg::histogram(statistic_values(a, stat), statistic_values(b, stat), a.label, b.label,
                                        std::string(to_string(stat)), cmp.p_value, cmp_bins));
            std::cout << text;
        } else if (*wass) {
            const auto a = parse_diagram_csv(detail::read_file(w_a));
            const auto b = parse_diagram_csv(detail::read_file(w_b));
            std::cout << detail::format_double(wasserstein_distance(a, b, w_dim)) << "\n";
        } else if (*classify) {
            ThresholdFile t;
            if (!cls_threshold.empty()) {
                t = parse_threshold_csv(detail::read_file(cls_threshold));
            } else if (!cls_train_a.empty()) {
                t.statistic = parse_statistic(cls_stat);
                Cohort a{cls_label_a, load_cohort_signatures(cls_train_a, g)};
                Cohort b{cls_label_b, load_cohort_signatures(cls_train_b, g)};
                t.threshold = fit_threshold(a, b, t.statistic).threshold;
                t.label_low = cls_label_a;
                t.label_high = cls_label_b;
                write_output(g, "threshold.csv", threshold_to_csv(t));
            } else {
                throw usage_error("classify needs --threshold-file or both --train-a and --train-b");
            }
            const auto sigs = load_signatures(cls_in, g);
            std::string csv = "model_id," + std::string(to_string(t.statistic)) + ",label\n";
            for (const auto& s : sigs) {
                const double v = t.statistic == Statistic::avg_pd1 ? s.avg_pd1 : s.topk_pd1;
                csv += s.model_id + "," + detail::format_double(v) + "," +
                       (v > t.threshold ? t.label_high : t.label_low) + "\n";
            }
            write_output(g, "labels.csv", csv);
            std::cout << csv;
        } else if (*fairness) {
            const auto p = parse_predictions_csv(detail::read_file(fair_in));
            const auto r = group_fairness_metrics(p.y_true, p.y_pred, p.group);
            using detail::format_double;
            std::string csv = "metric,value\n";
            csv += "unbiased_acc," + format_double(r.unbiased_acc) + "\n";
            csv += "worst_group_acc," + format_double(r.worst_group_acc) + "\n";
            csv += "unbiased_acc_std," + format_double(r.unbiased_acc_std) + "\n";
            csv += "eo_disparity," + format_double(r.eo_disparity) + "\n";
            csv += "average_odds," + format_double(r.average_odds) + "\n";
            for (const auto& [key, acc] : r.group_accs) csv += "acc[" + key + "]," + format_double(acc) + "\n";
            for (const auto& [key, v] : r.tpr) csv += "tpr[" + key + "]," + format_double(v) + "\n";
            for (const auto& [key, v] : r.fpr) csv += "fpr[" + key + "]," + format_double(v) + "\n";
            write_output(g, "fairness.csv", csv);
            std::cout << csv;
        } else if (*synth) {
            if (synth_label.empty() || synth_label.find_first_of("/\\,") != std::string::npos) {
                throw usage_error("--label must be non-empty and contain no '/', '\\' or ','");
            }
            spec.seed = g.seed;
            validate(spec);
            std::vector<std::string> names(spec.n_models);
            parallel_for(spec.n_models, g.jobs, [&](std::size_t i) {
                names[i] = synth_label + "_" + pad_index(i) + ".actm";
                write_output(g, names[i], to_actm(gen_model(spec, i)));
            });
            std::string manifest = "file,label,model_index,seed,n_samples,n_neurons,ring_size,signal,noise\n";
            for (std::size_t i = 0; i < names.size(); ++i) {
                manifest += names[i] + "," + synth_label + "," + std::to_string(i) + "," + std::to_string(spec.seed) +
                            "," + std::to_string(spec.n_samples) + "," + std::to_string(spec.n_neurons) + "," +
                            std::to_string(spec.ring_size) + "," + detail::format_double(spec.signal_strength) + "," +
                            detail::format_double(spec.noise_std) + "\n";
            }
            write_output(g, synth_label + "_manifest.csv", manifest);
            std::cout << "wrote " << names.size() << " models to " << g.out.string() << "\n";
        }
    } catch (const usage_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const numerical_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const data_error& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const std::bad_alloc&) {
        std::cerr << "numerical error: out of memory\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
