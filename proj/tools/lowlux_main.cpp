// lowlux command-line tool: enhance, curve, metrics and batch subcommands.
//
// Exit codes: 0 ok, 1 processing error, 2 I/O error, 3 configuration error,
// 4 dimension mismatch.

#include <algorithm>
#include <atomic>
#include <cctype>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lowlux/errors.hpp"
#include "lowlux/fusion.hpp"
#include "lowlux/image_io.hpp"
#include "lowlux/metrics.hpp"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitIo = 2;
constexpr int kExitConfig = 3;
constexpr int kExitDimension = 4;

// ---------------------------------------------------------------------------
// Configuration assembly: defaults < config file < command-line flags.

struct TuningFlags {
    double lambda = 0.0;
    std::vector<double> gammas;
    double dv = 0.0;
    double seg_thresh = 0.0;
    int downsample = 0;
    int gf_subsample = 0;
    double eta = 0.0;
    std::vector<double> gamma_clamp;

    CLI::Option* lambda_opt = nullptr;
    CLI::Option* gammas_opt = nullptr;
    CLI::Option* dv_opt = nullptr;
    CLI::Option* seg_opt = nullptr;
    CLI::Option* down_opt = nullptr;
    CLI::Option* gf_opt = nullptr;
    CLI::Option* eta_opt = nullptr;
    CLI::Option* clamp_opt = nullptr;
};

void attach_tuning(CLI::App* cmd, TuningFlags& t) {
    t.lambda_opt = cmd->add_option("--lambda", t.lambda, "Joint factor in (1,2]");
    t.gammas_opt = cmd->add_option("--gammas", t.gammas,
                                   "Comma-separated gamma probe sequence")
                       ->delimiter(',');
    t.dv_opt = cmd->add_option("--dv", t.dv, "Target mean lightness gain in (0,1)");
    t.seg_opt = cmd->add_option("--seg-thresh", t.seg_thresh,
                                "Light/dark segmentation threshold in (0,1)");
    t.down_opt = cmd->add_option("--downsample", t.downsample,
                                 "Weight-map downsampling rate R (>= 1)");
    t.gf_opt = cmd->add_option("--gf-subsample", t.gf_subsample,
                               "Guided-filter internal subsampling rate r (>= 1)");
    t.eta_opt = cmd->add_option("--eta", t.eta, "Guided-filter regularizer (> 0)");
    t.clamp_opt = cmd->add_option("--gamma-clamp", t.gamma_clamp,
                                  "Working gamma range as lo,hi")
                      ->delimiter(',');
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string strip_quotes(const std::string& s) {
    if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                          (s.front() == '\'' && s.back() == '\''))) {
        return s.substr(1, s.size() - 2);
    }
    return s;
}

double parse_number(const std::string& token, const std::string& key) {
    try {
        std::size_t used = 0;
        const double v = std::stod(token, &used);
        if (used != token.size()) throw std::invalid_argument(token);
        return v;
    } catch (const std::exception&) {
        throw lowlux::ConfigError("config key '" + key + "': '" + token +
                                  "' is not a number");
    }
}

// Flat key = value config reader. Supports numbers, quoted strings, arrays
// of numbers and # comments; that covers every documented key.
void apply_config_file(const std::string& path, lowlux::EnhanceConfig& cfg,
                       int& jobs) {
    std::ifstream in(path);
    if (!in) throw lowlux::IoError("cannot open config file '" + path + "'");

    std::string line;
    std::vector<double> gammas, clamp;
    while (std::getline(in, line)) {
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw lowlux::ConfigError("config line without '=': " + line);
        }
        const std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));

        auto parse_array = [&](const std::string& k) {
            std::vector<double> out;
            if (value.size() < 2 || value.front() != '[' || value.back() != ']') {
                throw lowlux::ConfigError("config key '" + k + "' expects an array");
            }
            std::stringstream ss(value.substr(1, value.size() - 2));
            std::string tok;
            while (std::getline(ss, tok, ',')) {
                tok = trim(tok);
                if (!tok.empty()) out.push_back(parse_number(tok, k));
            }
            return out;
        };

        if (key == "lambda") {
            cfg.lambda = parse_number(strip_quotes(value), key);
        } else if (key == "gammas") {
            gammas = parse_array(key);
        } else if (key == "dv") {
            cfg.dv_star = parse_number(strip_quotes(value), key);
        } else if (key == "seg_thresh") {
            cfg.seg_threshold = parse_number(strip_quotes(value), key);
        } else if (key == "downsample") {
            cfg.downsample = int(parse_number(strip_quotes(value), key));
        } else if (key == "gf_subsample") {
            cfg.gf_subsample = int(parse_number(strip_quotes(value), key));
        } else if (key == "eta") {
            cfg.eta = parse_number(strip_quotes(value), key);
        } else if (key == "gamma_clamp") {
            clamp = parse_array(key);
        } else if (key == "jobs") {
            jobs = int(parse_number(strip_quotes(value), key));
        } else {
            throw lowlux::ConfigError("unknown config key '" + key + "'");
        }
    }
    if (!gammas.empty()) cfg.gammas = lowlux::GammaSequence(gammas);
    if (!clamp.empty()) {
        if (clamp.size() != 2) {
            throw lowlux::ConfigError("gamma_clamp expects exactly two values");
        }
        cfg.gamma_lo = clamp[0];
        cfg.gamma_hi = clamp[1];
    }
}

lowlux::EnhanceConfig assemble_config(const TuningFlags& t, const std::string& config,
                                      int& jobs) {
    lowlux::EnhanceConfig cfg;
    if (!config.empty()) apply_config_file(config, cfg, jobs);
    if (t.lambda_opt->count()) cfg.lambda = t.lambda;
    if (t.gammas_opt->count()) cfg.gammas = lowlux::GammaSequence(t.gammas);
    if (t.dv_opt->count()) cfg.dv_star = t.dv;
    if (t.seg_opt->count()) cfg.seg_threshold = t.seg_thresh;
    if (t.down_opt->count()) cfg.downsample = t.downsample;
    if (t.gf_opt->count()) cfg.gf_subsample = t.gf_subsample;
    if (t.eta_opt->count()) cfg.eta = t.eta;
    if (t.clamp_opt->count()) {
        if (t.gamma_clamp.size() != 2) {
            throw lowlux::ConfigError("--gamma-clamp expects exactly two values");
        }
        cfg.gamma_lo = t.gamma_clamp[0];
        cfg.gamma_hi = t.gamma_clamp[1];
    }
    cfg.validate();
    return cfg;
}

// ---------------------------------------------------------------------------

json curve_to_json(const lowlux::fit::CurveParams& p) {
    return json{{"a", p.a},
                {"b", p.b},
                {"c", p.c},
                {"fit_mse", p.fit_mse},
                {"degenerate", p.degenerate}};
}

int run_enhance(const std::string& input, const std::string& output,
                const lowlux::EnhanceConfig& cfg) {
    const lowlux::ImageF image = lowlux::load_image(input);
    const lowlux::PipelineResult result = lowlux::enhance_full(image, cfg);
    lowlux::save_image(result.image, output);

    if (result.diag.gamma_star.no_solution) {
        std::cerr << "warning: target lightness gain unreachable on the fitted "
                     "curve, gamma pinned to "
                  << result.diag.gamma_star.value << "\n";
    }

    json out{
        {"input", input},
        {"output", output},
        {"width", image.width()},
        {"height", image.height()},
        {"gamma_star", result.diag.gamma_star.value},
        {"gamma_unclamped", result.diag.gamma_star.unclamped},
        {"gamma_clamped", result.diag.gamma_star.clamped},
        {"gamma_no_solution", result.diag.gamma_star.no_solution},
        {"curve", curve_to_json(result.diag.curve)},
        {"dv_sequence", result.diag.dv},
        {"timings_ms",
         json{{"curve_fit", result.diag.curve_fit_ms},
              {"global", result.diag.global_ms},
              {"filter", result.diag.filter_ms},
              {"fuse", result.diag.fuse_ms},
              {"total", result.diag.total_ms}}},
    };
    std::cout << out.dump() << "\n";
    return kExitOk;
}

int run_curve(const std::string& input, const std::string& sweep,
              const lowlux::EnhanceConfig& cfg) {
    double lo = 0.3, hi = 2.2, step = 0.05;
    if (!sweep.empty()) {
        std::stringstream ss(sweep);
        std::string a, b, c;
        if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') ||
            !std::getline(ss, c)) {
            throw lowlux::ConfigError("--sweep expects lo:hi:step");
        }
        lo = parse_number(trim(a), "sweep.lo");
        hi = parse_number(trim(b), "sweep.hi");
        step = parse_number(trim(c), "sweep.step");
    }
    if (!(lo > 0.0) || hi < lo || !(step > 0.0)) {
        throw lowlux::ConfigError("sweep range must satisfy 0 < lo <= hi, step > 0");
    }

    const lowlux::ImageF image = lowlux::load_image(input);
    const lowlux::ImageF v = lowlux::rgb_to_v(image);
    const auto points = lowlux::gamma_sweep(v, cfg, lo, hi, step);
    const auto perceived = lowlux::perceive_curve(v, cfg);

    std::ostringstream csv;
    csv.precision(10);
    csv << "gamma,dv_measured,dv_fitted\n";
    for (const auto& pt : points) {
        csv << pt.gamma << "," << pt.dv_measured << "," << pt.dv_fitted << "\n";
    }
    std::cout << csv.str();

    json footer = curve_to_json(perceived.params);
    footer["sweep_mse"] = lowlux::sweep_mse_from_points(points);
    std::cout << footer.dump() << "\n";
    return kExitOk;
}

int run_metrics(const std::string& enhanced_path, const std::string& reference_path,
                const std::string& low_path) {
    const lowlux::ImageF enhanced = lowlux::load_image(enhanced_path);
    const lowlux::ImageF reference = lowlux::load_image(reference_path);
    std::optional<lowlux::ImageF> low;
    if (!low_path.empty()) low = lowlux::load_image(low_path);

    const lowlux::ImageF& order_base = low ? *low : reference;
    const lowlux::StatStates states = lowlux::statistical_states(enhanced, order_base);

    json out{
        {"delta_e", lowlux::delta_e(enhanced, reference)},
        {"psnr", lowlux::psnr(enhanced, reference)},
        {"mssim", lowlux::mssim(enhanced, reference)},
        {"loe", lowlux::loe(enhanced, order_base)},
        {"dv_m", states.dv_m},
        {"ds_m", states.ds_m},
        {"d_m", states.d_m},
    };
    std::cout << out.dump() << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// Batch processing.

struct ManifestRow {
    std::string id;
    std::string low;
    std::string ref;  // may be empty
};

std::vector<ManifestRow> read_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw lowlux::IoError("cannot open manifest '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw lowlux::ConfigError("manifest is empty");
    {
        std::string header = trim(line);
        header.erase(std::remove_if(header.begin(), header.end(),
                                    [](unsigned char ch) { return std::isspace(ch); }),
                     header.end());
        if (header != "id,low,ref") {
            throw lowlux::ConfigError("manifest header must be 'id,low,ref'");
        }
    }

    std::vector<ManifestRow> rows;
    std::vector<std::string> seen;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        std::stringstream ss(line);
        ManifestRow row;
        std::getline(ss, row.id, ',');
        std::getline(ss, row.low, ',');
        std::getline(ss, row.ref);
        row.id = trim(row.id);
        row.low = trim(row.low);
        row.ref = trim(row.ref);
        if (row.id.empty()) throw lowlux::ConfigError("manifest row without an id");
        if (std::find(seen.begin(), seen.end(), row.id) != seen.end()) {
            throw lowlux::ConfigError("duplicate manifest id '" + row.id + "'");
        }
        seen.push_back(row.id);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw lowlux::ConfigError("manifest has no data rows");
    return rows;
}

struct BatchRowResult {
    bool ok = false;
    bool has_ref = false;
    std::string error;
    double gamma_star = 0.0;
    double fit_mse = 0.0;
    lowlux::MetricsReport metrics;
    double total_ms = 0.0;
};

BatchRowResult process_row(const ManifestRow& row, const lowlux::EnhanceConfig& cfg) {
    BatchRowResult out;
    try {
        const lowlux::ImageF low = lowlux::load_image(row.low);
        const lowlux::PipelineResult result = lowlux::enhance_full(low, cfg);
        out.gamma_star = result.diag.gamma_star.value;
        out.fit_mse = result.diag.curve.fit_mse;
        out.total_ms = result.diag.total_ms;

        const lowlux::StatStates states = lowlux::statistical_states(result.image, low);
        out.metrics.dv_m = states.dv_m;
        out.metrics.ds_m = states.ds_m;
        out.metrics.d_m = states.d_m;

        if (!row.ref.empty()) {
            const lowlux::ImageF ref = lowlux::load_image(row.ref);
            out.metrics.delta_e = lowlux::delta_e(result.image, ref);
            out.metrics.psnr = lowlux::psnr(result.image, ref);
            out.metrics.mssim = lowlux::mssim(result.image, ref);
            out.metrics.loe = lowlux::loe(result.image, low);
            out.has_ref = true;
        }
        out.ok = true;
    } catch (const std::exception& e) {
        out.error = e.what();
    }
    return out;
}

std::string fmt(double v) {
    std::ostringstream ss;
    ss.precision(10);
    ss << v;
    return ss.str();
}

int run_batch(const std::string& manifest_path, const std::string& out_csv,
              const lowlux::EnhanceConfig& cfg, int jobs) {
    const std::vector<ManifestRow> rows = read_manifest(manifest_path);

    std::vector<BatchRowResult> results(rows.size());
    const int workers =
        std::max(1, std::min<int>(jobs, static_cast<int>(rows.size())));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= rows.size()) return;
            results[i] = process_row(rows[i], cfg);
        }
    };
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    std::ofstream csv(out_csv);
    if (!csv) throw lowlux::IoError("cannot write report '" + out_csv + "'");
    csv << "id,gamma_star,fit_mse,delta_e,psnr,mssim,loe,dv_m,ds_m,d_m,total_ms\n";

    // Column-wise means over the rows that produced each value.
    std::vector<double> sums(10, 0.0);
    std::vector<std::size_t> counts(10, 0);
    auto add = [&](int col, double v) {
        sums[col] += v;
        counts[col] += 1;
    };

    std::size_t failed = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const BatchRowResult& r = results[i];
        csv << rows[i].id << ",";
        if (!r.ok) {
            ++failed;
            csv << "error,,,,,,,,,\n";
            std::cerr << "row '" << rows[i].id << "' failed: " << r.error << "\n";
            continue;
        }
        add(0, r.gamma_star);
        add(1, r.fit_mse);
        csv << fmt(r.gamma_star) << "," << fmt(r.fit_mse) << ",";
        if (r.has_ref) {
            add(2, r.metrics.delta_e);
            add(3, r.metrics.psnr);
            add(4, r.metrics.mssim);
            add(5, r.metrics.loe);
            csv << fmt(r.metrics.delta_e) << "," << fmt(r.metrics.psnr) << ","
                << fmt(r.metrics.mssim) << "," << fmt(r.metrics.loe) << ",";
        } else {
            csv << ",,,,";
        }
        add(6, r.metrics.dv_m);
        add(7, r.metrics.ds_m);
        add(8, r.metrics.d_m);
        add(9, r.total_ms);
        csv << fmt(r.metrics.dv_m) << "," << fmt(r.metrics.ds_m) << ","
            << fmt(r.metrics.d_m) << "," << fmt(r.total_ms) << "\n";
    }

    csv << "mean";
    for (int col = 0; col < 10; ++col) {
        csv << ",";
        if (counts[col] > 0) csv << fmt(sums[col] / double(counts[col]));
    }
    csv << "\n";

    json summary{
        {"manifest", manifest_path},
        {"report", out_csv},
        {"rows", rows.size()},
        {"ok", rows.size() - failed},
        {"failed", failed},
        {"config",
         json{{"lambda", cfg.lambda},
              {"gammas", cfg.gammas.values()},
              {"dv", cfg.dv_star},
              {"seg_thresh", cfg.seg_threshold},
              {"downsample", cfg.downsample},
              {"gf_subsample", cfg.gf_subsample},
              {"eta", cfg.eta},
              {"gamma_clamp", json::array({cfg.gamma_lo, cfg.gamma_hi})},
              {"jobs", jobs}}},
    };
    std::cout << summary.dump() << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Single-image low-light enhancement and quality metrics"};
    app.require_subcommand(1);

    std::string config_path;

    // enhance
    auto* enhance = app.add_subcommand("enhance", "Enhance one low-light image");
    std::string enhance_input, enhance_output;
    TuningFlags enhance_tuning;
    enhance->add_option("input", enhance_input, "Input PNG/JPEG")->required();
    enhance->add_option("-o,--output", enhance_output, "Output image path")->required();
    enhance->add_option("--config", config_path, "Config file (flat key = value)");
    attach_tuning(enhance, enhance_tuning);

    // curve
    auto* curve = app.add_subcommand(
        "curve", "Measure and fit the gamma/lightness response curve");
    std::string curve_input, curve_sweep;
    TuningFlags curve_tuning;
    curve->add_option("input", curve_input, "Input PNG/JPEG")->required();
    curve->add_option("--sweep", curve_sweep, "Evaluation grid as lo:hi:step");
    curve->add_option("--config", config_path, "Config file (flat key = value)");
    attach_tuning(curve, curve_tuning);

    // metrics
    auto* metrics = app.add_subcommand("metrics", "Score an enhanced image");
    std::string metrics_enhanced, metrics_reference, metrics_low;
    metrics->add_option("enhanced", metrics_enhanced, "Enhanced image")->required();
    metrics->add_option("reference", metrics_reference, "Reference image")->required();
    metrics->add_option("--low", metrics_low,
                        "Original low-light image (order/state base)");

    // batch
    auto* batch = app.add_subcommand("batch", "Enhance and score a manifest of images");
    std::string batch_manifest, batch_out;
    int jobs = int(std::max(1u, std::thread::hardware_concurrency()));
    TuningFlags batch_tuning;
    batch->add_option("manifest", batch_manifest, "CSV manifest with header id,low,ref")
        ->required();
    batch->add_option("-o,--output", batch_out, "Report CSV path")->required();
    batch->add_option("--jobs", jobs, "Parallel rows (default: hardware threads)");
    batch->add_option("--config", config_path, "Config file (flat key = value)");
    attach_tuning(batch, batch_tuning);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*enhance) {
            const auto cfg = assemble_config(enhance_tuning, config_path, jobs);
            return run_enhance(enhance_input, enhance_output, cfg);
        }
        if (*curve) {
            const auto cfg = assemble_config(curve_tuning, config_path, jobs);
            return run_curve(curve_input, curve_sweep, cfg);
        }
        if (*metrics) {
            return run_metrics(metrics_enhanced, metrics_reference, metrics_low);
        }
        if (*batch) {
            const auto cfg = assemble_config(batch_tuning, config_path, jobs);
            if (jobs < 1) throw lowlux::ConfigError("--jobs must be >= 1");
            return run_batch(batch_manifest, batch_out, cfg, jobs);
        }
    } catch (const lowlux::DimensionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDimension;
    } catch (const lowlux::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const lowlux::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitOk;
}
