#pragma once

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <string>
#include <thread>
#include <vector>

#include "loggap/errors.hpp"
#include "loggap/impute.hpp"
#include "loggap/metrics.hpp"
#include "loggap/rng.hpp"
#include "loggap/well.hpp"

namespace loggap {

/// One injected gap: where it was cut, the held-out truth, and the seed that
/// placed it.
struct EvalCase {
    GapSpec gap;
    std::vector<double> truth;
    std::size_t trial = 0;
    std::uint64_t trial_seed = 0;
};

struct EvalEntry {
    std::string method;
    std::size_t gap_length = 0;
    double mean_score = 0.0;
    double std_score = 0.0;
    std::size_t trial_count = 0;
};

struct EvalReport {
    std::vector<EvalEntry> entries;
    std::string metric_name = "nmae_p99_p1";
};

/// Cuts seeded synthetic gaps into the target curve: one case per length per
/// trial. Placements avoid real gaps and keep an observed sample on each
/// side; cases within the same trial never overlap or touch, so a trial's
/// masked working copy leaves every case anchored. Across trials the sampler
/// also tries to avoid reuse, falling back to per-trial separation when the
/// requested volume no longer fits the well.
inline std::vector<EvalCase> inject_gaps(const WellLog& well, const std::string& target,
                                         const std::vector<std::size_t>& lengths,
                                         std::size_t trials_per_length, std::uint64_t seed) {
    const Curve& curve = well.at(target);
    const std::size_t n = curve.values.size();
    const std::size_t longest = longest_observed_run(curve);
    for (std::size_t len : lengths) {
        if (len == 0) throw std::invalid_argument("gap length must be positive");
        if (len + 2 > longest)
            throw DataError("requested gap length " + std::to_string(len) +
                            " exceeds the longest observed run (" + std::to_string(longest) + ")");
    }

    std::vector<bool> real_missing(n);
    for (std::size_t i = 0; i < n; ++i) real_missing[i] = is_missing(curve.values[i]);

    std::vector<EvalCase> cases;
    cases.reserve(lengths.size() * trials_per_length);
    std::vector<bool> global_used = real_missing;

    for (std::size_t t = 0; t < trials_per_length; ++t) {
        std::vector<bool> trial_used = real_missing;
        for (std::size_t len : lengths) {
            const std::uint64_t case_seed = hash_mix(hash_mix(seed, len), t);
            Rng rng(case_seed);
            const std::size_t span = n - len - 1;  // starts in [1, n-len-1]

            auto segment_free = [&](const std::vector<bool>& used, std::size_t start) {
                // flank-inclusive: the observed neighbors must stay observed
                for (std::size_t i = start - 1; i <= start + len; ++i)
                    if (used[i]) return false;
                return true;
            };

            std::size_t start = 0;
            bool placed = false;
            for (int attempt = 0; attempt < 200 && !placed; ++attempt) {
                start = 1 + static_cast<std::size_t>(rng.uniform_index(span));
                placed = segment_free(trial_used, start) && segment_free(global_used, start);
            }
            for (int attempt = 0; attempt < 20000 && !placed; ++attempt) {
                start = 1 + static_cast<std::size_t>(rng.uniform_index(span));
                placed = segment_free(trial_used, start);
            }
            if (!placed)
                throw DataError("could not place a gap of length " + std::to_string(len) +
                                "; too much of the well is requested or missing");

            EvalCase ec;
            ec.gap.mnemonic = target;
            ec.gap.start = start;
            ec.gap.length = len;
            ec.gap.left_anchored = true;
            ec.gap.right_anchored = true;
            ec.truth.assign(curve.values.begin() + start, curve.values.begin() + start + len);
            ec.trial = t;
            ec.trial_seed = case_seed;
            for (std::size_t i = start; i < start + len; ++i) {
                trial_used[i] = true;
                global_used[i] = true;
            }
            cases.push_back(std::move(ec));
        }
    }
    return cases;
}

struct BenchmarkConfig {
    std::vector<std::size_t> lengths{5, 10, 25, 50, 100, 150, 200, 250, 300};
    std::size_t trials = 20;
    std::vector<FillMethod> methods{FillMethod::linear, FillMethod::cubic, FillMethod::nn,
                                    FillMethod::nn_shift};
    std::uint64_t seed = 42;
    bool parallel = false;
    std::size_t anchor_k = 10;
    FeatureConfig features;
    PreprocessConfig preprocess;
    TrainConfig train;
};

/// Scores every method over every injected case. The network is trained once
/// per trial (on the well with that trial's cases masked) and then predicts
/// each of the trial's gaps; interpolators run directly on the masked curve.
/// Scores are normalized against the whole observed target. Trials are
/// independent, so they can run on worker threads; the aggregation order is
/// fixed, making serial and parallel runs identical.
inline EvalReport run_benchmark(const WellLog& well, const BenchmarkConfig& config) {
    if (config.methods.empty()) throw std::invalid_argument("no methods requested");
    if (config.trials == 0) throw std::invalid_argument("trials must be >= 1");

    const Curve& target = well.at(config.features.target);
    std::vector<double> reference;
    reference.reserve(target.values.size());
    for (double v : target.values)
        if (!is_missing(v)) reference.push_back(v);

    const auto cases =
        inject_gaps(well, config.features.target, config.lengths, config.trials, config.seed);
    const std::size_t per_trial = config.lengths.size();

    bool needs_network = false;
    for (FillMethod m : config.methods)
        needs_network |= (m == FillMethod::nn || m == FillMethod::nn_shift);

    PreparedWell prepared;
    if (needs_network) prepared = prepare_predictors(well, config.features, config.preprocess);

    // scores[method][length][trial]
    std::vector<std::vector<std::vector<double>>> scores(
        config.methods.size(),
        std::vector<std::vector<double>>(per_trial, std::vector<double>(config.trials, 0.0)));

    auto run_trial = [&](std::size_t t) {
        Curve working = target;
        for (std::size_t li = 0; li < per_trial; ++li) {
            const EvalCase& ec = cases[t * per_trial + li];
            for (std::size_t i = ec.gap.start; i < ec.gap.end(); ++i)
                working.values[i] = missing_value();
        }

        GapFillModel model;
        if (needs_network) {
            TrainConfig tc = config.train;
            tc.seed = hash_mix(hash_mix(config.seed, 0x747261696eull), t);
            tc.on_epoch = nullptr;
            model = fit_gap_fill_model(prepared, working, tc);
        }

        for (std::size_t li = 0; li < per_trial; ++li) {
            const EvalCase& ec = cases[t * per_trial + li];
            for (std::size_t mi = 0; mi < config.methods.size(); ++mi) {
                std::vector<double> values;
                switch (config.methods[mi]) {
                    case FillMethod::linear:
                        values = linear_interpolate(working, ec.gap);
                        break;
                    case FillMethod::cubic:
                        values = cubic_interpolate(working, ec.gap);
                        break;
                    case FillMethod::nn:
                        values = predict_gap(model, prepared.features, ec.gap);
                        break;
                    case FillMethod::nn_shift:
                        values = shift_correct(model, prepared.features, working, ec.gap,
                                               config.anchor_k)
                                     .first;
                        break;
                    default:
                        throw std::invalid_argument("unsupported benchmark method");
                }
                scores[mi][li][t] = normalized_mae(values, ec.truth, reference);
            }
        }
    };

    if (config.parallel && config.trials > 1) {
        const std::size_t workers =
            std::min<std::size_t>(config.trials, std::max(1u, std::thread::hardware_concurrency()));
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t t = next.fetch_add(1); t < config.trials; t = next.fetch_add(1))
                    run_trial(t);
            });
        for (auto& th : pool) th.join();
    } else {
        for (std::size_t t = 0; t < config.trials; ++t) run_trial(t);
    }

    // deterministic (method, length) order regardless of request order
    std::vector<std::size_t> method_order(config.methods.size());
    for (std::size_t i = 0; i < method_order.size(); ++i) method_order[i] = i;
    std::sort(method_order.begin(), method_order.end(), [&](std::size_t a, std::size_t b) {
        return std::string_view(to_string(config.methods[a])) <
               std::string_view(to_string(config.methods[b]));
    });

    EvalReport report;
    for (std::size_t mi : method_order) {
        for (std::size_t li = 0; li < per_trial; ++li) {
            const auto& s = scores[mi][li];
            double mean = 0.0;
            for (double v : s) mean += v;
            mean /= static_cast<double>(s.size());
            double var = 0.0;
            for (double v : s) var += (v - mean) * (v - mean);
            var /= static_cast<double>(s.size());
            EvalEntry entry;
            entry.method = to_string(config.methods[mi]);
            entry.gap_length = config.lengths[li];
            entry.mean_score = mean;
            entry.std_score = std::sqrt(var);
            entry.trial_count = s.size();
            report.entries.push_back(std::move(entry));
        }
    }
    return report;
}

namespace detail {

inline std::string format_report_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

inline std::string format_coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

}  // namespace detail

/// CSV view of a report: method,gap_length,mean,std,trials.
inline std::string report_to_csv(const EvalReport& report) {
    std::string out = "method,gap_length,mean,std,trials\n";
    for (const auto& e : report.entries) {
        out += e.method;
        out += ',' + std::to_string(e.gap_length);
        out += ',' + detail::format_report_real(e.mean_score);
        out += ',' + detail::format_report_real(e.std_score);
        out += ',' + std::to_string(e.trial_count);
        out += '\n';
    }
    return out;
}

/// Parses a CSV produced by report_to_csv.
inline EvalReport report_from_csv(const std::string& csv) {
    EvalReport report;
    std::size_t pos = csv.find('\n');
    if (pos == std::string::npos) throw DataError("report CSV: missing header");
    ++pos;
    while (pos < csv.size()) {
        std::size_t eol = csv.find('\n', pos);
        if (eol == std::string::npos) eol = csv.size();
        const std::string_view line(csv.data() + pos, eol - pos);
        pos = eol + 1;
        if (line.empty()) continue;
        EvalEntry e;
        std::size_t field = 0, begin = 0;
        for (std::size_t i = 0; i <= line.size(); ++i) {
            if (i != line.size() && line[i] != ',') continue;
            const std::string_view cell = line.substr(begin, i - begin);
            switch (field) {
                case 0: e.method = std::string(cell); break;
                case 1: e.gap_length = std::stoul(std::string(cell)); break;
                case 2: e.mean_score = std::stod(std::string(cell)); break;
                case 3: e.std_score = std::stod(std::string(cell)); break;
                case 4: e.trial_count = std::stoul(std::string(cell)); break;
                default: throw DataError("report CSV: too many fields");
            }
            begin = i + 1;
            ++field;
        }
        if (field != 5) throw DataError("report CSV: expected 5 fields");
        report.entries.push_back(std::move(e));
    }
    return report;
}

struct SvgOptions {
    double width = 900.0;
    double height = 560.0;
};

/// Standalone SVG 1.1 line chart: one path per method over gap length with a
/// translucent ±1 std band and a legend.
inline std::string report_to_svg(const EvalReport& report, const SvgOptions& options = {}) {
    if (report.entries.empty()) throw DataError("cannot render an empty report");

    std::vector<std::string> methods;
    std::vector<std::size_t> lengths;
    double y_max = 0.0;
    for (const auto& e : report.entries) {
        if (std::find(methods.begin(), methods.end(), e.method) == methods.end())
            methods.push_back(e.method);
        if (std::find(lengths.begin(), lengths.end(), e.gap_length) == lengths.end())
            lengths.push_back(e.gap_length);
        y_max = std::max(y_max, e.mean_score + e.std_score);
    }
    std::sort(lengths.begin(), lengths.end());
    if (y_max <= 0.0) y_max = 1.0;
    y_max *= 1.05;

    const double margin_l = 70.0, margin_r = 160.0, margin_t = 40.0, margin_b = 50.0;
    const double plot_w = options.width - margin_l - margin_r;
    const double plot_h = options.height - margin_t - margin_b;
    const double x_min = static_cast<double>(lengths.front());
    const double x_max = static_cast<double>(lengths.back());
    const double x_span = x_max > x_min ? x_max - x_min : 1.0;

    auto x_of = [&](double len) { return margin_l + (len - x_min) / x_span * plot_w; };
    auto y_of = [&](double score) { return margin_t + (1.0 - score / y_max) * plot_h; };

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"};
    using detail::format_coord;

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
           format_coord(options.width) + "\" height=\"" + format_coord(options.height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + format_coord(margin_l) + "\" y=\"24\" font-family=\"sans-serif\" "
           "font-size=\"16\">imputation error vs gap length</text>\n";

    // axes
    svg += "<line x1=\"" + format_coord(margin_l) + "\" y1=\"" + format_coord(margin_t + plot_h) +
           "\" x2=\"" + format_coord(margin_l + plot_w) + "\" y2=\"" +
           format_coord(margin_t + plot_h) + "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + format_coord(margin_l) + "\" y1=\"" + format_coord(margin_t) +
           "\" x2=\"" + format_coord(margin_l) + "\" y2=\"" + format_coord(margin_t + plot_h) +
           "\" stroke=\"black\"/>\n";
    for (std::size_t len : lengths) {
        const double x = x_of(static_cast<double>(len));
        svg += "<line x1=\"" + format_coord(x) + "\" y1=\"" + format_coord(margin_t + plot_h) +
               "\" x2=\"" + format_coord(x) + "\" y2=\"" + format_coord(margin_t + plot_h + 5) +
               "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + format_coord(x) + "\" y=\"" + format_coord(margin_t + plot_h + 20) +
               "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" +
               std::to_string(len) + "</text>\n";
    }
    for (int tick = 0; tick <= 4; ++tick) {
        const double score = y_max * tick / 4.0;
        const double y = y_of(score);
        svg += "<text x=\"" + format_coord(margin_l - 8) + "\" y=\"" + format_coord(y + 4) +
               "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" +
               detail::format_report_real(score) + "</text>\n";
    }
    svg += "<text x=\"" + format_coord(margin_l + plot_w / 2) + "\" y=\"" +
           format_coord(options.height - 12) +
           "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">gap length "
           "(samples)</text>\n";
    svg += "<text x=\"18\" y=\"" + format_coord(margin_t + plot_h / 2) +
           "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" "
           "transform=\"rotate(-90 18 " +
           format_coord(margin_t + plot_h / 2) + ")\">" + report.metric_name + "</text>\n";

    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
        const std::string& method = methods[mi];
        const char* color = palette[mi % (sizeof(palette) / sizeof(palette[0]))];
        std::vector<const EvalEntry*> row;
        for (std::size_t len : lengths)
            for (const auto& e : report.entries)
                if (e.method == method && e.gap_length == len) row.push_back(&e);

        // ±1 std band as a closed polygon
        std::string points;
        for (const auto* e : row) {
            points += format_coord(x_of(static_cast<double>(e->gap_length))) + "," +
                      format_coord(y_of(std::min(y_max, e->mean_score + e->std_score))) + " ";
        }
        for (auto it = row.rbegin(); it != row.rend(); ++it) {
            points += format_coord(x_of(static_cast<double>((*it)->gap_length))) + "," +
                      format_coord(y_of(std::max(0.0, (*it)->mean_score - (*it)->std_score))) + " ";
        }
        svg += "<polygon points=\"" + points + "\" fill=\"" + color + "\" opacity=\"0.15\"/>\n";

        std::string path = "M";
        for (std::size_t i = 0; i < row.size(); ++i) {
            path += " " + format_coord(x_of(static_cast<double>(row[i]->gap_length))) + " " +
                    format_coord(y_of(row[i]->mean_score));
            if (i + 1 < row.size()) path += " L";
        }
        svg += "<path d=\"" + path + "\" fill=\"none\" stroke=\"" + color +
               "\" stroke-width=\"2\"/>\n";

        // legend
        const double ly = margin_t + 16.0 * static_cast<double>(mi);
        svg += "<rect x=\"" + format_coord(margin_l + plot_w + 14) + "\" y=\"" +
               format_coord(ly - 9) + "\" width=\"12\" height=\"12\" fill=\"" + color + "\"/>\n";
        svg += "<text x=\"" + format_coord(margin_l + plot_w + 32) + "\" y=\"" + format_coord(ly) +
               "\" font-family=\"sans-serif\" font-size=\"12\">" + method + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

struct RenderedReport {
    std::string csv;
    std::string svg;
};

inline RenderedReport render_report(const EvalReport& report, const SvgOptions& options = {}) {
    return {report_to_csv(report), report_to_svg(report, options)};
}

}  // namespace loggap
