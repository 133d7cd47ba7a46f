// SPDX-License-Identifier: Apache-2.0
#include "hillpr/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <system_error>

#include <CLI11.hpp>
#include <json.hpp>

#include "hillpr/error.hpp"
#include "hillpr/selftest.hpp"
#include "hillpr/statistics.hpp"

namespace hillpr
{

std::string_view to_string(ErrorKind kind) noexcept
{
    switch (kind)
    {
        case ErrorKind::invalid_argument: return "invalid-argument";
        case ErrorKind::domain: return "domain-error";
        case ErrorKind::tie: return "tie-error";
        case ErrorKind::state: return "state-error";
        case ErrorKind::degeneracy: return "degeneracy-error";
        case ErrorKind::numerical: return "numerical-error";
        case ErrorKind::inversion: return "inversion-error";
        case ErrorKind::usage: return "usage-error";
        case ErrorKind::parse: return "parse-error";
        case ErrorKind::io: return "io-error";
    }
    return "error";
}

namespace
{
using nlohmann::ordered_json;

struct RawOptions
{
    std::size_t horizon{1000};
    std::size_t runs{100};
    std::uint64_t seed{0};
    std::string model;
    std::string transform{"auto"};
    std::string statistic;
    std::string out{"hillpr_out"};
    bool trajectories{false};
    std::size_t trajectory_stride{0};
    bool jitter_ties{false};
    bool skip_failed{false};
    std::size_t threads{1};
    std::size_t dims{0};
    bool header{false};
    bool martingale{false};
    std::string backend{"auto"};
    std::string residuals{"recompute"};
    std::size_t synthetic_n{50};
    std::string data;
};

Scheme scheme_for(std::string const& command)
{
    if (command == "iid")
        return Scheme::hill_iid;
    if (command == "urn")
        return Scheme::urn_iid;
    if (command == "normal-check")
        return Scheme::normal_analytic;
    if (command == "bivariate")
        return Scheme::bivariate;
    if (command == "multivariate")
        return Scheme::multivariate;
    if (command == "regression")
        return Scheme::regression;
    throw UsageError("unknown subcommand '" + command + "'");
}

StatisticSpec default_statistic(Scheme scheme)
{
    switch (scheme)
    {
        case Scheme::bivariate:
        case Scheme::multivariate:
            return StatisticSpec::correlation();
        case Scheme::regression:
            return StatisticSpec::ols_coefficients();
        default:
            return StatisticSpec::mean();
    }
}

StoreBackend parse_backend(std::string const& text)
{
    if (text == "auto")
        return StoreBackend::automatic;
    if (text == "vector")
        return StoreBackend::vector;
    if (text == "tree")
        return StoreBackend::tree;
    throw UsageError("--backend expects auto, vector or tree");
}

std::string backend_name(StoreBackend b)
{
    switch (b)
    {
        case StoreBackend::vector: return "vector";
        case StoreBackend::tree: return "tree";
        default: return "auto";
    }
}

void add_run_options(CLI::App& sub, RawOptions& raw, bool needs_data)
{
    sub.add_option("--n-forward", raw.horizon,
                   "Total sample size N after forward simulation")
        ->check(CLI::PositiveNumber);
    sub.add_option("--runs", raw.runs, "Number of independent forward runs")
        ->check(CLI::PositiveNumber);
    sub.add_option("--seed", raw.seed, "Master seed");
    sub.add_option("--statistic", raw.statistic,
                   "mean | variance | quantile:q | beta-moments | correlation | "
                   "ols-coefficients");
    sub.add_option("--out", raw.out, "Output directory");
    sub.add_flag("--trajectories", raw.trajectories, "Write trajectories.csv");
    sub.add_option("--trajectory-stride", raw.trajectory_stride,
                   "Steps between checkpoints (0: 50 even checkpoints)");
    sub.add_flag("--skip-failed", raw.skip_failed,
                 "Tolerate numerical failures in up to 1% of runs");
    sub.add_option("--threads", raw.threads, "Worker threads")
        ->check(CLI::PositiveNumber);
    sub.add_flag("--header", raw.header, "First CSV line is a header");
    sub.add_flag("--jitter-ties", raw.jitter_ties,
                 "Break tied values with a tiny seeded perturbation");
    auto* data = sub.add_option("data", raw.data, "Input CSV file");
    if (needs_data)
    {
        data->required();
    }
}
}  // namespace

std::vector<std::string> CliOptions::canonical_args() const
{
    std::vector<std::string> args{command};
    if (command == "selftest")
    {
        args.insert(args.end(), {"--seed", std::to_string(config.seed)});
        return args;
    }
    auto const push = [&](std::string flag, std::string value) {
        args.push_back(std::move(flag));
        args.push_back(std::move(value));
    };
    push("--n-forward", std::to_string(config.horizon));
    push("--runs", std::to_string(config.runs));
    push("--seed", std::to_string(config.seed));
    if (config.scheme == Scheme::bivariate || config.scheme == Scheme::multivariate)
    {
        push("--model", std::string(1, to_char(config.variant)));
    }
    if (config.scheme != Scheme::normal_analytic && config.scheme != Scheme::urn_iid
        && config.scheme != Scheme::regression)
    {
        push("--transform", config.transform ? config.transform->to_string() : "auto");
        push("--backend", backend_name(config.backend));
    }
    if (config.scheme != Scheme::normal_analytic)
    {
        push("--statistic", config.statistic.to_string());
    }
    if (config.scheme == Scheme::regression)
    {
        push("--residuals", to_string(config.residual_update));
    }
    if (config.scheme == Scheme::multivariate && dims)
    {
        push("--dims", std::to_string(*dims));
    }
    if (config.scheme == Scheme::normal_analytic && !data)
    {
        push("--synthetic-n", std::to_string(synthetic_n));
    }
    push("--out", out_dir.string());
    if (config.record_trajectories)
    {
        args.push_back("--trajectories");
        push("--trajectory-stride", std::to_string(config.trajectory_stride));
    }
    if (config.martingale_diagnostics)
        args.push_back("--martingale-diagnostics");
    if (config.skip_failed)
        args.push_back("--skip-failed");
    if (jitter_ties)
        args.push_back("--jitter-ties");
    push("--threads", std::to_string(config.threads));
    if (data)
    {
        if (data->has_header)
            args.push_back("--header");
        args.push_back(data->path.string());
    }
    return args;
}

CliOptions parse_args(std::vector<std::string> const& args)
{
    RawOptions raw;
    CLI::App app{"Predictive resampling with Hill's nonparametric predictive"};
    app.name("hillpr");
    app.require_subcommand(1);

    auto* iid = app.add_subcommand("iid", "Hill predictive resampling of one column");
    auto* urn = app.add_subcommand("urn", "Polya urn (Bayesian bootstrap) baseline");
    auto* normal = app.add_subcommand(
        "normal-check", "Normal model baseline with closed-form posterior");
    auto* biv = app.add_subcommand("bivariate", "Gaussian copula over two Hill margins");
    auto* multi = app.add_subcommand("multivariate",
                                     "Gaussian copula over d Hill margins (model A)");
    auto* reg = app.add_subcommand("regression",
                                   "Linear regression with Hill residuals");
    auto* self = app.add_subcommand("selftest", "Run the built-in statistical checks");

    for (auto* sub : {iid, urn, biv, multi, reg})
    {
        add_run_options(*sub, raw, true);
    }
    add_run_options(*normal, raw, false);
    normal->add_option("--synthetic-n", raw.synthetic_n,
                       "Size of the synthetic N(0,1) sample used without data")
        ->check(CLI::Range(std::size_t{2}, std::size_t{1} << 40));
    for (auto* sub : {iid, biv, multi})
    {
        sub->add_option("--transform", raw.transform,
                        "auto | identity | logit | affine:lo:hi");
        sub->add_option("--backend", raw.backend, "auto | vector | tree");
    }
    iid->add_flag("--martingale-diagnostics", raw.martingale,
                  "Check moment bounds at every forward step");
    for (auto* sub : {biv, multi})
    {
        sub->add_option("--model", raw.model, "Copula recursion, A or B");
    }
    reg->add_option("--residuals", raw.residuals,
                    "recompute | append: residual predictive between steps");
    multi->add_option("--dims", raw.dims, "Expected number of columns")
        ->check(CLI::Range(std::size_t{2}, std::size_t{1024}));
    self->add_option("--seed", raw.seed, "Master seed");
    self->add_flag("--no-color", "Disable colored output");

    std::vector<std::string> argv_store{"hillpr"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char const*> argv;
    for (auto const& a : argv_store)
    {
        argv.push_back(a.c_str());
    }
    try
    {
        app.parse(static_cast<int>(argv.size()), argv.data());
    }
    catch (CLI::CallForHelp const& e)
    {
        std::ostringstream text;
        app.exit(e, text, text);
        throw HelpRequested{text.str()};
    }
    catch (CLI::ParseError const& e)
    {
        throw UsageError(e.what());
    }

    CliOptions options;
    auto const* chosen = app.get_subcommands().front();
    options.command = chosen->get_name();
    options.config.seed = raw.seed;
    if (options.command == "selftest")
    {
        options.color = self->count("--no-color") == 0
                        && std::getenv("NO_COLOR") == nullptr;
        return options;
    }

    auto& config = options.config;
    config.scheme = scheme_for(options.command);
    config.horizon = raw.horizon;
    config.runs = raw.runs;
    config.record_trajectories = raw.trajectories;
    config.trajectory_stride = raw.trajectory_stride;
    config.martingale_diagnostics = raw.martingale;
    config.skip_failed = raw.skip_failed;
    config.threads = raw.threads;
    options.out_dir = raw.out;
    options.jitter_ties = raw.jitter_ties;
    options.synthetic_n = raw.synthetic_n;
    if (!raw.data.empty())
    {
        options.data = DatasetFile{raw.data, raw.header};
    }
    if (raw.dims)
    {
        options.dims = raw.dims;
    }

    try
    {
        config.backend = parse_backend(raw.backend);
        config.residual_update = parse_residual_update(raw.residuals);
        if (raw.transform != "auto")
        {
            config.transform = TransformSpec::parse(raw.transform);
        }
        config.statistic = raw.statistic.empty()
                               ? default_statistic(config.scheme)
                               : StatisticSpec::parse(raw.statistic);
        if (config.scheme == Scheme::multivariate)
        {
            config.variant = CopulaVariant::A;
            if (!raw.model.empty() && parse_variant(raw.model) != CopulaVariant::A)
            {
                throw UsageError("multivariate supports only --model A");
            }
        }
        else if (!raw.model.empty())
        {
            config.variant = parse_variant(raw.model);
        }
    }
    catch (UsageError const&)
    {
        throw;
    }
    catch (Error const& e)
    {
        throw UsageError(e.what());
    }

    bool const sample_stat = config.statistic.is_sample_statistic();
    switch (config.scheme)
    {
        case Scheme::hill_iid:
        case Scheme::urn_iid:
            if (!sample_stat)
                throw UsageError("--statistic " + config.statistic.to_string()
                                 + " needs a different subcommand");
            break;
        case Scheme::bivariate:
        case Scheme::multivariate:
            if (config.statistic.kind != StatisticSpec::Kind::correlation)
                throw UsageError(options.command + " only supports --statistic correlation");
            break;
        case Scheme::regression:
            if (config.statistic.kind != StatisticSpec::Kind::ols_coefficients)
                throw UsageError("regression only supports --statistic ols-coefficients");
            break;
        case Scheme::normal_analytic:
            if (!raw.statistic.empty())
                throw UsageError("normal-check reports mean_N and x_N; --statistic is not accepted");
            break;
    }
    return options;
}

std::vector<std::vector<double>>
load_columns(CliOptions const& options, std::size_t& tied, std::size_t& jittered)
{
    tied = 0;
    jittered = 0;
    auto const& config = options.config;
    if (!options.data)
    {
        if (config.scheme != Scheme::normal_analytic)
        {
            throw UsageError(options.command + " needs an input file");
        }
        return {synthetic_normal_data(config.seed, options.synthetic_n)};
    }
    auto table = read_csv(*options.data);
    std::size_t const cols = table.columns.size();
    auto const mismatch = [&](std::string const& expected) {
        return UsageError(options.command + " expects " + expected + ", file has "
                          + std::to_string(cols));
    };
    switch (config.scheme)
    {
        case Scheme::hill_iid:
        case Scheme::urn_iid:
        case Scheme::normal_analytic:
            if (cols != 1)
                throw mismatch("1 column");
            break;
        case Scheme::bivariate:
            if (cols != 2)
                throw mismatch("2 columns");
            break;
        case Scheme::multivariate:
            if (options.dims ? cols != *options.dims : cols < 2)
                throw mismatch(options.dims ? std::to_string(*options.dims) + " columns"
                                            : std::string("at least 2 columns"));
            break;
        case Scheme::regression:
            if (cols < 2)
                throw mismatch("a response and at least one design column");
            break;
    }

    // Hill margins need distinct values; the urn and normal baselines do not.
    bool const needs_distinct = config.scheme == Scheme::hill_iid
                                || config.scheme == Scheme::bivariate
                                || config.scheme == Scheme::multivariate;
    if (needs_distinct)
    {
        tied = count_ties(table);
        if (tied > 0)
        {
            if (!options.jitter_ties)
            {
                throw TieError(std::to_string(tied)
                               + " tied values in input; rerun with --jitter-ties");
            }
            jittered = jitter_ties(table, config.seed);
        }
    }
    return std::move(table.columns);
}

namespace
{
ordered_json config_json(CliOptions const& options, PosteriorDraws const& draws)
{
    auto const& c = options.config;
    ordered_json j;
    j["subcommand"] = options.command;
    j["scheme"] = to_string(c.scheme);
    j["input"] = options.data ? options.data->path.string() : std::string();
    j["header"] = options.data ? options.data->has_header : false;
    j["n_forward"] = c.horizon;
    j["runs"] = c.runs;
    j["seed"] = c.seed;
    j["model"] = std::string(1, to_char(c.variant));
    j["transform"] = c.transform ? c.transform->to_string() : "auto";
    j["transform_resolved"] = draws.transform;
    j["statistic"] = c.statistic.to_string();
    j["trajectories"] = c.record_trajectories;
    j["trajectory_stride"] = c.trajectory_stride;
    j["martingale_diagnostics"] = c.martingale_diagnostics;
    j["skip_failed"] = c.skip_failed;
    j["jitter_ties"] = options.jitter_ties;
    j["threads"] = c.threads;
    j["backend"] = backend_name(c.backend);
    if (c.scheme == Scheme::regression)
    {
        j["residuals"] = to_string(c.residual_update);
    }
    j["args"] = options.canonical_args();
    return j;
}

ordered_json finite_or_null(double x)
{
    return std::isfinite(x) ? ordered_json(x) : ordered_json(nullptr);
}
}  // namespace

void write_outputs(CliOptions const& options,
                   PosteriorDraws const& draws,
                   std::size_t rows_read,
                   std::size_t tied,
                   std::size_t jittered)
{
    std::error_code ec;
    std::filesystem::create_directories(options.out_dir, ec);
    if (ec)
    {
        throw IoError("cannot create '" + options.out_dir.string() + "': " + ec.message());
    }
    write_draws_csv(options.out_dir / "draws.csv", draws);
    if (options.config.record_trajectories)
    {
        write_trajectories_csv(options.out_dir / "trajectories.csv", draws);
    }

    ordered_json doc;
    doc["config"] = config_json(options, draws);
    doc["rows_read"] = rows_read;

    auto const summary = summarize(draws.names, draws.rows);
    ordered_json dims = ordered_json::array();
    for (auto const& d : summary.dimensions)
    {
        ordered_json q;
        for (std::size_t k = 0; k < kSummaryLevels.size(); ++k)
        {
            q[format_double(kSummaryLevels[k])] = finite_or_null(d.quantiles[k]);
        }
        dims.push_back({{"name", d.name},
                        {"mean", finite_or_null(d.mean)},
                        {"sd", finite_or_null(d.sd)},
                        {"mcse", finite_or_null(d.mcse)},
                        {"quantiles", q}});
    }
    doc["summary"] = {{"draws", summary.draws},
                      {"mcse_reliable", summary.mcse_reliable},
                      {"dimensions", dims}};

    auto const& dg = draws.diagnostics;
    ordered_json diag;
    diag["clamp_events"] = dg.clamp_events;
    diag["jitter_events"] = dg.jitter_events;
    diag["max_jitter"] = dg.max_jitter;
    diag["failed_runs"] = dg.failed_runs;
    diag["failed_run_ids"] = dg.failed_run_ids;
    diag["refits"] = dg.refits;
    diag["max_refit_delta"] = dg.max_refit_delta;
    diag["tied_values"] = tied;
    diag["jittered_values"] = jittered;
    if (dg.martingale)
    {
        auto const& m = *dg.martingale;
        diag["martingale"] = {{"steps_checked", m.steps_checked},
                              {"violations", m.violations},
                              {"max_band_violation", m.max_band_violation},
                              {"max_supermartingale_violation",
                               m.max_supermartingale_violation}};
    }
    doc["diagnostics"] = diag;
    if (draws.analytic)
    {
        doc["analytic"] = {{"t_n", draws.analytic->t_n},
                           {"variance_last_draw", draws.analytic->variance_last_draw},
                           {"variance_mean", draws.analytic->variance_mean}};
    }

    auto const path = options.out_dir / "summary.json";
    std::ofstream out(path, std::ios::binary);
    if (!out)
    {
        throw IoError("cannot write '" + path.string() + "'");
    }
    out << doc.dump(2) << '\n';
    if (!out)
    {
        throw IoError("failed writing '" + path.string() + "'");
    }
}

namespace
{
int run_selftest_command(CliOptions const& options, std::ostream& out)
{
    auto const results = run_selftest(options.config.seed);
    bool all = true;
    for (auto const& r : results)
    {
        all = all && r.passed;
        char const* tag = r.passed ? "PASS" : "FAIL";
        if (options.color)
        {
            out << (r.passed ? "\033[32m" : "\033[31m") << tag << "\033[0m";
        }
        else
        {
            out << tag;
        }
        out << ' ' << r.name << ": " << r.detail << '\n';
    }
    return all ? 0 : 1;
}
}  // namespace

int run_cli(std::vector<std::string> const& args, std::ostream& out, std::ostream& err)
{
    CliOptions options;
    try
    {
        options = parse_args(args);
    }
    catch (HelpRequested const& help)
    {
        out << help.text;
        return 0;
    }
    catch (UsageError const& e)
    {
        err << "hillpr: usage-error: " << e.what() << '\n'
            << "Run 'hillpr --help' for usage.\n";
        return 2;
    }

    try
    {
        if (options.command == "selftest")
        {
            return run_selftest_command(options, out);
        }
        std::size_t tied = 0;
        std::size_t jittered = 0;
        auto const columns = load_columns(options, tied, jittered);
        auto const draws = run_experiment(options.config, columns);
        write_outputs(options, draws, columns.front().size(), tied, jittered);
        out << "rows read: " << columns.front().size() << "; runs written: "
            << draws.rows.size();
        if (draws.diagnostics.failed_runs > 0)
        {
            out << "; failed runs tolerated: " << draws.diagnostics.failed_runs;
        }
        if (jittered > 0)
        {
            out << "; jittered values: " << jittered;
        }
        out << "\noutput: " << options.out_dir.string() << '\n';
        return 0;
    }
    catch (Error const& e)
    {
        err << "hillpr: " << to_string(e.kind()) << ": " << e.what() << '\n';
        return e.kind() == ErrorKind::usage ? 2 : 1;
    }
    catch (std::exception const& e)
    {
        err << "hillpr: error: " << e.what() << '\n';
        return 1;
    }
}

int run_cli(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return run_cli(args, std::cout, std::cerr);
}

}  // namespace hillpr
