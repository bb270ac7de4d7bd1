// Command-line front end: capital determination (measure), model selection
// (select) and synthetic fixture generation (simulate).

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "robustcap/backtest.hpp"
#include "robustcap/dataset.hpp"
#include "robustcap/garch.hpp"
#include "robustcap/robust.hpp"

namespace {

using namespace robustcap;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;

struct RunConfig {
    std::size_t window = 250;
    double var_alpha = 0.01;
    double es_alpha = 0.025;
    double evar_alpha = 0.00145;
    double msd_beta = 1.0;
    std::string split = "2008-12-31";
    std::optional<std::string> skip_until;  // measure defaults to 2002-01-01
    int daycount = 252;
    bool compound = false;
    bool scale1000 = true;
    bool cr_sum = false;
    double std_nu = 8.0;
    double ged_kappa = 1.5;
    double skew_xi = 0.9;
    std::string models = "hs,garch_norm,garch_snorm,garch_std,garch_sstd,garch_ged,garch_sged,"
                         "fhs_norm,fhs_snorm,fhs_std,fhs_sstd,fhs_ged,fhs_sged";
};

void apply_config_file(const std::string& path, RunConfig& cfg) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open config " + path);
    }
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key=value");
        }
        const std::string key = line.substr(0, eq);
        const std::string val = line.substr(eq + 1);
        try {
            if (key == "window") cfg.window = std::stoul(val);
            else if (key == "var_alpha") cfg.var_alpha = std::stod(val);
            else if (key == "es_alpha") cfg.es_alpha = std::stod(val);
            else if (key == "evar_alpha") cfg.evar_alpha = std::stod(val);
            else if (key == "msd_beta") cfg.msd_beta = std::stod(val);
            else if (key == "split") cfg.split = val;
            else if (key == "skip_until") cfg.skip_until = val;
            else if (key == "daycount") cfg.daycount = std::stoi(val);
            else if (key == "compound") cfg.compound = val == "true" || val == "1";
            else if (key == "scale1000") cfg.scale1000 = val == "true" || val == "1";
            else if (key == "cr_sum") cfg.cr_sum = val == "true" || val == "1";
            else if (key == "std_nu") cfg.std_nu = std::stod(val);
            else if (key == "ged_kappa") cfg.ged_kappa = std::stod(val);
            else if (key == "skew_xi") cfg.skew_xi = std::stod(val);
            else if (key == "models") cfg.models = val;
            else throw std::runtime_error("unknown key '" + key + "'");
        } catch (const std::runtime_error&) {
            throw;
        } catch (const std::exception& e) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
}

std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

ModelSpec parse_model(const std::string& code, const RunConfig& cfg) {
    if (code == "hs") return {Scheme::HS, InnovationDist::normal()};
    const auto us = code.find('_');
    if (us == std::string::npos) {
        throw std::invalid_argument("bad model code '" + code + "'");
    }
    const std::string scheme = code.substr(0, us);
    const std::string dist_code = code.substr(us + 1);
    const double shape = dist_code.find("std") != std::string::npos ? cfg.std_nu : cfg.ged_kappa;
    const InnovationDist dist = InnovationDist::parse(dist_code, shape, cfg.skew_xi);
    if (scheme == "garch") return {Scheme::Garch, dist};
    if (scheme == "fhs") return {Scheme::FHS, dist};
    throw std::invalid_argument("bad model scheme '" + scheme + "'");
}

std::vector<SplitSpec> make_splits(const RunConfig& cfg, const std::string& first_date,
                                   const std::string& last_date) {
    std::vector<SplitSpec> splits = {{"whole", "", ""}};
    if (!cfg.split.empty() && cfg.split >= first_date && cfg.split < last_date) {
        splits.push_back({"first", "", cfg.split});
        splits.push_back({"second", next_calendar_day(cfg.split), ""});
    }
    return splits;
}

void write_report(const std::string& out_dir, const std::string& stem, const ScoreTable& table) {
    std::filesystem::create_directories(out_dir);
    const auto csv_path = std::filesystem::path(out_dir) / (stem + ".csv");
    const auto txt_path = std::filesystem::path(out_dir) / (stem + ".txt");
    std::ofstream(csv_path) << table.to_csv();
    std::ofstream(txt_path) << table.to_text();
    std::cout << "[" << stem << "]\n" << table.to_text();
}

int cmd_measure(const MarketDataset& ds, RunConfig cfg, const std::string& out_dir) {
    const RollingInput input = ds.to_rolling(cfg.daycount, cfg.compound);

    const std::vector<std::pair<std::string, RiskMeasureSpec>> duals = {
        {"EL", RiskMeasureSpec::el()},
        {"MSD", RiskMeasureSpec::msd(cfg.msd_beta)},
        {"ES", RiskMeasureSpec::es(cfg.es_alpha)},
        {"EVaR", RiskMeasureSpec::evar(cfg.evar_alpha)},
        {"ML", RiskMeasureSpec::ml()},
    };

    std::vector<ForecastTask> tasks;
    for (const auto& [prefix, kind] :
         std::initializer_list<std::pair<std::string, LossKind>>{
             {"R", LossKind::Ours}, {"Rb", LossKind::B}, {"Rc", LossKind::C}}) {
        for (const auto& [name, spec] : duals) {
            tasks.push_back({true, {}, spec, kind, prefix + "_" + name});
        }
    }
    const ModelSpec hs{Scheme::HS, InnovationDist::normal()};
    tasks.push_back({false, hs, RiskMeasureSpec::var(cfg.var_alpha), LossKind::Ours, "VaR"});
    tasks.push_back({false, hs, RiskMeasureSpec::es(cfg.es_alpha), LossKind::Ours, "ES"});
    tasks.push_back({false, hs, RiskMeasureSpec::ml(), LossKind::Ours, "ML"});

    RollingConfig rolling{cfg.window, cfg.skip_until.value_or("2002-01-01")};
    std::vector<TaskRecords> streams = rolling_forecast(input, tasks, rolling);

    // "Returns" reference row: a perfect forecast x_t = X_t, stats on X itself
    TaskRecords returns_row;
    returns_row.model = "-";
    returns_row.label = "Returns";
    returns_row.spec = RiskMeasureSpec::el();
    returns_row.robust = true;  // suppresses the elicitable-loss column
    returns_row.stats_on_realized = true;
    for (const auto& r : streams.front().records) {
        returns_row.records.push_back({r.date, -r.realized, r.realized, r.g, r.l});
    }
    streams.insert(streams.begin(), std::move(returns_row));

    ScoreConfig score_cfg;
    score_cfg.splits = make_splits(cfg, streams.front().records.front().date,
                                   streams.front().records.back().date);
    score_cfg.scale1000 = false;  // Table-1 layout reports raw aggregates
    score_cfg.cr_sum_convention = cfg.cr_sum;
    write_report(out_dir, "measure_report", score_table(streams, score_cfg));
    return kExitOk;
}

int cmd_select(const MarketDataset& ds, RunConfig cfg, const std::string& out_dir) {
    const RollingInput input = ds.to_rolling(cfg.daycount, cfg.compound);

    std::vector<ModelSpec> models;
    for (const auto& code : split_list(cfg.models)) models.push_back(parse_model(code, cfg));
    if (models.empty()) {
        throw std::invalid_argument("select: no models configured");
    }

    const std::vector<std::pair<std::string, RiskMeasureSpec>> measures = {
        {"EL", RiskMeasureSpec::el()},
        {"VaR", RiskMeasureSpec::var(cfg.var_alpha)},
        {"ES", RiskMeasureSpec::es(cfg.es_alpha)},
        {"EVaR", RiskMeasureSpec::evar(cfg.evar_alpha)},
    };

    std::vector<ForecastTask> tasks;
    for (const auto& model : models) {
        for (const auto& [mname, spec] : measures) {
            tasks.push_back({false, model, spec, LossKind::Ours, model.label()});
        }
        // auxiliary VaR stream at the ES level for the joint VaR-ES score
        tasks.push_back({false, model, RiskMeasureSpec::var(cfg.es_alpha), LossKind::Ours,
                         model.label() + "/aux"});
    }

    RollingConfig rolling{cfg.window, cfg.skip_until.value_or("")};
    std::vector<TaskRecords> streams = rolling_forecast(input, tasks, rolling);
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        if (tasks[i].label.ends_with("/aux")) streams[i].auxiliary = true;
    }

    ScoreConfig score_cfg;
    score_cfg.splits = make_splits(cfg, streams.front().records.front().date,
                                   streams.front().records.back().date);
    score_cfg.scale1000 = cfg.scale1000;
    score_cfg.cr_sum_convention = cfg.cr_sum;
    score_cfg.with_aggregate_costs = false;

    // one table per measure, rows are models, as in the paper
    for (const auto& [mname, spec] : measures) {
        std::vector<TaskRecords> group;
        for (std::size_t i = 0; i < streams.size(); ++i) {
            if (streams[i].auxiliary) continue;
            if (tasks[i].spec.kind != spec.kind) continue;
            group.push_back(streams[i]);
        }
        if (spec.kind == MeasureKind::ES) {
            for (const auto& s : streams) {
                if (s.auxiliary) group.push_back(s);
            }
        }
        write_report(out_dir, "select_" + mname, score_table(group, score_cfg));
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"robust capital-cost risk measures: backtesting and model selection"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string prices_path, yield_g_path, yield_l_path, config_path, out_dir = "out";
    std::string skip_until_flag;

    auto add_data_opts = [&](CLI::App* cmd) {
        cmd->add_option("--prices", prices_path, "price CSV (date,value)")->required();
        cmd->add_option("--yield-g", yield_g_path, "overestimation yield CSV, annual %")->required();
        cmd->add_option("--yield-l", yield_l_path, "underestimation yield CSV, annual %")->required();
        cmd->add_option("--config", config_path, "flat key=value config file");
        cmd->add_option("--out", out_dir, "output directory");
        cmd->add_option("--window", cfg.window, "rolling window length");
        cmd->add_option("--var-alpha", cfg.var_alpha);
        cmd->add_option("--es-alpha", cfg.es_alpha);
        cmd->add_option("--evar-alpha", cfg.evar_alpha);
        cmd->add_option("--msd-beta", cfg.msd_beta);
        cmd->add_option("--split", cfg.split, "sub-sample boundary date (inclusive left)");
        cmd->add_option("--skip-until", skip_until_flag,
                        "drop out-sample days before this date ('' disables)");
        cmd->add_option("--daycount", cfg.daycount, "annual-to-daily divisor");
        cmd->add_flag("--compound", cfg.compound, "geometric daily rates");
        cmd->add_option("--scale1000", cfg.scale1000, "x1000 scaling for CR/loss columns");
        cmd->add_flag("--cr-sum", cfg.cr_sum, "realized cost as a sum instead of a mean");
        cmd->add_option("--models", cfg.models, "comma list: hs, garch_<dist>, fhs_<dist>");
    };

    CLI::App* measure = app.add_subcommand("measure", "capital determination (Table-1 style)");
    add_data_opts(measure);
    CLI::App* select = app.add_subcommand("select", "risk model selection (Tables 2-5 style)");
    add_data_opts(select);

    CLI::App* simulate = app.add_subcommand("simulate", "synthetic market fixture");
    std::uint64_t seed = 7;
    std::size_t days = 600;
    std::string start_date = "2010-01-04";
    GarchParams sim_params;
    sim_params.mu = 0.02;
    sim_params.phi = 0.05;
    sim_params.omega = 0.05;
    sim_params.a = 0.10;
    sim_params.b = 0.85;
    std::string sim_out = "out";
    simulate->add_option("--seed", seed);
    simulate->add_option("--days", days);
    simulate->add_option("--start", start_date, "first business day");
    simulate->add_option("--mu", sim_params.mu);
    simulate->add_option("--phi", sim_params.phi);
    simulate->add_option("--omega", sim_params.omega);
    simulate->add_option("--a", sim_params.a);
    simulate->add_option("--b", sim_params.b);
    simulate->add_option("--out", sim_out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (simulate->parsed()) {
            try {
                const MarketDataset ds = simulate_market(sim_params, days, seed, start_date);
                std::filesystem::create_directories(sim_out);
                const auto dir = std::filesystem::path(sim_out);
                write_csv_series((dir / "prices.csv").string(), {ds.dates, ds.prices});
                write_csv_series((dir / "yield_g.csv").string(), {ds.dates, ds.yield_g});
                write_csv_series((dir / "yield_l.csv").string(), {ds.dates, ds.yield_l});
                std::cout << "wrote " << (dir / "prices.csv").string()
                          << ", yield_g.csv, yield_l.csv\n";
                return kExitOk;
            } catch (const std::invalid_argument& e) {
                std::cerr << "error: " << e.what() << "\n";
                return kExitUsage;
            }
        }

        if (!config_path.empty()) {
            try {
                apply_config_file(config_path, cfg);
            } catch (const std::exception& e) {
                std::cerr << "error: " << e.what() << "\n";
                return kExitUsage;
            }
        }
        if (measure->count("--skip-until") != 0 || select->count("--skip-until") != 0) {
            cfg.skip_until = skip_until_flag;
        }

        MarketDataset ds;
        try {
            ds = ingest(prices_path, yield_g_path, yield_l_path);
        } catch (const std::exception& e) {
            std::cerr << "data error: " << e.what() << "\n";
            return kExitData;
        }

        try {
            if (measure->parsed()) return cmd_measure(ds, cfg, out_dir);
            return cmd_select(ds, cfg, out_dir);
        } catch (const std::invalid_argument& e) {
            std::cerr << "data error: " << e.what() << "\n";
            return kExitData;
        }
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumeric;
    }
}
