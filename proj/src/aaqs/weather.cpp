#include "aaqs/weather.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "aaqs/numeric.hpp"
#include "aaqs/trace_io.hpp"

namespace aaqs {

const std::array<const char*, kWeatherClasses> kWeatherClassNames = {
    "sunny", "unsettled", "cloudy", "rainy_snowy"};

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_semi(const std::string& line) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        std::size_t next = line.find(';', pos);
        if (next == std::string::npos) {
            out.push_back(trim(line.substr(pos)));
            break;
        }
        out.push_back(trim(line.substr(pos, next - pos)));
        pos = next + 1;
    }
    return out;
}

}  // namespace

DwdData load_dwd_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open station file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw IoError("station file is empty: " + path);

    std::vector<std::string> header = split_semi(line);
    const std::array<const char*, 8> required = {"MESS_DATUM", "PM",  "TMK", "UPM",
                                                 "TXK",        "TNK", "RSK", "SDK"};
    std::array<std::size_t, 8> col{};
    for (std::size_t r = 0; r < required.size(); ++r) {
        auto it = std::find(header.begin(), header.end(), required[r]);
        if (it == header.end())
            throw IoError(std::string("station file lacks column ") + required[r]);
        col[r] = static_cast<std::size_t>(it - header.begin());
    }

    DwdData data;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        ++data.raw;
        std::vector<std::string> fields = split_semi(line);
        if (fields.size() < header.size())
            throw IoError("station file row has too few fields: " + line);
        std::array<double, 8> vals{};
        bool missing = false;
        for (std::size_t r = 1; r < required.size(); ++r) {
            vals[r] = parse_double(fields[col[r]]);
            if (vals[r] == -999.0) missing = true;
        }
        if (fields[col[0]].empty()) missing = true;
        if (missing) {
            ++data.dropped;
            continue;
        }
        DwdRow row;
        row.mess_datum = fields[col[0]];
        row.pm = vals[1];
        row.tmk = vals[2];
        row.upm = vals[3];
        row.txk = vals[4];
        row.tnk = vals[5];
        row.rsk = vals[6];
        row.sdk = vals[7];
        data.rows.push_back(std::move(row));
    }
    std::stable_sort(data.rows.begin(), data.rows.end(),
                     [](const DwdRow& a, const DwdRow& b) { return a.mess_datum < b.mess_datum; });
    return data;
}

int classify_day(const DwdRow& row, double precip_mm, double sunshine_h) {
    bool dry = row.rsk <= precip_mm;
    bool sunny = row.sdk > sunshine_h;
    if (dry) return sunny ? 0 : 2;
    return sunny ? 1 : 3;
}

WeatherDataset build_dataset(const DwdData& data, double train_fraction, double precip_mm,
                             double sunshine_h) {
    if (!(train_fraction > 0.0) || !(train_fraction < 1.0))
        throw std::invalid_argument("train fraction must lie in (0, 1)");
    WeatherDataset ds;
    ds.raw = data.raw;
    ds.dropped = data.dropped;
    ds.labels.reserve(data.rows.size());
    for (const DwdRow& row : data.rows) {
        int c = classify_day(row, precip_mm, sunshine_h);
        ds.labels.push_back(c);
        ++ds.class_counts[static_cast<std::size_t>(c)];
    }
    ds.train_rounds = static_cast<int>(
        std::floor(train_fraction * static_cast<double>(ds.labels.size())));
    if (ds.train_rounds < 1 || ds.train_rounds >= static_cast<int>(ds.labels.size()))
        throw std::invalid_argument("dataset too small for the train/test split");
    for (int t = 0; t < ds.train_rounds; ++t)
        ++ds.train_class_counts[static_cast<std::size_t>(ds.labels[static_cast<std::size_t>(t)])];
    return ds;
}

Histogram make_histogram(std::span<const double> values, double lo, double hi, int bins) {
    if (!(hi > lo) || bins < 1) throw std::invalid_argument("bad histogram range");
    Histogram h;
    h.lo = lo;
    h.hi = hi;
    h.counts.assign(static_cast<std::size_t>(bins), 0);
    double width = (hi - lo) / bins;
    std::vector<double> finite;
    finite.reserve(values.size());
    for (double v : values) {
        if (std::isnan(v) || v < 0.0) throw std::invalid_argument("histogram values must be >= 0");
        ++h.total;
        if (v == kInf) {
            ++h.inf_count;
            continue;
        }
        finite.push_back(v);
        int idx = static_cast<int>(std::floor((v - lo) / width));
        if (idx < 0) idx = 0;
        if (idx >= bins) idx = bins - 1;  // overflow values share the last bin
        ++h.counts[static_cast<std::size_t>(idx)];
    }
    if (h.inf_count > 0) {
        h.mean = kInf;
    } else if (h.total > 0) {
        h.mean = kahan_sum(finite) / static_cast<double>(h.total);
    }
    return h;
}

std::vector<WeatherRunConfig> default_weather_runs() {
    return {{"sum", 1.0}, {"focal", 1.0}, {"sqrt", 2.0}, {"pow10", 0.001}, {"square", 0.5}};
}

WeatherExperts build_experts(const WeatherDataset& ds, double laplace_alpha,
                             const std::vector<std::vector<DecisionVector>>& external,
                             const std::vector<std::string>& external_names) {
    if (laplace_alpha <= 0.0) throw std::invalid_argument("laplace alpha must be > 0");
    const int T = ds.test_rounds();
    if (!external.empty() && static_cast<int>(external.size()) != T)
        throw std::invalid_argument("external expert stream length must match the test block");
    if (!external.empty() && external[0].size() != external_names.size())
        throw std::invalid_argument("external expert names do not match the stream");

    DecisionVector uniform(kWeatherClasses, 1.0 / kWeatherClasses);
    DecisionVector laplace(kWeatherClasses);
    double denom = static_cast<double>(ds.train_rounds) + laplace_alpha * kWeatherClasses;
    for (int c = 0; c < kWeatherClasses; ++c)
        laplace[static_cast<std::size_t>(c)] =
            (static_cast<double>(ds.train_class_counts[static_cast<std::size_t>(c)]) +
             laplace_alpha) /
            denom;

    WeatherExperts ex;
    ex.names = {"uniform", "laplace"};
    for (const std::string& n : external_names) ex.names.push_back(n);
    ex.stream.resize(static_cast<std::size_t>(T));
    for (int t = 0; t < T; ++t) {
        auto& round = ex.stream[static_cast<std::size_t>(t)];
        round.push_back(uniform);
        round.push_back(laplace);
        if (!external.empty())
            for (const auto& d : external[static_cast<std::size_t>(t)]) round.push_back(d);
    }
    return ex;
}

WeatherReport run_weather(const WeatherConfig& cfg) {
    DwdData data = load_dwd_csv(cfg.station_file);
    WeatherReport report;
    report.dataset = build_dataset(data, cfg.train_fraction, cfg.precip_mm, cfg.sunshine_h);
    const WeatherDataset& ds = report.dataset;

    std::vector<std::vector<DecisionVector>> external;
    std::vector<std::string> external_names;
    if (!cfg.expert_csv.empty()) {
        external = load_expert_csv(cfg.expert_csv, kWeatherClasses);
        for (std::size_t k = 0; !external.empty() && k < external[0].size(); ++k)
            external_names.push_back("external_" + std::to_string(k));
    }
    WeatherExperts experts = build_experts(ds, cfg.laplace_alpha, external, external_names);
    report.expert_names = experts.names;

    std::vector<int> outcomes(ds.labels.begin() + ds.train_rounds, ds.labels.end());
    const int T = static_cast<int>(outcomes.size());
    const int n = static_cast<int>(experts.names.size());

    LossFunction log_loss = LossFunction::from_key("log");
    std::vector<double> vals(static_cast<std::size_t>(T));
    for (int th = 0; th < n; ++th) {
        for (int t = 0; t < T; ++t)
            vals[static_cast<std::size_t>(t)] = log_loss(
                outcomes[static_cast<std::size_t>(t)],
                experts.stream[static_cast<std::size_t>(t)][static_cast<std::size_t>(th)]);
        report.expert_hist.push_back(make_histogram(vals));
        report.expert_mean_loss.push_back(report.expert_hist.back().mean);
    }

    std::vector<WeatherRunConfig> runs = cfg.runs.empty() ? default_weather_runs() : cfg.runs;
    for (const WeatherRunConfig& rc : runs) {
        WeatherRunResult rr;
        rr.gen_key = rc.gen_key;
        rr.eta = rc.eta;

        PredictionGameSpec spec;
        spec.profile = make_profile(Generator::from_key(rc.gen_key), rc.eta);
        spec.loss = log_loss;
        spec.num_outcomes = kWeatherClasses;
        spec.num_experts = n;

        bool exact = spec.profile.gen.kind() == GenKind::Sum && rc.eta <= 1.0;
        SubstitutionRule rule = exact ? SubstitutionRule::logloss_exact()
                                      : SubstitutionRule::minimax_grid(
                                            DecisionGrid::simplex(kWeatherClasses, cfg.grid_steps));
        rr.substitution = exact ? "logloss_exact" : "minimax_grid";

        rr.trace = run_game(spec, experts.stream, outcomes, rule);

        if (exact) {
            rr.c_used = 1.0;
            rr.bound = check_quasisum_bound(rr.trace, spec, cfg.bound_tol);
        } else {
            MixabilityConfig mix_cfg;
            mix_cfg.decision_grid = DecisionGrid::simplex(kWeatherClasses, cfg.grid_steps);
            mix_cfg.psi_grid = DecisionGrid::simplex(kWeatherClasses, cfg.mix_psi_steps);
            mix_cfg.weight_steps = cfg.mix_weight_steps;
            rr.mix = estimate_c(spec, mix_cfg);
            rr.mix_estimated = true;
            rr.c_used = rr.mix.c_hat;
            rr.bound = check_nonmixable_bound(rr.trace, spec, rr.c_used, cfg.bound_tol);
        }
        rr.apa = check_apa_identity(rr.trace, spec);

        for (int t = 0; t < T; ++t)
            vals[static_cast<std::size_t>(t)] =
                rr.trace.rounds[static_cast<std::size_t>(t)].learner_loss;
        rr.learner_hist = make_histogram(vals);
        rr.learner_mean_loss = rr.learner_hist.mean;

        report.runs.push_back(std::move(rr));
    }
    return report;
}

}  // namespace aaqs
