#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "aaqs/bounds.hpp"
#include "aaqs/engine.hpp"
#include "aaqs/substitution.hpp"

namespace aaqs {

inline constexpr int kWeatherClasses = 4;
extern const std::array<const char*, kWeatherClasses> kWeatherClassNames;

// One daily observation row from a DWD climate (KL) file. Only the columns
// used for cleaning and labeling are kept.
struct DwdRow {
    std::string mess_datum;
    double pm = 0.0;   // mean pressure
    double tmk = 0.0;  // mean temperature
    double upm = 0.0;  // mean humidity
    double txk = 0.0;  // max temperature
    double tnk = 0.0;  // min temperature
    double rsk = 0.0;  // precipitation, mm
    double sdk = 0.0;  // sunshine, hours
};

struct DwdData {
    std::vector<DwdRow> rows;  // cleaned, in MESS_DATUM order
    int raw = 0;               // data rows in the file
    int dropped = 0;           // removed because a required field was -999
};

// Semicolon-separated KL daily file with a header naming at least
// MESS_DATUM, PM, TMK, UPM, TXK, TNK, RSK, SDK. A row with -999 in any of
// those is dropped.
DwdData load_dwd_csv(const std::string& path);

// 0 sunny, 1 unsettled, 2 cloudy, 3 rainy_snowy: dry means RSK <= precip_mm,
// sunny means SDK > sunshine_h.
int classify_day(const DwdRow& row, double precip_mm = 2.0, double sunshine_h = 4.0);

struct WeatherDataset {
    std::vector<int> labels;  // chronological, one per cleaned day
    int train_rounds = 0;     // floor(train_fraction * N), the leading block
    std::array<int, kWeatherClasses> class_counts{};
    std::array<int, kWeatherClasses> train_class_counts{};
    int raw = 0;
    int dropped = 0;

    int test_rounds() const { return static_cast<int>(labels.size()) - train_rounds; }
};

WeatherDataset build_dataset(const DwdData& data, double train_fraction = 0.8,
                             double precip_mm = 2.0, double sunshine_h = 4.0);

struct Histogram {
    double lo = 0.0;
    double hi = 3.4;
    std::vector<long long> counts;  // finite values past hi land in the last bin
    long long inf_count = 0;
    double mean = 0.0;  // inf when any value is infinite
    long long total = 0;
};

Histogram make_histogram(std::span<const double> values, double lo = 0.0, double hi = 3.4,
                         int bins = 50);

struct WeatherRunConfig {
    std::string gen_key;
    double eta = 1.0;
};

struct WeatherRunResult {
    std::string gen_key;
    double eta = 0.0;
    std::string substitution;  // "logloss_exact" or "minimax_grid"
    double c_used = 1.0;
    bool mix_estimated = false;
    MixabilityEstimate mix;  // populated when mix_estimated
    BoundReport bound;
    ApaReport apa;
    Histogram learner_hist;
    double learner_mean_loss = 0.0;
    GameTrace trace;
};

struct WeatherConfig {
    std::string station_file;
    double precip_mm = 2.0;
    double sunshine_h = 4.0;
    double train_fraction = 0.8;
    int grid_steps = 20;      // substitution simplex resolution
    int mix_psi_steps = 10;   // coarser mixture-component grid for the estimator
    int mix_weight_steps = 20;
    double laplace_alpha = 1.0;
    double bound_tol = 1e-6;
    std::string expert_csv;  // optional extra expert streams over the test block
    std::vector<WeatherRunConfig> runs;  // empty: the five defaults
};

struct WeatherReport {
    WeatherDataset dataset;
    std::vector<std::string> expert_names;
    std::vector<double> expert_mean_loss;     // per-round log loss over the test block
    std::vector<Histogram> expert_hist;       // same stream for every run config
    std::vector<WeatherRunResult> runs;
};

std::vector<WeatherRunConfig> default_weather_runs();

WeatherReport run_weather(const WeatherConfig& cfg);

// Expert prediction streams for the test block: the uniform expert, the
// Laplace-smoothed train-frequency expert, then any externally loaded ones.
struct WeatherExperts {
    std::vector<std::string> names;
    std::vector<std::vector<DecisionVector>> stream;  // [round][expert]
};

WeatherExperts build_experts(const WeatherDataset& ds, double laplace_alpha,
                             const std::vector<std::vector<DecisionVector>>& external,
                             const std::vector<std::string>& external_names);

}  // namespace aaqs
