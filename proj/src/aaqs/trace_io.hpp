#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "aaqs/adversary.hpp"
#include "aaqs/bounds.hpp"
#include "aaqs/engine.hpp"
#include "aaqs/substitution.hpp"
#include "aaqs/weather.hpp"

namespace aaqs {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// All writers emit "\n" line endings and 17-significant-digit decimals
// ("inf" for infinities), so a rerun with the same inputs is byte-identical
// and a load-save cycle reproduces every double exactly.

void save_trace_csv(const std::string& path, const GameTrace& trace);
GameTrace load_trace_csv(const std::string& path);

// Nature's moves only: t,outcome,exp_<i>_dec_<w> columns.
void save_transcript_csv(const std::string& path, const std::vector<RoundRecord>& transcript,
                         int num_outcomes);
std::vector<RoundRecord> load_transcript_csv(const std::string& path);

void save_histogram_csv(const std::string& path, const Histogram& hist);

// Expert stream over the weather test block: t,expert,p_sunny,p_unsettled,
// p_cloudy,p_rainy rows, t ascending, expert index ascending within t.
void save_expert_csv(const std::string& path,
                     const std::vector<std::vector<DecisionVector>>& stream);
std::vector<std::vector<DecisionVector>> load_expert_csv(const std::string& path,
                                                         int num_outcomes);

// JSON views. Non-finite numbers become the strings "inf"/"-inf" since JSON
// has no literal for them; keys are emitted in sorted order, so dumps are
// deterministic.
nlohmann::json json_num(double x);
nlohmann::json to_json(const BoundReport& rep);
nlohmann::json to_json(const ApaReport& rep);
nlohmann::json to_json(const MixabilityEstimate& est);
nlohmann::json to_json(const MixabilityVerdict& v);
nlohmann::json to_json(const AxiomReport& rep);
nlohmann::json to_json(const Histogram& hist);
nlohmann::json to_json(const GlobalGameResult& res);
nlohmann::json to_json(const FrontierResult& res);
nlohmann::json to_json(const WeatherReport& rep);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace aaqs
