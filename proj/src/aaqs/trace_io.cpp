#include "aaqs/trace_io.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "aaqs/numeric.hpp"

namespace aaqs {

namespace {

std::vector<std::string> split_comma(const std::string& line) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        std::size_t next = line.find(',', pos);
        if (next == std::string::npos) {
            out.push_back(line.substr(pos));
            break;
        }
        out.push_back(line.substr(pos, next - pos));
        pos = next + 1;
    }
    return out;
}

int parse_int(const std::string& s) {
    const char* c = s.c_str();
    char* end = nullptr;
    long v = std::strtol(c, &end, 10);
    if (end == c || *end != '\0') throw IoError("not an integer: '" + s + "'");
    return static_cast<int>(v);
}

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

std::string trace_header(int num_outcomes, int num_experts) {
    std::ostringstream h;
    h << "t,outcome,learner_loss";
    for (int w = 0; w < num_outcomes; ++w) h << ",ldec_" << w;
    for (int w = 0; w < num_outcomes; ++w) h << ",upsi_" << w;
    for (int th = 0; th < num_experts; ++th) {
        h << ",exp_" << th << "_loss";
        for (int w = 0; w < num_outcomes; ++w) h << ",exp_" << th << "_dec_" << w;
    }
    return h.str();
}

std::string transcript_header(int num_outcomes, int num_experts) {
    std::ostringstream h;
    h << "t,outcome";
    for (int th = 0; th < num_experts; ++th)
        for (int w = 0; w < num_outcomes; ++w) h << ",exp_" << th << "_dec_" << w;
    return h.str();
}

}  // namespace

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << content;
    if (!out) throw IoError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void save_trace_csv(const std::string& path, const GameTrace& trace) {
    std::ostringstream out;
    out << trace_header(trace.num_outcomes, trace.num_experts) << "\n";
    for (std::size_t t = 0; t < trace.rounds.size(); ++t) {
        const TraceRound& r = trace.rounds[t];
        out << t << "," << r.outcome << "," << format17(r.learner_loss);
        for (double v : r.learner_decision) out << "," << format17(v);
        for (double v : r.psi_u) out << "," << format17(v);
        for (int th = 0; th < trace.num_experts; ++th) {
            out << "," << format17(r.expert_losses[static_cast<std::size_t>(th)]);
            for (double v : r.expert_predictions[static_cast<std::size_t>(th)])
                out << "," << format17(v);
        }
        out << "\n";
    }
    write_text_file(path, out.str());
}

GameTrace load_trace_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open trace: " + path);
    std::string line;
    if (!std::getline(in, line)) throw IoError("trace file is empty: " + path);
    line = strip_cr(line);

    std::vector<std::string> cols = split_comma(line);
    int m = 0, n = 0;
    for (const std::string& c : cols) {
        if (c.rfind("ldec_", 0) == 0) ++m;
        if (c.rfind("exp_", 0) == 0 && c.size() > 5 && c.compare(c.size() - 5, 5, "_loss") == 0)
            ++n;
    }
    if (m < 2 || n < 1 || line != trace_header(m, n))
        throw IoError("unrecognized trace header: " + line);

    GameTrace trace;
    trace.num_outcomes = m;
    trace.num_experts = n;
    std::size_t expect = 3 + 2 * static_cast<std::size_t>(m) +
                         static_cast<std::size_t>(n) * (1 + static_cast<std::size_t>(m));
    std::size_t t_expect = 0;
    while (std::getline(in, line)) {
        line = strip_cr(line);
        if (line.empty()) continue;
        std::vector<std::string> f = split_comma(line);
        if (f.size() != expect) throw IoError("trace row has wrong arity: " + line);
        if (static_cast<std::size_t>(parse_int(f[0])) != t_expect)
            throw IoError("trace rows out of order at t=" + f[0]);
        ++t_expect;
        TraceRound r;
        r.outcome = parse_int(f[1]);
        if (r.outcome < 0 || r.outcome >= m) throw IoError("trace outcome out of range: " + f[1]);
        std::size_t k = 2;
        r.learner_loss = parse_double(f[k++]);
        r.learner_decision.resize(static_cast<std::size_t>(m));
        for (int w = 0; w < m; ++w) r.learner_decision[static_cast<std::size_t>(w)] = parse_double(f[k++]);
        r.psi_u.resize(static_cast<std::size_t>(m));
        for (int w = 0; w < m; ++w) r.psi_u[static_cast<std::size_t>(w)] = parse_double(f[k++]);
        r.expert_losses.resize(static_cast<std::size_t>(n));
        r.expert_predictions.resize(static_cast<std::size_t>(n));
        for (int th = 0; th < n; ++th) {
            r.expert_losses[static_cast<std::size_t>(th)] = parse_double(f[k++]);
            auto& d = r.expert_predictions[static_cast<std::size_t>(th)];
            d.resize(static_cast<std::size_t>(m));
            for (int w = 0; w < m; ++w) d[static_cast<std::size_t>(w)] = parse_double(f[k++]);
        }
        trace.rounds.push_back(std::move(r));
    }
    return trace;
}

void save_transcript_csv(const std::string& path, const std::vector<RoundRecord>& transcript,
                         int num_outcomes) {
    if (transcript.empty()) throw std::invalid_argument("transcript is empty");
    int n = static_cast<int>(transcript[0].expert_predictions.size());
    std::ostringstream out;
    out << transcript_header(num_outcomes, n) << "\n";
    for (std::size_t t = 0; t < transcript.size(); ++t) {
        const RoundRecord& r = transcript[t];
        if (static_cast<int>(r.expert_predictions.size()) != n)
            throw std::invalid_argument("transcript has ragged expert moves");
        out << t << "," << r.outcome;
        for (const auto& d : r.expert_predictions)
            for (double v : d) out << "," << format17(v);
        out << "\n";
    }
    write_text_file(path, out.str());
}

std::vector<RoundRecord> load_transcript_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open transcript: " + path);
    std::string line;
    if (!std::getline(in, line)) throw IoError("transcript file is empty: " + path);
    line = strip_cr(line);
    std::vector<std::string> cols = split_comma(line);
    int n = 0, m = 0;
    for (const std::string& c : cols) {
        if (c.rfind("exp_", 0) == 0) {
            std::size_t us = c.find("_dec_");
            if (us == std::string::npos) throw IoError("unrecognized transcript header: " + line);
            n = std::max(n, parse_int(c.substr(4, us - 4)) + 1);
            m = std::max(m, parse_int(c.substr(us + 5)) + 1);
        }
    }
    if (n < 1 || m < 2 || line != transcript_header(m, n))
        throw IoError("unrecognized transcript header: " + line);

    std::vector<RoundRecord> transcript;
    std::size_t expect = 2 + static_cast<std::size_t>(n) * static_cast<std::size_t>(m);
    std::size_t t_expect = 0;
    while (std::getline(in, line)) {
        line = strip_cr(line);
        if (line.empty()) continue;
        std::vector<std::string> f = split_comma(line);
        if (f.size() != expect) throw IoError("transcript row has wrong arity: " + line);
        if (static_cast<std::size_t>(parse_int(f[0])) != t_expect)
            throw IoError("transcript rows out of order at t=" + f[0]);
        ++t_expect;
        RoundRecord r;
        r.outcome = parse_int(f[1]);
        if (r.outcome < 0 || r.outcome >= m)
            throw IoError("transcript outcome out of range: " + f[1]);
        std::size_t k = 2;
        r.expert_predictions.resize(static_cast<std::size_t>(n));
        for (int th = 0; th < n; ++th) {
            auto& d = r.expert_predictions[static_cast<std::size_t>(th)];
            d.resize(static_cast<std::size_t>(m));
            for (int w = 0; w < m; ++w) d[static_cast<std::size_t>(w)] = parse_double(f[k++]);
        }
        transcript.push_back(std::move(r));
    }
    return transcript;
}

void save_histogram_csv(const std::string& path, const Histogram& hist) {
    std::ostringstream out;
    out << "bin_lo,bin_hi,count\n";
    int bins = static_cast<int>(hist.counts.size());
    double width = (hist.hi - hist.lo) / bins;
    for (int b = 0; b < bins; ++b) {
        out << format17(hist.lo + b * width) << "," << format17(hist.lo + (b + 1) * width) << ","
            << hist.counts[static_cast<std::size_t>(b)] << "\n";
    }
    out << "inf," << hist.inf_count << "\n";
    out << "mean," << format17(hist.mean) << "\n";
    write_text_file(path, out.str());
}

namespace {

std::string expert_csv_header(int num_outcomes) {
    if (num_outcomes == kWeatherClasses) return "t,expert,p_sunny,p_unsettled,p_cloudy,p_rainy";
    std::ostringstream h;
    h << "t,expert";
    for (int w = 0; w < num_outcomes; ++w) h << ",p_" << w;
    return h.str();
}

}  // namespace

void save_expert_csv(const std::string& path,
                     const std::vector<std::vector<DecisionVector>>& stream) {
    if (stream.empty() || stream[0].empty())
        throw std::invalid_argument("expert stream is empty");
    int m = static_cast<int>(stream[0][0].size());
    std::ostringstream out;
    out << expert_csv_header(m) << "\n";
    for (std::size_t t = 0; t < stream.size(); ++t) {
        for (std::size_t th = 0; th < stream[t].size(); ++th) {
            out << t << "," << th;
            for (double v : stream[t][th]) out << "," << format17(v);
            out << "\n";
        }
    }
    write_text_file(path, out.str());
}

std::vector<std::vector<DecisionVector>> load_expert_csv(const std::string& path,
                                                         int num_outcomes) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open expert file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw IoError("expert file is empty: " + path);
    line = strip_cr(line);
    if (line != expert_csv_header(num_outcomes))
        throw IoError("unrecognized expert file header: " + line);

    std::vector<std::vector<DecisionVector>> stream;
    std::size_t expect = 2 + static_cast<std::size_t>(num_outcomes);
    while (std::getline(in, line)) {
        line = strip_cr(line);
        if (line.empty()) continue;
        std::vector<std::string> f = split_comma(line);
        if (f.size() != expect) throw IoError("expert row has wrong arity: " + line);
        std::size_t t = static_cast<std::size_t>(parse_int(f[0]));
        std::size_t th = static_cast<std::size_t>(parse_int(f[1]));
        if (t == stream.size() && th == 0) stream.emplace_back();
        if (t + 1 != stream.size() || th != stream.back().size())
            throw IoError("expert rows out of order at t=" + f[0] + ", expert=" + f[1]);
        DecisionVector d(static_cast<std::size_t>(num_outcomes));
        double s = 0.0;
        for (int w = 0; w < num_outcomes; ++w) {
            d[static_cast<std::size_t>(w)] = parse_double(f[2 + static_cast<std::size_t>(w)]);
            s += d[static_cast<std::size_t>(w)];
        }
        if (std::fabs(s - 1.0) > 1e-9)
            throw IoError("expert prediction does not sum to 1 at t=" + f[0]);
        stream.back().push_back(std::move(d));
    }
    if (stream.empty()) throw IoError("expert file has no rows: " + path);
    std::size_t k = stream[0].size();
    for (const auto& round : stream)
        if (round.size() != k) throw IoError("expert file has ragged rounds");
    return stream;
}

nlohmann::json json_num(double x) {
    if (std::isnan(x)) throw std::domain_error("json_num: NaN value");
    if (x == kInf) return "inf";
    if (x == -kInf) return "-inf";
    return x;
}

static nlohmann::json json_vec(const std::vector<double>& v) {
    nlohmann::json arr = nlohmann::json::array();
    for (double x : v) arr.push_back(json_num(x));
    return arr;
}

nlohmann::json to_json(const BoundReport& rep) {
    return {{"argmin_expert", rep.argmin_expert},
            {"c", json_num(rep.c)},
            {"expert_aggregate_u", json_vec(rep.expert_aggregate_u)},
            {"learner_aggregate_u", json_num(rep.learner_aggregate_u)},
            {"margin_u", json_num(rep.margin_u)},
            {"min_slack", json_num(rep.min_slack)},
            {"satisfied", rep.satisfied},
            {"slack_u", json_vec(rep.slack_u)},
            {"tolerance", json_num(rep.tolerance)}};
}

nlohmann::json to_json(const ApaReport& rep) {
    return {{"batch_rhs_u", json_num(rep.batch_rhs_u)},
            {"bound_margin_u", json_num(rep.bound_margin_u)},
            {"bound_ok", rep.bound_ok},
            {"identity_ok", rep.identity_ok},
            {"min_expert_slack", json_num(rep.min_expert_slack)},
            {"pseudo_aggregate_u", json_num(rep.pseudo_aggregate_u)},
            {"residual", json_num(rep.residual)},
            {"tolerance", json_num(rep.tolerance)}};
}

nlohmann::json to_json(const MixabilityEstimate& est) {
    return {{"c_hat", json_num(est.c_hat)},
            {"candidates", est.candidates},
            {"grid_error", json_num(est.grid_error)},
            {"refined", est.refined},
            {"refinements", est.refinements}};
}

nlohmann::json to_json(const MixabilityVerdict& v) {
    return {{"direct", to_json(v.direct)},
            {"mixable", v.mixable},
            {"restated", to_json(v.restated)},
            {"tol", json_num(v.tol)}};
}

nlohmann::json to_json(const AxiomReport& rep) {
    return {{"associativity", rep.associativity},
            {"continuity", rep.continuity},
            {"counterexample", rep.counterexample},
            {"evaluable_points", rep.evaluable_points},
            {"homogeneity", rep.homogeneity},
            {"loss_compatibility", rep.loss_compatibility},
            {"monotonicity", rep.monotonicity},
            {"overflow_seen", rep.overflow_seen},
            {"total_points", rep.total_points}};
}

nlohmann::json to_json(const Histogram& hist) {
    return {{"counts", hist.counts},
            {"hi", json_num(hist.hi)},
            {"inf_count", hist.inf_count},
            {"lo", json_num(hist.lo)},
            {"mean", json_num(hist.mean)},
            {"total", hist.total}};
}

nlohmann::json to_json(const GlobalGameResult& res) {
    return {{"expert_aggregate_u", json_vec(res.expert_aggregate_u)},
            {"expert_fold_final",
             res.expert_fold.empty() ? nlohmann::json::array() : json_vec(res.expert_fold.back())},
            {"first_violation_round", res.first_violation_round},
            {"learner_aggregate_u", json_num(res.learner_aggregate_u)},
            {"learner_fold_final",
             res.learner_fold.empty() ? nlohmann::json(0.0) : json_num(res.learner_fold.back())},
            {"learner_wins", res.learner_wins},
            {"rounds", static_cast<long long>(res.transcript.size())}};
}

nlohmann::json to_json(const FrontierResult& res) {
    return {{"a_values", json_vec(res.a_values)},
            {"c_values", json_vec(res.c_values)},
            {"wins", res.learner_wins}};
}

nlohmann::json to_json(const WeatherReport& rep) {
    nlohmann::json class_counts, train_class_counts;
    for (int c = 0; c < kWeatherClasses; ++c) {
        class_counts[kWeatherClassNames[static_cast<std::size_t>(c)]] =
            rep.dataset.class_counts[static_cast<std::size_t>(c)];
        train_class_counts[kWeatherClassNames[static_cast<std::size_t>(c)]] =
            rep.dataset.train_class_counts[static_cast<std::size_t>(c)];
    }
    nlohmann::json runs = nlohmann::json::array();
    for (const WeatherRunResult& rr : rep.runs) {
        nlohmann::json jr = {{"apa", to_json(rr.apa)},
                             {"bound", to_json(rr.bound)},
                             {"c_used", json_num(rr.c_used)},
                             {"eta", json_num(rr.eta)},
                             {"generator", rr.gen_key},
                             {"learner_hist", to_json(rr.learner_hist)},
                             {"learner_mean_loss", json_num(rr.learner_mean_loss)},
                             {"substitution", rr.substitution}};
        if (rr.mix_estimated) jr["mixability"] = to_json(rr.mix);
        runs.push_back(jr);
    }
    nlohmann::json expert_hists = nlohmann::json::array();
    for (const Histogram& h : rep.expert_hist) expert_hists.push_back(to_json(h));
    return {{"dataset",
             {{"class_counts", class_counts},
              {"cleaned", static_cast<long long>(rep.dataset.labels.size())},
              {"dropped", rep.dataset.dropped},
              {"raw", rep.dataset.raw},
              {"test_rounds", rep.dataset.test_rounds()},
              {"train_class_counts", train_class_counts},
              {"train_rounds", rep.dataset.train_rounds}}},
            {"expert_hist", expert_hists},
            {"expert_mean_loss", json_vec(rep.expert_mean_loss)},
            {"expert_names", rep.expert_names},
            {"runs", runs}};
}

}  // namespace aaqs
