#include "qlid/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "qlid/errors.hpp"

namespace qlid {

namespace {

constexpr double kClassicalConsistencyTolerance = 5e-4;

void check_probability(double value, const char* field) {
    if (!std::isfinite(value) || value < 0.0 || value > 1.0) {
        throw ValidationError(std::string(field) + ": probability out of range [0, 1]");
    }
}

}  // namespace

void ExperimentRecord::validate() const {
    if (name.empty()) {
        throw ValidationError("name: must not be empty");
    }
    check_probability(p_known_defect, "p_known_defect");
    check_probability(p_known_cooperate, "p_known_cooperate");
    check_probability(p_unknown_observed, "p_unknown_observed");
    check_probability(p_classical, "p_classical");
    const double neutral = 0.5 * (p_known_defect + p_known_cooperate);
    if (std::abs(p_classical - neutral) > kClassicalConsistencyTolerance) {
        std::ostringstream msg;
        msg << "p_classical: " << p_classical << " is inconsistent with neutral priors ("
            << neutral << ")";
        throw ValidationError(msg.str());
    }
    if (theta && !std::isfinite(*theta)) {
        throw ValidationError("theta: must be finite");
    }
    for (auto [value, field] : {std::pair{payoffs.dd, "payoffs.dd"},
                                std::pair{payoffs.dc, "payoffs.dc"},
                                std::pair{payoffs.cd, "payoffs.cd"},
                                std::pair{payoffs.cc, "payoffs.cc"}}) {
        if (!std::isfinite(value)) {
            throw ValidationError(std::string(field) + ": must be finite");
        }
    }
}

const std::vector<ExperimentRecord>& builtin_corpus() {
    static const std::vector<ExperimentRecord> corpus = [] {
        auto make = [](std::string name, double kd, double kc, double unknown, double classical,
                       double theta, Payoffs payoffs, bool violation) {
            ExperimentRecord r;
            r.name = std::move(name);
            r.p_known_defect = kd;
            r.p_known_cooperate = kc;
            r.p_unknown_observed = unknown;
            r.p_classical = classical;
            r.theta = theta;
            r.payoffs = payoffs;
            r.stp_violation = violation;
            return r;
        };
        std::vector<ExperimentRecord> c;
        c.push_back(make("shafir1992", 0.9700, 0.8400, 0.6300, 0.9050, 2.8151,
                         {30, 25, 85, 75}, true));
        c.push_back(make("li2002_game1", 0.7333, 0.6670, 0.6000, 0.7000, 3.0170,
                         {30, 25, 85, 75}, true));
        c.push_back(make("li2002_game2", 0.8000, 0.7667, 0.6300, 0.7833, 3.0758,
                         {73, 25, 85, 75}, true));
        c.push_back(make("li2002_game3", 0.9000, 0.8667, 0.8667, 0.8834, 2.8052,
                         {30, 25, 85, 36}, false));
        c.push_back(make("li2002_game4", 0.8333, 0.8000, 0.7000, 0.8167, 3.2313,
                         {80, 78, 85, 83}, true));
        c.push_back(make("li2002_game5", 0.8333, 0.7333, 0.7000, 0.7833, 2.8519,
                         {43, 10, 85, 46}, true));
        c.push_back(make("li2002_game6", 0.7667, 0.8333, 0.8000, 0.8000, 1.5708,
                         {30, 10, 60, 33}, false));
        c.push_back(make("li2002_game7", 0.8667, 0.7333, 0.7667, 0.8000, 3.7812,
                         {30, 10, 60, 33}, false));
        for (const ExperimentRecord& r : c) {
            r.validate();
        }
        return c;
    }();
    return corpus;
}

const PublishedMeu* published_meu(std::string_view name) {
    // [context][action]: contexts (risk_averse, risk_seeking), actions (defect, cooperate)
    static const std::map<std::string, PublishedMeu, std::less<>> table = {
        {"shafir1992",
         {{{50.25, 43.63}, {7.25, 6.38}}, {{-2129.94, -1559.46}, {-160.08, 116.66}}}},
        {"li2002_game1",
         {{{39.35, 34.19}, {18.15, 15.82}}, {{-1730.21, -1263.63}, {-735.89, -538.62}}}},
        {"li2002_game2",
         {{{61.78, 38.75}, {17.22, 11.25}}, {{-4787.28, -1422.69}, {-1320.22, -392.89}}}},
        {"li2002_game3",
         {{{50.33, 26.85}, {26.85, 3.65}}, {{-2075.58, -702.24}, {-270.75, -94.44}}}},
        {"li2002_game4",
         {{{67.33, 65.70}, {15.17, 14.80}}, {{-5462.41, -5198.14}, {-1221.47, -1162.55}}}},
        {"li2002_game5",
         {{{34.50, 16.27}, {10.5, 5.23}}, {{-1313.94, -221.05}, {-353.22, -61.44}}}},
        {"li2002_game6",
         {{{36.50, 17.58}, {8.50, 3.92}}, {{36.49, 28.83}, {8.50, 3.91}}}},
        {"li2002_game7",
         {{{35.00, 16.43}, {10.00, 5.07}}, {{-1116.33, -184.75}, {-262.30, -44.86}}}},
    };
    auto it = table.find(name);
    return it == table.end() ? nullptr : &it->second;
}

AmplitudeNetwork build_network(const ExperimentRecord& record) {
    record.validate();
    Variable opponent{std::string(pd::kChanceVariable),
                      {std::string(pd::kDefect), std::string(pd::kCooperate)}};
    Variable preference{std::string(pd::kContextVariable),
                        {std::string(pd::kRiskAverse), std::string(pd::kRiskSeeking)}};

    AmplitudeCpt prior(opponent.name, {},
                       {{from_probability(0.5), from_probability(0.5)}});
    AmplitudeCpt conditional(
        preference.name, {opponent.name},
        {{from_probability(record.p_known_defect), from_probability(1.0 - record.p_known_defect)},
         {from_probability(record.p_known_cooperate),
          from_probability(1.0 - record.p_known_cooperate)}});

    return AmplitudeNetwork({std::move(opponent), std::move(preference)},
                            {std::move(prior), std::move(conditional)});
}

DecisionProblem build_problem(const ExperimentRecord& record) {
    AmplitudeNetwork network = build_network(record);
    UtilityTable utility({std::string(pd::kDefect), std::string(pd::kCooperate)},
                         {std::string(pd::kDefect), std::string(pd::kCooperate)},
                         {{record.payoffs.dd, record.payoffs.dc},
                          {record.payoffs.cd, record.payoffs.cc}});
    return DecisionProblem(std::move(network), std::string(pd::kChanceVariable),
                           std::string(pd::kContextVariable),
                           {std::string(pd::kDefect), std::string(pd::kCooperate)},
                           std::move(utility));
}

namespace {

struct SpecParser {
    std::filesystem::path path;
    std::string section;
    std::set<std::string> seen;
    ExperimentRecord record;

    [[noreturn]] void fail(std::size_t line, const std::string& message) const {
        throw ValidationError(path.string() + ":" + std::to_string(line) + ": " + message);
    }

    double parse_number(std::size_t line, const std::string& key, const std::string& text) const {
        double value = 0.0;
        const char* begin = text.data();
        const char* end = begin + text.size();
        auto [ptr, ec] = std::from_chars(begin, end, value);
        if (ec != std::errc() || ptr != end) {
            fail(line, "field '" + key + "': cannot parse number from '" + text + "'");
        }
        return value;
    }

    bool parse_bool(std::size_t line, const std::string& key, const std::string& text) const {
        if (text == "true") {
            return true;
        }
        if (text == "false") {
            return false;
        }
        fail(line, "field '" + key + "': expected true or false, got '" + text + "'");
    }

    void assign(std::size_t line, const std::string& key, const std::string& value) {
        const std::string qualified = section + "." + key;
        if (!seen.insert(qualified).second) {
            fail(line, "duplicate field '" + qualified + "'");
        }
        if (section == "metadata") {
            if (key == "name") {
                record.name = value;
            } else if (key == "theta") {
                record.theta = parse_number(line, key, value);
            } else if (key == "stp_violation") {
                record.stp_violation = parse_bool(line, key, value);
            } else {
                fail(line, "unknown field '" + qualified + "'");
            }
        } else if (section == "network") {
            if (key == "p_known_defect") {
                record.p_known_defect = parse_number(line, key, value);
            } else if (key == "p_known_cooperate") {
                record.p_known_cooperate = parse_number(line, key, value);
            } else if (key == "p_unknown_observed") {
                record.p_unknown_observed = parse_number(line, key, value);
            } else if (key == "p_classical") {
                record.p_classical = parse_number(line, key, value);
            } else {
                fail(line, "unknown field '" + qualified + "'");
            }
        } else if (section == "payoffs") {
            if (key == "dd") {
                record.payoffs.dd = parse_number(line, key, value);
            } else if (key == "dc") {
                record.payoffs.dc = parse_number(line, key, value);
            } else if (key == "cd") {
                record.payoffs.cd = parse_number(line, key, value);
            } else if (key == "cc") {
                record.payoffs.cc = parse_number(line, key, value);
            } else {
                fail(line, "unknown field '" + qualified + "'");
            }
        } else {
            fail(line, "field outside of any section");
        }
    }
};

std::string trim(std::string_view text) {
    const auto begin = text.find_first_not_of(" \t\r");
    if (begin == std::string_view::npos) {
        return {};
    }
    const auto end = text.find_last_not_of(" \t\r");
    return std::string(text.substr(begin, end - begin + 1));
}

constexpr std::string_view kRequiredFields[] = {
    "metadata.name",        "network.p_known_defect", "network.p_known_cooperate",
    "network.p_unknown_observed", "network.p_classical",    "payoffs.dd",
    "payoffs.dc",           "payoffs.cd",             "payoffs.cc",
};

}  // namespace

ExperimentRecord parse_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open spec file '" + path.string() + "'");
    }
    SpecParser parser;
    parser.path = path;

    std::string raw;
    std::size_t line_number = 0;
    while (std::getline(in, raw)) {
        ++line_number;
        if (auto hash = raw.find('#'); hash != std::string::npos) {
            raw.erase(hash);
        }
        const std::string line = trim(raw);
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3) {
                parser.fail(line_number, "malformed section header '" + line + "'");
            }
            parser.section = trim(line.substr(1, line.size() - 2));
            if (parser.section != "metadata" && parser.section != "network" &&
                parser.section != "payoffs") {
                parser.fail(line_number, "unknown section '" + parser.section + "'");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            parser.fail(line_number, "expected 'key = value', got '" + line + "'");
        }
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        if (key.empty() || value.empty()) {
            parser.fail(line_number, "expected 'key = value', got '" + line + "'");
        }
        parser.assign(line_number, key, value);
    }

    for (std::string_view field : kRequiredFields) {
        if (parser.seen.find(std::string(field)) == parser.seen.end()) {
            throw ValidationError(path.string() + ": missing required field '" +
                                  std::string(field) + "'");
        }
    }
    parser.record.validate();
    return parser.record;
}

LoadedSpec load_spec(const std::filesystem::path& path) {
    ExperimentRecord record = parse_spec(path);
    DecisionProblem problem = build_problem(record);
    return LoadedSpec{std::move(record), std::move(problem)};
}

namespace {

// shortest representation that parses back to the identical double
std::string exact_number(double value) {
    char buffer[64];
    auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, ptr);
}

}  // namespace

void write_spec(const ExperimentRecord& record, const std::filesystem::path& path) {
    record.validate();
    std::ofstream out(path);
    if (!out) {
        throw ValidationError("cannot write spec file '" + path.string() + "'");
    }
    out << "[metadata]\n";
    out << "name = " << record.name << "\n";
    if (record.theta) {
        out << "theta = " << exact_number(*record.theta) << "\n";
    }
    out << "stp_violation = " << (record.stp_violation ? "true" : "false") << "\n";
    out << "\n[network]\n";
    out << "p_known_defect = " << exact_number(record.p_known_defect) << "\n";
    out << "p_known_cooperate = " << exact_number(record.p_known_cooperate) << "\n";
    out << "p_unknown_observed = " << exact_number(record.p_unknown_observed) << "\n";
    out << "p_classical = " << exact_number(record.p_classical) << "\n";
    out << "\n[payoffs]\n";
    out << "dd = " << exact_number(record.payoffs.dd) << "\n";
    out << "dc = " << exact_number(record.payoffs.dc) << "\n";
    out << "cd = " << exact_number(record.payoffs.cd) << "\n";
    out << "cc = " << exact_number(record.payoffs.cc) << "\n";
    if (!out.flush()) {
        throw ValidationError("failed writing spec file '" + path.string() + "'");
    }
}

}  // namespace qlid
