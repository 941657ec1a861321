#include <adastable/io.hpp>

#include <adastable/csv.hpp>
#include <adastable/error.hpp>

#include <cmath>
#include <fstream>
#include <istream>
#include <map>

namespace adastable {

SeriesFormat parse_series_format(std::string_view name) {
    if (name == "plain") return SeriesFormat::Plain;
    if (name == "csv") return SeriesFormat::Csv;
    throw InputError("unknown format '" + std::string(name) + "' (expected plain or csv)");
}

SeriesTransform parse_series_transform(std::string_view name) {
    if (name == "none") return SeriesTransform::None;
    if (name == "log-returns" || name == "log_returns") return SeriesTransform::LogReturns;
    if (name == "cumsum" || name == "cumulative_sum") return SeriesTransform::CumulativeSum;
    throw InputError("unknown transform '" + std::string(name) + "' (expected none, log-returns or cumsum)");
}

std::vector<double> log_returns(std::span<const double> values, std::span<const std::size_t> lines) {
    auto line_of = [&](std::size_t i) { return i < lines.size() ? lines[i] : i + 1; };
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] > 0.0)) {
            throw InputError("log-returns need positive values, got " + format_double(values[i]), line_of(i));
        }
    }
    std::vector<double> out;
    if (values.size() < 2) return out;
    out.reserve(values.size() - 1);
    for (std::size_t i = 0; i + 1 < values.size(); ++i) out.push_back(std::log(values[i + 1] / values[i]));
    return out;
}

std::vector<double> cumulative_sum(std::span<const double> values) {
    std::vector<double> out(values.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = acc += values[i];
    return out;
}

std::vector<double> read_series(std::istream& in, SeriesFormat format, const std::string& column,
                                SeriesTransform transform) {
    std::vector<double> values;
    std::vector<std::size_t> lines;
    if (format == SeriesFormat::Csv) {
        if (column.empty()) throw InputError("CSV input needs a column name");
        const CsvTable table = read_csv_table(in);
        const std::size_t col = table.column(column);
        values.reserve(table.rows.size());
        for (std::size_t r = 0; r < table.rows.size(); ++r) values.push_back(table.number(r, col));
        lines = table.lines;
    } else {
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            double v = 0.0;
            if (!parse_double(line, v)) throw InputError("non-numeric value '" + line + "'", line_no);
            values.push_back(v);
            lines.push_back(line_no);
        }
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) throw InputError("non-finite value", lines[i]);
    }
    switch (transform) {
        case SeriesTransform::None:
            return values;
        case SeriesTransform::LogReturns:
            return log_returns(values, lines);
        case SeriesTransform::CumulativeSum:
            return cumulative_sum(values);
    }
    return values;
}

std::vector<double> load_series(const SeriesSpec& spec) {
    std::ifstream in(spec.path);
    if (!in) throw InputError("cannot open input '" + spec.path.string() + "'");
    return read_series(in, spec.format, spec.column, spec.transform);
}

nlohmann::json config_to_json(const TrackerConfig& c) {
    nlohmann::json doc;
    doc["eta1"] = c.rates.eta1;
    doc["eta2"] = c.rates.eta2;
    doc["eta3"] = c.rates.eta3;
    doc["p_sigma"] = c.powers.p_sigma;
    doc["p1"] = c.powers.p1;
    doc["p2"] = c.powers.p2;
    doc["beta"] = c.beta;
    doc["sigma_multiplier"] = c.sigma_multiplier;
    doc["warmup"] = c.warmup;
    doc["alpha_min"] = c.alpha_min;
    doc["alpha_max"] = c.alpha_max;
    doc["alpha_step"] = c.alpha_step;
    if (c.fixed_alpha) {
        doc["alpha_mode"] = {{"fixed", *c.fixed_alpha}};
    } else {
        doc["alpha_mode"] = "adaptive";
    }
    doc["sigma_floor"] = c.sigma_floor;
    return doc;
}

namespace {

double number_field(const nlohmann::json& v, const std::string& key) {
    if (!v.is_number()) throw InputError("config key '" + key + "' must be a number");
    return v.get<double>();
}

}  // namespace

TrackerConfig config_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw InputError("config must be a JSON object");
    TrackerConfig c;
    const std::map<std::string, double*> reals = {
        {"eta1", &c.rates.eta1},         {"eta2", &c.rates.eta2},
        {"eta3", &c.rates.eta3},         {"p_sigma", &c.powers.p_sigma},
        {"p1", &c.powers.p1},            {"p2", &c.powers.p2},
        {"beta", &c.beta},               {"sigma_multiplier", &c.sigma_multiplier},
        {"alpha_min", &c.alpha_min},     {"alpha_max", &c.alpha_max},
        {"alpha_step", &c.alpha_step},   {"sigma_floor", &c.sigma_floor},
    };
    for (const auto& [key, value] : doc.items()) {
        if (auto it = reals.find(key); it != reals.end()) {
            *it->second = number_field(value, key);
        } else if (key == "warmup") {
            if (!value.is_number_unsigned()) throw InputError("config key 'warmup' must be a non-negative integer");
            c.warmup = value.get<std::size_t>();
        } else if (key == "alpha_mode") {
            if (value.is_string() && value.get<std::string>() == "adaptive") {
                c.fixed_alpha.reset();
            } else if (value.is_object() && value.size() == 1 && value.contains("fixed")) {
                c.fixed_alpha = number_field(value["fixed"], "alpha_mode.fixed");
            } else {
                throw InputError("config key 'alpha_mode' must be \"adaptive\" or {\"fixed\": alpha}");
            }
        } else {
            throw InputError("unknown config key '" + key + "'");
        }
    }
    try {
        c.validate();
    } catch (const DomainError& e) {
        throw InputError(std::string("invalid config: ") + e.what());
    }
    return c;
}

TrackerConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config '" + path.string() + "'");
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError("config '" + path.string() + "' is not valid JSON: " + e.what());
    }
    return config_from_json(doc);
}

std::vector<double> parse_grid(std::string_view text) {
    auto number = [&](std::string_view part) {
        double v = 0.0;
        if (!parse_double(part, v) || !std::isfinite(v)) {
            throw InputError("bad number '" + std::string(part) + "' in grid '" + std::string(text) + "'");
        }
        return v;
    };
    std::vector<double> out;
    if (text.find(':') != std::string_view::npos) {
        std::vector<double> parts;
        std::size_t pos = 0;
        while (true) {
            const std::size_t next = text.find(':', pos);
            parts.push_back(number(text.substr(pos, next == std::string_view::npos ? next : next - pos)));
            if (next == std::string_view::npos) break;
            pos = next + 1;
        }
        if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0]) {
            throw InputError("grid '" + std::string(text) + "' must be start:stop:step with step > 0");
        }
        const double span = (parts[1] - parts[0]) / parts[2];
        const auto count = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
        if (count > 1000000) throw InputError("grid '" + std::string(text) + "' is too large");
        for (std::size_t i = 0; i < count; ++i) out.push_back(parts[0] + static_cast<double>(i) * parts[2]);
        if (std::abs(out.back() - parts[1]) < 1e-9 * parts[2]) out.back() = parts[1];
        return out;
    }
    std::size_t pos = 0;
    while (true) {
        const std::size_t next = text.find(',', pos);
        out.push_back(number(text.substr(pos, next == std::string_view::npos ? next : next - pos)));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return out;
}

}  // namespace adastable
