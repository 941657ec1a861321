#pragma once

#include <adastable/tracker.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace adastable {

enum class SeriesFormat { Plain, Csv };
enum class SeriesTransform { None, LogReturns, CumulativeSum };

struct SeriesSpec {
    std::filesystem::path path;
    SeriesFormat format = SeriesFormat::Plain;
    std::string column;  // CSV only
    SeriesTransform transform = SeriesTransform::None;
};

SeriesFormat parse_series_format(std::string_view name);         // plain | csv
SeriesTransform parse_series_transform(std::string_view name);   // none | log-returns | cumsum

/// Raw values in file order. Plain input holds one number per line (blank lines
/// skipped); CSV input needs a header and the named column. Bad rows throw
/// InputError with their line number.
std::vector<double> read_series(std::istream& in, SeriesFormat format, const std::string& column,
                                SeriesTransform transform);

std::vector<double> load_series(const SeriesSpec& spec);

/// ln(v[t+1] / v[t]); `lines` gives the source line of each value for error messages.
std::vector<double> log_returns(std::span<const double> values, std::span<const std::size_t> lines = {});
std::vector<double> cumulative_sum(std::span<const double> values);

/// Flat document with keys eta1, eta2, eta3, p_sigma, p1, p2, beta, sigma_multiplier,
/// warmup, alpha_min, alpha_max, alpha_step, alpha_mode, sigma_floor. alpha_mode is
/// "adaptive" or {"fixed": alpha}.
nlohmann::json config_to_json(const TrackerConfig& config);

/// Missing keys keep their defaults; unknown keys and wrong types throw InputError.
TrackerConfig config_from_json(const nlohmann::json& doc);

TrackerConfig load_config(const std::filesystem::path& path);

/// Inclusive grid "start:stop:step" or a comma list "a,b,c".
std::vector<double> parse_grid(std::string_view text);

}  // namespace adastable
