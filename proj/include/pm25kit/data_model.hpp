#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pm25kit/errors.hpp"

namespace pm25 {

/// The five Asian regions every record is classified into.
enum class Region {
    CentralAsia,
    EastAsia,
    SouthAsia,
    SoutheastAsia,
    WestAsia,
};

inline constexpr std::array<Region, 5> kAllRegions = {
    Region::CentralAsia, Region::EastAsia, Region::SouthAsia,
    Region::SoutheastAsia, Region::WestAsia,
};

/// Canonical display token, e.g. "South Asia".
std::string_view region_name(Region region);

/// Parses a region cell: trimmed, case-insensitive, separators ignored.
/// Unknown tokens yield nullopt (the loader drops such rows with a warning).
std::optional<Region> parse_region(std::string_view token);

/// Annual PM2.5 observations, keyed by year. Legal years are 2018-2024;
/// 2024 exists only to hold forecasts and is never populated by loaders.
class YearSeries {
public:
    static constexpr int kFirstYear = 2018;
    static constexpr int kLastYear = 2024;

    std::optional<double> get(int year) const;
    bool has(int year) const { return values_.count(year) != 0; }

    /// Stores a value; rejects out-of-range years and negative or non-finite values.
    void set(int year, double value);
    void erase(int year) { values_.erase(year); }

    /// Present values in [first, last], inclusive.
    int count_in(int first, int last) const;

    const std::map<int, double>& items() const { return values_; }
    bool empty() const { return values_.empty(); }

    bool operator==(const YearSeries&) const = default;

private:
    std::map<int, double> values_;
};

enum class FillPolicy {
    ZeroFill, // missing PM2.5 cells for 2018-2023 become 0 at load time
    Exclude,  // missing cells stay missing and drop out of computations
};

std::string_view fill_policy_name(FillPolicy policy);

struct CountryRecord {
    std::string country;
    Region region{};
    YearSeries pm25;
    std::optional<double> population; // persons, 2023
    std::optional<double> area;       // km^2, strictly positive when present
    std::optional<double> density;    // persons/km^2, derived: population / area
    std::map<int, double> deaths;     // air-pollution death rate by year, 2018-2021

    bool operator==(const CountryRecord&) const = default;
};

struct Dataset {
    std::vector<CountryRecord> records;
    FillPolicy fill_policy = FillPolicy::Exclude;
    std::string source;
    std::vector<std::string> warnings; // load-time notes (dropped rows etc.)

    const CountryRecord* find(std::string_view country) const;
};

/// Strips surrounding whitespace and embedded ASCII commas, then parses a
/// decimal number. Empty, non-numeric, or non-finite text yields nullopt.
std::optional<double> parse_number(std::string_view text);

// Expected CSV header, in order.
inline constexpr const char* kCsvHeader =
    "Region,Country,PM25_2018,PM25_2019,PM25_2020,PM25_2021,PM25_2022,PM25_2023,"
    "Population_2023,Area_km2,Death_2018,Death_2019,Death_2020,Death_2021";

/// Loads the RFC 4180 style CSV described by kCsvHeader. Non-Asian region
/// tokens drop the row with a warning; schema and record violations throw.
Dataset load_dataset(std::istream& in, FillPolicy policy, std::string source = "csv");
Dataset load_dataset_string(std::string_view csv, FillPolicy policy,
                            std::string source = "inline");
Dataset load_dataset_file(const std::filesystem::path& path, FillPolicy policy);

/// Serializes records back to the exact CSV schema. Numbers use shortest
/// round-trip formatting, so load(write(ds)) reproduces ds field-for-field.
std::string write_dataset_csv(const Dataset& ds);

/// Converts between fill policies. Exclude -> ZeroFill fills missing 2018-2023
/// cells with 0. ZeroFill -> Exclude drops cells that are exactly 0; fabricated
/// zeros are indistinguishable from true zeros, so true zeros are dropped too.
Dataset with_fill_policy(const Dataset& ds, FillPolicy policy);

/// Built-in desk-scale dataset: the country/year PM2.5 values available from
/// public annual IQAir summaries for 2018-2023. Sparse by construction; it has
/// no population, area, or death-rate data.
Dataset embedded_dataset();

/// FNV-1a 64-bit hash of the canonical CSV serialization plus fill policy.
std::string dataset_hash(const Dataset& ds);

} // namespace pm25
