#include "pm25kit/data_model.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <sstream>
#include <unordered_set>

namespace pm25 {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

// Shortest representation that parses back to the same double.
std::string format_number(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

std::string csv_escape(std::string_view field) {
    if (field.find_first_of(",\"\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

// Splits one CSV record, honoring RFC 4180 double-quoted fields.
std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

const std::vector<std::string>& expected_columns() {
    static const std::vector<std::string> cols = split_csv_line(kCsvHeader);
    return cols;
}

void set_pm25(CountryRecord& rec, int year, double value, std::size_t line_no) {
    if (!(std::isfinite(value) && value >= 0.0)) {
        throw ValidationError("line " + std::to_string(line_no) + " (" + rec.country +
                              "): PM2.5 for " + std::to_string(year) +
                              " must be a nonnegative finite number");
    }
    rec.pm25.set(year, value);
}

void finalize_record(CountryRecord& rec, std::size_t line_no) {
    if (rec.area && *rec.area <= 0.0) {
        throw ValidationError("line " + std::to_string(line_no) + " (" + rec.country +
                              "): area must be strictly positive");
    }
    if (rec.population && *rec.population < 0.0) {
        throw ValidationError("line " + std::to_string(line_no) + " (" + rec.country +
                              "): population must be nonnegative");
    }
    if (rec.population && rec.area) {
        rec.density = *rec.population / *rec.area;
    } else {
        rec.density.reset();
    }
}

} // namespace

std::string_view region_name(Region region) {
    switch (region) {
        case Region::CentralAsia: return "Central Asia";
        case Region::EastAsia: return "East Asia";
        case Region::SouthAsia: return "South Asia";
        case Region::SoutheastAsia: return "Southeast Asia";
        case Region::WestAsia: return "West Asia";
    }
    return "Unknown";
}

std::optional<Region> parse_region(std::string_view token) {
    std::string key;
    for (char c : token) {
        if (std::isalpha(static_cast<unsigned char>(c))) {
            key += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        }
    }
    if (key == "centralasia") return Region::CentralAsia;
    if (key == "eastasia") return Region::EastAsia;
    if (key == "southasia") return Region::SouthAsia;
    if (key == "southeastasia") return Region::SoutheastAsia;
    if (key == "westasia") return Region::WestAsia;
    return std::nullopt;
}

std::optional<double> YearSeries::get(int year) const {
    auto it = values_.find(year);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

void YearSeries::set(int year, double value) {
    if (year < kFirstYear || year > kLastYear) {
        throw ArgumentError("year " + std::to_string(year) + " outside " +
                            std::to_string(kFirstYear) + "-" + std::to_string(kLastYear));
    }
    if (!(std::isfinite(value) && value >= 0.0)) {
        throw ArgumentError("PM2.5 value must be nonnegative and finite");
    }
    values_[year] = value;
}

int YearSeries::count_in(int first, int last) const {
    int n = 0;
    for (int y = first; y <= last; ++y) {
        if (values_.count(y)) ++n;
    }
    return n;
}

std::string_view fill_policy_name(FillPolicy policy) {
    return policy == FillPolicy::ZeroFill ? "zero" : "exclude";
}

const CountryRecord* Dataset::find(std::string_view country) const {
    for (const auto& rec : records) {
        if (rec.country == country) return &rec;
    }
    return nullptr;
}

std::optional<double> parse_number(std::string_view text) {
    std::string cleaned;
    cleaned.reserve(text.size());
    for (char c : trim(text)) {
        if (c != ',') cleaned += c;
    }
    if (cleaned.empty()) return std::nullopt;
    double value = 0.0;
    const char* first = cleaned.data();
    const char* last = first + cleaned.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || !std::isfinite(value)) return std::nullopt;
    return value;
}

Dataset load_dataset(std::istream& in, FillPolicy policy, std::string source) {
    Dataset ds;
    ds.fill_policy = policy;
    ds.source = std::move(source);

    std::string line;
    if (!std::getline(in, line)) {
        throw SchemaError("empty input: missing header row");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    // Strip a UTF-8 BOM if present.
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);

    auto header = split_csv_line(line);
    const auto& expected = expected_columns();
    for (const auto& col : expected) {
        if (std::find(header.begin(), header.end(), col) == header.end()) {
            throw SchemaError("header is missing column '" + col + "'");
        }
    }
    if (header != expected) {
        throw SchemaError("header columns must match the schema exactly: " +
                          std::string(kCsvHeader));
    }

    std::unordered_set<std::string> seen;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;

        auto fields = split_csv_line(line);
        if (fields.size() != expected.size()) {
            throw ValidationError("line " + std::to_string(line_no) + ": expected " +
                                  std::to_string(expected.size()) + " fields, got " +
                                  std::to_string(fields.size()));
        }

        auto region = parse_region(fields[0]);
        if (!region) {
            ds.warnings.push_back("line " + std::to_string(line_no) +
                                  ": dropped row with non-Asian region token '" +
                                  std::string(trim(fields[0])) + "'");
            continue;
        }

        CountryRecord rec;
        rec.region = *region;
        rec.country = std::string(trim(fields[1]));
        if (rec.country.empty()) {
            throw ValidationError("line " + std::to_string(line_no) + ": empty country name");
        }
        if (!seen.insert(rec.country).second) {
            throw ValidationError("duplicate country '" + rec.country + "' at line " +
                                  std::to_string(line_no));
        }

        for (int year = 2018; year <= 2023; ++year) {
            auto value = parse_number(fields[2 + (year - 2018)]);
            if (value) {
                set_pm25(rec, year, *value, line_no);
            } else if (policy == FillPolicy::ZeroFill) {
                rec.pm25.set(year, 0.0);
            }
        }

        rec.population = parse_number(fields[8]);
        rec.area = parse_number(fields[9]);
        for (int year = 2018; year <= 2021; ++year) {
            auto value = parse_number(fields[10 + (year - 2018)]);
            if (value) {
                if (*value < 0.0) {
                    throw ValidationError("line " + std::to_string(line_no) + " (" +
                                          rec.country + "): death rate for " +
                                          std::to_string(year) + " must be nonnegative");
                }
                rec.deaths[year] = *value;
            }
        }

        finalize_record(rec, line_no);
        ds.records.push_back(std::move(rec));
    }
    return ds;
}

Dataset load_dataset_string(std::string_view csv, FillPolicy policy, std::string source) {
    std::istringstream in{std::string(csv)};
    return load_dataset(in, policy, std::move(source));
}

Dataset load_dataset_file(const std::filesystem::path& path, FillPolicy policy) {
    std::ifstream in(path);
    if (!in) {
        throw ArgumentError("cannot open input file: " + path.string());
    }
    return load_dataset(in, policy, path.string());
}

std::string write_dataset_csv(const Dataset& ds) {
    std::string out = kCsvHeader;
    out += '\n';
    for (const auto& rec : ds.records) {
        out += csv_escape(std::string(region_name(rec.region)));
        out += ',';
        out += csv_escape(rec.country);
        for (int year = 2018; year <= 2023; ++year) {
            out += ',';
            if (auto v = rec.pm25.get(year)) out += format_number(*v);
        }
        out += ',';
        if (rec.population) out += format_number(*rec.population);
        out += ',';
        if (rec.area) out += format_number(*rec.area);
        for (int year = 2018; year <= 2021; ++year) {
            out += ',';
            auto it = rec.deaths.find(year);
            if (it != rec.deaths.end()) out += format_number(it->second);
        }
        out += '\n';
    }
    return out;
}

Dataset with_fill_policy(const Dataset& ds, FillPolicy policy) {
    Dataset out = ds;
    out.fill_policy = policy;
    if (policy == ds.fill_policy) return out;
    for (auto& rec : out.records) {
        if (policy == FillPolicy::ZeroFill) {
            for (int year = 2018; year <= 2023; ++year) {
                if (!rec.pm25.has(year)) rec.pm25.set(year, 0.0);
            }
        } else {
            for (int year = 2018; year <= 2023; ++year) {
                auto v = rec.pm25.get(year);
                if (v && *v == 0.0) rec.pm25.erase(year);
            }
        }
    }
    return out;
}

namespace {

struct EmbeddedRow {
    Region region;
    const char* country;
    std::initializer_list<std::pair<int, double>> values;
};

} // namespace

Dataset embedded_dataset() {
    static const EmbeddedRow rows[] = {
        {Region::CentralAsia, "Kazakhstan", {{2021, 21.9}, {2023, 29.8}}},
        {Region::CentralAsia, "Kyrgyzstan", {{2020, 50.8}}},
        {Region::CentralAsia, "Tajikistan", {{2020, 59.4}}},
        {Region::CentralAsia, "Uzbekistan", {{2020, 42.8}, {2023, 34.3}}},
        {Region::EastAsia, "China", {{2018, 32.5}, {2023, 42.2}}},
        {Region::EastAsia, "Hong Kong SAR", {{2018, 14.5}, {2023, 20.2}}},
        {Region::EastAsia, "Japan", {{2018, 9.1}, {2023, 12.0}}},
        {Region::EastAsia, "Macao SAR", {{2018, 16.2}, {2023, 21.2}}},
        {Region::EastAsia, "Mongolia", {{2018, 22.5}, {2021, 62.0}, {2023, 58.5}}},
        {Region::EastAsia, "South Korea", {{2018, 19.2}, {2023, 24.0}}},
        {Region::EastAsia, "Taiwan", {{2018, 20.2}, {2020, 15.0}, {2023, 18.5}}},
        {Region::SouthAsia, "Bangladesh", {{2018, 79.9}, {2023, 97.1}}},
        {Region::SouthAsia, "India", {{2018, 54.4}, {2023, 72.5}}},
        {Region::SouthAsia, "Maldives", {{2018, 15.3}, {2019, 10.9}}},
        {Region::SouthAsia, "Nepal", {{2018, 42.4}, {2023, 54.1}}},
        {Region::SouthAsia, "Pakistan", {{2020, 66.8}, {2021, 59.0}}},
        {Region::SouthAsia, "Sri Lanka", {{2018, 19.3}, {2023, 32.0}}},
        {Region::SoutheastAsia, "Cambodia",
         {{2018, 22.8}, {2019, 8.3}, {2021, 21.1}, {2023, 20.1}}},
        {Region::SoutheastAsia, "Indonesia", {{2021, 51.7}, {2023, 42.0}}},
        {Region::SoutheastAsia, "Malaysia", {{2018, 22.5}, {2021, 19.4}}},
        {Region::SoutheastAsia, "Philippines", {{2018, 13.5}, {2023, 14.6}}},
        {Region::SoutheastAsia, "Singapore", {{2018, 13.4}, {2023, 14.8}}},
        {Region::SoutheastAsia, "Thailand", {{2018, 23.3}, {2023, 26.4}}},
        {Region::SoutheastAsia, "Vietnam", {{2021, 34.1}, {2023, 32.9}}},
        {Region::WestAsia, "Armenia", {{2018, 26.4}, {2020, 33.9}}},
        {Region::WestAsia, "Bahrain", {{2018, 39.2}, {2023, 59.8}}},
        {Region::WestAsia, "Iraq", {{2019, 80.1}, {2021, 39.6}}},
        {Region::WestAsia, "Israel", {{2021, 16.9}, {2023, 18.6}}},
        {Region::WestAsia, "Kuwait", {{2019, 55.8}, {2021, 34.0}, {2023, 56.0}}},
        {Region::WestAsia, "Qatar", {{2018, 37.6}, {2021, 44.3}}},
        {Region::WestAsia, "Saudi Arabia", {{2019, 41.5}, {2021, 22.1}}},
        {Region::WestAsia, "Turkey", {{2021, 18.7}, {2023, 21.9}}},
        {Region::WestAsia, "United Arab Emirates",
         {{2018, 43.0}, {2021, 29.2}, {2023, 49.9}}},
    };

    Dataset ds;
    ds.fill_policy = FillPolicy::Exclude;
    ds.source = "embedded: IQAir annual country PM2.5 subset (2018-2023)";
    for (const auto& row : rows) {
        CountryRecord rec;
        rec.region = row.region;
        rec.country = row.country;
        for (auto [year, value] : row.values) rec.pm25.set(year, value);
        ds.records.push_back(std::move(rec));
    }
    return ds;
}

std::string dataset_hash(const Dataset& ds) {
    std::string payload = write_dataset_csv(ds);
    payload += fill_policy_name(ds.fill_policy);
    std::uint64_t hash = 1469598103934665603ULL; // FNV offset basis
    for (unsigned char c : payload) {
        hash ^= c;
        hash *= 1099511628211ULL; // FNV prime
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return std::string(buf);
}

} // namespace pm25
