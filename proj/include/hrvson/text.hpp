#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hrvson::text {

// Shortest decimal form that parses back to the same double.
std::string shortest(double value);

// Six significant digits, the precision used for every reported number.
std::string sig6(double value);

// Strict full-token parse; nullopt on trailing garbage, empty input or inf/nan.
std::optional<double> parse_double(std::string_view token);

std::string_view trim(std::string_view s);

// Splits on any run of whitespace and/or commas.
std::vector<std::string_view> split_fields(std::string_view line);

// Splits on single commas, keeping empty fields.
std::vector<std::string_view> split_csv(std::string_view line);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace hrvson::text
