#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace h2sched::csv {

// Shortest decimal string that parses back to exactly the same double.
// Keeps CSV round trips bit identical without 17-digit noise everywhere.
std::string format_double(double v);

// Strict double parse of the whole field. `context` and `line` feed the
// error message; line is 1-based within the file.
double parse_double(std::string_view field, const std::string& context, int line);

// Split one CSV line on commas. No quoting rules; none of our formats
// ever emit quoted fields.
std::vector<std::string_view> split(std::string_view line);

// ISO-8601 timestamps without zone suffix ("2017-01-01T00:00:00"),
// interpreted as UTC. Epoch is seconds since 1970-01-01T00:00:00.
std::int64_t parse_timestamp(std::string_view field, const std::string& context, int line);
std::string format_timestamp(std::int64_t epoch_s);

// Read a whole text file; throws FormatError if it cannot be opened.
std::string read_file(const std::string& path);

// Write a string to a file, truncating; throws FormatError on failure.
void write_file(const std::string& path, const std::string& content);

}  // namespace h2sched::csv
