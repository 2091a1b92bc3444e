#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gbm_cutoff/json_io.hpp"

namespace gbm::cli {

using Cell = std::variant<std::monostate, double, long long, bool, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
};

// Doubles use 17 significant digits; empty cells stay empty in CSV and become null in JSON.
std::string format_double(double v);
std::string to_csv(const Table& t);
Json to_json(const Table& t);

// Writes through a temporary sibling and a rename, so readers never see a
// half-written file. Without a path the content goes to stdout.
void write_output(const std::optional<std::filesystem::path>& path, const std::string& content);

}  // namespace gbm::cli
