#pragma once

#include "ovcyst/dataset.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace ovcyst {

// Comma-separated, header first. An empty cell or NA is missing; the target
// column holds class display names (quoted when they contain commas).
// Extra columns are ignored; header order is free.
//
// Throws MissingColumn, ParseError (with line and column), UnknownLabel.
LabeledDataset read_csv(std::istream& in, const Schema& schema);
LabeledDataset load_csv(const std::filesystem::path& path, const Schema& schema);

void write_csv(std::ostream& out, const LabeledDataset& data);
void save_csv(const std::filesystem::path& path, const LabeledDataset& data);

// Splits one CSV record, honouring double quotes and "" escapes.
std::vector<std::string> split_csv_record(const std::string& line);

}  // namespace ovcyst
