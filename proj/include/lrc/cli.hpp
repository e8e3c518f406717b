// Command-line front end. Exit codes: 0 success, 1 verification-negative
// (falsified or insufficient margin), 2 inconclusive, 3 usage or I/O error.
#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace lrc::cli {

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lrc::cli
