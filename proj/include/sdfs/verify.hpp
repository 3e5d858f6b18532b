// verify.hpp - Built-in verification suites behind `susy-dfs verify`
//
// Asserted checks decide the exit status. Exploratory checks are reported with
// their residuals but never fail a run.

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sdfs {

enum class Suite { Algebra, Oracle, Dfs, Susy, All };

std::optional<Suite> parse_suite(std::string_view name);

struct Check {
    std::string suite;
    std::string name;
    double residual{0.0};
    double tolerance{0.0};
    bool above{false};  // pass means residual > tolerance instead of below it
    bool asserted{true};
    bool passed{false};
    std::string detail;
};

struct VerifyReport {
    std::vector<Check> checks;
    std::vector<std::string> tables;  // preformatted blocks, e.g. the Nicolai table

    bool ok() const;  // every asserted check passed
};

VerifyReport verify(Suite suite);

void print_report(std::ostream& out, const VerifyReport& report);

}  // namespace sdfs
