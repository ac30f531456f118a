#ifndef CHARTMORPH_ERROR_HPP
#define CHARTMORPH_ERROR_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace chartmorph {

enum class ErrorCode {
    MalformedDocument,
    SchemaViolation,
    SemanticViolation,
    AggregateOnNonNumeric,
    NegativeValueInPie,
    UnsupportedCombination,
    OutOfRange,
    NonPositiveTotal,
    CyclicPriority,
    MissingCorrespondence,
    AmbiguousClassification,
    IoFailure,
    UnsupportedFormat,
};

const char* to_string(ErrorCode code);

// One problem found while checking an input document. `path` is a
// JSON-pointer-like location ("source.chart.measures[0].column").
struct Violation {
    ErrorCode code;
    std::string rule;
    std::string path;
    std::string message;

    bool operator==(const Violation&) const = default;
};

class ChartError : public std::runtime_error {
public:
    ChartError(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// Thrown by the parser; carries every violation found, not just the first.
class InputError : public ChartError {
public:
    explicit InputError(std::vector<Violation> violations);

    const std::vector<Violation>& violations() const noexcept { return violations_; }

private:
    std::vector<Violation> violations_;
};

} // namespace chartmorph

#endif
