#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

namespace sgf {

// Outcome of one verification check: named metrics against tolerances, plus
// enough provenance (what property, which seed, how many samples) to
// reproduce the run bit-for-bit.
struct VerificationReport {
    enum class Status { pass, fail, informational };

    std::string name;
    Status status = Status::informational;
    std::map<std::string, double> metrics;
    std::map<std::string, double> tolerances;
    std::string provenance;  // the property this report certifies
    std::string note;        // scope limitations, if any
    std::uint64_t seed = 0;
    long samples = 0;
    long paths = 0;
    std::optional<std::pair<double, double>> confidence;  // (estimate, stderr)

    bool passed() const { return status != Status::fail; }
    // Deterministic JSON rendering (sorted keys, round-trippable doubles).
    std::string to_json(int indent = 2) const;
};

const char* to_string(VerificationReport::Status s);

std::string build_id();

}  // namespace sgf
