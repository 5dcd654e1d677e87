#include "sgf/report.hpp"

#include <json.hpp>

namespace sgf {

const char* to_string(VerificationReport::Status s) {
    switch (s) {
        case VerificationReport::Status::pass: return "pass";
        case VerificationReport::Status::fail: return "fail";
        case VerificationReport::Status::informational: return "informational";
    }
    return "unknown";
}

std::string build_id() {
#ifdef SGF_BUILD_ID
    return SGF_BUILD_ID;
#else
    return "unknown";
#endif
}

std::string VerificationReport::to_json(int indent) const {
    nlohmann::ordered_json j;
    j["name"] = name;
    j["status"] = to_string(status);
    j["provenance"] = provenance;
    if (!note.empty()) j["note"] = note;
    j["seed"] = seed;
    if (samples > 0) j["samples"] = samples;
    if (paths > 0) j["paths"] = paths;
    j["metrics"] = metrics;
    j["tolerances"] = tolerances;
    if (confidence) {
        j["confidence"] = {{"estimate", confidence->first}, {"stderr", confidence->second}};
    }
    j["build"] = build_id();
    return j.dump(indent);
}

}  // namespace sgf
