#pragma once

#include <cstdio>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gbox/angles.hpp"
#include "gbox/box.hpp"
#include "gbox/errors.hpp"
#include "gbox/heading.hpp"

namespace gbox {

/// Fixed 9-significant-digit float formatting; no locale dependence, so
/// identical inputs always serialize to identical bytes.
inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

inline std::string definition_name(BoxDefinition def) {
    return def == BoxDefinition::OpenCv ? "oc" : "le";
}

inline BoxDefinition parse_definition(const std::string& s) {
    if (s == "oc" || s == "opencv") return BoxDefinition::OpenCv;
    if (s == "le" || s == "long-edge") return BoxDefinition::LongEdge;
    throw InvalidConfig("unknown box definition: " + s);
}

inline nlohmann::json to_json(const RBox2D& b) {
    return {{"x", b.x},     {"y", b.y},         {"w", b.w},
            {"h", b.h},     {"theta", b.theta}, {"def", definition_name(b.def)}};
}

inline nlohmann::json to_json(const RBox3D& b) {
    return {{"x", b.x}, {"y", b.y}, {"z", b.z},         {"w", b.w},
            {"h", b.h}, {"l", b.l}, {"theta", b.theta}};
}

/// Parse {x,y,w,h,theta[,def]}; angles in radians unless degrees is set.
inline RBox2D box2d_from_json(const nlohmann::json& j, bool degrees = false,
                              BoxDefinition default_def = BoxDefinition::LongEdge) {
    RBox2D b;
    b.x = j.at("x").get<double>();
    b.y = j.at("y").get<double>();
    b.w = j.at("w").get<double>();
    b.h = j.at("h").get<double>();
    b.theta = j.at("theta").get<double>();
    if (degrees) b.theta = deg_to_rad(b.theta);
    b.def = j.contains("def") ? parse_definition(j.at("def").get<std::string>()) : default_def;
    return b;
}

inline RBox3D box3d_from_json(const nlohmann::json& j, bool degrees = false) {
    RBox3D b;
    b.x = j.at("x").get<double>();
    b.y = j.at("y").get<double>();
    b.z = j.at("z").get<double>();
    b.w = j.at("w").get<double>();
    b.h = j.at("h").get<double>();
    b.l = j.at("l").get<double>();
    b.theta = j.at("theta").get<double>();
    if (degrees) b.theta = deg_to_rad(b.theta);
    return b;
}

/// A head-fix record: cube + heading vector + class label.
struct HeadingRecord {
    RBox3D cube;
    HeadingVector heading;
    std::string cls;
};

inline HeadingRecord heading_record_from_json(const nlohmann::json& j, bool degrees = false) {
    HeadingRecord r;
    r.cube = box3d_from_json(j, degrees);
    r.heading.dx = j.at("dx").get<double>();
    r.heading.dy = j.at("dy").get<double>();
    r.cls = j.at("class").get<std::string>();
    return r;
}

inline nlohmann::json to_json(const HeadingRecord& r) {
    nlohmann::json j = to_json(r.cube);
    j["dx"] = r.heading.dx;
    j["dy"] = r.heading.dy;
    j["class"] = r.cls;
    return j;
}

/// Read one JSON object per nonempty line.
inline std::vector<nlohmann::json> read_jsonl(std::istream& in) {
    std::vector<nlohmann::json> records;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        records.push_back(nlohmann::json::parse(line));
    }
    return records;
}

/// CSV row x,y,w,h,theta (definition is per-file, carried out of band).
inline std::string box2d_csv_row(const RBox2D& b) {
    return format_double(b.x) + "," + format_double(b.y) + "," + format_double(b.w) + "," +
           format_double(b.h) + "," + format_double(b.theta);
}

inline std::string box3d_csv_row(const RBox3D& b) {
    return format_double(b.x) + "," + format_double(b.y) + "," + format_double(b.z) + "," +
           format_double(b.w) + "," + format_double(b.h) + "," + format_double(b.l) + "," +
           format_double(b.theta);
}

}  // namespace gbox
