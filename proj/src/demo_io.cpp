#include "omcl/demo_io.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace omcl {

using nlohmann::json;

namespace {

json parse_json(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(what + ": " + e.what());
    }
}

const json& require_field(const json& j, const char* field, const std::string& what) {
    auto it = j.find(field);
    if (it == j.end()) throw ParseError(what + ": missing field '" + field + "'");
    return *it;
}

double require_number(const json& j, const char* field, const std::string& what) {
    const json& v = require_field(j, field, what);
    if (!v.is_number()) throw ParseError(what + ": field '" + field + "' is not a number");
    return v.get<double>();
}

Eigen::Quaterniond canonical(Eigen::Quaterniond q) {
    if (q.w() < 0.0) q.coeffs() = -q.coeffs();
    return q;
}

} // namespace

EnvironmentCatalog parse_catalog(const std::string& text) {
    const json j = parse_json(text, "catalog");
    EnvironmentCatalog c;
    if (j.contains("name")) c.name = j["name"].get<std::string>();
    const json& objs = require_field(j, "objects", "catalog");
    const json& locs = require_field(j, "locations", "catalog");
    if (!objs.is_array() || !locs.is_array())
        throw ParseError("catalog: 'objects' and 'locations' must be arrays");
    for (const auto& o : objs) c.objects.push_back(o.get<std::string>());
    for (const auto& l : locs) c.locations.push_back(l.get<std::string>());
    c.check();
    return c;
}

std::string serialize_catalog(const EnvironmentCatalog& catalog) {
    json j;
    j["name"] = catalog.name;
    j["objects"] = catalog.objects;
    j["locations"] = catalog.locations;
    return j.dump();
}

EnvironmentCatalog load_catalog(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open catalog file: " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_catalog(buf.str());
}

void save_catalog(const EnvironmentCatalog& catalog, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write catalog file: " + path.string());
    out << serialize_catalog(catalog) << "\n";
}

Demonstration parse_demonstration(const std::string& record,
                                  const EnvironmentCatalog& catalog) {
    const std::string what = "demonstration record";
    const json j = parse_json(record, what);
    Demonstration d;

    if (j.contains("label") && !j["label"].is_null()) {
        if (!j["label"].is_string()) throw ParseError(what + ": field 'label' is not a string");
        d.label = j["label"].get<std::string>();
    }
    d.sample_rate = require_number(j, "sample_rate", what);
    if (!(d.sample_rate > 0.0)) throw ValidationError(what + ": sample_rate must be positive");

    const json& ref = require_field(j, "catalog_ref", what);
    if (!ref.is_string()) throw ParseError(what + ": field 'catalog_ref' is not a string");
    if (!catalog.name.empty() && ref.get<std::string>() != catalog.name)
        throw CatalogError(what + ": catalog_ref '" + ref.get<std::string>() +
                           "' does not match catalog '" + catalog.name + "'");

    const json& motion = require_field(j, "motion", what);
    if (!motion.is_array() || motion.empty())
        throw ParseError(what + ": field 'motion' must be a non-empty array");
    for (std::size_t k = 0; k < motion.size(); ++k) {
        const json& chan = motion[k];
        const std::string where = what + ", motion[" + std::to_string(k) + "]";
        if (!chan.is_array() || chan.size() != 2)
            throw ParseError(where + ": expected [positions, quaternions]");
        MotionStream s;
        for (const auto& p : chan[0]) {
            if (!p.is_array() || p.size() != 3)
                throw ParseError(where + ": position must be [x,y,z]");
            s.positions.emplace_back(p[0].get<double>(), p[1].get<double>(), p[2].get<double>());
        }
        for (const auto& q : chan[1]) {
            if (!q.is_array() || q.size() != 4)
                throw ParseError(where + ": quaternion must be [w,x,y,z]");
            s.orientations.push_back(canonical(Eigen::Quaterniond(
                q[0].get<double>(), q[1].get<double>(), q[2].get<double>(), q[3].get<double>())));
        }
        if (s.positions.size() != s.orientations.size())
            throw ValidationError(where + ": positions and quaternions lengths differ");
        d.motion.push_back(std::move(s));
    }

    const int n = d.sample_count();

    const json& objects = require_field(j, "objects", what);
    if (!objects.is_array() || objects.empty())
        throw ParseError(what + ": field 'objects' must be a non-empty array");
    for (std::size_t m = 0; m < objects.size(); ++m) {
        const std::string where = what + ", objects[" + std::to_string(m) + "]";
        ObjectStream s;
        for (const auto& bits : objects[m]) {
            if (!bits.is_string()) throw ParseError(where + ": bit vector must be a string");
            const std::string text = bits.get<std::string>();
            if (static_cast<int>(text.size()) != catalog.object_count())
                throw CatalogError(where + ": bit vector width " + std::to_string(text.size()) +
                                   " != |O| = " + std::to_string(catalog.object_count()));
            std::vector<std::uint8_t> row;
            row.reserve(text.size());
            for (char c : text) {
                if (c != '0' && c != '1')
                    throw ParseError(where + ": bit vector character '" + std::string(1, c) + "'");
                row.push_back(c == '1' ? 1 : 0);
            }
            s.observations.push_back(std::move(row));
        }
        if (s.sample_count() != n)
            throw ValidationError(where + ": length " + std::to_string(s.sample_count()) +
                                  " != motion length " + std::to_string(n));
        d.objects.push_back(std::move(s));
    }

    const json& location = require_field(j, "location", what);
    if (!location.is_array()) throw ParseError(what + ": field 'location' must be an array");
    for (const auto& l : location) {
        if (!l.is_number_integer()) throw ParseError(what + ": location entries must be integers");
        const int idx = l.get<int>();
        if (idx < 0 || idx >= catalog.location_count())
            throw CatalogError(what + ": location index " + std::to_string(idx) +
                               " outside catalog of " + std::to_string(catalog.location_count()));
        d.location.locations.push_back(idx);
    }
    if (d.location.sample_count() != n)
        throw ValidationError(what + ": location length " +
                              std::to_string(d.location.sample_count()) + " != motion length " +
                              std::to_string(n));

    require_valid(d, catalog);
    return d;
}

std::string serialize_demonstration(const Demonstration& d,
                                    const EnvironmentCatalog& catalog) {
    json j;
    if (!d.label.empty()) j["label"] = d.label;
    j["sample_rate"] = d.sample_rate;
    j["catalog_ref"] = catalog.name;

    json motion = json::array();
    for (const auto& s : d.motion) {
        json positions = json::array();
        for (const auto& p : s.positions) positions.push_back({p.x(), p.y(), p.z()});
        json quats = json::array();
        for (const auto& q : s.orientations) quats.push_back({q.w(), q.x(), q.y(), q.z()});
        motion.push_back({std::move(positions), std::move(quats)});
    }
    j["motion"] = std::move(motion);

    json objects = json::array();
    for (const auto& s : d.objects) {
        json rows = json::array();
        for (const auto& bits : s.observations) {
            std::string text(bits.size(), '0');
            for (std::size_t i = 0; i < bits.size(); ++i)
                if (bits[i]) text[i] = '1';
            rows.push_back(std::move(text));
        }
        objects.push_back(std::move(rows));
    }
    j["objects"] = std::move(objects);
    j["location"] = d.location.locations;

    return j.dump();
}

std::vector<Demonstration> load_demonstrations(const std::filesystem::path& path,
                                               const EnvironmentCatalog& catalog) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open demonstration file: " + path.string());
    std::vector<Demonstration> demos;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            demos.push_back(parse_demonstration(line, catalog));
        } catch (const Error& e) {
            throw ParseError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return demos;
}

void save_demonstrations(const std::vector<Demonstration>& demos,
                         const EnvironmentCatalog& catalog,
                         const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write demonstration file: " + path.string());
    for (const auto& d : demos) out << serialize_demonstration(d, catalog) << "\n";
}

} // namespace omcl
