#include "omcl/types.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace omcl {

namespace {

int index_of(const std::vector<std::string>& ids, const std::string& id) {
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (ids[i] == id) return static_cast<int>(i);
    }
    return -1;
}

bool all_finite(const Eigen::Vector3d& v) {
    return std::isfinite(v.x()) && std::isfinite(v.y()) && std::isfinite(v.z());
}

} // namespace

int EnvironmentCatalog::object_index(const std::string& id) const {
    return index_of(objects, id);
}

int EnvironmentCatalog::location_index(const std::string& id) const {
    return index_of(locations, id);
}

void EnvironmentCatalog::check() const {
    if (objects.empty()) throw CatalogError("catalog has no objects");
    if (locations.empty()) throw CatalogError("catalog has no locations");
    std::set<std::string> seen;
    for (const auto& o : objects) {
        if (!seen.insert(o).second)
            throw CatalogError("duplicate object identifier: " + o);
    }
    seen.clear();
    for (const auto& l : locations) {
        if (!seen.insert(l).second)
            throw CatalogError("duplicate location identifier: " + l);
    }
}

std::vector<Violation> validate_demonstration(const Demonstration& d,
                                              const EnvironmentCatalog& catalog) {
    std::vector<Violation> out;
    auto add = [&out](std::string stream, std::string message) {
        out.push_back({std::move(stream), std::move(message)});
    };

    if (d.motion.empty()) add("motion", "no motion channels (K must be >= 1)");
    if (d.objects.empty()) add("objects", "no object channels (M must be >= 1)");
    if (!(d.sample_rate > 0.0)) add("sample_rate", "sample rate must be positive");

    const int n = d.sample_count();
    if (!d.motion.empty() && n < 2) add("motion[0]", "stream has fewer than 2 samples");

    for (std::size_t k = 0; k < d.motion.size(); ++k) {
        const auto& m = d.motion[k];
        const std::string base = "motion[" + std::to_string(k) + "]";
        if (m.positions.size() != m.orientations.size()) {
            add(base, "positions and orientations lengths differ");
            continue;
        }
        if (m.sample_count() != n)
            add(base, "length differs from channel 0");
        for (std::size_t t = 0; t < m.positions.size(); ++t) {
            if (!all_finite(m.positions[t])) {
                add(base + ".positions", "non-finite coordinate at t=" + std::to_string(t));
                break;
            }
        }
        for (std::size_t t = 0; t < m.orientations.size(); ++t) {
            const auto& q = m.orientations[t];
            const double norm = q.norm();
            if (!std::isfinite(norm) || std::abs(norm - 1.0) > 1e-6) {
                std::ostringstream msg;
                msg << "quaternion norm " << norm << " at t=" << t;
                add(base + ".orientations", msg.str());
                break;
            }
        }
    }

    for (std::size_t m = 0; m < d.objects.size(); ++m) {
        const auto& s = d.objects[m];
        const std::string base = "objects[" + std::to_string(m) + "]";
        if (s.sample_count() != n) {
            add(base, "length differs from motion streams");
        }
        bool width_bad = false, value_bad = false;
        for (std::size_t t = 0; t < s.observations.size() && !(width_bad && value_bad); ++t) {
            const auto& bits = s.observations[t];
            if (!width_bad && static_cast<int>(bits.size()) != catalog.object_count()) {
                add(base + ".observations",
                    "bit vector width " + std::to_string(bits.size()) + " != |O| = " +
                        std::to_string(catalog.object_count()) + " at t=" + std::to_string(t));
                width_bad = true;
            }
            if (!value_bad) {
                for (auto b : bits) {
                    if (b != 0 && b != 1) {
                        add(base + ".observations",
                            "non-binary entry " + std::to_string(int(b)) + " at t=" + std::to_string(t));
                        value_bad = true;
                        break;
                    }
                }
            }
        }
    }

    {
        const auto& s = d.location;
        if (s.sample_count() != n) add("location", "length differs from motion streams");
        for (std::size_t t = 0; t < s.locations.size(); ++t) {
            const int l = s.locations[t];
            if (l < 0 || l >= catalog.location_count()) {
                add("location", "index " + std::to_string(l) + " outside catalog at t=" +
                                    std::to_string(t));
                break;
            }
        }
    }

    return out;
}

void require_valid(const Demonstration& d, const EnvironmentCatalog& catalog) {
    const auto violations = validate_demonstration(d, catalog);
    if (violations.empty()) return;
    std::ostringstream msg;
    msg << "demonstration has " << violations.size() << " violation(s):";
    for (const auto& v : violations) msg << "\n  " << v.stream << ": " << v.message;
    throw ValidationError(msg.str());
}

} // namespace omcl
