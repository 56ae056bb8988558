#include "omcl/synthetic.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <random>

namespace omcl {

using nlohmann::json;

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return splitmix64(splitmix64(splitmix64(a) ^ b) ^ c);
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    return h;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

std::size_t pick(std::mt19937_64& rng, std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

double minjerk(double u) { return u * u * u * (10.0 + u * (-15.0 + 6.0 * u)); }

Eigen::Quaterniond exp_quat(const Eigen::Vector3d& rotvec) {
    const double angle = rotvec.norm();
    if (angle < 1e-12) return Eigen::Quaterniond(1.0, 0.5 * rotvec.x(), 0.5 * rotvec.y(),
                                                 0.5 * rotvec.z())
        .normalized();
    const Eigen::Vector3d axis = rotvec / angle;
    return Eigen::Quaterniond(Eigen::AngleAxisd(angle, axis));
}

Eigen::Quaterniond canonical(Eigen::Quaterniond q) {
    q.normalize();
    if (q.w() < 0.0) q.coeffs() = -q.coeffs();
    return q;
}

// Band-limited sway: per coordinate a sum of three slow sinusoids scaled to
// the requested standard deviation. Keeps velocities far below any stroke
// speed so rest phases stay below the segmentation threshold.
struct SwayField {
    std::array<std::array<double, 3>, 3> amp{};
    std::array<std::array<double, 3>, 3> freq{};
    std::array<std::array<double, 3>, 3> phase{};

    static SwayField make(std::mt19937_64& rng, double sigma) {
        SwayField f;
        for (int c = 0; c < 3; ++c) {
            double var = 0.0;
            for (int j = 0; j < 3; ++j) {
                f.amp[c][j] = uniform(rng, 0.5, 1.5);
                f.freq[c][j] = uniform(rng, 0.03, 0.15);
                f.phase[c][j] = uniform(rng, 0.0, 2.0 * M_PI);
                var += 0.5 * f.amp[c][j] * f.amp[c][j];
            }
            const double scale = (var > 0.0) ? sigma / std::sqrt(var) : 0.0;
            for (int j = 0; j < 3; ++j) f.amp[c][j] *= scale;
        }
        return f;
    }

    Eigen::Vector3d value(double t) const {
        Eigen::Vector3d v;
        for (int c = 0; c < 3; ++c) {
            double x = 0.0;
            for (int j = 0; j < 3; ++j)
                x += amp[c][j] * std::sin(2.0 * M_PI * freq[c][j] * t + phase[c][j]);
            v[c] = x;
        }
        return v;
    }
};

struct Phase {
    double start = 0.0, end = 0.0;
    Eigen::Vector3d p0, p1;
    Eigen::Quaterniond q0, q1;
    bool stroke = false;
};

Eigen::Vector3d channel_base(int channel) {
    switch (channel) {
        case kHeadChannel: return {0.0, 0.0, 1.65};
        case kLeftHandChannel: return {-0.20, 0.15, 0.95};
        default: return {0.20, 0.15, 0.95};
    }
}

} // namespace

void GeneratorConfig::check() const {
    if (!(duration > 0.0) || !(sample_rate > 0.0))
        throw ValidationError("generator: duration and sample_rate must be positive");
    if (duration * sample_rate < 2.0)
        throw ValidationError("generator: duration*sample_rate must be >= 2");
    if (position_noise < 0.0 || orientation_noise < 0.0 || amplitude_jitter < 0.0 ||
        frequency_jitter < 0.0)
        throw ValidationError("generator: noise and jitter values must be >= 0");
}

EnvironmentCatalog household_catalog() {
    EnvironmentCatalog c;
    c.name = "household-v1";
    c.objects = {"Hairbrush", "Knife",  "Fork",           "Chopsticks", "Apple",
                 "Banana",    "Pear",   "Mug",            "Glass",      "Bottle",
                 "Frying-Pan", "Hand",  "Body",           "Door",       "Cat",
                 "Dog",       "Guitar", "Piano",          "Spoon",      "Pot",
                 "Broom",     "Vacuum-Cleaner", "Soap",   "Sponge",     "Dish",
                 "Cup",       "Toothbrush",     "Towel",  "Book"};
    c.locations = {"Kitchen", "Living-Room", "Dining-Room", "Bathroom"};
    return c;
}

namespace {

ChannelPlan two_point_plan(Eigen::Vector3d a, Eigen::Vector3d b, int strokes, double dur,
                           double dwell, Eigen::Vector3d rot_a = {0, 0, 0},
                           Eigen::Vector3d rot_b = {0, 0, 0}) {
    ChannelPlan p;
    p.active = true;
    p.waypoints = {StrokePose{a, rot_a}, StrokePose{b, rot_b}};
    p.stroke_count = strokes;
    p.stroke_duration = dur;
    p.dwell = dwell;
    return p;
}

// Wave and Wash Window share this program verbatim; only context separates
// them.
ChannelPlan lateral_stroke_plan() {
    return two_point_plan({-0.11, 0.10, 0.32}, {0.11, 0.10, 0.32}, 5, 0.45, 0.45,
                          {0.0, -0.25, 0.0}, {0.0, 0.25, 0.0});
}

// Shared by Wash Hands and Wash Plates.
ChannelPlan scrub_plan(bool left) {
    const double sx = left ? -1.0 : 1.0;
    return two_point_plan({sx * -0.05, 0.23, 0.01}, {sx * 0.05, 0.27, -0.02}, 5, 0.45, 0.45,
                          {0.0, 0.0, sx * -0.15}, {0.0, 0.0, sx * 0.15});
}

// Shared by Pet and Fry (same displacement and wrist sweep; the rest
// posture differs but segment features are translation-invariant).
ChannelPlan forward_stroke_plan(Eigen::Vector3d rest) {
    return two_point_plan(rest, rest + Eigen::Vector3d{0.0, 0.15, -0.03}, 5, 0.45, 0.45,
                          {-0.15, 0.0, 0.0}, {0.15, 0.0, 0.0});
}

std::vector<ActionTemplate> build_templates() {
    const std::vector<std::string> all_locations = {"Kitchen", "Living-Room", "Dining-Room",
                                                    "Bathroom"};
    std::vector<ActionTemplate> ts;

    auto add = [&ts](ActionTemplate t) { ts.push_back(std::move(t)); };

    {
        ActionTemplate t;
        t.name = "Bow";
        t.family = "torso-pitch-arc";
        t.channels[kHeadChannel] =
            two_point_plan({0, 0, 0}, {0.0, 0.18, -0.22}, 4, 0.70, 0.45, {0, 0, 0},
                           {0.55, 0.0, 0.0});
        t.locations = all_locations;
        add(std::move(t));
    }
    {
        ActionTemplate t;
        t.name = "Comb hair";
        t.family = "head-stroke";
        t.channels[kRightHandChannel] =
            two_point_plan({0.02, 0.10, 0.62}, {0.06, 0.02, 0.38}, 8, 0.32, 0.15,
                           {0, 0, 0}, {-0.3, 0.0, 0.0});
        t.locations = {"Bathroom"};
        t.objects[kRightHandChannel] = {"Hairbrush"};
        add(std::move(t));
    }
    {
        ActionTemplate t;
        t.name = "Cut";
        t.family = "saw";
        t.channels[kRightHandChannel] =
            two_point_plan({0.0, 0.26, 0.12}, {0.0, 0.38, -0.04}, 5, 0.45, 0.45,
                           {0, 0, 0}, {0.45, 0.0, 0.0});
        t.locations = {"Kitchen"};
        t.objects[kRightHandChannel] = {"Knife"};
        t.objects[kLeftHandChannel] = {"Apple", "Banana", "Pear"};
        add(std::move(t));
    }
    {
        ActionTemplate t;
        t.name = "Drink";
        t.family = "raise-sip";
        ChannelPlan p = two_point_plan({0.0, 0.12, 0.02}, {0.01, 0.16, 0.46}, 2, 0.9, 0.45,
                                       {0, 0, 0}, {-0.5, 0.0, 0.0});
        p.waypoints[1].dwell_scale = 3.0; // the sip
        t.channels[kRightHandChannel] = std::move(p);
        t.locations = all_locations;
        t.objects[kRightHandChannel] = {"Mug", "Glass", "Bottle"};
        add(std::move(t));
    }
    {
        ActionTemplate t;
        t.name = "Eat at Table";
        t.family = "table-mouth";
        t.channels[kRightHandChannel] =
            two_point_plan({0.0, 0.32, -0.08}, {0.0, 0.14, 0.40}, 4, 0.5, 0.45, {0, 0, 0},
                           {-0.35, 0.0, 0.0});
        t.channels[kLeftHandChannel] =
            two_point_plan({-0.02, 0.30, -0.08}, {0.02, 0.34, -0.10}, 3, 0.5, 0.45);
        t.locations = {"Dining-Room"};
        t.objects[kRightHandChannel] = {"Fork", "Chopsticks"};
        t.objects[kLeftHandChannel] = {"Knife"};
        add(std::move(t));
    }
    {
        ActionTemplate t;
        t.name = "Fry";
        t.family = "forward-stroke";
        t.channels[kRightHandChannel] = forward_stroke_plan({0.0, 0.24, 0.0});
        t.locations = {"Kitchen"};
        t.objects[kRightHandChannel] = {"Frying-Pan"};
        add(std::move(t));
    }
    {
        ActionTemplate t;
        t.name = "High-Five";
        t.family = "reach-up";
        ChannelPlan p = two_point_plan({0.0, 0.12, 0.02}, {0.04, 0.34, 0.52}, 2, 0.5, 0.45);
        p.waypoints[1].dwell_scale = 1.5;
        t.channels[kRightHandChannel] = std::move(p);
        t.locations = all_locations;
        t.objects[kRightHandChannel] = {"Hand"};
        add(std::move(t));
    }
    {
        ActionTemplate t;
        t.name = "Hug";
        t.family = "bilateral-wrap";
        ChannelPlan right = two_point_plan({0.0, 0.15, 0.05}, {-0.18, 0.38, 0.18}, 2, 0.85, 0.45);
        right.waypoints[1].dwell_scale = 3.0; // the embrace
        ChannelPlan left = two_point_plan({0.0, 0.15, 0.05}, {0.18, 0.38, 0.18}, 2, 0.85, 0.45);
        left.waypoints[1].dwell_scale = 3.0;
        t.channels[kRightHandChannel] = std::move(right);
        t.channels[kLeftHandChannel] = std::move(left);
        t.locations = all_locations;
        t.objects[kRightHandChannel] = {"Body"};
        t.objects[kLeftHandChannel] = {"Body"};
        add(std::move(t));
    }
    {
        ActionTemplate t;
        t.name = "Knock on door";
        t.family = "jab";
        t.channels[kRightHandChannel] =
            two_point_plan({0.0, 0.24, 0.30}, {0.0, 0.34, 0.30}, 5, 0.45, 0.45,
                           {-0.25, 0.0, 0.0}, {0.25, 0.0, 0.0});
        t.locations = {"Living-Room"};
        t.objects[kRightHandChannel] = {"Door"};
        add(std::move(t));
    }
    {
        ActionTemplate t;
        t.name = "Pet";
        t.family = "forward-stroke";
        t.channels[kRightHandChannel] = forward_stroke_plan({0.0, 0.26, -0.16});
        t.locations = {"Dining-Room", "Living-Room"};
        t.objects[kRightHandChannel] = {"Cat", "Dog"};
        add(std::move(t));
    }
    {
        ActionTemplate t;
        t.name = "Play Guitar";
        t.family = "strum";
        t.channels[kRightHandChannel] =
            two_point_plan({0.04, 0.18, 0.04}, {0.06, 0.20, -0.10}, 5, 0.45, 0.45,
                           {0, 0, 0}, {0.0, 0.15, 0.0});
        t.locations = {"Living-Room"};
        t.objects[kRightHandChannel] = {"Guitar"};
        t.objects[kLeftHandChannel] = {"Guitar"};
        add(std::move(t));
    }
    {
        ActionTemplate t;
        t.name = "Play Piano";
        t.family = "key-tap";
        t.channels[kRightHandChannel] =
            two_point_plan({0.05, 0.30, -0.02}, {0.15, 0.30, -0.18}, 5, 0.45, 0.45);
        t.channels[kLeftHandChannel] =
            two_point_plan({-0.05, 0.30, -0.02}, {-0.15, 0.30, -0.18}, 5, 0.45, 0.45);
        t.locations = {"Dining-Room"};
        t.objects[kRightHandChannel] = {"Piano"};
        t.objects[kLeftHandChannel] = {"Piano"};
        add(std::move(t));
    }
    {
        ActionTemplate t;
        t.name = "Shake Hands";
        t.family = "pump";
        t.channels[kRightHandChannel] =
            two_point_plan({0.0, 0.30, 0.10}, {0.0, 0.32, 0.0}, 5, 0.45, 0.45,
                           {-0.125, 0.0, 0.0}, {0.125, 0.0, 0.0});
        t.locations = all_locations;
        t.objects[kRightHandChannel] = {"Hand"};
        add(std::move(t));
    }
    {
        ActionTemplate t;
        t.name = "Stir Pot";
        t.family = "stir-arc";
        ChannelPlan p;
        p.active = true;
        const Eigen::Vector3d center{0.0, 0.28, 0.02};
        const double r = 0.07;
        p.waypoints = {StrokePose{center + Eigen::Vector3d{r, 0, 0}, {0, 0, 0.25}},
                       StrokePose{center + Eigen::Vector3d{0, r, 0}, {0, 0, -0.25}},
                       StrokePose{center + Eigen::Vector3d{-r, 0, 0}, {0, 0, 0.25}},
                       StrokePose{center + Eigen::Vector3d{0, -r, 0}, {0, 0, -0.25}}};
        p.stroke_count = 5;
        p.stroke_duration = 0.45;
        p.dwell = 0.35;
        t.channels[kRightHandChannel] = std::move(p);
        t.locations = {"Kitchen"};
        t.objects[kRightHandChannel] = {"Spoon"};
        t.objects[kLeftHandChannel] = {"Pot"};
        add(std::move(t));
    }
    {
        ActionTemplate t;
        t.name = "Sweep";
        t.family = "broom-stroke";
        t.channels[kRightHandChannel] =
            two_point_plan({0.04, 0.24, -0.24}, {-0.10, 0.46, -0.32}, 4, 0.5, 0.45);
        t.channels[kLeftHandChannel] =
            two_point_plan({0.10, 0.16, -0.10}, {-0.04, 0.38, -0.18}, 4, 0.5, 0.45);
        t.locations = {"Kitchen", "Living-Room"};
        t.objects[kRightHandChannel] = {"Broom"};
        t.objects[kLeftHandChannel] = {"Broom"};
        add(std::move(t));
    }
    {
        ActionTemplate t;
        t.name = "Throw";
        t.family = "reach-up";
        ChannelPlan p = two_point_plan({0.0, 0.12, 0.02}, {0.0, 0.33, 0.38}, 2, 0.42, 0.45);
        p.waypoints[1].spread = {0.25, 0.13, 0.22}; // throws go anywhere
        t.channels[kRightHandChannel] = std::move(p);
        t.locations = all_locations;
        t.objects[kRightHandChannel] = {"*"};
        t.grasp_offset_lo = 0.45; // released mid-demonstration
        t.grasp_offset_hi = 0.65;
        add(std::move(t));
    }
    {
        ActionTemplate t;
        t.name = "Vacuum clean";
        t.family = "push-stroke";
        t.channels[kRightHandChannel] =
            two_point_plan({0.0, 0.18, -0.18}, {0.0, 0.52, -0.28}, 4, 0.55, 0.45);
        t.locations = {"Kitchen", "Living-Room"};
        t.objects[kRightHandChannel] = {"Vacuum-Cleaner"};
        add(std::move(t));
    }
    {
        ActionTemplate t;
        t.name = "Wash Hands";
        t.family = "scrub";
        t.channels[kRightHandChannel] = scrub_plan(false);
        t.channels[kLeftHandChannel] = scrub_plan(true);
        t.locations = {"Bathroom"};
        t.objects[kRightHandChannel] = {"Soap"};
        add(std::move(t));
    }
    {
        ActionTemplate t;
        t.name = "Wash Plates";
        t.family = "scrub";
        t.channels[kRightHandChannel] = scrub_plan(false);
        t.channels[kLeftHandChannel] = scrub_plan(true);
        t.locations = {"Kitchen"};
        t.objects[kRightHandChannel] = {"Sponge"};
        t.objects[kLeftHandChannel] = {"Dish"};
        add(std::move(t));
    }
    {
        ActionTemplate t;
        t.name = "Wash Window";
        t.family = "lateral-stroke";
        t.channels[kRightHandChannel] = lateral_stroke_plan();
        t.locations = {"Kitchen"};
        t.objects[kRightHandChannel] = {"Sponge"};
        add(std::move(t));
    }
    {
        ActionTemplate t;
        t.name = "Wave";
        t.family = "lateral-stroke";
        t.channels[kRightHandChannel] = lateral_stroke_plan();
        t.locations = all_locations;
        add(std::move(t));
    }
    {
        ActionTemplate t;
        t.name = "Wring Sponge";
        t.family = "twist";
        t.channels[kRightHandChannel] =
            two_point_plan({-0.03, 0.26, 0.04}, {0.03, 0.26, 0.04}, 5, 0.45, 0.45,
                           {0.0, -0.8, 0.0}, {0.0, 0.8, 0.0});
        t.channels[kLeftHandChannel] =
            two_point_plan({0.03, 0.26, 0.04}, {-0.03, 0.26, 0.04}, 5, 0.45, 0.45,
                           {0.0, 0.8, 0.0}, {0.0, -0.8, 0.0});
        t.locations = {"Kitchen"};
        t.objects[kRightHandChannel] = {"Sponge"};
        t.objects[kLeftHandChannel] = {"Sponge"};
        add(std::move(t));
    }

    return ts;
}

} // namespace

const std::vector<ActionTemplate>& default_templates() {
    static const std::vector<ActionTemplate> templates = build_templates();
    return templates;
}

const ActionTemplate& template_named(const std::string& name) {
    for (const auto& t : default_templates())
        if (t.name == name) return t;
    throw Error("synthetic: unknown action class '" + name + "'");
}

std::vector<std::string> action_class_names() {
    std::vector<std::string> names;
    for (const auto& t : default_templates()) names.push_back(t.name);
    return names;
}

Demonstration generate_demo(const ActionTemplate& tmpl, const EnvironmentCatalog& catalog,
                            const GeneratorConfig& cfg, std::uint64_t draw) {
    cfg.check();
    const int n = static_cast<int>(std::lround(cfg.duration * cfg.sample_rate));
    const double dt = 1.0 / cfg.sample_rate;

    std::mt19937_64 rng(mix_seed(cfg.seed, fnv1a(tmpl.name), draw));

    const double amp_scale = 1.0 + cfg.amplitude_jitter * uniform(rng, -1.0, 1.0);

    // location (and optional transit prefix)
    std::vector<int> location_track(n);
    {
        const std::string& loc_name = tmpl.locations[pick(rng, tmpl.locations.size())];
        const int loc = catalog.location_index(loc_name);
        if (loc < 0) throw CatalogError("synthetic: location '" + loc_name + "' not in catalog");
        std::fill(location_track.begin(), location_track.end(), loc);
        if (cfg.transit_prefix && catalog.location_count() > 1) {
            int other = static_cast<int>(pick(rng, catalog.location_count() - 1));
            if (other >= loc) ++other;
            const int prefix = std::min(
                n - 1, static_cast<int>(uniform(rng, 0.3, 0.8) * cfg.sample_rate));
            std::fill(location_track.begin(), location_track.begin() + prefix, other);
        }
    }

    Demonstration d;
    d.label = tmpl.name;
    d.sample_rate = cfg.sample_rate;
    d.location.locations = std::move(location_track);

    for (int c = 0; c < kChannelCount; ++c) {
        const ChannelPlan& plan = tmpl.channels[c];
        const Eigen::Vector3d base = channel_base(c);
        const SwayField pos_noise = SwayField::make(rng, cfg.position_noise);
        const SwayField rot_noise = SwayField::make(rng, cfg.orientation_noise);

        std::vector<Phase> phases;
        if (plan.active && plan.stroke_count > 0 && plan.waypoints.size() >= 2) {
            // realize waypoints for this demonstration
            std::vector<Eigen::Vector3d> wp(plan.waypoints.size());
            std::vector<Eigen::Quaterniond> wq(plan.waypoints.size());
            std::vector<double> wd(plan.waypoints.size());
            for (std::size_t i = 0; i < plan.waypoints.size(); ++i) {
                const StrokePose& pose = plan.waypoints[i];
                // amplitude jitter scales positions only; rotation sweeps
                // stay put so they keep separating look-alike stroke shapes
                Eigen::Vector3d offset = pose.offset * amp_scale;
                for (int a = 0; a < 3; ++a)
                    offset[a] += pose.spread[a] * uniform(rng, -1.0, 1.0);
                wp[i] = base + offset;
                wq[i] = exp_quat(pose.rotation);
                wd[i] = pose.dwell_scale;
            }

            const double lead_in = uniform(rng, 0.3, 0.7);
            std::vector<double> stroke_dur(plan.stroke_count), dwell_dur(plan.stroke_count);
            double total = 0.0;
            for (int s = 0; s < plan.stroke_count; ++s) {
                const std::size_t target = (s + 1) % plan.waypoints.size();
                stroke_dur[s] = plan.stroke_duration *
                                (1.0 + cfg.frequency_jitter * uniform(rng, -1.0, 1.0));
                dwell_dur[s] = plan.dwell * wd[target] *
                               (1.0 + cfg.frequency_jitter * uniform(rng, -1.0, 1.0));
                total += stroke_dur[s] + dwell_dur[s];
            }
            const double available = cfg.duration - lead_in - 0.25;
            if (total > available && available > 0.0) {
                const double scale = available / total;
                for (int s = 0; s < plan.stroke_count; ++s) {
                    stroke_dur[s] *= scale;
                    dwell_dur[s] *= scale;
                }
            }

            double at = 0.0;
            auto hold = [&](double until, const Eigen::Vector3d& p, const Eigen::Quaterniond& q) {
                if (until <= at) return;
                phases.push_back({at, until, p, p, q, q, false});
                at = until;
            };
            hold(lead_in, wp[0], wq[0]);
            std::size_t from = 0;
            for (int s = 0; s < plan.stroke_count; ++s) {
                const std::size_t to = (from + 1) % plan.waypoints.size();
                Eigen::Vector3d target = wp[to];
                for (int a = 0; a < 3; ++a) target[a] += 0.004 * uniform(rng, -1.0, 1.0);
                phases.push_back({at, at + stroke_dur[s], wp[from], target, wq[from], wq[to], true});
                at += stroke_dur[s];
                wp[to] = target;
                hold(at + dwell_dur[s], wp[to], wq[to]);
                from = to;
            }
            hold(cfg.duration + dt, wp[from], wq[from]);
        } else {
            phases.push_back({0.0, cfg.duration + dt, base, base,
                              Eigen::Quaterniond::Identity(), Eigen::Quaterniond::Identity(),
                              false});
        }

        MotionStream stream;
        stream.positions.reserve(n);
        stream.orientations.reserve(n);
        std::size_t phase_idx = 0;
        for (int i = 0; i < n; ++i) {
            const double t = i * dt;
            while (phase_idx + 1 < phases.size() && t >= phases[phase_idx].end) ++phase_idx;
            const Phase& ph = phases[phase_idx];
            Eigen::Vector3d p;
            Eigen::Quaterniond q;
            if (ph.stroke) {
                const double u =
                    std::clamp((t - ph.start) / (ph.end - ph.start), 0.0, 1.0);
                const double s = minjerk(u);
                p = ph.p0 + (ph.p1 - ph.p0) * s;
                q = ph.q0.slerp(s, ph.q1);
            } else {
                p = ph.p1;
                q = ph.q1;
            }
            p += pos_noise.value(t);
            q = q * exp_quat(rot_noise.value(t));
            stream.positions.push_back(p);
            stream.orientations.push_back(canonical(q));
        }
        d.motion.push_back(std::move(stream));
    }

    // object channels mirror the motion channels
    for (int c = 0; c < kChannelCount; ++c) {
        ObjectStream s;
        s.observations.assign(n, std::vector<std::uint8_t>(catalog.objects.size(), 0));
        const auto& options = tmpl.objects[c];
        if (!options.empty()) {
            int obj;
            if (options.size() == 1 && options[0] == "*") {
                obj = static_cast<int>(pick(rng, catalog.objects.size()));
            } else {
                const std::string& name = options[pick(rng, options.size())];
                obj = catalog.object_index(name);
                if (obj < 0)
                    throw CatalogError("synthetic: object '" + name + "' not in catalog");
            }
            const double onset = uniform(rng, tmpl.grasp_onset_lo, tmpl.grasp_onset_hi);
            const double offset = uniform(rng, tmpl.grasp_offset_lo, tmpl.grasp_offset_hi);
            const int t0 = std::clamp(static_cast<int>(onset * n), 0, n);
            const int t1 = std::clamp(static_cast<int>(offset * n), t0, n);
            for (int t = t0; t < t1; ++t) s.observations[t][obj] = 1;
        }
        d.objects.push_back(std::move(s));
    }

    return d;
}

Demonstration generate_demo(const std::string& class_name, const GeneratorConfig& cfg,
                            std::uint64_t draw) {
    static const EnvironmentCatalog catalog = household_catalog();
    return generate_demo(template_named(class_name), catalog, cfg, draw);
}

std::vector<Demonstration> generate_dataset(const std::vector<ActionTemplate>& templates,
                                            const EnvironmentCatalog& catalog,
                                            const GeneratorConfig& cfg, int n_per_class) {
    if (n_per_class < 1) throw ValidationError("generate_dataset: n_per_class must be >= 1");
    std::vector<Demonstration> demos;
    demos.reserve(templates.size() * static_cast<std::size_t>(n_per_class));
    for (const auto& t : templates)
        for (int i = 0; i < n_per_class; ++i)
            demos.push_back(generate_demo(t, catalog, cfg, static_cast<std::uint64_t>(i)));
    std::mt19937_64 shuffle_rng(mix_seed(cfg.seed, 0xD5, 0x0A));
    std::shuffle(demos.begin(), demos.end(), shuffle_rng);
    return demos;
}

std::vector<Demonstration> generate_dataset(const GeneratorConfig& cfg, int n_per_class) {
    return generate_dataset(default_templates(), household_catalog(), cfg, n_per_class);
}

namespace {

json vec3_to_json(const Eigen::Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); }

Eigen::Vector3d vec3_from_json(const json& j) {
    return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

} // namespace

json templates_to_json(const std::vector<ActionTemplate>& templates) {
    json out = json::array();
    for (const auto& t : templates) {
        json channels = json::array();
        for (const auto& c : t.channels) {
            json wps = json::array();
            for (const auto& w : c.waypoints)
                wps.push_back({{"offset", vec3_to_json(w.offset)},
                               {"rotation", vec3_to_json(w.rotation)},
                               {"spread", vec3_to_json(w.spread)},
                               {"dwell_scale", w.dwell_scale}});
            channels.push_back({{"active", c.active},
                                {"waypoints", std::move(wps)},
                                {"stroke_count", c.stroke_count},
                                {"stroke_duration", c.stroke_duration},
                                {"dwell", c.dwell}});
        }
        out.push_back({{"name", t.name},
                       {"family", t.family},
                       {"channels", std::move(channels)},
                       {"locations", t.locations},
                       {"objects", t.objects},
                       {"grasp_onset", json::array({t.grasp_onset_lo, t.grasp_onset_hi})},
                       {"grasp_offset", json::array({t.grasp_offset_lo, t.grasp_offset_hi})}});
    }
    return out;
}

std::vector<ActionTemplate> templates_from_json(const json& j) {
    std::vector<ActionTemplate> out;
    for (const auto& tj : j) {
        ActionTemplate t;
        t.name = tj.at("name").get<std::string>();
        t.family = tj.at("family").get<std::string>();
        const json& channels = tj.at("channels");
        if (channels.size() != kChannelCount)
            throw ParseError("templates: expected " + std::to_string(kChannelCount) +
                             " channels for '" + t.name + "'");
        for (int c = 0; c < kChannelCount; ++c) {
            const json& cj = channels[c];
            ChannelPlan p;
            p.active = cj.at("active").get<bool>();
            for (const auto& wj : cj.at("waypoints")) {
                StrokePose w;
                w.offset = vec3_from_json(wj.at("offset"));
                w.rotation = vec3_from_json(wj.at("rotation"));
                w.spread = vec3_from_json(wj.at("spread"));
                w.dwell_scale = wj.at("dwell_scale").get<double>();
                p.waypoints.push_back(std::move(w));
            }
            p.stroke_count = cj.at("stroke_count").get<int>();
            p.stroke_duration = cj.at("stroke_duration").get<double>();
            p.dwell = cj.at("dwell").get<double>();
            t.channels[c] = std::move(p);
        }
        t.locations = tj.at("locations").get<std::vector<std::string>>();
        const json& objects = tj.at("objects");
        for (int c = 0; c < kChannelCount; ++c)
            t.objects[c] = objects.at(c).get<std::vector<std::string>>();
        t.grasp_onset_lo = tj.at("grasp_onset").at(0).get<double>();
        t.grasp_onset_hi = tj.at("grasp_onset").at(1).get<double>();
        t.grasp_offset_lo = tj.at("grasp_offset").at(0).get<double>();
        t.grasp_offset_hi = tj.at("grasp_offset").at(1).get<double>();
        out.push_back(std::move(t));
    }
    return out;
}

} // namespace omcl
