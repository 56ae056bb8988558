#include "omcl/hmm.hpp"

#include "omcl/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace omcl {

namespace {

constexpr double kLogTwoPi = 1.8378770664093454836;

double component_log_density(const GaussianComponent& c, const std::vector<double>& x) {
    double quad = 0.0, logdet = 0.0;
    for (std::size_t d = 0; d < x.size(); ++d) {
        const double diff = x[d] - c.mean[d];
        quad += diff * diff / c.variance[d];
        logdet += std::log(c.variance[d]);
    }
    return -0.5 * (static_cast<double>(x.size()) * kLogTwoPi + logdet + quad);
}

struct EmissionTable {
    // log b_s(x_t) and per-component log(w_c) + log N_c(x_t)
    std::vector<std::vector<double>> log_state;            // [t][s]
    std::vector<std::vector<std::vector<double>>> log_comp; // [t][s][c]
};

EmissionTable emissions_for(const GmmHmmModel& m, const FeatureSequence& seq) {
    const int t_len = static_cast<int>(seq.size());
    EmissionTable e;
    e.log_state.assign(t_len, std::vector<double>(m.states, 0.0));
    e.log_comp.assign(t_len, std::vector<std::vector<double>>(
                                 m.states, std::vector<double>(m.components, 0.0)));
    for (int t = 0; t < t_len; ++t) {
        for (int s = 0; s < m.states; ++s) {
            double best = -std::numeric_limits<double>::infinity();
            for (int c = 0; c < m.components; ++c) {
                const double lp = std::log(m.emissions[s][c].weight) +
                                  component_log_density(m.emissions[s][c], seq[t]);
                e.log_comp[t][s][c] = lp;
                best = std::max(best, lp);
            }
            double sum = 0.0;
            for (int c = 0; c < m.components; ++c) sum += std::exp(e.log_comp[t][s][c] - best);
            e.log_state[t][s] = best + std::log(sum);
        }
    }
    return e;
}

struct ForwardBackward {
    std::vector<std::vector<double>> alpha;  // scaled
    std::vector<std::vector<double>> beta;   // scaled
    std::vector<std::vector<double>> scaled_emission; // exp(logb - shift)
    std::vector<double> norm;                // per-frame scaling c_t
    std::vector<double> shift;               // per-frame max log emission
    double loglik = 0.0;
};

ForwardBackward forward_backward(const GmmHmmModel& m, const EmissionTable& e,
                                 bool with_beta) {
    const int t_len = static_cast<int>(e.log_state.size());
    ForwardBackward fb;
    fb.alpha.assign(t_len, std::vector<double>(m.states, 0.0));
    fb.scaled_emission.assign(t_len, std::vector<double>(m.states, 0.0));
    fb.norm.assign(t_len, 0.0);
    fb.shift.assign(t_len, 0.0);

    for (int t = 0; t < t_len; ++t) {
        double best = -std::numeric_limits<double>::infinity();
        for (int s = 0; s < m.states; ++s) best = std::max(best, e.log_state[t][s]);
        fb.shift[t] = best;
        // floored so the per-frame total stays positive even when the state
        // spread exceeds the exp() underflow range
        for (int s = 0; s < m.states; ++s)
            fb.scaled_emission[t][s] =
                std::max(std::exp(e.log_state[t][s] - best), 1e-300);
    }

    for (int s = 0; s < m.states; ++s)
        fb.alpha[0][s] = m.initial[s] * fb.scaled_emission[0][s];
    for (int t = 0; t < t_len; ++t) {
        if (t > 0) {
            for (int j = 0; j < m.states; ++j) {
                double sum = 0.0;
                for (int i = 0; i < m.states; ++i)
                    sum += fb.alpha[t - 1][i] * m.transition[i][j];
                fb.alpha[t][j] = sum * fb.scaled_emission[t][j];
            }
        }
        double c = 0.0;
        for (int s = 0; s < m.states; ++s) c += fb.alpha[t][s];
        if (!(c > 0.0) || !std::isfinite(c))
            throw Error("hmm: forward pass degenerated (zero total probability)");
        fb.norm[t] = c;
        for (int s = 0; s < m.states; ++s) fb.alpha[t][s] /= c;
        fb.loglik += std::log(c) + fb.shift[t];
    }

    if (with_beta) {
        fb.beta.assign(t_len, std::vector<double>(m.states, 1.0));
        for (int t = t_len - 2; t >= 0; --t) {
            for (int i = 0; i < m.states; ++i) {
                double sum = 0.0;
                for (int j = 0; j < m.states; ++j)
                    sum += m.transition[i][j] * fb.scaled_emission[t + 1][j] *
                           fb.beta[t + 1][j];
                fb.beta[t][i] = sum / fb.norm[t + 1];
            }
        }
    }
    return fb;
}

} // namespace

void GmmHmmParams::check() const {
    if (states < 1) throw ValidationError("hmm: states must be >= 1");
    if (components < 1) throw ValidationError("hmm: components must be >= 1");
    if (iterations < 1) throw ValidationError("hmm: iterations must be >= 1");
    if (!(variance_floor > 0.0)) throw ValidationError("hmm: variance_floor must be > 0");
}

FeatureSequence hmm_features(const Demonstration& d) {
    const int n = d.sample_count();
    const int k = d.motion_channels();
    FeatureSequence seq(n, std::vector<double>(6 * k, 0.0));
    for (int c = 0; c < k; ++c) {
        const MotionStream& s = d.motion[c];
        const Eigen::Vector3d origin = s.positions[0];
        const Eigen::Quaterniond base = s.orientations[0].conjugate();
        for (int t = 0; t < n; ++t) {
            const Eigen::Vector3d dp = s.positions[t] - origin;
            const Eigen::Vector3d rv = rotation_vector(base * s.orientations[t]);
            seq[t][6 * c + 0] = dp.x();
            seq[t][6 * c + 1] = dp.y();
            seq[t][6 * c + 2] = dp.z();
            seq[t][6 * c + 3] = rv.x();
            seq[t][6 * c + 4] = rv.y();
            seq[t][6 * c + 5] = rv.z();
        }
    }
    return seq;
}

GmmHmmModel hmm_train(const std::vector<FeatureSequence>& sequences,
                      const GmmHmmParams& params) {
    params.check();
    if (sequences.empty()) throw ValidationError("hmm_train: no sequences");
    for (const auto& s : sequences)
        if (s.empty()) throw ValidationError("hmm_train: empty sequence");
    const int dim = static_cast<int>(sequences.front().front().size());
    const int h = params.states;
    const int k = params.components;

    GmmHmmModel m;
    m.states = h;
    m.components = k;
    m.dim = dim;

    // Temporal-bin initialization: state s collects the frames of bin s of
    // every sequence; mixture means are spread across the bin.
    std::mt19937_64 rng(params.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);

    m.initial.assign(h, 1.0 / h);
    m.transition.assign(h, std::vector<double>(h, h > 1 ? 0.2 / (h - 1) : 0.0));
    for (int i = 0; i < h; ++i) m.transition[i][i] = (h > 1) ? 0.8 : 1.0;

    m.emissions.assign(h, std::vector<GaussianComponent>(k));
    for (int s = 0; s < h; ++s) {
        std::vector<const std::vector<double>*> frames;
        for (const auto& seq : sequences) {
            const int t_len = static_cast<int>(seq.size());
            int lo = (s * t_len) / h, hi = ((s + 1) * t_len) / h;
            if (lo >= hi) { lo = 0; hi = t_len; } // degenerate short sequence
            for (int t = lo; t < hi; ++t) frames.push_back(&seq[t]);
        }
        std::vector<double> mean(dim, 0.0), var(dim, 0.0);
        for (const auto* f : frames)
            for (int d = 0; d < dim; ++d) mean[d] += (*f)[d];
        for (int d = 0; d < dim; ++d) mean[d] /= static_cast<double>(frames.size());
        for (const auto* f : frames)
            for (int d = 0; d < dim; ++d) {
                const double diff = (*f)[d] - mean[d];
                var[d] += diff * diff;
            }
        for (int d = 0; d < dim; ++d)
            var[d] = std::max(var[d] / static_cast<double>(frames.size()),
                              params.variance_floor);

        for (int c = 0; c < k; ++c) {
            const double spread = (k > 1) ? (-1.0 + 2.0 * c / (k - 1)) : 0.0;
            GaussianComponent comp;
            comp.weight = 1.0 / k;
            comp.mean.resize(dim);
            comp.variance = var;
            for (int d = 0; d < dim; ++d) {
                const double sd = std::sqrt(var[d]);
                comp.mean[d] = mean[d] + spread * sd + 1e-4 * sd * unit(rng);
            }
            m.emissions[s][c] = std::move(comp);
        }
    }

    const double tiny = 1e-300;
    for (int iter = 0; iter <= params.iterations; ++iter) {
        // accumulators
        std::vector<double> pi_acc(h, 0.0);
        std::vector<std::vector<double>> xi_acc(h, std::vector<double>(h, 0.0));
        std::vector<double> gamma_trans(h, 0.0);
        std::vector<std::vector<double>> w_acc(h, std::vector<double>(k, 0.0));
        std::vector<std::vector<std::vector<double>>> x_acc(
            h, std::vector<std::vector<double>>(k, std::vector<double>(dim, 0.0)));
        std::vector<std::vector<std::vector<double>>> x2_acc(
            h, std::vector<std::vector<double>>(k, std::vector<double>(dim, 0.0)));

        double total_loglik = 0.0;
        for (const auto& seq : sequences) {
            const EmissionTable e = emissions_for(m, seq);
            const ForwardBackward fb = forward_backward(m, e, true);
            total_loglik += fb.loglik;
            const int t_len = static_cast<int>(seq.size());

            for (int t = 0; t < t_len; ++t) {
                for (int s = 0; s < h; ++s) {
                    const double gamma = fb.alpha[t][s] * fb.beta[t][s];
                    if (t == 0) pi_acc[s] += gamma;
                    if (t + 1 < t_len) gamma_trans[s] += gamma;
                    for (int c = 0; c < k; ++c) {
                        const double r =
                            gamma * std::exp(e.log_comp[t][s][c] - e.log_state[t][s]);
                        w_acc[s][c] += r;
                        for (int d = 0; d < dim; ++d) {
                            const double x = seq[t][d];
                            x_acc[s][c][d] += r * x;
                            x2_acc[s][c][d] += r * x * x;
                        }
                    }
                }
                if (t + 1 < t_len) {
                    for (int i = 0; i < h; ++i) {
                        for (int j = 0; j < h; ++j) {
                            xi_acc[i][j] += fb.alpha[t][i] * m.transition[i][j] *
                                            fb.scaled_emission[t + 1][j] *
                                            fb.beta[t + 1][j] / fb.norm[t + 1];
                        }
                    }
                }
            }
        }

        m.training_loglik.push_back(total_loglik);
        if (iter == params.iterations) break; // final evaluation only

        // M-step
        double pi_total = 0.0;
        for (int s = 0; s < h; ++s) pi_total += pi_acc[s];
        if (pi_total > tiny)
            for (int s = 0; s < h; ++s) m.initial[s] = pi_acc[s] / pi_total;

        for (int i = 0; i < h; ++i) {
            if (gamma_trans[i] <= tiny) continue; // state unused: keep row
            double row = 0.0;
            for (int j = 0; j < h; ++j) row += xi_acc[i][j];
            if (row <= tiny) continue;
            for (int j = 0; j < h; ++j) m.transition[i][j] = xi_acc[i][j] / row;
        }

        for (int s = 0; s < h; ++s) {
            double state_total = 0.0;
            for (int c = 0; c < k; ++c) state_total += w_acc[s][c];
            if (state_total <= tiny) continue; // no responsibility: keep state
            for (int c = 0; c < k; ++c) {
                const double r = w_acc[s][c];
                if (r <= tiny) { m.emissions[s][c].weight = tiny; continue; }
                m.emissions[s][c].weight = r / state_total;
                for (int d = 0; d < dim; ++d) {
                    const double mean = x_acc[s][c][d] / r;
                    const double var = x2_acc[s][c][d] / r - mean * mean;
                    m.emissions[s][c].mean[d] = mean;
                    m.emissions[s][c].variance[d] = std::max(var, params.variance_floor);
                }
            }
            double w_total = 0.0;
            for (int c = 0; c < k; ++c) w_total += m.emissions[s][c].weight;
            for (int c = 0; c < k; ++c) m.emissions[s][c].weight /= w_total;
        }
    }
    return m;
}

double hmm_loglik(const GmmHmmModel& model, const FeatureSequence& sequence) {
    if (sequence.empty()) throw ValidationError("hmm_loglik: empty sequence");
    if (static_cast<int>(sequence.front().size()) != model.dim)
        throw ValidationError("hmm_loglik: feature dimension " +
                              std::to_string(sequence.front().size()) + " != model dim " +
                              std::to_string(model.dim));
    const EmissionTable e = emissions_for(model, sequence);
    return forward_backward(model, e, false).loglik;
}

std::string hmm_classify(const std::map<std::string, GmmHmmModel>& models,
                         const FeatureSequence& sequence) {
    if (models.empty()) throw ValidationError("hmm_classify: no models");
    std::string best;
    double best_ll = -std::numeric_limits<double>::infinity();
    for (const auto& [name, model] : models) {
        const double ll = hmm_loglik(model, sequence);
        if (best.empty() || ll > best_ll) {
            best = name;
            best_ll = ll;
        }
    }
    return best;
}

RecognitionDecision omcl_n_recognize(const ConceptRegistry& reg, const MotionPrototype& p,
                                     const RecognitionParams& params) {
    RecognitionParams ablated = params;
    ablated.zero_context = true;
    return recognize(reg, p, ablated);
}

} // namespace omcl
