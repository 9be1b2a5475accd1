#include "pss/fuzzy.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "pss/errors.hpp"

namespace pss::fuzzy {

double MembershipFunction::degree(double x) const {
    if (x < a || x > d) return 0.0;
    if (x >= b && x <= c) return 1.0;
    if (x < b) return (x - a) / (b - a);
    return (d - x) / (d - c);
}

void MembershipFunction::validate() const {
    if (!(a <= b && b <= c && c <= d)) {
        throw InvalidParams("membership function breakpoints must satisfy a <= b <= c <= d");
    }
}

std::size_t LinguisticVariable::index_of(std::string_view label) const {
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (terms[i].label == label) return i;
    }
    throw InvalidParams("variable '" + name + "' has no term '" + std::string(label) + "'");
}

double LinguisticVariable::clip(double x) const { return std::clamp(x, lo, hi); }

void LinguisticVariable::validate() const {
    if (!(lo < hi)) throw InvalidParams("variable '" + name + "': universe needs lo < hi");
    if (terms.empty()) throw InvalidParams("variable '" + name + "' has no terms");
    for (const Term& t : terms) {
        t.mf.validate();
        if (t.mf.a < lo || t.mf.d > hi) {
            throw InvalidParams("variable '" + name + "': term '" + t.label + "' leaves the universe");
        }
    }
    constexpr int kSamples = 2001;
    for (int i = 0; i < kSamples; ++i) {
        const double x = lo + (hi - lo) * i / (kSamples - 1);
        const bool covered = std::any_of(terms.begin(), terms.end(),
                                         [x](const Term& t) { return t.mf.degree(x) > 0.0; });
        if (!covered) {
            throw InvalidParams("variable '" + name + "' is not complete at " + std::to_string(x));
        }
    }
}

LinguisticVariable seven_term_partition(std::string name, double lo, double hi,
                                        const std::vector<std::string>& labels) {
    if (labels.size() != 7) throw InvalidParams("seven_term_partition needs exactly 7 labels");
    const double w = (hi - lo) / 6.0;
    LinguisticVariable v{std::move(name), lo, hi, {}};
    for (std::size_t k = 0; k < 7; ++k) {
        const double center = (k == 6) ? hi : lo + static_cast<double>(k) * w;
        MembershipFunction mf;
        if (k == 0) {
            mf = {lo, lo, lo, lo + w};
        } else if (k == 6) {
            mf = {hi - w, hi, hi, hi};
        } else {
            mf = MembershipFunction::triangle(center - w, center, center + w);
        }
        v.terms.push_back({labels[k], mf});
    }
    return v;
}

double centroid(double lo, double hi, std::span<const double> degrees) {
    const std::size_t n = degrees.size();
    if (n == 0) return 0.5 * (lo + hi);
    double mass = 0.0;
    double moment = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = (n == 1) ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
        mass += degrees[i];
        moment += x * degrees[i];
    }
    if (mass <= 0.0) return 0.5 * (lo + hi);
    return moment / mass;
}

FuzzySystem::FuzzySystem(std::vector<LinguisticVariable> inputs, LinguisticVariable output,
                         RuleBase rules, std::size_t grid_resolution)
    : inputs_(std::move(inputs)),
      output_(std::move(output)),
      rules_(std::move(rules)),
      grid_resolution_(grid_resolution) {
    if (grid_resolution_ < 101 || grid_resolution_ % 2 == 0) {
        throw InvalidParams("defuzzification grid must have an odd point count >= 101");
    }
    if (rules_.arity != inputs_.size()) {
        throw ArityMismatch("rule arity " + std::to_string(rules_.arity) + " differs from " +
                            std::to_string(inputs_.size()) + " inputs");
    }
    for (const auto& v : inputs_) v.validate();
    output_.validate();

    std::set<std::vector<std::size_t>> seen;
    for (const Rule& r : rules_.rules) {
        if (r.antecedent.size() != rules_.arity) throw ArityMismatch("rule antecedent has wrong arity");
        for (std::size_t i = 0; i < r.antecedent.size(); ++i) {
            if (r.antecedent[i] >= inputs_[i].terms.size()) {
                throw InvalidParams("rule references an unknown term of input '" + inputs_[i].name + "'");
            }
        }
        if (r.consequent >= output_.terms.size()) {
            throw InvalidParams("rule references an unknown output term");
        }
        if (!seen.insert(r.antecedent).second) {
            throw InvalidParams("two rules share the same antecedent");
        }
    }

    grid_.resize(grid_resolution_);
    for (std::size_t i = 0; i < grid_resolution_; ++i) {
        grid_[i] = output_.lo + (output_.hi - output_.lo) * static_cast<double>(i) /
                                    static_cast<double>(grid_resolution_ - 1);
    }
    consequent_samples_.reserve(output_.terms.size());
    for (const Term& t : output_.terms) {
        std::vector<double> samples(grid_resolution_);
        for (std::size_t i = 0; i < grid_resolution_; ++i) samples[i] = t.mf.degree(grid_[i]);
        consequent_samples_.push_back(std::move(samples));
    }
}

std::vector<double> FuzzySystem::clip_inputs(std::span<const double> inputs) const {
    if (inputs.size() != inputs_.size()) {
        throw ArityMismatch("expected " + std::to_string(inputs_.size()) + " inputs, got " +
                            std::to_string(inputs.size()));
    }
    std::vector<double> clipped(inputs.size());
    for (std::size_t i = 0; i < inputs.size(); ++i) clipped[i] = inputs_[i].clip(inputs[i]);
    return clipped;
}

double FuzzySystem::firing_strength(const Rule& rule, std::span<const double> clipped) const {
    double strength = 1.0;
    for (std::size_t i = 0; i < rule.antecedent.size() && strength > 0.0; ++i) {
        strength = std::min(strength, inputs_[i].terms[rule.antecedent[i]].mf.degree(clipped[i]));
    }
    return strength;
}

double FuzzySystem::max_firing_strength(std::span<const double> inputs) const {
    const std::vector<double> clipped = clip_inputs(inputs);
    double best = 0.0;
    for (const Rule& r : rules_.rules) best = std::max(best, firing_strength(r, clipped));
    return best;
}

double FuzzySystem::infer(std::span<const double> inputs) const {
    const std::vector<double> clipped = clip_inputs(inputs);
    std::vector<double> aggregate(grid_resolution_, 0.0);
    for (const Rule& r : rules_.rules) {
        const double strength = firing_strength(r, clipped);
        if (strength <= 0.0) continue;
        const std::vector<double>& mf = consequent_samples_[r.consequent];
        for (std::size_t i = 0; i < grid_resolution_; ++i) {
            aggregate[i] = std::max(aggregate[i], std::min(mf[i], strength));
        }
    }
    return centroid(output_.lo, output_.hi, aggregate);
}

}  // namespace pss::fuzzy
