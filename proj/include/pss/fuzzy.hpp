#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pss::fuzzy {

/// Trapezoid with breakpoints a <= b <= c <= d; a triangle when b == c.
struct MembershipFunction {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double d = 0.0;

    static MembershipFunction triangle(double left, double peak, double right) {
        return {left, peak, peak, right};
    }

    double degree(double x) const;
    void validate() const;
};

struct Term {
    std::string label;
    MembershipFunction mf;
};

struct LinguisticVariable {
    std::string name;
    double lo = -1.0;
    double hi = 1.0;
    std::vector<Term> terms;

    /// Index of the term with the given label; throws InvalidParams if absent.
    std::size_t index_of(std::string_view label) const;
    double clip(double x) const;
    /// Checks ordering, support containment and completeness over a dense sample.
    void validate() const;
};

/// Seven evenly spaced triangular terms on [lo, hi], each of half-width
/// (hi - lo) / 6, with the two outer terms shouldered at the universe edges.
LinguisticVariable seven_term_partition(std::string name, double lo, double hi,
                                        const std::vector<std::string>& labels);

struct Rule {
    std::vector<std::size_t> antecedent;  // one term index per input
    std::size_t consequent = 0;
};

struct RuleBase {
    std::size_t arity = 0;
    std::vector<Rule> rules;
};

/// Centroid of a membership grid sampled uniformly on [lo, hi]. Returns the
/// midpoint when the grid carries no mass.
double centroid(double lo, double hi, std::span<const double> degrees);

/// Mamdani system: min conjunction, clipping implication, max aggregation,
/// centroid defuzzification on a fixed grid. Immutable after construction.
class FuzzySystem {
public:
    FuzzySystem(std::vector<LinguisticVariable> inputs, LinguisticVariable output, RuleBase rules,
                std::size_t grid_resolution = 201);

    /// Throws ArityMismatch when the input count differs from the rule arity.
    double infer(std::span<const double> inputs) const;

    /// Largest rule firing strength at the given (clipped) inputs.
    double max_firing_strength(std::span<const double> inputs) const;

    const std::vector<LinguisticVariable>& inputs() const { return inputs_; }
    const LinguisticVariable& output() const { return output_; }
    const RuleBase& rules() const { return rules_; }
    std::size_t grid_resolution() const { return grid_resolution_; }

private:
    double firing_strength(const Rule& rule, std::span<const double> clipped) const;
    std::vector<double> clip_inputs(std::span<const double> inputs) const;

    std::vector<LinguisticVariable> inputs_;
    LinguisticVariable output_;
    RuleBase rules_;
    std::size_t grid_resolution_;
    std::vector<double> grid_;
    std::vector<std::vector<double>> consequent_samples_;  // per output term
};

}  // namespace pss::fuzzy
