#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>

namespace h2sched {

enum class Label { Low = 0, Medium = 1, High = 2 };

const char* label_name(Label l);
Label parse_label(std::string_view text, const std::string& context);

// Seven ascending breakpoints defining three triangular sets over
// [p0, p6]: low = (p0, p0, p2), medium = (p1, p3, p5), high = (p4, p6, p6).
// Coinciding breakpoints are legal and degenerate a triangle edge into a
// step; inputs outside the range take the boundary membership.
struct MembershipParams {
  std::array<double, 7> p{};
};

void validate(const MembershipParams& mf);

// Memberships of x in (low, medium, high); each in [0,1].
std::array<double, 3> membership(const MembershipParams& mf, double x);

// Complete Mamdani controller: membership functions for the three inputs
// (daily mean electricity price e, hydrogen price h, capacity factor w),
// the output (HPA delivery rate, kg/h) and one rule per input combination.
struct FuzzyModel {
  MembershipParams w, e, h, out;
  std::array<Label, 27> rules{};
};

// Index into FuzzyModel::rules for an input label combination.
int rule_index(Label e, Label h, Label w);

void validate(const FuzzyModel& m);

// Centroid of max_l min(clip[l], mu_l(y)) over [p0, p6], computed
// exactly from the piecewise-linear shape. Returns p0 for an empty
// aggregate (all clips zero or only zero-width spikes active).
double defuzzify(const MembershipParams& out, const std::array<double, 3>& clip);

// min-AND rule strength, min (clip) implication, max aggregation, exact
// centroid of the aggregated piecewise-linear shape. Returns out.p[0]
// when no rule fires.
double infer(const FuzzyModel& m, double e_day, double h_day, double w_day);

// One training day: inputs plus the delivery rate the benchmark chose.
struct Exemplar {
  double e = 0, h = 0, w = 0;
  double target = 0;  // kg/h
};

// Fill the rule table from exemplars: every candidate rule accumulates
// the product of its four memberships over the data and each input
// combination keeps the output label with the largest total. Combinations
// no exemplar ever activates stay at Low, as do exact ties.
FuzzyModel learn_rules(const MembershipParams& w_mf, const MembershipParams& e_mf,
                       const MembershipParams& h_mf, const MembershipParams& out_mf,
                       std::span<const Exemplar> data);

// Plain text model file: four "params <var> <7 numbers>" lines (w, e, h,
// out) followed by 27 "rule <e> <h> <w> <out>" lines. Write-then-read is
// exact.
void save_model(const FuzzyModel& m, const std::string& path);
FuzzyModel load_model(const std::string& path);

}  // namespace h2sched
