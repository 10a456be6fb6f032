#include "h2sched/fuzzy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "h2sched/csvio.hpp"
#include "h2sched/errors.hpp"

namespace h2sched {

const char* label_name(Label l) {
  switch (l) {
    case Label::Low: return "low";
    case Label::Medium: return "medium";
    case Label::High: return "high";
  }
  return "?";
}

Label parse_label(std::string_view text, const std::string& context) {
  if (text == "low") return Label::Low;
  if (text == "medium") return Label::Medium;
  if (text == "high") return Label::High;
  throw FormatError(context + ": unknown label '" + std::string(text) + "'");
}

void validate(const MembershipParams& mf) {
  for (int i = 0; i + 1 < 7; ++i)
    if (!(mf.p[i] <= mf.p[i + 1]))
      throw ValidationError("membership parameters not ascending: p" + std::to_string(i) +
                            " = " + csv::format_double(mf.p[i]) + " > p" + std::to_string(i + 1) +
                            " = " + csv::format_double(mf.p[i + 1]));
  for (double v : mf.p)
    if (!std::isfinite(v)) throw ValidationError("membership parameter not finite");
}

namespace {

// Triangle with feet a and c, peak b. Zero-width edges act as steps:
// the peak always has membership one.
double tri(double x, double a, double b, double c) {
  if (x < a || x > c) return 0.0;
  if (x == b) return 1.0;
  if (x < b) return (x - a) / (b - a);
  return (c - x) / (c - b);
}

struct Triangle {
  double a, b, c;
};

Triangle label_triangle(const MembershipParams& mf, int label) {
  switch (label) {
    case 0: return {mf.p[0], mf.p[0], mf.p[2]};
    case 1: return {mf.p[1], mf.p[3], mf.p[5]};
    default: return {mf.p[4], mf.p[6], mf.p[6]};
  }
}

}  // namespace

std::array<double, 3> membership(const MembershipParams& mf, double x) {
  x = std::clamp(x, mf.p[0], mf.p[6]);
  std::array<double, 3> mu;
  for (int l = 0; l < 3; ++l) {
    Triangle t = label_triangle(mf, l);
    mu[l] = tri(x, t.a, t.b, t.c);
  }
  return mu;
}

int rule_index(Label e, Label h, Label w) {
  return static_cast<int>(w) * 9 + static_cast<int>(e) * 3 + static_cast<int>(h);
}

void validate(const FuzzyModel& m) {
  validate(m.w);
  validate(m.e);
  validate(m.h);
  validate(m.out);
  for (Label l : m.rules)
    if (l != Label::Low && l != Label::Medium && l != Label::High)
      throw ValidationError("fuzzy model: rule with invalid output label");
}

namespace {

// Exact centroid of max_l min(beta[l], mu_l(y)) over [p0, p6]. The shape
// is piecewise linear, so we list every breakpoint (triangle vertices,
// clip heights, crossings between labels) and integrate trapezoids.

struct Piece {
  double fu, fv;  // clipped values at the interval ends
};

Piece piece_on(const Triangle& t, double beta, double u, double v) {
  if (t.c <= t.a) return {0.0, 0.0};  // zero-width spike, no area
  double m = 0.5 * (u + v);
  double mu_m = tri(m, t.a, t.b, t.c);
  if (mu_m > beta) return {beta, beta};
  double fu, fv;
  if (m < t.a || m > t.c) {
    fu = fv = 0.0;
  } else if (m < t.b) {
    fu = (u - t.a) / (t.b - t.a);
    fv = (v - t.a) / (t.b - t.a);
  } else if (t.c <= t.b) {
    // midpoint pinned on a step edge; interval is vanishingly thin
    fu = fv = beta;
  } else {
    fu = (t.c - u) / (t.c - t.b);
    fv = (t.c - v) / (t.c - t.b);
  }
  return {std::min(fu, beta), std::min(fv, beta)};
}

}  // namespace

double defuzzify(const MembershipParams& out, const std::array<double, 3>& beta) {
  Triangle tris[3] = {label_triangle(out, 0), label_triangle(out, 1), label_triangle(out, 2)};
  std::vector<double> xs(out.p.begin(), out.p.end());
  for (int l = 0; l < 3; ++l) {
    if (beta[l] <= 0.0 || beta[l] >= 1.0) continue;
    const Triangle& t = tris[l];
    if (t.b > t.a) xs.push_back(t.a + beta[l] * (t.b - t.a));
    if (t.c > t.b) xs.push_back(t.c - beta[l] * (t.c - t.b));
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  // refine with crossings between pairs of labels
  std::vector<double> refined;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    double u = xs[i], v = xs[i + 1];
    refined.push_back(u);
    if (v <= u) continue;
    Piece p[3];
    for (int l = 0; l < 3; ++l) p[l] = piece_on(tris[l], beta[l], u, v);
    for (int l1 = 0; l1 < 3; ++l1) {
      for (int l2 = l1 + 1; l2 < 3; ++l2) {
        double du = p[l1].fu - p[l2].fu;
        double dv = p[l1].fv - p[l2].fv;
        if ((du > 0.0 && dv < 0.0) || (du < 0.0 && dv > 0.0)) {
          double x = u + (v - u) * du / (du - dv);
          if (x > u && x < v) refined.push_back(x);
        }
      }
    }
  }
  if (!xs.empty()) refined.push_back(xs.back());
  std::sort(refined.begin(), refined.end());

  double area = 0.0, moment = 0.0;
  for (std::size_t i = 0; i + 1 < refined.size(); ++i) {
    double u = refined[i], v = refined[i + 1];
    if (v <= u) continue;
    Piece p[3];
    double mid_best = -1.0;
    int best = 0;
    for (int l = 0; l < 3; ++l) {
      p[l] = piece_on(tris[l], beta[l], u, v);
      double mid = 0.5 * (p[l].fu + p[l].fv);
      if (mid > mid_best) {
        mid_best = mid;
        best = l;
      }
    }
    double au = p[best].fu, av = p[best].fv;
    area += 0.5 * (au + av) * (v - u);
    moment += (v - u) / 6.0 * (au * (2.0 * u + v) + av * (u + 2.0 * v));
  }
  if (area < 1e-12) return out.p[0];
  return moment / area;
}

double infer(const FuzzyModel& m, double e_day, double h_day, double w_day) {
  auto mu_e = membership(m.e, e_day);
  auto mu_h = membership(m.h, h_day);
  auto mu_w = membership(m.w, w_day);
  std::array<double, 3> beta{0.0, 0.0, 0.0};
  for (int iw = 0; iw < 3; ++iw) {
    for (int ie = 0; ie < 3; ++ie) {
      for (int ih = 0; ih < 3; ++ih) {
        double s = std::min(mu_w[iw], std::min(mu_e[ie], mu_h[ih]));
        if (s <= 0.0) continue;
        int out = static_cast<int>(
            m.rules[rule_index(static_cast<Label>(ie), static_cast<Label>(ih),
                               static_cast<Label>(iw))]);
        beta[out] = std::max(beta[out], s);
      }
    }
  }
  return defuzzify(m.out, beta);
}

FuzzyModel learn_rules(const MembershipParams& w_mf, const MembershipParams& e_mf,
                       const MembershipParams& h_mf, const MembershipParams& out_mf,
                       std::span<const Exemplar> data) {
  validate(w_mf);
  validate(e_mf);
  validate(h_mf);
  validate(out_mf);
  std::array<std::array<double, 3>, 27> degree{};
  for (const Exemplar& ex : data) {
    auto mu_e = membership(e_mf, ex.e);
    auto mu_h = membership(h_mf, ex.h);
    auto mu_w = membership(w_mf, ex.w);
    auto mu_o = membership(out_mf, ex.target);
    for (int iw = 0; iw < 3; ++iw) {
      for (int ie = 0; ie < 3; ++ie) {
        for (int ih = 0; ih < 3; ++ih) {
          double base = mu_w[iw] * mu_e[ie] * mu_h[ih];
          if (base <= 0.0) continue;
          int idx = rule_index(static_cast<Label>(ie), static_cast<Label>(ih),
                               static_cast<Label>(iw));
          for (int io = 0; io < 3; ++io) degree[idx][io] += base * mu_o[io];
        }
      }
    }
  }
  FuzzyModel m;
  m.w = w_mf;
  m.e = e_mf;
  m.h = h_mf;
  m.out = out_mf;
  for (int idx = 0; idx < 27; ++idx) {
    int best = 0;  // ties and dead combinations stay Low
    for (int io = 1; io < 3; ++io)
      if (degree[idx][io] > degree[idx][best]) best = io;
    m.rules[idx] = static_cast<Label>(best);
  }
  return m;
}

namespace {

const char* kVarNames[4] = {"w", "e", "h", "out"};

}  // namespace

void save_model(const FuzzyModel& m, const std::string& path) {
  validate(m);
  const MembershipParams* params[4] = {&m.w, &m.e, &m.h, &m.out};
  std::string out;
  for (int v = 0; v < 4; ++v) {
    out += "params ";
    out += kVarNames[v];
    for (double x : params[v]->p) {
      out += ' ';
      out += csv::format_double(x);
    }
    out += '\n';
  }
  for (int iw = 0; iw < 3; ++iw) {
    for (int ie = 0; ie < 3; ++ie) {
      for (int ih = 0; ih < 3; ++ih) {
        Label o = m.rules[rule_index(static_cast<Label>(ie), static_cast<Label>(ih),
                                     static_cast<Label>(iw))];
        out += "rule ";
        out += label_name(static_cast<Label>(ie));
        out += ' ';
        out += label_name(static_cast<Label>(ih));
        out += ' ';
        out += label_name(static_cast<Label>(iw));
        out += ' ';
        out += label_name(o);
        out += '\n';
      }
    }
  }
  csv::write_file(path, out);
}

FuzzyModel load_model(const std::string& path) {
  std::istringstream in(csv::read_file(path));
  FuzzyModel m;
  bool have_params[4] = {false, false, false, false};
  std::array<bool, 27> have_rule{};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string kind;
    if (!(ls >> kind)) continue;
    std::string where = path + ": line " + std::to_string(lineno);
    if (kind == "params") {
      std::string var;
      if (!(ls >> var)) throw FormatError(where + ": params line without variable name");
      int v = -1;
      for (int k = 0; k < 4; ++k)
        if (var == kVarNames[k]) v = k;
      if (v < 0) throw FormatError(where + ": unknown variable '" + var + "'");
      MembershipParams mf;
      for (int k = 0; k < 7; ++k) {
        std::string num;
        if (!(ls >> num)) throw FormatError(where + ": expected 7 parameters for '" + var + "'");
        mf.p[k] = csv::parse_double(num, path, lineno);
      }
      MembershipParams* dst[4] = {&m.w, &m.e, &m.h, &m.out};
      *dst[v] = mf;
      have_params[v] = true;
    } else if (kind == "rule") {
      std::string se, sh, sw, so;
      if (!(ls >> se >> sh >> sw >> so))
        throw FormatError(where + ": expected 'rule <e> <h> <w> <out>'");
      int idx = rule_index(parse_label(se, where), parse_label(sh, where), parse_label(sw, where));
      if (have_rule[idx]) throw FormatError(where + ": duplicate rule for this combination");
      have_rule[idx] = true;
      m.rules[idx] = parse_label(so, where);
    } else {
      throw FormatError(where + ": unknown directive '" + kind + "'");
    }
  }
  for (int v = 0; v < 4; ++v)
    if (!have_params[v])
      throw FormatError(path + ": missing params line for '" + std::string(kVarNames[v]) + "'");
  for (int idx = 0; idx < 27; ++idx)
    if (!have_rule[idx]) throw FormatError(path + ": rule table incomplete (27 rules required)");
  validate(m);
  return m;
}

}  // namespace h2sched
