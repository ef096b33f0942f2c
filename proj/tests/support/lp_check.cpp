#include "support/lp_check.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace ecaopt::testref {

namespace {

bool parse_number(const std::string& tok, double* out) {
  const char* s = tok.c_str();
  char* end = nullptr;
  const double v = std::strtod(s, &end);
  if (end != s + tok.size() || tok.empty()) return false;
  *out = v;
  return true;
}

[[noreturn]] void bad(const std::string& what) {
  throw std::runtime_error("model parse: " + what);
}

std::vector<std::string> lp_tokens(const std::string& text) {
  std::vector<std::string> toks;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (!line.empty() && line[0] == '\\') continue;
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) toks.push_back(tok);
  }
  return toks;
}

// coef var [(+|-) coef var]...; leaves i on the first token that does not
// continue the expression.
std::vector<RefTerm> parse_expression(const std::vector<std::string>& toks, std::size_t* i) {
  std::vector<RefTerm> terms;
  bool first = true;
  while (*i < toks.size()) {
    const std::string& tok = toks[*i];
    double coef = 0.0;
    if (tok == "+" || tok == "-") {
      if (*i + 2 >= toks.size()) bad("dangling sign");
      double mag = 0.0;
      if (!parse_number(toks[*i + 1], &mag)) bad("expected number after sign");
      coef = tok == "-" ? -mag : mag;
      terms.push_back({toks[*i + 2], coef});
      *i += 3;
    } else if (first && parse_number(tok, &coef)) {
      if (*i + 1 >= toks.size()) bad("dangling coefficient");
      terms.push_back({toks[*i + 1], coef});
      *i += 2;
    } else {
      break;
    }
    first = false;
  }
  return terms;
}

}  // namespace

ParsedModel parse_lp(const std::string& text) {
  const std::vector<std::string> toks = lp_tokens(text);
  ParsedModel m;
  std::size_t i = 0;
  if (i >= toks.size() || toks[i] != "Maximize") bad("expected Maximize");
  ++i;
  if (i >= toks.size() || toks[i] != "obj:") bad("expected obj:");
  ++i;
  m.objective = parse_expression(toks, &i);
  if (i + 1 >= toks.size() || toks[i] != "Subject" || toks[i + 1] != "To")
    bad("expected Subject To");
  i += 2;

  while (i < toks.size() && toks[i] != "Binaries" && toks[i] != "End") {
    if (toks[i].empty() || toks[i].back() != ':') bad("expected row name, got " + toks[i]);
    RefRow row;
    row.name = toks[i].substr(0, toks[i].size() - 1);
    ++i;
    row.terms = parse_expression(toks, &i);
    if (i >= toks.size()) bad("row without sense");
    if (toks[i] == "<=")
      row.sense = '<';
    else if (toks[i] == "=")
      row.sense = '=';
    else
      bad("unknown sense " + toks[i]);
    ++i;
    if (i >= toks.size() || !parse_number(toks[i], &row.rhs)) bad("missing rhs");
    ++i;
    m.rows.push_back(std::move(row));
  }

  if (i < toks.size() && toks[i] == "Binaries") {
    ++i;
    while (i < toks.size() && toks[i] != "End") m.binaries.push_back(toks[i++]);
  }
  if (i >= toks.size() || toks[i] != "End") bad("expected End");
  return m;
}

ParsedModel parse_mps(const std::string& text) {
  ParsedModel m;
  std::map<std::string, std::size_t> row_index;
  std::istringstream lines(text);
  std::string line, section;
  bool integral = false;
  while (std::getline(lines, line)) {
    std::istringstream ls(line);
    std::vector<std::string> toks;
    std::string tok;
    while (ls >> tok) toks.push_back(tok);
    if (toks.empty()) continue;

    if (line[0] != ' ' && line[0] != '\t') {
      section = toks[0];
      if (section == "ENDATA") break;
      continue;
    }

    if (section == "OBJSENSE") {
      m.maximize = toks[0] == "MAX";
    } else if (section == "ROWS") {
      if (toks.size() != 2) bad("bad ROWS line");
      if (toks[0] == "N") continue;  // objective row
      RefRow row;
      row.name = toks[1];
      row.sense = toks[0] == "E" ? '=' : '<';
      row_index[row.name] = m.rows.size();
      m.rows.push_back(std::move(row));
    } else if (section == "COLUMNS") {
      if (line.find("'MARKER'") != std::string::npos) {
        integral = line.find("'INTORG'") != std::string::npos;
        continue;
      }
      if (toks.size() != 3) bad("bad COLUMNS line");
      double coef = 0.0;
      if (!parse_number(toks[2], &coef)) bad("bad coefficient " + toks[2]);
      if (integral &&
          std::find(m.binaries.begin(), m.binaries.end(), toks[0]) == m.binaries.end())
        m.binaries.push_back(toks[0]);
      if (toks[1] == "obj") {
        if (coef != 0.0) m.objective.push_back({toks[0], coef});
      } else {
        const auto it = row_index.find(toks[1]);
        if (it == row_index.end()) bad("unknown row " + toks[1]);
        m.rows[it->second].terms.push_back({toks[0], coef});
      }
    } else if (section == "RHS") {
      if (toks.size() != 3) bad("bad RHS line");
      const auto it = row_index.find(toks[1]);
      if (it == row_index.end()) bad("unknown rhs row " + toks[1]);
      if (!parse_number(toks[2], &m.rows[it->second].rhs)) bad("bad rhs " + toks[2]);
    } else if (section == "BOUNDS") {
      if (toks.size() != 3 || toks[0] != "BV") bad("bad BOUNDS line");
      if (std::find(m.binaries.begin(), m.binaries.end(), toks[2]) == m.binaries.end())
        bad("BV bound on a continuous column " + toks[2]);
    }
  }
  return m;
}

double objective_value(const ParsedModel& m, const std::map<std::string, double>& assign) {
  double sum = 0.0;
  for (const RefTerm& t : m.objective) {
    const auto it = assign.find(t.var);
    if (it != assign.end()) sum += t.coef * it->second;
  }
  return sum;
}

double max_violation(const ParsedModel& m, const std::map<std::string, double>& assign) {
  double worst = 0.0;
  for (const RefRow& row : m.rows) {
    double lhs = 0.0, scale = std::max(1.0, std::fabs(row.rhs));
    for (const RefTerm& t : row.terms) {
      const auto it = assign.find(t.var);
      const double v = it != assign.end() ? t.coef * it->second : 0.0;
      lhs += v;
      scale = std::max(scale, std::fabs(v));
    }
    const double gap = row.sense == '=' ? std::fabs(lhs - row.rhs) : lhs - row.rhs;
    worst = std::max(worst, gap / scale);
  }
  return worst;
}

namespace {

bool same_terms(std::vector<RefTerm> a, std::vector<RefTerm> b, double tol, std::string* why,
                const std::string& where) {
  // A zero coefficient and an absent term mean the same thing.
  const auto drop_zero = [](std::vector<RefTerm>& v) {
    v.erase(std::remove_if(v.begin(), v.end(), [](const RefTerm& t) { return t.coef == 0.0; }),
            v.end());
  };
  drop_zero(a);
  drop_zero(b);
  const auto by_var = [](const RefTerm& x, const RefTerm& y) { return x.var < y.var; };
  std::sort(a.begin(), a.end(), by_var);
  std::sort(b.begin(), b.end(), by_var);
  if (a.size() != b.size()) {
    if (why) *why = where + ": term count " + std::to_string(a.size()) + " vs " +
                    std::to_string(b.size());
    return false;
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].var != b[i].var) {
      if (why) *why = where + ": variable " + a[i].var + " vs " + b[i].var;
      return false;
    }
    if (std::fabs(a[i].coef - b[i].coef) > tol) {
      if (why) *why = where + ": coefficient of " + a[i].var;
      return false;
    }
  }
  return true;
}

}  // namespace

bool same_model(const ParsedModel& a, const ParsedModel& b, double tol, std::string* why) {
  if (a.maximize != b.maximize) {
    if (why) *why = "objective sense";
    return false;
  }
  if (!same_terms(a.objective, b.objective, tol, why, "objective")) return false;
  if (a.rows.size() != b.rows.size()) {
    if (why) *why = "row count";
    return false;
  }
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    const RefRow& ra = a.rows[i];
    const RefRow& rb = b.rows[i];
    if (ra.name != rb.name || ra.sense != rb.sense) {
      if (why) *why = "row " + ra.name + " vs " + rb.name;
      return false;
    }
    if (std::fabs(ra.rhs - rb.rhs) > tol) {
      if (why) *why = "rhs of " + ra.name;
      return false;
    }
    if (!same_terms(ra.terms, rb.terms, tol, why, "row " + ra.name)) return false;
  }
  std::vector<std::string> ba = a.binaries, bb = b.binaries;
  std::sort(ba.begin(), ba.end());
  std::sort(bb.begin(), bb.end());
  if (ba != bb) {
    if (why) *why = "binary sets differ";
    return false;
  }
  return true;
}

}  // namespace ecaopt::testref
