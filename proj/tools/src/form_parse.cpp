#include "form_parse.hpp"

#include <cctype>
#include <json.hpp>

namespace fpgeom::cli {

namespace {

struct Term {
  long long coeff = 1;
  std::vector<std::size_t> vars;  // with multiplicity, size <= 2
};

// Terms are integer multiples of 1, x_i, x_i^2 or x_i*x_j.
std::vector<Term> split_terms(const std::string& raw) {
  std::string s;
  for (char c : raw) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  if (s.empty()) throw Error("form expression: empty input");
  std::vector<Term> terms;
  std::size_t pos = 0;
  while (pos < s.size()) {
    long long sign = 1;
    while (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
      if (s[pos] == '-') sign = -sign;
      ++pos;
    }
    std::size_t end = pos;
    while (end < s.size() && s[end] != '+' && s[end] != '-') ++end;
    std::string body = s.substr(pos, end - pos);
    if (body.empty()) throw Error("form expression: dangling sign");
    Term t;
    t.coeff = sign;
    bool have_coeff = false;
    std::size_t i = 0;
    while (i < body.size()) {
      if (std::isdigit(static_cast<unsigned char>(body[i]))) {
        if (have_coeff || !t.vars.empty()) {
          throw Error("form expression: unexpected number in term '" + body +
                      "'");
        }
        long long value = 0;
        while (i < body.size() &&
               std::isdigit(static_cast<unsigned char>(body[i]))) {
          value = value * 10 + (body[i] - '0');
          ++i;
        }
        t.coeff *= value;
        have_coeff = true;
      } else if (body[i] == 'x') {
        ++i;
        if (i >= body.size() || !std::isdigit(static_cast<unsigned char>(body[i]))) {
          throw Error("form expression: expected variable index after 'x'");
        }
        std::size_t idx = 0;
        while (i < body.size() &&
               std::isdigit(static_cast<unsigned char>(body[i]))) {
          idx = idx * 10 + std::size_t(body[i] - '0');
          ++i;
        }
        std::size_t reps = 1;
        if (i + 1 < body.size() && body[i] == '^') {
          if (body[i + 1] == '2') {
            reps = 2;
            i += 2;
          } else {
            throw Error("form expression: only degree 2 is supported");
          }
        }
        for (std::size_t rpt = 0; rpt < reps; ++rpt) t.vars.push_back(idx);
      } else if (body[i] == '*') {
        ++i;
      } else {
        throw Error(std::string("form expression: unexpected character '") +
                    body[i] + "'");
      }
    }
    if (t.vars.size() > 2) {
      throw Error("form expression: monomial degree exceeds 2");
    }
    terms.push_back(std::move(t));
    pos = end;
  }
  return terms;
}

}  // namespace

QuadraticForm parse_form_expression(const std::string& expr,
                                    const FieldContext& ctx, std::size_t d) {
  if (expr == "dot" || expr == "I") {
    return QuadraticForm::dot_square(ctx, d);
  }
  FpMatrix a(d, d);
  FpVec u(d, 0);
  fp_t v = 0;
  for (const Term& t : split_terms(expr)) {
    const fp_t c = ctx.reduce_int(t.coeff);
    for (std::size_t idx : t.vars) {
      if (idx >= d) throw Error("form expression: variable index out of range");
    }
    if (t.vars.empty()) {
      v = ctx.add(v, c);
    } else if (t.vars.size() == 1) {
      u[t.vars[0]] = ctx.add(u[t.vars[0]], c);
    } else if (t.vars[0] == t.vars[1]) {
      a.at(t.vars[0], t.vars[0]) = ctx.add(a.at(t.vars[0], t.vars[0]), c);
    } else {
      const fp_t half = ctx.mul(c, ctx.half());
      a.at(t.vars[0], t.vars[1]) = ctx.add(a.at(t.vars[0], t.vars[1]), half);
      a.at(t.vars[1], t.vars[0]) = ctx.add(a.at(t.vars[1], t.vars[0]), half);
    }
  }
  return QuadraticForm(ctx, std::move(a), std::move(u), v);
}

QuadraticForm parse_form_file(const std::string& text, const FieldContext& ctx,
                              std::size_t d) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) throw Error("form file: invalid JSON");
  FpMatrix a(d, d);
  const auto& rows = j.at("a");
  if (rows.size() != d) throw DimensionMismatch("form file: matrix rows");
  for (std::size_t r = 0; r < d; ++r) {
    if (rows[r].size() != d) throw DimensionMismatch("form file: matrix cols");
    for (std::size_t c = 0; c < d; ++c) {
      a.at(r, c) = ctx.reduce_int(rows[r][c].get<long long>());
    }
  }
  FpVec u(d, 0);
  if (j.contains("u")) {
    const auto& lin = j["u"];
    if (lin.size() != d) throw DimensionMismatch("form file: linear part");
    for (std::size_t c = 0; c < d; ++c) {
      u[c] = ctx.reduce_int(lin[c].get<long long>());
    }
  }
  fp_t v = j.contains("v") ? ctx.reduce_int(j["v"].get<long long>()) : 0;
  return QuadraticForm(ctx, std::move(a), std::move(u), v);
}

}  // namespace fpgeom::cli
