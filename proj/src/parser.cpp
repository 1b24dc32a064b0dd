/*
    Licensed under the Apache License, Version 2.0 (the "License");
    you may not use this file except in compliance with the License.
    You may obtain a copy of the License at

        https://www.apache.org/licenses/LICENSE-2.0

    Unless required by applicable law or agreed to in writing, software
    distributed under the License is distributed on an "AS IS" BASIS,
    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
    See the License for the specific language governing permissions and
    limitations under the License.
*/

#include "mondet/parser.h"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <unordered_set>

namespace mondet {

namespace {

struct Cursor {
  const std::string& s;
  size_t pos = 0;
  int line;

  void skip_ws() {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
  }
  bool eof() {
    skip_ws();
    return pos >= s.size();
  }
  bool peek(char c) {
    skip_ws();
    return pos < s.size() && s[pos] == c;
  }
  bool eat(char c) {
    if (!peek(c)) return false;
    ++pos;
    return true;
  }
  void expect(char c) {
    if (!eat(c))
      throw ParseError(line, std::string("expected '") + c + "'");
  }
  bool eat_word(const std::string& w) {
    skip_ws();
    if (s.compare(pos, w.size(), w) != 0) return false;
    size_t end = pos + w.size();
    if (end < s.size() && (std::isalnum(s[end]) || s[end] == '_'))
      return false;
    pos = end;
    return true;
  }
  std::string ident() {
    skip_ws();
    size_t start = pos;
    while (pos < s.size() && (std::isalnum(s[pos]) || s[pos] == '_')) ++pos;
    if (pos == start) throw ParseError(line, "expected an identifier");
    return s.substr(start, pos - start);
  }
  std::string quoted() {
    expect('"');
    size_t start = pos;
    while (pos < s.size() && s[pos] != '"') ++pos;
    if (pos >= s.size()) throw ParseError(line, "unterminated constant");
    std::string v = s.substr(start, pos - start);
    ++pos;
    return v;
  }
};

Term parse_term(Cursor& c, bool allow_constants) {
  if (c.peek('"')) {
    if (!allow_constants)
      throw ParseError(c.line, "constants are not allowed in constraints");
    return Term::constant(c.quoted());
  }
  return Term::variable(c.ident());
}

Atom parse_atom(Cursor& c, bool allow_constants) {
  Atom a;
  a.relation = c.ident();
  c.expect('(');
  if (!c.eat(')')) {
    do {
      a.args.push_back(parse_term(c, allow_constants));
    } while (c.eat(','));
    c.expect(')');
  }
  return a;
}

std::vector<Atom> parse_atom_list(Cursor& c, bool allow_constants) {
  std::vector<Atom> atoms;
  do {
    atoms.push_back(parse_atom(c, allow_constants));
  } while (c.eat(','));
  return atoms;
}

void expect_arrow(Cursor& c) {
  c.skip_ws();
  if (c.s.compare(c.pos, 2, "->") != 0)
    throw ParseError(c.line, "expected '->'");
  c.pos += 2;
}

// Attribute name or 1-based position index, resolved against a relation.
int resolve_position(Cursor& c, const Signature::Relation& rel) {
  c.skip_ws();
  if (c.pos < c.s.size() && std::isdigit(c.s[c.pos])) {
    size_t start = c.pos;
    while (c.pos < c.s.size() && std::isdigit(c.s[c.pos])) ++c.pos;
    int p = std::stoi(c.s.substr(start, c.pos - start));
    if (p < 1 || p > rel.arity)
      throw ParseError(c.line, "position " + std::to_string(p) +
                                   " out of range for '" + rel.name + "'");
    return p - 1;
  }
  std::string name = c.ident();
  for (size_t i = 0; i < rel.attrs.size(); ++i)
    if (rel.attrs[i] == name) return static_cast<int>(i);
  throw ParseError(c.line, "'" + rel.name + "' has no attribute '" + name +
                               "'");
}

}  // namespace

ProblemFile parse_problem(const std::string& text) {
  ProblemFile out;
  std::unordered_set<std::string> query_names;

  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  int rule_counter = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string stripped = raw;
    size_t comment = stripped.find('#');
    if (comment != std::string::npos) stripped.resize(comment);
    Cursor c{stripped, 0, lineno};
    if (c.eof()) continue;

    try {
      if (c.eat_word("relation")) {
        Signature::Relation rel;
        rel.name = c.ident();
        if (out.schema.signature.has(rel.name))
          throw ParseError(lineno, "duplicate relation '" + rel.name + "'");
        c.expect('(');
        if (!c.eat(')')) {
          do {
            rel.attrs.push_back(c.ident());
          } while (c.eat(','));
          c.expect(')');
        }
        rel.arity = static_cast<int>(rel.attrs.size());
        if (rel.arity < 1)
          throw ParseError(lineno, "relation '" + rel.name +
                                       "' needs at least one attribute");
        out.schema.signature.add(rel);
      } else if (c.eat_word("method")) {
        AccessMethod mt;
        mt.name = c.ident();
        if (!c.eat_word("on")) throw ParseError(lineno, "expected 'on'");
        mt.relation = c.ident();
        if (!out.schema.signature.has(mt.relation))
          throw ParseError(lineno, "unknown relation '" + mt.relation + "'");
        const auto& rel = out.schema.signature.at(mt.relation);
        if (!c.eat_word("input")) throw ParseError(lineno, "expected 'input'");
        c.expect('(');
        if (!c.eat(')')) {
          do {
            mt.inputs.push_back(resolve_position(c, rel));
          } while (c.eat(','));
          c.expect(')');
        }
        std::sort(mt.inputs.begin(), mt.inputs.end());
        if (c.eat_word("limit")) {
          mt.bound = Bound::result(std::stoll(c.ident()));
        } else if (c.eat_word("lowerlimit")) {
          mt.bound = Bound::lower(std::stoll(c.ident()));
        }
        if (!c.eof()) throw ParseError(lineno, "trailing input after method");
        out.schema.methods.push_back(std::move(mt));
      } else if (c.eat_word("id") || c.eat_word("tgd")) {
        const bool want_id = stripped.compare(c.pos - 2, 2, "id") == 0;
        c.expect(':');
        TGD t;
        t.id = "sigma:" + std::to_string(rule_counter++);
        t.body = parse_atom_list(c, /*allow_constants=*/false);
        expect_arrow(c);
        t.head = parse_atom_list(c, /*allow_constants=*/false);
        if (want_id && !t.is_id())
          throw ParseError(lineno,
                           "not an inclusion dependency (single atoms, no "
                           "repeated variables)");
        out.schema.constraints.tgds.push_back(std::move(t));
      } else if (c.eat_word("fd")) {
        std::string rname = c.ident();
        if (!out.schema.signature.has(rname))
          throw ParseError(lineno, "unknown relation '" + rname + "'");
        const auto& rel = out.schema.signature.at(rname);
        c.expect(':');
        FD fd;
        fd.relation = rname;
        do {
          fd.determiner.push_back(resolve_position(c, rel));
        } while (c.eat(','));
        expect_arrow(c);
        fd.determined = resolve_position(c, rel);
        std::sort(fd.determiner.begin(), fd.determiner.end());
        fd.determiner.erase(
            std::unique(fd.determiner.begin(), fd.determiner.end()),
            fd.determiner.end());
        out.schema.constraints.fds.push_back(std::move(fd));
      } else if (c.eat_word("query")) {
        CQ q;
        q.name = c.ident();
        if (!query_names.insert(q.name).second)
          throw ParseError(lineno, "duplicate query '" + q.name + "'");
        if (c.eat('(')) {
          if (!c.eat(')')) {
            do {
              q.free_vars.push_back(c.ident());
            } while (c.eat(','));
            c.expect(')');
          }
        }
        c.skip_ws();
        if (c.s.compare(c.pos, 2, ":-") != 0)
          throw ParseError(lineno, "expected ':-'");
        c.pos += 2;
        q.atoms = parse_atom_list(c, /*allow_constants=*/true);
        // Every variable (free ones included) must occur in some atom.
        std::unordered_set<std::string> vars;
        for (const std::string& v : q.variables()) vars.insert(v);
        for (const std::string& v : q.free_vars)
          if (!vars.count(v))
            throw ParseError(lineno, "free variable '" + v +
                                         "' does not occur in the query");
        for (const Atom& a : q.atoms) {
          if (!out.schema.signature.has(a.relation))
            throw ParseError(lineno,
                             "unknown relation '" + a.relation + "'");
          if (static_cast<int>(a.args.size()) !=
              out.schema.signature.arity(a.relation))
            throw ParseError(lineno, "arity mismatch for '" + a.relation +
                                         "'");
        }
        out.queries.push_back(std::move(q));
      } else if (c.eat_word("option")) {
        std::string flag = c.ident();
        while (c.eat('-')) flag += "-" + c.ident();
        if (flag == "accessible-constants")
          out.options.accessible_constants = true;
        else if (flag == "width")
          out.options.width = std::stoi(c.ident());
        else if (flag == "budget-rounds")
          out.options.round_budget = std::stoi(c.ident());
        else if (flag == "oracle-domain")
          out.options.oracle_domain = std::stoi(c.ident());
        else
          throw ParseError(lineno, "unknown option '" + flag + "'");
      } else {
        throw ParseError(lineno, "unrecognized statement");
      }
      if (!c.eof()) throw ParseError(lineno, "trailing input");
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      throw ParseError(lineno, e.what());
    }
  }

  // Constraint atoms can only be checked once the signature is complete.
  try {
    validate(out.schema);
  } catch (const ValidationError& e) {
    throw ParseError(lineno, e.what());
  }
  return out;
}

}  // namespace mondet
