#include "alp/format.hpp"

#include <cctype>
#include <sstream>

namespace alp {

namespace {

struct Token {
  enum Kind { Ident, Number, Quoted, Punct, End } kind = End;
  std::string text;
  std::size_t column = 0;
};

struct Lexer {
  const std::string& line;
  std::size_t line_no;
  std::size_t pos = 0;
  Token current;

  Lexer(const std::string& l, std::size_t n) : line(l), line_no(n) { next(); }

  [[noreturn]] void fail(const std::string& msg, std::size_t col) const {
    throw ParseError(msg, line_no, col + 1);
  }

  void next() {
    while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos])))
      ++pos;
    current.column = pos;
    if (pos >= line.size() || line[pos] == '#') {
      current.kind = Token::End;
      current.text.clear();
      return;
    }
    char c = line[pos];
    if (c == '"') {
      std::size_t end = line.find('"', pos + 1);
      if (end == std::string::npos) fail("unterminated string", pos);
      current.kind = Token::Quoted;
      current.text = line.substr(pos + 1, end - pos - 1);
      pos = end + 1;
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t end = pos;
      while (end < line.size() &&
             (std::isalnum(static_cast<unsigned char>(line[end])) ||
              line[end] == '_'))
        ++end;
      current.kind = Token::Number;
      current.text = line.substr(pos, end - pos);
      pos = end;
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = pos;
      while (end < line.size() &&
             (std::isalnum(static_cast<unsigned char>(line[end])) ||
              line[end] == '_' || line[end] == '\''))
        ++end;
      current.kind = Token::Ident;
      current.text = line.substr(pos, end - pos);
      pos = end;
      return;
    }
    current.kind = Token::Punct;
    current.text = std::string(1, c);
    ++pos;
  }

  bool at_punct(const std::string& p) const {
    return current.kind == Token::Punct && current.text == p;
  }
  bool at_ident(const std::string& w) const {
    return current.kind == Token::Ident && current.text == w;
  }
  void expect_punct(const std::string& p) {
    if (!at_punct(p)) fail("expected '" + p + "'", current.column);
    next();
  }
  std::string expect_ident(const std::string& what) {
    if (current.kind != Token::Ident)
      fail("expected " + what, current.column);
    std::string t = current.text;
    next();
    return t;
  }
  void expect_end() {
    if (current.kind != Token::End)
      fail("unexpected trailing input", current.column);
  }
};

bool is_variable_name(const std::string& s) {
  return !s.empty() && std::islower(static_cast<unsigned char>(s[0]));
}

Term parse_term(Lexer& lx) {
  if (lx.current.kind == Token::Quoted || lx.current.kind == Token::Number) {
    Term t = Term::con(lx.current.text);
    lx.next();
    return t;
  }
  if (lx.current.kind == Token::Ident) {
    Term t = is_variable_name(lx.current.text) ? Term::var(lx.current.text)
                                               : Term::con(lx.current.text);
    lx.next();
    return t;
  }
  lx.fail("expected term", lx.current.column);
}

Atom parse_atom(Lexer& lx, const Schema& schema) {
  std::size_t col = lx.current.column;
  Atom a;
  a.relation = lx.expect_ident("relation name");
  lx.expect_punct("(");
  if (!lx.at_punct(")"))
    for (;;) {
      a.terms.push_back(parse_term(lx));
      if (lx.at_punct(")")) break;
      lx.expect_punct(",");
    }
  lx.expect_punct(")");
  const Relation* r = schema.find_relation(a.relation);
  if (!r) lx.fail("unknown relation " + a.relation, col);
  if (a.terms.size() != r->arity())
    lx.fail("arity mismatch: relation " + a.relation + " expects " +
                std::to_string(r->arity()) + " terms",
            col);
  return a;
}

Query parse_expr(Lexer& lx, const Schema& schema);

Query parse_primary(Lexer& lx, const Schema& schema) {
  if (lx.at_punct("(")) {
    lx.next();
    Query q = parse_expr(lx, schema);
    lx.expect_punct(")");
    return q;
  }
  if (lx.at_ident("true")) {
    lx.next();
    return Query::make_and({});
  }
  if (lx.at_ident("false")) {
    lx.next();
    return Query::make_or({});
  }
  return Query::make_atom(parse_atom(lx, schema));
}

Query parse_conj(Lexer& lx, const Schema& schema) {
  std::vector<Query> parts = {parse_primary(lx, schema)};
  while (lx.at_punct("&")) {
    lx.next();
    parts.push_back(parse_primary(lx, schema));
  }
  return parts.size() == 1 ? std::move(parts[0])
                           : Query::make_and(std::move(parts));
}

Query parse_expr(Lexer& lx, const Schema& schema) {
  std::vector<Query> parts = {parse_conj(lx, schema)};
  while (lx.at_punct("|")) {
    lx.next();
    parts.push_back(parse_conj(lx, schema));
  }
  return parts.size() == 1 ? std::move(parts[0])
                           : Query::make_or(std::move(parts));
}

Access parse_access_tail(Lexer& lx, const Schema& schema) {
  std::size_t col = lx.current.column;
  std::string rel_name = lx.expect_ident("relation name");
  const Relation* rel = schema.find_relation(rel_name);
  if (!rel) lx.fail("unknown relation " + rel_name, col);
  lx.expect_punct("(");
  std::vector<std::optional<std::string>> slots;
  if (!lx.at_punct(")"))
    for (;;) {
      if (lx.at_punct("?")) {
        slots.push_back(std::nullopt);
        lx.next();
      } else {
        Term t = parse_term(lx);
        slots.push_back(t.name);
      }
      if (lx.at_punct(")")) break;
      lx.expect_punct(",");
    }
  lx.expect_punct(")");
  if (slots.size() != rel->arity())
    lx.fail("access expression arity mismatch for " + rel_name, col);
  if (!lx.at_ident("via")) lx.fail("expected 'via'", lx.current.column);
  lx.next();
  std::size_t mcol = lx.current.column;
  std::string method_name = lx.expect_ident("method name");
  const AccessMethod* m = schema.find_method(method_name);
  if (!m) lx.fail("unknown method " + method_name, mcol);
  if (m->relation != rel_name)
    lx.fail("method " + method_name + " is not on " + rel_name, mcol);

  Access access{method_name, {}};
  for (std::size_t i = 0; i < rel->arity(); ++i) {
    const std::string& attr = rel->attributes[i].name;
    bool is_input = m->has_input(attr);
    if (is_input) {
      if (!slots[i])
        lx.fail("input position " + attr + " needs a value", col);
      access.binding[attr] = *slots[i];
    } else if (slots[i]) {
      lx.fail("output position " + attr + " must be '?'", col);
    }
  }
  return access;
}

std::string quote_token(const std::string& t) {
  bool numeric = !t.empty();
  for (char c : t)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
      numeric = false;
  if (numeric && std::isdigit(static_cast<unsigned char>(t[0]))) return t;
  return "\"" + t + "\"";
}

void print_term(std::ostream& os, const Term& t) {
  if (t.is_var())
    os << t.name;
  else
    os << quote_token(t.name);
}

void print_atom(std::ostream& os, const Atom& a) {
  os << a.relation << "(";
  for (std::size_t i = 0; i < a.terms.size(); ++i) {
    if (i) os << ", ";
    print_term(os, a.terms[i]);
  }
  os << ")";
}

void print_expr(std::ostream& os, const Query& q) {
  switch (q.kind) {
    case Query::AtomNode:
      print_atom(os, q.atom);
      return;
    case Query::AndNode:
    case Query::OrNode: {
      if (q.children.empty()) {
        os << (q.kind == Query::AndNode ? "true" : "false");
        return;
      }
      const char* sep = q.kind == Query::AndNode ? " & " : " | ";
      for (std::size_t i = 0; i < q.children.size(); ++i) {
        if (i) os << sep;
        const Query& c = q.children[i];
        if (c.kind == Query::AtomNode) {
          print_atom(os, c.atom);
        } else {
          os << "(";
          print_expr(os, c);
          os << ")";
        }
      }
      return;
    }
  }
}

}  // namespace

ProblemInstance parse_problem(const std::string& text,
                              bool admit_query_constants) {
  ProblemInstance inst;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    Lexer lx(raw, line_no);
    if (lx.current.kind == Token::End) continue;
    std::string head = lx.expect_ident("directive");

    if (head == "domain") {
      std::string name = lx.expect_ident("domain name");
      lx.expect_end();
      inst.schema.domains.push_back(name);
    } else if (head == "relation") {
      Relation r;
      r.name = lx.expect_ident("relation name");
      lx.expect_punct("(");
      if (!lx.at_punct(")"))
        for (;;) {
          Attribute a;
          a.name = lx.expect_ident("attribute name");
          lx.expect_punct(":");
          std::size_t col = lx.current.column;
          a.domain = lx.expect_ident("domain name");
          bool known = false;
          for (const auto& d : inst.schema.domains)
            if (d == a.domain) known = true;
          if (!known) lx.fail("unknown domain " + a.domain, col);
          r.attributes.push_back(a);
          if (lx.at_punct(")")) break;
          lx.expect_punct(",");
        }
      lx.expect_punct(")");
      lx.expect_end();
      if (inst.schema.find_relation(r.name))
        lx.fail("duplicate relation " + r.name, 0);
      inst.schema.relations.push_back(r);
    } else if (head == "access") {
      AccessMethod m;
      m.name = lx.expect_ident("method name");
      if (!lx.at_ident("on")) lx.fail("expected 'on'", lx.current.column);
      lx.next();
      std::size_t col = lx.current.column;
      m.relation = lx.expect_ident("relation name");
      const Relation* r = inst.schema.find_relation(m.relation);
      if (!r) lx.fail("unknown relation " + m.relation, col);
      if (!lx.at_ident("inputs"))
        lx.fail("expected 'inputs'", lx.current.column);
      lx.next();
      lx.expect_punct("(");
      if (!lx.at_punct(")"))
        for (;;) {
          std::size_t acol = lx.current.column;
          std::string attr = lx.expect_ident("attribute name");
          if (!r->attribute_index(attr))
            lx.fail("relation " + m.relation + " has no attribute " + attr,
                    acol);
          m.input_attributes.push_back(attr);
          if (lx.at_punct(")")) break;
          lx.expect_punct(",");
        }
      lx.expect_punct(")");
      if (lx.at_ident("dependent")) {
        m.mode = AccessMode::Dependent;
        lx.next();
      } else if (lx.at_ident("independent")) {
        m.mode = AccessMode::Independent;
        lx.next();
      } else {
        lx.fail("expected 'dependent' or 'independent'", lx.current.column);
      }
      lx.expect_end();
      if (inst.schema.find_method(m.name))
        lx.fail("duplicate method " + m.name, 0);
      inst.schema.methods.push_back(m);
    } else if (head == "fact") {
      std::size_t col = lx.current.column;
      Atom a = parse_atom(lx, inst.schema);
      lx.expect_end();
      Fact f{a.relation, {}};
      for (const auto& t : a.terms) {
        if (t.is_var()) lx.fail("facts must be ground", col);
        f.values.push_back(t.name);
      }
      inst.conf.insert(f);
    } else if (head == "const") {
      if (lx.current.kind != Token::Ident && lx.current.kind != Token::Number &&
          lx.current.kind != Token::Quoted)
        lx.fail("expected constant token", lx.current.column);
      std::string token = lx.current.text;
      lx.next();
      lx.expect_punct(":");
      std::size_t col = lx.current.column;
      std::string domain = lx.expect_ident("domain name");
      bool known = false;
      for (const auto& d : inst.schema.domains)
        if (d == domain) known = true;
      if (!known) lx.fail("unknown domain " + domain, col);
      lx.expect_end();
      inst.conf.admitted.insert({token, domain});
    } else if (head == "query") {
      NamedQuery nq;
      nq.name = lx.expect_ident("query name");
      if (lx.at_punct("(")) {
        lx.next();
        if (!lx.at_punct(")"))
          for (;;) {
            nq.head.push_back(lx.expect_ident("head variable"));
            if (lx.at_punct(")")) break;
            lx.expect_punct(",");
          }
        lx.expect_punct(")");
      }
      lx.expect_punct("=");
      nq.body = parse_expr(lx, inst.schema);
      lx.expect_end();
      if (inst.find_query(nq.name)) lx.fail("duplicate query " + nq.name, 0);
      try {
        variable_domains(nq.body, inst.schema);
      } catch (const ModelError& e) {
        lx.fail(e.what(), 0);
      }
      inst.queries.push_back(std::move(nq));
    } else if (head == "use") {
      Access a = parse_access_tail(lx, inst.schema);
      lx.expect_end();
      inst.access = a;
    } else {
      lx.fail("unknown directive " + head, 0);
    }
  }

  // Query constants must be admitted (or become so on request).
  for (const auto& nq : inst.queries)
    for (const auto& tv : query_constants(nq.body, inst.schema)) {
      if (admit_query_constants) {
        inst.conf.admitted.insert(tv);
      } else if (!adom(inst.conf, inst.schema).count(tv)) {
        throw ParseError("query constant " + tv.token + ":" + tv.domain +
                             " is not in the active domain",
                         line_no, 1);
      }
    }
  if (inst.access) check_access(*inst.access, inst.schema);
  return inst;
}

std::string print_query(const Query& q) {
  std::ostringstream os;
  print_expr(os, q);
  return os.str();
}

std::string print_problem(const ProblemInstance& inst) {
  std::ostringstream os;
  for (const auto& d : inst.schema.domains) os << "domain " << d << "\n";
  for (const auto& r : inst.schema.relations) {
    os << "relation " << r.name << "(";
    for (std::size_t i = 0; i < r.attributes.size(); ++i) {
      if (i) os << ", ";
      os << r.attributes[i].name << ":" << r.attributes[i].domain;
    }
    os << ")\n";
  }
  for (const auto& m : inst.schema.methods) {
    os << "access " << m.name << " on " << m.relation << " inputs(";
    for (std::size_t i = 0; i < m.input_attributes.size(); ++i) {
      if (i) os << ", ";
      os << m.input_attributes[i];
    }
    os << ") "
       << (m.mode == AccessMode::Dependent ? "dependent" : "independent")
       << "\n";
  }
  for (const auto& tv : inst.conf.admitted)
    os << "const " << quote_token(tv.token) << ":" << tv.domain << "\n";
  for (const auto& f : inst.conf.facts) {
    os << "fact " << f.relation << "(";
    for (std::size_t i = 0; i < f.values.size(); ++i) {
      if (i) os << ", ";
      os << quote_token(f.values[i]);
    }
    os << ")\n";
  }
  for (const auto& nq : inst.queries) {
    os << "query " << nq.name;
    if (!nq.head.empty()) {
      os << "(";
      for (std::size_t i = 0; i < nq.head.size(); ++i) {
        if (i) os << ", ";
        os << nq.head[i];
      }
      os << ")";
    }
    os << " = ";
    print_expr(os, nq.body);
    os << "\n";
  }
  if (inst.access)
    os << "use " << print_access_expr(*inst.access, inst.schema) << "\n";
  return os.str();
}

Access parse_access_expr(const std::string& text, const Schema& schema) {
  Lexer lx(text, 1);
  Access a = parse_access_tail(lx, schema);
  lx.expect_end();
  return a;
}

std::string print_access_expr(const Access& access, const Schema& schema) {
  const AccessMethod& m = schema.method(access.method);
  const Relation& rel = schema.relation(m.relation);
  std::ostringstream os;
  os << rel.name << "(";
  for (std::size_t i = 0; i < rel.attributes.size(); ++i) {
    if (i) os << ", ";
    const std::string& attr = rel.attributes[i].name;
    if (m.has_input(attr))
      os << quote_token(access.binding.at(attr));
    else
      os << "?";
  }
  os << ") via " << m.name;
  return os.str();
}

}  // namespace alp
