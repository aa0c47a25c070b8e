#include "alp/generators.hpp"

#include <random>

#include "alp/query.hpp"

namespace alp {

namespace {

Term V(const std::string& name) { return Term::var(name); }
Term K(const std::string& token) { return Term::con(token); }

/// Emits Boolean-circuit atoms over the And/Or/Eq gate relations,
/// naming intermediate wires deterministically under one prefix.
struct Circuit {
  std::vector<Atom>& atoms;
  std::string prefix;
  std::size_t counter = 0;

  std::string wire(const std::string& hint) {
    return prefix + hint + std::to_string(counter++);
  }

  std::string gate(const std::string& rel, const Term& a, const Term& b) {
    std::string out = wire(rel == "And" ? "a" : (rel == "Or" ? "o" : "e"));
    atoms.push_back({rel, {a, b, V(out)}});
    return out;
  }
  std::string eq(const Term& a, const Term& b) { return gate("Eq", a, b); }
  std::string not_bit(const std::string& b) { return eq(V(b), K("0")); }

  std::string fold(const std::string& rel, const std::vector<std::string>& bits) {
    std::string acc = bits.at(0);
    for (std::size_t i = 1; i < bits.size(); ++i)
      acc = gate(rel, V(acc), V(bits[i]));
    return acc;
  }
  std::string all_of(const std::vector<std::string>& bits) {
    return fold("And", bits);
  }
  std::string any_of(const std::vector<std::string>& bits) {
    return fold("Or", bits);
  }

  std::string equal_vec(const std::vector<Term>& x,
                        const std::vector<Term>& y) {
    std::vector<std::string> bits;
    for (std::size_t i = 0; i < x.size(); ++i) bits.push_back(eq(x[i], y[i]));
    return all_of(bits);
  }

  std::string equal_const(const std::vector<Term>& x, std::size_t value) {
    std::vector<std::string> bits;
    std::size_t n = x.size();
    for (std::size_t i = 0; i < n; ++i) {
      bool bit = (value >> (n - 1 - i)) & 1;  // big-endian, MSB first
      bits.push_back(eq(x[i], K(bit ? "1" : "0")));
    }
    return all_of(bits);
  }

  /// 1 iff y = x + 1 over fixed-width big-endian bit vectors.
  std::string succ(const std::vector<Term>& x, const std::vector<Term>& y) {
    std::vector<std::string> cases;
    for (std::size_t i = 0; i < x.size(); ++i) {
      std::vector<std::string> conds;
      for (std::size_t j = 0; j < i; ++j) conds.push_back(eq(x[j], y[j]));
      conds.push_back(eq(x[i], K("0")));
      conds.push_back(eq(y[i], K("1")));
      for (std::size_t j = i + 1; j < x.size(); ++j) {
        conds.push_back(eq(x[j], K("1")));
        conds.push_back(eq(y[j], K("0")));
      }
      cases.push_back(all_of(conds));
    }
    return any_of(cases);
  }
};

std::vector<Term> bit_vars(const std::string& stem, std::size_t n) {
  std::vector<Term> out;
  for (std::size_t i = 1; i <= n; ++i)
    out.push_back(V(stem + std::to_string(i)));
  return out;
}

std::vector<std::string> bit_tokens(std::size_t value, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i)
    out.push_back(((value >> (n - 1 - i)) & 1) ? "1" : "0");
  return out;
}

void check_spec(const TilingSpec& spec) {
  if (spec.types.empty()) throw ModelError("tiling spec has no tile types");
  std::set<std::string> known(spec.types.begin(), spec.types.end());
  if (known.size() != spec.types.size())
    throw ModelError("tiling spec has duplicate tile types");
  auto check_seq = [&](const std::vector<std::string>& seq) {
    for (const auto& t : seq)
      if (!known.count(t)) throw ModelError("unknown tile type " + t);
  };
  check_seq(spec.initial);
  check_seq(spec.final_row);
  auto check_pairs = [&](const std::set<std::pair<std::string, std::string>>& ps) {
    for (const auto& [a, b] : ps)
      if (!known.count(a) || !known.count(b))
        throw ModelError("constraint over unknown tile type");
  };
  check_pairs(spec.horiz);
  check_pairs(spec.vert);
  // The forced row is promised to be consistent; the violation queries
  // only inspect tiles placed after it.
  for (std::size_t i = 0; i + 1 < spec.initial.size(); ++i)
    if (!spec.horiz.count({spec.initial[i], spec.initial[i + 1]}))
      throw ModelError("initial row violates the horizontal constraints");
}

}  // namespace

ProblemInstance gen_tiling_grid(const TilingSpec& spec) {
  check_spec(spec);
  const std::size_t n = spec.n;
  const std::size_t m = spec.initial.size();
  if (n < 1) throw ModelError("grid spec needs n >= 1");
  if (m < 2) throw ModelError("grid spec needs at least 2 initial tiles");
  if (m > (std::size_t{1} << n))
    throw ModelError("more initial tiles than columns");

  ProblemInstance inst;
  Schema& s = inst.schema;
  s.domains = {"B", "T", "C"};
  s.relations.push_back({"Bool", {{"v", "B"}}});
  s.relations.push_back({"TileType", {{"t", "T"}}});
  for (const char* rel : {"SameTile", "Horiz", "Vert"})
    s.relations.push_back({rel, {{"a", "T"}, {"b", "T"}, {"v", "B"}}});
  for (const char* rel : {"And", "Or", "Eq"})
    s.relations.push_back({rel, {{"a", "B"}, {"b", "B"}, {"v", "B"}}});

  Relation tile;
  tile.name = "Tile";
  tile.attributes.push_back({"t", "T"});
  std::vector<std::string> inputs = {"t"};
  for (std::size_t i = 1; i <= n; ++i) {
    tile.attributes.push_back({"r" + std::to_string(i), "B"});
    inputs.push_back("r" + std::to_string(i));
  }
  for (std::size_t i = 1; i <= n; ++i) {
    tile.attributes.push_back({"c" + std::to_string(i), "B"});
    inputs.push_back("c" + std::to_string(i));
  }
  tile.attributes.push_back({"x", "C"});
  inputs.push_back("x");
  tile.attributes.push_back({"y", "C"});
  s.relations.push_back(tile);
  s.methods.push_back({"mTile", "Tile", inputs, AccessMode::Dependent});

  Configuration& conf = inst.conf;
  conf.insert({"Bool", {"0"}});
  conf.insert({"Bool", {"1"}});
  for (const auto& t : spec.types) conf.insert({"TileType", {t}});
  for (const auto& a : spec.types)
    for (const auto& b : spec.types) {
      conf.insert({"SameTile", {a, b, a == b ? "1" : "0"}});
      conf.insert({"Horiz", {a, b, spec.horiz.count({a, b}) ? "1" : "0"}});
      conf.insert({"Vert", {a, b, spec.vert.count({a, b}) ? "1" : "0"}});
    }
  for (const char* a : {"0", "1"})
    for (const char* b : {"0", "1"}) {
      bool ab = a[0] == '1' && b[0] == '1';
      bool ob = a[0] == '1' || b[0] == '1';
      conf.insert({"And", {a, b, ab ? "1" : "0"}});
      conf.insert({"Or", {a, b, ob ? "1" : "0"}});
      conf.insert({"Eq", {a, b, a[0] == b[0] ? "1" : "0"}});
    }
  auto seed_tile = [&](const std::string& type, std::size_t column,
                       const std::string& from, const std::string& to) {
    Fact f{"Tile", {type}};
    for (const auto& b : bit_tokens(0, n)) f.values.push_back(b);
    for (const auto& b : bit_tokens(column, n)) f.values.push_back(b);
    f.values.push_back(from);
    f.values.push_back(to);
    conf.insert(f);
  };
  seed_tile(spec.initial[0], 0, "c0", "c1");
  seed_tile(spec.initial[1], 1, "c1", "c2");

  // Q1: the top-right corner tile exists.
  {
    Atom a{"Tile", {V("u")}};
    for (std::size_t i = 0; i < 2 * n; ++i) a.terms.push_back(K("1"));
    a.terms.push_back(V("x"));
    a.terms.push_back(V("y"));
    inst.queries.push_back({"Q1", Query::make_atom(a), {}});
  }

  // Q2: four linked Tile atoms plus the violation circuit.
  std::vector<Atom> atoms;
  auto vb = bit_vars("b", n), vc = bit_vars("c", n), vd = bit_vars("d", n),
       ve = bit_vars("e", n), vf = bit_vars("f", n), vg = bit_vars("g", n),
       vh = bit_vars("h", n), vv = bit_vars("p", n);
  auto tile_atom = [&](const std::string& type_var, const std::vector<Term>& row,
                       const std::vector<Term>& col, const std::string& from,
                       const std::string& to) {
    Atom a{"Tile", {V(type_var)}};
    for (const auto& t : row) a.terms.push_back(t);
    for (const auto& t : col) a.terms.push_back(t);
    a.terms.push_back(V(from));
    a.terms.push_back(V(to));
    atoms.push_back(a);
  };
  tile_atom("u", vb, vc, "x", "y");
  tile_atom("v", vd, ve, "y", "z");
  tile_atom("w", vf, vg, "yp", "zp");
  tile_atom("q", vv, vh, "yp", "zq");

  // SUB1: the row/column bits of the two tiles sharing yp must agree
  // (functional dependency from the penultimate argument).
  std::string i1;
  {
    Circuit c{atoms, "fd_"};
    std::vector<std::string> bits;
    for (std::size_t i = 0; i < n; ++i) bits.push_back(c.eq(vf[i], vv[i]));
    for (std::size_t i = 0; i < n; ++i) bits.push_back(c.eq(vg[i], vh[i]));
    i1 = c.all_of(bits);
  }

  // SUB2: the tile feeding y must be the numeric predecessor of the
  // tile consuming it, over the concatenated row+column address.
  std::string i2;
  {
    Circuit c{atoms, "succ_"};
    std::vector<Term> bc = vb, de = vd;
    bc.insert(bc.end(), vc.begin(), vc.end());
    de.insert(de.end(), ve.begin(), ve.end());
    i2 = c.succ(bc, de);
  }

  // SUB3: no adjacency violation between the two freely chosen tiles,
  // and no initial tile of the wrong type.
  std::string i3;
  {
    Circuit c{atoms, "viol_"};
    // Both orientations: w is a free tile, so a violating neighbour of
    // the chain head is still caught with the roles swapped.
    std::string horiz_bad;
    {
      std::string same_row = c.equal_vec(vd, vf);
      std::string next_col = c.succ(ve, vg);
      std::string h = c.gate("Horiz", V("v"), V("w"));
      horiz_bad = c.all_of({same_row, next_col, c.not_bit(h)});
    }
    std::string horiz_bad_rev;
    {
      std::string same_row = c.equal_vec(vd, vf);
      std::string next_col = c.succ(vg, ve);
      std::string h = c.gate("Horiz", V("w"), V("v"));
      horiz_bad_rev = c.all_of({same_row, next_col, c.not_bit(h)});
    }
    std::string vert_bad;
    {
      std::string same_col = c.equal_vec(ve, vg);
      std::string next_row = c.succ(vd, vf);
      std::string v = c.gate("Vert", V("v"), V("w"));
      vert_bad = c.all_of({same_col, next_row, c.not_bit(v)});
    }
    std::string vert_bad_rev;
    {
      std::string same_col = c.equal_vec(ve, vg);
      std::string next_row = c.succ(vf, vd);
      std::string v = c.gate("Vert", V("w"), V("v"));
      vert_bad_rev = c.all_of({same_col, next_row, c.not_bit(v)});
    }
    std::vector<std::string> bad = {horiz_bad, horiz_bad_rev, vert_bad,
                                    vert_bad_rev};
    for (std::size_t i = 0; i < m; ++i) {
      std::string row0 = c.equal_const(vf, 0);
      std::string coli = c.equal_const(vg, i);
      std::string same = c.wire("st");
      atoms.push_back({"SameTile", {V("w"), K(spec.initial[i]), V(same)}});
      bad.push_back(c.all_of({row0, coli, c.not_bit(same)}));
    }
    i3 = c.not_bit(c.any_of(bad));
  }

  // SUB4: at least one of i1, i2, i3 is zero.
  atoms.push_back({"And", {V(i1), V(i2), V("j_and")}});
  atoms.push_back({"And", {V("j_and"), V(i3), K("0")}});

  std::vector<Query> conjuncts;
  for (const auto& a : atoms) conjuncts.push_back(Query::make_atom(a));
  inst.queries.push_back({"Q2", Query::make_and(std::move(conjuncts)), {}});
  return inst;
}

ProblemInstance gen_tiling_corridor(const TilingSpec& spec, bool as_cq) {
  check_spec(spec);
  const std::size_t n = spec.n;
  const std::size_t r = spec.types.size();
  if (n < 2) throw ModelError("corridor spec needs width >= 2");
  if (spec.initial.size() != n || spec.final_row.size() != n)
    throw ModelError("initial and final rows must have width n");

  double combos = 1;
  for (std::size_t i = 0; i + 1 < n; ++i) combos *= static_cast<double>(r);
  if (combos > 4096)
    throw ModelError("vertical-constraint expansion too large");

  ProblemInstance inst;
  Schema& s = inst.schema;
  s.domains = {"D"};
  auto rel_name = [&](const std::string& type, std::size_t col) {
    return "C_" + type + "_" + std::to_string(col);
  };
  for (const auto& t : spec.types)
    for (std::size_t j = 1; j <= n; ++j) {
      s.relations.push_back({rel_name(t, j), {{"p", "D"}, {"q", "D"}}});
      s.methods.push_back(
          {"m" + rel_name(t, j), rel_name(t, j), {"p"}, AccessMode::Dependent});
    }

  for (std::size_t j = 1; j <= n; ++j)
    inst.conf.insert({rel_name(spec.initial[j - 1], j),
                      {"c" + std::to_string(j - 1), "c" + std::to_string(j)}});

  // Q1: some violation is present.
  std::vector<ConjunctiveQuery> violations;
  auto atom2 = [&](const std::string& rel, const std::string& a,
                   const std::string& b) {
    return Atom{rel, {V(a), V(b)}};
  };
  for (const auto& ti : spec.types)
    for (std::size_t k = 1; k <= n; ++k)
      for (const auto& tj : spec.types)
        for (std::size_t l = 1; l <= n; ++l) {
          if (ti == tj && k == l) continue;
          violations.push_back(
              {atom2(rel_name(ti, k), "x", "y"), atom2(rel_name(tj, l), "x", "w")});
          violations.push_back(
              {atom2(rel_name(ti, k), "x", "y"), atom2(rel_name(tj, l), "w", "y")});
        }
  for (const auto& ti : spec.types)
    for (const auto& tk : spec.types)
      for (std::size_t m = 1; m <= n; ++m)
        for (std::size_t mp = 1; mp <= n; ++mp) {
          if (m < n && mp != m + 1)
            violations.push_back({atom2(rel_name(ti, m), "x", "y"),
                                  atom2(rel_name(tk, mp), "y", "z")});
          if (m == n && mp != 1)
            violations.push_back({atom2(rel_name(ti, m), "x", "y"),
                                  atom2(rel_name(tk, mp), "y", "z")});
        }
  for (const auto& ti : spec.types)
    for (const auto& tj : spec.types) {
      for (std::size_t m = 1; m + 1 <= n; ++m)
        if (!spec.horiz.count({ti, tj}))
          violations.push_back({atom2(rel_name(ti, m), "x", "y"),
                                atom2(rel_name(tj, m + 1), "y", "z")});
      if (!spec.vert.count({ti, tj}))
        for (std::size_t m = 1; m <= n; ++m) {
          // Chain through the n-1 columns following m (with wraparound),
          // expanded over every choice of intermediate tile types.
          std::vector<std::size_t> cols;
          for (std::size_t step = 1; step < n; ++step)
            cols.push_back((m - 1 + step) % n + 1);
          std::vector<std::size_t> pick(cols.size(), 0);
          for (;;) {
            ConjunctiveQuery d;
            d.push_back(atom2(rel_name(ti, m), "x", "y1"));
            for (std::size_t t = 0; t < cols.size(); ++t)
              d.push_back(atom2(rel_name(spec.types[pick[t]], cols[t]),
                                "y" + std::to_string(t + 1),
                                "y" + std::to_string(t + 2)));
            d.push_back(atom2(rel_name(tj, m),
                              "y" + std::to_string(cols.size() + 1), "z"));
            violations.push_back(std::move(d));
            std::size_t i = 0;
            while (i < pick.size() && ++pick[i] == r) pick[i++] = 0;
            if (i == pick.size()) break;
          }
        }
    }

  ConjunctiveQuery final_row;
  for (std::size_t j = 1; j <= n; ++j)
    final_row.push_back(atom2(rel_name(spec.final_row[j - 1], j),
                              "y" + std::to_string(j - 1),
                              "y" + std::to_string(j)));

  if (!as_cq) {
    inst.queries.push_back({"Q1", dnf_to_query(violations), {}});
    inst.queries.push_back(
        {"Q2", dnf_to_query({final_row}), {}});
    return inst;
  }

  // CQ form: a validity place on every tile relation, a shared decoy
  // fact per relation at bit 0, and one selector bit per disjunct that
  // an Or chain forces to fire somewhere.
  s.domains.push_back("B");
  for (auto& rel : s.relations) rel.attributes.push_back({"b", "B"});
  for (const char* gate : {"Or"})
    s.relations.push_back({gate, {{"a", "B"}, {"b", "B"}, {"v", "B"}}});
  s.relations.push_back({"P", {{"v", "B"}}});

  Configuration padded;
  padded.admitted = inst.conf.admitted;
  for (const auto& f : inst.conf.facts) {
    Fact g = f;
    g.values.push_back("1");
    padded.insert(g);
  }
  for (const auto& t : spec.types)
    for (std::size_t j = 1; j <= n; ++j)
      padded.insert({rel_name(t, j), {"c0", "c0", "0"}});
  for (const char* a : {"0", "1"})
    for (const char* b : {"0", "1"})
      padded.insert({"Or", {a, b, (a[0] == '1' || b[0] == '1') ? "1" : "0"}});
  padded.insert({"P", {"1"}});
  inst.conf = std::move(padded);

  std::vector<Atom> cq;
  std::vector<std::string> selectors;
  for (std::size_t t = 0; t < violations.size(); ++t) {
    std::string bit = "s" + std::to_string(t);
    selectors.push_back(bit);
    for (const auto& a : violations[t]) {
      Atom p;
      p.relation = a.relation;
      for (const auto& term : a.terms)
        p.terms.push_back(term.is_var()
                              ? V("d" + std::to_string(t) + "_" + term.name)
                              : term);
      p.terms.push_back(V(bit));
      cq.push_back(p);
    }
  }
  {
    Circuit c{cq, "sel_"};
    cq.push_back({"P", {V(c.any_of(selectors))}});
  }
  std::vector<Query> conjuncts;
  for (const auto& a : cq) conjuncts.push_back(Query::make_atom(a));
  inst.queries.push_back({"Q1", Query::make_and(std::move(conjuncts)), {}});

  std::vector<Query> final_conjuncts;
  for (const auto& a : final_row) {
    Atom p = a;
    p.terms.push_back(K("1"));
    final_conjuncts.push_back(Query::make_atom(p));
  }
  inst.queries.push_back(
      {"Q2", Query::make_and(std::move(final_conjuncts)), {}});
  return inst;
}

ProblemInstance gen_random_instance(std::uint64_t seed,
                                    const RandomLimits& limits,
                                    bool two_queries) {
  std::mt19937_64 rng(seed);
  auto pick = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };

  ProblemInstance inst;
  Schema& s = inst.schema;
  std::size_t nd = pick(1, std::max<std::size_t>(1, limits.max_domains));
  for (std::size_t i = 0; i < nd; ++i)
    s.domains.push_back("D" + std::to_string(i));

  std::size_t nr = pick(1, std::max<std::size_t>(1, limits.max_relations));
  for (std::size_t i = 0; i < nr; ++i) {
    Relation r;
    r.name = "R" + std::to_string(i);
    std::size_t arity = pick(1, std::max<std::size_t>(1, limits.max_arity));
    for (std::size_t j = 0; j < arity; ++j)
      r.attributes.push_back(
          {"a" + std::to_string(j), s.domains[pick(0, nd - 1)]});
    s.relations.push_back(r);
  }

  std::size_t nm = pick(1, std::max<std::size_t>(1, limits.max_methods));
  for (std::size_t i = 0; i < nm; ++i) {
    const Relation& r = s.relations[pick(0, nr - 1)];
    AccessMethod m;
    m.name = "m" + std::to_string(i);
    m.relation = r.name;
    for (const auto& attr : r.attributes)
      if (pick(0, 1)) m.input_attributes.push_back(attr.name);
    m.mode = (limits.independent_only || pick(0, 1)) ? AccessMode::Independent
                                                     : AccessMode::Dependent;
    s.methods.push_back(m);
  }

  auto token = [&](const std::string& domain) {
    return domain + "_t" + std::to_string(pick(0, 2));
  };
  std::size_t nf = pick(0, limits.max_facts);
  for (std::size_t i = 0; i < nf; ++i) {
    const Relation& r = s.relations[pick(0, nr - 1)];
    Fact f{r.name, {}};
    for (const auto& attr : r.attributes) f.values.push_back(token(attr.domain));
    inst.conf.insert(f);
  }
  std::size_t na = pick(0, limits.max_admitted);
  for (std::size_t i = 0; i < na; ++i) {
    const std::string& d = s.domains[pick(0, nd - 1)];
    inst.conf.admitted.insert({token(d), d});
  }

  std::set<TypedValue> dom = adom(inst.conf, inst.schema);
  auto make_query = [&]() {
    std::size_t nd2 =
        limits.cq_only ? 1 : pick(1, std::max<std::size_t>(1, limits.max_disjuncts));
    std::vector<Query> disjuncts;
    for (std::size_t d = 0; d < nd2; ++d) {
      std::size_t natoms = pick(1, std::max<std::size_t>(1, limits.max_query_atoms));
      std::vector<Query> atoms;
      for (std::size_t i = 0; i < natoms; ++i) {
        const Relation& r = s.relations[pick(0, nr - 1)];
        Atom a{r.name, {}};
        for (const auto& attr : r.attributes) {
          std::vector<std::string> tokens;
          for (const auto& tv : dom)
            if (tv.domain == attr.domain) tokens.push_back(tv.token);
          if (!tokens.empty() && pick(0, 3) == 0)
            a.terms.push_back(K(tokens[pick(0, tokens.size() - 1)]));
          else
            a.terms.push_back(
                V("x_" + attr.domain + "_" + std::to_string(pick(0, 2))));
        }
        atoms.push_back(Query::make_atom(a));
      }
      disjuncts.push_back(atoms.size() == 1
                              ? std::move(atoms[0])
                              : Query::make_and(std::move(atoms)));
    }
    return nd2 == 1 ? disjuncts[0] : Query::make_or(std::move(disjuncts));
  };
  inst.queries.push_back({"Q", make_query(), {}});
  if (two_queries) inst.queries.push_back({"Q2", make_query(), {}});

  const AccessMethod& m = s.methods[pick(0, nm - 1)];
  const Relation& rel = s.relation(m.relation);
  Access access{m.name, {}};
  for (const auto& attr : m.input_attributes) {
    auto idx = rel.attribute_index(attr);
    const std::string& domain = rel.attributes[*idx].domain;
    std::vector<std::string> tokens;
    for (const auto& tv : dom)
      if (tv.domain == domain) tokens.push_back(tv.token);
    if (tokens.empty()) {
      std::string fresh = domain + "_b";
      inst.conf.admitted.insert({fresh, domain});
      dom.insert({fresh, domain});
      tokens.push_back(fresh);
    }
    access.binding[attr] = tokens[pick(0, tokens.size() - 1)];
  }
  inst.access = access;
  return inst;
}

}  // namespace alp
