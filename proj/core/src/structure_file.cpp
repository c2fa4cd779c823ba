#include "gammalab/structure_file.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace gammalab {

std::string to_string(DiagnosticKind k) {
  switch (k) {
    case DiagnosticKind::Parse: return "parse error";
    case DiagnosticKind::DanglingReference: return "dangling reference";
    case DiagnosticKind::DimensionMismatch: return "dimension mismatch";
    case DiagnosticKind::Limit: return "limit";
  }
  return "?";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Unavailable: return "unavailable";
    case Verdict::Error: return "error";
  }
  return "?";
}

namespace {

std::string locate(DiagnosticKind k, int line, int column, const std::string& message) {
  std::ostringstream os;
  os << line << ":" << column << ": " << to_string(k) << ": " << message;
  return os.str();
}

}  // namespace

StructureError::StructureError(DiagnosticKind kind, int line, int column,
                               const std::string& message)
    : std::runtime_error(locate(kind, line, column, message)),
      kind_(kind),
      line_(line),
      column_(column),
      message_(message) {}

int RunResult::exit_code() const {
  if (error > 0) return 3;
  if (fail > 0) return 1;
  if (unavailable > 0) return 2;
  return 0;
}

namespace {

// --- lexing -------------------------------------------------------------------

struct Token {
  std::string text;
  int line = 0;
  int col = 0;
};

struct TextLine {
  int no = 0;
  std::vector<Token> toks;
};

bool is_integer(const std::string& s) {
  std::size_t i = s.size() > 1 && s[0] == '-' ? 1 : 0;
  if (i >= s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

// '#' starts a comment; '{' and '}' separate even without whitespace.
std::vector<TextLine> tokenize(const std::string& text) {
  std::vector<TextLine> lines;
  int no = 1;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    TextLine line;
    line.no = no;
    std::size_t i = pos;
    while (i < eol && text[i] != '#') {
      char c = text[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
        continue;
      }
      int col = int(i - pos) + 1;
      if (c == '{' || c == '}') {
        line.toks.push_back({std::string(1, c), no, col});
        ++i;
        continue;
      }
      std::size_t start = i;
      while (i < eol && text[i] != '#' && text[i] != '{' && text[i] != '}' &&
             !std::isspace(static_cast<unsigned char>(text[i]))) {
        ++i;
      }
      line.toks.push_back({text.substr(start, i - start), no, col});
    }
    if (!line.toks.empty()) lines.push_back(std::move(line));
    if (eol == text.size()) break;
    pos = eol + 1;
    ++no;
  }
  return lines;
}

[[noreturn]] void raise(DiagnosticKind k, const Token& at, const std::string& msg) {
  throw StructureError(k, at.line, at.col, msg);
}

long long token_int(const Token& t) {
  if (!is_integer(t.text)) raise(DiagnosticKind::Parse, t, "expected an integer, got '" + t.text + "'");
  try {
    return std::stoll(t.text);
  } catch (const std::exception&) {
    raise(DiagnosticKind::Parse, t, "integer out of range: '" + t.text + "'");
  }
}

// --- directive argument shapes -------------------------------------------------

// Kind codes: S semiring, M module, m morphism, c conflation, F free module,
// i integer, g generator label.
struct VerbSpec {
  std::string head;
  char tail = 0;
  int min_tail = 0;
  bool allow_as = false;
  char as_kind = 0;
  bool allow_against = false;
};

const std::vector<std::pair<std::string, VerbSpec>>& verb_specs() {
  static const std::vector<std::pair<std::string, VerbSpec>> specs = {
      {"check-semiring", {"S", 0, 0, false, 0, false}},
      {"check-module", {"M", 0, 0, false, 0, false}},
      {"check-bimodule", {"M", 0, 0, false, 0, false}},
      {"check-morphism", {"m", 0, 0, false, 0, false}},
      {"kernel", {"m", 0, 0, true, 'M', false}},
      {"cokernel", {"m", 0, 0, true, 'M', false}},
      {"biproduct", {"MM", 0, 0, true, 'M', false}},
      {"tensor", {"MM", 0, 0, true, 'M', false}},
      {"multi-tensor", {"MM", 'M', 0, true, 'M', false}},
      {"hom", {"MMi", 0, 0, true, 'M', false}},
      {"adjunction", {"MMM", 0, 0, false, 0, false}},
      {"hom-left-exact", {"Mc", 0, 0, false, 0, false}},
      {"tensor-right-exact", {"Mc", 0, 0, false, 0, false}},
      {"conflation", {"c", 0, 0, false, 0, false}},
      {"pushout", {"mm", 0, 0, true, 'M', false}},
      {"pullback", {"mm", 0, 0, true, 'M', false}},
      {"quillen", {"", 'c', 0, false, 0, false}},
      {"ideals", {"S", 0, 0, false, 0, false}},
      {"spectrum", {"S", 0, 0, false, 0, false}},
      {"quotient", {"Si", 'i', 0, true, 'S', false}},
      {"free-module", {"Siig", 'g', 0, true, 'F', true}},
      {"extend", {"FMi", 'i', 0, true, 'm', false}},
  };
  return specs;
}

const VerbSpec* find_verb(const std::string& name) {
  for (const auto& [verb, spec] : verb_specs()) {
    if (verb == name) return &spec;
  }
  return nullptr;
}

// Trailing `as <name>` / `against <name>` options, shared between the parser
// (token form, for locations) and the runner (string form).
struct SplitArgs {
  std::vector<std::string> positional;
  std::string as;
  std::string against;
};

SplitArgs split_args(const std::vector<std::string>& args) {
  SplitArgs out;
  std::size_t k = 0;
  while (k < args.size() && args[k] != "as" && args[k] != "against") {
    out.positional.push_back(args[k]);
    ++k;
  }
  while (k + 1 < args.size()) {
    if (args[k] == "as") {
      out.as = args[k + 1];
    } else {
      out.against = args[k + 1];
    }
    k += 2;
  }
  return out;
}

// --- parser --------------------------------------------------------------------

class Parser {
 public:
  Parser(const std::string& text, std::string display, const RunLimits& limits)
      : lines_(tokenize(text)), limits_(limits) {
    out_.name = std::move(display);
  }

  StructureFile take() {
    while (i_ < lines_.size()) {
      const TextLine& line = lines_[i_];
      const Token& first = line.toks[0];
      // "conflation" doubles as a section kind and a directive; the brace decides.
      const bool braced = line.toks.size() >= 3 && line.toks[2].text == "{";
      if (first.text == "monoid" || first.text == "semiring" || first.text == "module" ||
          first.text == "morphism" || (first.text == "conflation" && braced)) {
        parse_section(first.text);
      } else if (find_verb(first.text) != nullptr) {
        parse_directive();
      } else {
        raise(DiagnosticKind::Parse, first,
              "unknown section or directive '" + first.text + "'");
      }
    }
    return std::move(out_);
  }

 private:
  enum class Kind { Monoid, Semiring, Module, Morphism, Conflation, FreeModule };

  static const char* kind_name(Kind k) {
    switch (k) {
      case Kind::Monoid: return "monoid";
      case Kind::Semiring: return "semiring";
      case Kind::Module: return "module";
      case Kind::Morphism: return "morphism";
      case Kind::Conflation: return "conflation";
      case Kind::FreeModule: return "free module";
    }
    return "?";
  }

  struct Body {
    const std::vector<TextLine>* lines = nullptr;
    std::size_t i = 0;
    bool done() const { return i >= lines->size(); }
    const TextLine& cur() const { return (*lines)[i]; }
    void next() { ++i; }
  };

  // Canonical body lines: keys indented two spaces, values four, sixteen
  // entries per value line.
  static void record_values(std::vector<std::string>& lines, const std::vector<Elem>& vals,
                            std::size_t per_line = 16) {
    for (std::size_t i = 0; i < vals.size(); i += per_line) {
      std::string line = "   ";
      for (std::size_t j = i; j < vals.size() && j < i + per_line; ++j) {
        line += " " + std::to_string(vals[j]);
      }
      lines.push_back(std::move(line));
    }
  }

  static bool all_integers(const TextLine& l) {
    for (const Token& t : l.toks) {
      if (!is_integer(t.text)) return false;
    }
    return true;
  }

  void fresh_name(const Token& t, Kind kind) {
    if (is_integer(t.text) || t.text == "as" || t.text == "against" || t.text == "{" ||
        t.text == "}") {
      raise(DiagnosticKind::Parse, t, "'" + t.text + "' cannot be used as a name");
    }
    if (names_.count(t.text)) {
      raise(DiagnosticKind::Parse, t, "name '" + t.text + "' is already declared");
    }
    names_[t.text] = kind;
  }

  void check_name(const Token& t, Kind want) {
    auto it = names_.find(t.text);
    if (it == names_.end()) {
      raise(DiagnosticKind::DanglingReference, t, "'" + t.text + "' has not been declared");
    }
    bool ok = it->second == want || (want == Kind::Module && it->second == Kind::FreeModule);
    if (!ok) {
      raise(DiagnosticKind::DanglingReference, t,
            "'" + t.text + "' is a " + std::string(kind_name(it->second)) + ", expected a " +
                kind_name(want));
    }
  }

  // Declarations may only use other declarations; names promised by an `as`
  // clause exist only once their directive has run.
  template <typename Map>
  const typename Map::mapped_type& declared(const Map& map, const Token& t, Kind want) {
    check_name(t, want);
    auto it = map.find(t.text);
    if (it == map.end()) {
      raise(DiagnosticKind::DanglingReference, t,
            "'" + t.text + "' is produced by a directive and cannot be used in a declaration");
    }
    return it->second;
  }

  // Flat value block: entries may sit on the key line and on following lines,
  // in any grouping, until `need` of them have been read.
  std::vector<Token> read_values(Body& b, const TextLine& key, std::size_t from,
                                 std::uint64_t need, const std::string& what) {
    std::vector<Token> vals;
    auto push = [&](const Token& t) {
      if (!is_integer(t.text)) {
        raise(DiagnosticKind::Parse, t, what + " entries must be integers, got '" + t.text + "'");
      }
      if (std::uint64_t(vals.size()) == need) {
        raise(DiagnosticKind::DimensionMismatch, t,
              what + " has more than " + std::to_string(need) + " entries");
      }
      vals.push_back(t);
    };
    for (std::size_t k = from; k < key.toks.size(); ++k) push(key.toks[k]);
    while (std::uint64_t(vals.size()) < need) {
      if (b.done() || !all_integers(b.cur())) {
        const Token& at = b.done() ? key.toks[0] : b.cur().toks[0];
        raise(DiagnosticKind::DimensionMismatch, at,
              what + " has " + std::to_string(vals.size()) + " entries, expected " +
                  std::to_string(need));
      }
      for (const Token& t : b.cur().toks) push(t);
      b.next();
    }
    return vals;
  }

  // Square table, one row per line; the row length fixes the carrier size.
  std::vector<std::vector<Token>> read_rows(Body& b, const TextLine& key) {
    std::vector<std::vector<Token>> rows;
    if (key.toks.size() > 1) {
      std::vector<Token> row(key.toks.begin() + 1, key.toks.end());
      for (const Token& t : row) {
        if (!is_integer(t.text)) {
          raise(DiagnosticKind::Parse, t, "table entries must be integers, got '" + t.text + "'");
        }
      }
      rows.push_back(std::move(row));
    }
    std::size_t size = rows.empty() ? 0 : rows[0].size();
    while (rows.empty() || rows.size() < size) {
      if (b.done() || !all_integers(b.cur())) {
        const Token& at = b.done() ? key.toks[0] : b.cur().toks[0];
        raise(DiagnosticKind::DimensionMismatch, at,
              "addition table has " + std::to_string(rows.size()) + " rows, expected " +
                  std::to_string(size));
      }
      rows.push_back(b.cur().toks);
      b.next();
      if (size == 0) {
        size = rows[0].size();
      } else if (rows.back().size() != size) {
        raise(DiagnosticKind::DimensionMismatch, rows.back()[0],
              "addition table row has " + std::to_string(rows.back().size()) +
                  " entries, expected " + std::to_string(size));
      }
    }
    return rows;
  }

  void parse_section(const std::string& kind) {
    const TextLine& header = lines_[i_];
    if (header.toks.size() != 3 || header.toks[2].text != "{") {
      raise(DiagnosticKind::Parse, header.toks[0], "expected '" + kind + " <name> {'");
    }
    const Token name = header.toks[1];
    ++i_;
    std::vector<TextLine> body;
    while (true) {
      if (i_ >= lines_.size()) {
        raise(DiagnosticKind::Parse, header.toks[2],
              "missing '}' for " + kind + " '" + name.text + "'");
      }
      const TextLine& l = lines_[i_];
      if (l.toks.size() == 1 && l.toks[0].text == "}") {
        ++i_;
        break;
      }
      for (const Token& t : l.toks) {
        if (t.text == "{" || t.text == "}") {
          raise(DiagnosticKind::Parse, t, "unexpected '" + t.text + "' inside a section");
        }
      }
      body.push_back(l);
      ++i_;
    }
    if (kind == "monoid") {
      parse_monoid(name, body);
    } else if (kind == "semiring") {
      parse_semiring(name, body);
    } else if (kind == "module") {
      parse_module(name, body);
    } else if (kind == "morphism") {
      parse_morphism(name, body);
    } else {
      parse_conflation(name, body);
    }
  }

  // Keys: zero <i> (default 0), labels <one per element>, table <rows>.
  void parse_monoid(const Token& name, const std::vector<TextLine>& body) {
    fresh_name(name, Kind::Monoid);
    Body b{&body, 0};
    bool have_zero = false, have_table = false, have_labels = false;
    Token zero_tok;
    std::vector<Token> label_toks;
    std::vector<std::vector<Token>> rows;
    while (!b.done()) {
      const TextLine& l = b.cur();
      const Token& key = l.toks[0];
      if (is_integer(key.text)) {
        raise(DiagnosticKind::DimensionMismatch, key,
              "unexpected value line; the preceding table is already complete");
      }
      b.next();
      if (key.text == "zero") {
        if (have_zero) raise(DiagnosticKind::Parse, key, "duplicate key 'zero'");
        if (l.toks.size() != 2) raise(DiagnosticKind::Parse, key, "'zero' takes one index");
        zero_tok = l.toks[1];
        token_int(zero_tok);
        have_zero = true;
      } else if (key.text == "labels") {
        if (have_labels) raise(DiagnosticKind::Parse, key, "duplicate key 'labels'");
        if (l.toks.size() < 2) raise(DiagnosticKind::Parse, key, "'labels' takes one label per element");
        label_toks.assign(l.toks.begin() + 1, l.toks.end());
        have_labels = true;
      } else if (key.text == "table") {
        if (have_table) raise(DiagnosticKind::Parse, key, "duplicate key 'table'");
        rows = read_rows(b, l);
        have_table = true;
      } else {
        raise(DiagnosticKind::Parse, key, "unknown key '" + key.text + "' in a monoid section");
      }
    }
    if (!have_table) {
      raise(DiagnosticKind::Parse, name, "monoid '" + name.text + "' has no addition table");
    }
    const int size = int(rows.size());
    FiniteCommMonoid m;
    m.size = size;
    m.table.reserve(std::size_t(size) * std::size_t(size));
    for (const auto& row : rows) {
      for (const Token& t : row) {
        long long v = token_int(t);
        if (v < 0 || v >= size) {
          raise(DiagnosticKind::DimensionMismatch, t,
                "entry " + t.text + " is outside the carrier [0, " + std::to_string(size) + ")");
        }
        m.table.push_back(Elem(v));
      }
    }
    if (have_zero) {
      long long z = token_int(zero_tok);
      if (z < 0 || z >= size) {
        raise(DiagnosticKind::DimensionMismatch, zero_tok,
              "zero index " + zero_tok.text + " is outside the carrier [0, " +
                  std::to_string(size) + ")");
      }
      m.zero = Elem(z);
    }
    if (have_labels) {
      if (int(label_toks.size()) != size) {
        raise(DiagnosticKind::DimensionMismatch, label_toks[0],
              "labels list has " + std::to_string(label_toks.size()) + " entries, expected " +
                  std::to_string(size));
      }
      for (const Token& t : label_toks) m.labels.push_back(t.text);
    }
    DeclRecord rec;
    rec.header = "monoid " + name.text + " {";
    rec.lines.push_back("  zero " + std::to_string(m.zero));
    if (!m.labels.empty()) {
      std::string line = "  labels";
      for (const std::string& s : m.labels) line += " " + s;
      rec.lines.push_back(std::move(line));
    }
    rec.lines.push_back("  table");
    for (int r = 0; r < size; ++r) {
      std::string line = "   ";
      for (int c = 0; c < size; ++c) {
        line += " " + std::to_string(m.table[std::size_t(r) * std::size_t(size) + std::size_t(c)]);
      }
      rec.lines.push_back(std::move(line));
    }
    out_.declarations.push_back(std::move(rec));
    out_.monoids.emplace(name.text, std::move(m));
  }

  // Either a realization recipe (base/dim/arity/gamma-inner) or explicit
  // carriers with a dense mu table (t/gamma/arity/mu).  mu needs t, gamma and
  // arity first, because they fix how many entries to read.
  void parse_semiring(const Token& name, const std::vector<TextLine>& body) {
    fresh_name(name, Kind::Semiring);
    Body b{&body, 0};
    bool have_base = false, have_dim = false, have_arity = false, gamma_inner = false;
    bool have_t = false, have_gamma = false, have_mu = false;
    BaseSemiring base;
    long long dim = 1, arity = 0;
    const FiniteCommMonoid* t_monoid = nullptr;
    const FiniteCommMonoid* g_monoid = nullptr;
    std::vector<Token> mu_vals;
    Token base_tok;
    std::string base_text, t_name, g_name;
    while (!b.done()) {
      const TextLine& l = b.cur();
      const Token& key = l.toks[0];
      if (is_integer(key.text)) {
        raise(DiagnosticKind::DimensionMismatch, key,
              "unexpected value line; the preceding table is already complete");
      }
      b.next();
      if (key.text == "base") {
        if (have_base) raise(DiagnosticKind::Parse, key, "duplicate key 'base'");
        if (l.toks.size() < 2) raise(DiagnosticKind::Parse, key, "'base' names a base semiring");
        base_tok = l.toks[1];
        if (base_tok.text == "boolean" && l.toks.size() == 2) {
          base = base_boolean();
          base_text = "boolean";
        } else if (base_tok.text == "z2" && l.toks.size() == 2) {
          base = base_z2();
          base_text = "z2";
        } else if (base_tok.text == "trunc-tropical" && l.toks.size() == 3) {
          long long k = token_int(l.toks[2]);
          if (k < 0) raise(DiagnosticKind::Parse, l.toks[2], "truncation level must be >= 0");
          base = base_trunc_tropical(int(k));
          base_text = "trunc-tropical " + std::to_string(k);
        } else {
          raise(DiagnosticKind::Parse, base_tok,
                "base must be 'boolean', 'z2', or 'trunc-tropical <k>'");
        }
        have_base = true;
      } else if (key.text == "dim") {
        if (have_dim) raise(DiagnosticKind::Parse, key, "duplicate key 'dim'");
        if (l.toks.size() != 2) raise(DiagnosticKind::Parse, key, "'dim' takes one integer");
        dim = token_int(l.toks[1]);
        if (dim < 1) raise(DiagnosticKind::Parse, l.toks[1], "dim must be >= 1");
        have_dim = true;
      } else if (key.text == "arity") {
        if (have_arity) raise(DiagnosticKind::Parse, key, "duplicate key 'arity'");
        if (l.toks.size() != 2) raise(DiagnosticKind::Parse, key, "'arity' takes one integer");
        arity = token_int(l.toks[1]);
        if (arity < 2) raise(DiagnosticKind::Parse, l.toks[1], "arity must be >= 2");
        have_arity = true;
      } else if (key.text == "gamma-inner") {
        if (l.toks.size() != 1) raise(DiagnosticKind::Parse, key, "'gamma-inner' takes no arguments");
        gamma_inner = true;
      } else if (key.text == "t") {
        if (have_t) raise(DiagnosticKind::Parse, key, "duplicate key 't'");
        if (l.toks.size() != 2) raise(DiagnosticKind::Parse, key, "'t' names a monoid");
        t_monoid = &declared(out_.monoids, l.toks[1], Kind::Monoid);
        t_name = l.toks[1].text;
        have_t = true;
      } else if (key.text == "gamma") {
        if (have_gamma) raise(DiagnosticKind::Parse, key, "duplicate key 'gamma'");
        if (l.toks.size() != 2) raise(DiagnosticKind::Parse, key, "'gamma' names a monoid");
        g_monoid = &declared(out_.monoids, l.toks[1], Kind::Monoid);
        g_name = l.toks[1].text;
        have_gamma = true;
      } else if (key.text == "mu") {
        if (have_mu) raise(DiagnosticKind::Parse, key, "duplicate key 'mu'");
        if (!have_t || !have_gamma || !have_arity) {
          raise(DiagnosticKind::Parse, key, "'mu' requires 't', 'gamma', and 'arity' to be set first");
        }
        const std::uint64_t need = ipow(std::uint64_t(t_monoid->size), int(arity)) *
                                   ipow(std::uint64_t(g_monoid->size), int(arity) - 1);
        mu_vals = read_values(b, l, 1, need, "mu table");
        have_mu = true;
      } else {
        raise(DiagnosticKind::Parse, key, "unknown key '" + key.text + "' in a semiring section");
      }
    }
    if (have_base && (have_t || have_gamma || have_mu)) {
      raise(DiagnosticKind::Parse, name, "'base' conflicts with explicit 't'/'gamma'/'mu'");
    }
    if (!have_arity) {
      raise(DiagnosticKind::Parse, name, "semiring '" + name.text + "' needs an arity");
    }
    GammaSemiring S;
    if (have_base) {
      try {
        S = build_matrix_realization(base, int(dim), int(arity), gamma_inner, limits_.max_carrier);
      } catch (const LimitError& e) {
        raise(DiagnosticKind::Limit, base_tok, e.what());
      } catch (const std::invalid_argument& e) {
        raise(DiagnosticKind::DimensionMismatch, base_tok, e.what());
      }
    } else {
      if (!have_t || !have_gamma || !have_mu) {
        raise(DiagnosticKind::Parse, name,
              "semiring '" + name.text + "' needs either 'base' or 't', 'gamma', and 'mu'");
      }
      if (have_dim) raise(DiagnosticKind::Parse, name, "'dim' is only used with 'base'");
      if (gamma_inner) raise(DiagnosticKind::Parse, name, "'gamma-inner' is only used with 'base'");
      S.T = *t_monoid;
      S.Gamma = *g_monoid;
      S.arity = int(arity);
      S.mu_table.reserve(mu_vals.size());
      for (const Token& t : mu_vals) {
        long long v = token_int(t);
        if (v < 0 || v >= t_monoid->size) {
          raise(DiagnosticKind::DimensionMismatch, t,
                "entry " + t.text + " is outside the carrier [0, " +
                    std::to_string(t_monoid->size) + ")");
        }
        S.mu_table.push_back(Elem(v));
      }
      S.provenance = "mu table '" + name.text + "'";
    }
    DeclRecord rec;
    rec.header = "semiring " + name.text + " {";
    if (have_base) {
      rec.lines.push_back("  base " + base_text);
      rec.lines.push_back("  dim " + std::to_string(dim));
      rec.lines.push_back("  arity " + std::to_string(arity));
      if (gamma_inner) rec.lines.push_back("  gamma-inner");
    } else {
      rec.lines.push_back("  arity " + std::to_string(arity));
      rec.lines.push_back("  t " + t_name);
      rec.lines.push_back("  gamma " + g_name);
      rec.lines.push_back("  mu");
      record_values(rec.lines, S.mu_table);
    }
    out_.declarations.push_back(std::move(rec));
    out_.semirings.emplace(name.text, std::make_shared<const GammaSemiring>(std::move(S)));
  }

  // One construction per module: regular <slot> | zero <slots> |
  // null <slots> (with carrier) | biproduct <M> <N> | carrier + action blocks.
  void parse_module(const Token& name, const std::vector<TextLine>& body) {
    fresh_name(name, Kind::Module);
    Body b{&body, 0};
    SemiringPtr parent;
    const FiniteCommMonoid* carrier = nullptr;
    std::string mode;
    Token mode_tok = name;
    std::vector<int> slots;
    ModulePtr bp_a, bp_b;
    std::vector<ActionSlot> actions;
    std::string parent_name, carrier_name, bp_a_name, bp_b_name;
    auto set_mode = [&](const Token& key) {
      if (!mode.empty() && mode != key.text) {
        raise(DiagnosticKind::Parse, key,
              "'" + key.text + "' conflicts with the earlier '" + mode + "' construction");
      }
      mode = key.text;
      mode_tok = key;
    };
    while (!b.done()) {
      const TextLine& l = b.cur();
      const Token& key = l.toks[0];
      if (is_integer(key.text)) {
        raise(DiagnosticKind::DimensionMismatch, key,
              "unexpected value line; the preceding table is already complete");
      }
      b.next();
      if (key.text == "parent") {
        if (parent) raise(DiagnosticKind::Parse, key, "duplicate key 'parent'");
        if (l.toks.size() != 2) raise(DiagnosticKind::Parse, key, "'parent' names a semiring");
        parent = declared(out_.semirings, l.toks[1], Kind::Semiring);
        parent_name = l.toks[1].text;
      } else if (key.text == "carrier") {
        if (carrier) raise(DiagnosticKind::Parse, key, "duplicate key 'carrier'");
        if (l.toks.size() != 2) raise(DiagnosticKind::Parse, key, "'carrier' names a monoid");
        carrier = &declared(out_.monoids, l.toks[1], Kind::Monoid);
        carrier_name = l.toks[1].text;
      } else if (key.text == "regular" || key.text == "zero" || key.text == "null") {
        set_mode(key);
        if (key.text == "regular" ? l.toks.size() != 2 : l.toks.size() < 2) {
          raise(DiagnosticKind::Parse, key,
                key.text == "regular" ? "'regular' takes one slot" : "'" + key.text + "' takes slots");
        }
        for (std::size_t k = 1; k < l.toks.size(); ++k) slots.push_back(int(token_int(l.toks[k])));
      } else if (key.text == "biproduct") {
        set_mode(key);
        if (l.toks.size() != 3) raise(DiagnosticKind::Parse, key, "'biproduct' takes two modules");
        bp_a = declared(out_.modules, l.toks[1], Kind::Module);
        bp_b = declared(out_.modules, l.toks[2], Kind::Module);
        bp_a_name = l.toks[1].text;
        bp_b_name = l.toks[2].text;
      } else if (key.text == "action") {
        set_mode(key);
        if (l.toks.size() < 2) raise(DiagnosticKind::Parse, key, "'action' takes a slot, then the table");
        if (!parent || !carrier) {
          raise(DiagnosticKind::Parse, key, "'action' requires 'parent' and 'carrier' to be set first");
        }
        ActionSlot a;
        a.slot = int(token_int(l.toks[1]));
        const std::uint64_t need =
            ipow(std::uint64_t(parent->tsize()), parent->arity - 1) *
            std::uint64_t(carrier->size) * ipow(std::uint64_t(parent->gsize()), parent->arity - 1);
        std::vector<Token> vals = read_values(b, l, 2, need, "action table");
        a.table.reserve(vals.size());
        for (const Token& t : vals) {
          long long v = token_int(t);
          if (v < 0 || v >= carrier->size) {
            raise(DiagnosticKind::DimensionMismatch, t,
                  "entry " + t.text + " is outside the carrier [0, " +
                      std::to_string(carrier->size) + ")");
          }
          a.table.push_back(Elem(v));
        }
        actions.push_back(std::move(a));
      } else {
        raise(DiagnosticKind::Parse, key, "unknown key '" + key.text + "' in a module section");
      }
    }
    if (!parent) raise(DiagnosticKind::Parse, name, "module '" + name.text + "' needs a parent");
    if (mode.empty()) {
      raise(DiagnosticKind::Parse, name,
            "module '" + name.text + "' needs a construction (regular, zero, null, biproduct, or action)");
    }
    DeclRecord rec;
    rec.header = "module " + name.text + " {";
    rec.lines.push_back("  parent " + parent_name);
    if (carrier) rec.lines.push_back("  carrier " + carrier_name);
    if (mode == "regular" || mode == "zero" || mode == "null") {
      std::string line = "  " + mode;
      for (int s : slots) line += " " + std::to_string(s);
      rec.lines.push_back(std::move(line));
    } else if (mode == "biproduct") {
      rec.lines.push_back("  biproduct " + bp_a_name + " " + bp_b_name);
    } else {
      for (const ActionSlot& a : actions) {
        rec.lines.push_back("  action " + std::to_string(a.slot));
        record_values(rec.lines, a.table);
      }
    }
    ModulePtr built;
    try {
      if (mode == "regular") {
        if (carrier) raise(DiagnosticKind::Parse, mode_tok, "'regular' does not use a carrier");
        built = regular_module(parent, slots[0]);
      } else if (mode == "zero") {
        if (carrier) raise(DiagnosticKind::Parse, mode_tok, "'zero' does not use a carrier");
        built = zero_module(parent, slots);
      } else if (mode == "null") {
        if (!carrier) raise(DiagnosticKind::Parse, mode_tok, "'null' requires a carrier");
        built = null_action_module(parent, *carrier, slots);
      } else if (mode == "biproduct") {
        if (carrier) raise(DiagnosticKind::Parse, mode_tok, "'biproduct' does not use a carrier");
        if (!same_parent(*parent, *bp_a->parent) || !same_parent(*parent, *bp_b->parent)) {
          raise(DiagnosticKind::DimensionMismatch, mode_tok,
                "biproduct factors live over a different parent");
        }
        built = biproduct(bp_a, bp_b).module;
      } else {
        built = table_module(parent, *carrier, std::move(actions), "table '" + name.text + "'");
      }
    } catch (const std::invalid_argument& e) {
      raise(DiagnosticKind::DimensionMismatch, mode_tok, e.what());
    }
    out_.declarations.push_back(std::move(rec));
    out_.modules.emplace(name.text, std::move(built));
  }

  // Keys: from, to, map; map needs the endpoints first to know its size.
  void parse_morphism(const Token& name, const std::vector<TextLine>& body) {
    fresh_name(name, Kind::Morphism);
    Body b{&body, 0};
    ModulePtr src, dst;
    std::vector<Token> map_vals;
    bool have_map = false;
    std::string src_name, dst_name;
    while (!b.done()) {
      const TextLine& l = b.cur();
      const Token& key = l.toks[0];
      if (is_integer(key.text)) {
        raise(DiagnosticKind::DimensionMismatch, key,
              "unexpected value line; the preceding table is already complete");
      }
      b.next();
      if (key.text == "from") {
        if (src) raise(DiagnosticKind::Parse, key, "duplicate key 'from'");
        if (l.toks.size() != 2) raise(DiagnosticKind::Parse, key, "'from' names a module");
        src = declared(out_.modules, l.toks[1], Kind::Module);
        src_name = l.toks[1].text;
      } else if (key.text == "to") {
        if (dst) raise(DiagnosticKind::Parse, key, "duplicate key 'to'");
        if (l.toks.size() != 2) raise(DiagnosticKind::Parse, key, "'to' names a module");
        dst = declared(out_.modules, l.toks[1], Kind::Module);
        dst_name = l.toks[1].text;
      } else if (key.text == "map") {
        if (have_map) raise(DiagnosticKind::Parse, key, "duplicate key 'map'");
        if (!src || !dst) {
          raise(DiagnosticKind::Parse, key, "'map' requires 'from' and 'to' to be set first");
        }
        map_vals = read_values(b, l, 1, std::uint64_t(src->msize()), "value table");
        have_map = true;
      } else {
        raise(DiagnosticKind::Parse, key, "unknown key '" + key.text + "' in a morphism section");
      }
    }
    if (!src || !dst || !have_map) {
      raise(DiagnosticKind::Parse, name,
            "morphism '" + name.text + "' needs 'from', 'to', and 'map'");
    }
    std::vector<Elem> map;
    map.reserve(map_vals.size());
    for (const Token& t : map_vals) {
      long long v = token_int(t);
      if (v < 0 || v >= dst->msize()) {
        raise(DiagnosticKind::DimensionMismatch, t,
              "entry " + t.text + " is outside the target carrier [0, " +
                  std::to_string(dst->msize()) + ")");
      }
      map.push_back(Elem(v));
    }
    DeclRecord rec;
    rec.header = "morphism " + name.text + " {";
    rec.lines.push_back("  from " + src_name);
    rec.lines.push_back("  to " + dst_name);
    rec.lines.push_back("  map");
    record_values(rec.lines, map);
    ModuleMorphism f;
    try {
      f = table_morphism(src, dst, std::move(map));
    } catch (const std::invalid_argument& e) {
      raise(DiagnosticKind::DimensionMismatch, name, e.what());
    }
    out_.declarations.push_back(std::move(rec));
    out_.morphisms.emplace(name.text, std::move(f));
  }

  // Keys: inflation, deflation.  Only composability is checked here; whether
  // the pair certifies is what the `conflation` directive decides.
  void parse_conflation(const Token& name, const std::vector<TextLine>& body) {
    fresh_name(name, Kind::Conflation);
    Body b{&body, 0};
    const ModuleMorphism* infl = nullptr;
    const ModuleMorphism* defl = nullptr;
    Token defl_tok = name;
    std::string infl_name, defl_name;
    while (!b.done()) {
      const TextLine& l = b.cur();
      const Token& key = l.toks[0];
      b.next();
      if (key.text == "inflation") {
        if (infl) raise(DiagnosticKind::Parse, key, "duplicate key 'inflation'");
        if (l.toks.size() != 2) raise(DiagnosticKind::Parse, key, "'inflation' names a morphism");
        infl = &declared(out_.morphisms, l.toks[1], Kind::Morphism);
        infl_name = l.toks[1].text;
      } else if (key.text == "deflation") {
        if (defl) raise(DiagnosticKind::Parse, key, "duplicate key 'deflation'");
        if (l.toks.size() != 2) raise(DiagnosticKind::Parse, key, "'deflation' names a morphism");
        defl = &declared(out_.morphisms, l.toks[1], Kind::Morphism);
        defl_name = l.toks[1].text;
        defl_tok = l.toks[1];
      } else {
        raise(DiagnosticKind::Parse, key, "unknown key '" + key.text + "' in a conflation section");
      }
    }
    if (!infl || !defl) {
      raise(DiagnosticKind::Parse, name,
            "conflation '" + name.text + "' needs 'inflation' and 'deflation'");
    }
    if (infl->target.get() != defl->source.get() && !same_module(*infl->target, *defl->source)) {
      raise(DiagnosticKind::DimensionMismatch, defl_tok,
            "the inflation's target differs from the deflation's source");
    }
    out_.conflations.emplace(name.text, Conflation{*infl, *defl});
  }

  void check_code(const Token& t, char code) {
    switch (code) {
      case 'S': check_name(t, Kind::Semiring); break;
      case 'M': check_name(t, Kind::Module); break;
      case 'm': check_name(t, Kind::Morphism); break;
      case 'c': check_name(t, Kind::Conflation); break;
      case 'F': check_name(t, Kind::FreeModule); break;
      case 'i': token_int(t); break;
      case 'g':
        if (is_integer(t.text) || t.text == "as" || t.text == "against") {
          raise(DiagnosticKind::Parse, t, "'" + t.text + "' cannot be used as a generator label");
        }
        break;
    }
  }

  static Kind kind_of_code(char code) {
    switch (code) {
      case 'S': return Kind::Semiring;
      case 'M': return Kind::Module;
      case 'F': return Kind::FreeModule;
      case 'm': return Kind::Morphism;
    }
    return Kind::Module;
  }

  void parse_directive() {
    const TextLine& l = lines_[i_];
    const Token& verb = l.toks[0];
    const VerbSpec& spec = *find_verb(verb.text);
    std::size_t k = 1;
    std::vector<Token> positional;
    while (k < l.toks.size() && l.toks[k].text != "as" && l.toks[k].text != "against") {
      positional.push_back(l.toks[k]);
      ++k;
    }
    while (k < l.toks.size()) {
      const Token& key = l.toks[k];
      if (key.text == "as" && !spec.allow_as) {
        raise(DiagnosticKind::Parse, key, "'" + verb.text + "' does not take 'as'");
      }
      if (key.text == "against" && !spec.allow_against) {
        raise(DiagnosticKind::Parse, key, "'" + verb.text + "' does not take 'against'");
      }
      if (k + 1 >= l.toks.size()) {
        raise(DiagnosticKind::Parse, key, "'" + key.text + "' needs a name");
      }
      const Token& value = l.toks[k + 1];
      if (key.text == "as") {
        fresh_name(value, kind_of_code(spec.as_kind));
      } else {
        check_name(value, Kind::Module);
      }
      k += 2;
    }
    if (positional.size() < spec.head.size() ||
        (spec.tail == 0 && positional.size() > spec.head.size()) ||
        (spec.tail != 0 && positional.size() < spec.head.size() + std::size_t(spec.min_tail))) {
      raise(DiagnosticKind::Parse, verb,
            "'" + verb.text + "' takes " + std::to_string(spec.head.size()) +
                (spec.tail != 0 ? "+ arguments" : " arguments") + " (got " +
                std::to_string(positional.size()) + ")");
    }
    for (std::size_t p = 0; p < positional.size(); ++p) {
      check_code(positional[p], p < spec.head.size() ? spec.head[p] : spec.tail);
    }
    Directive d;
    d.line = l.no;
    d.verb = verb.text;
    for (std::size_t a = 1; a < l.toks.size(); ++a) d.args.push_back(l.toks[a].text);
    out_.directives.push_back(std::move(d));
    ++i_;
  }

  std::vector<TextLine> lines_;
  std::size_t i_ = 0;
  RunLimits limits_;
  StructureFile out_;
  std::map<std::string, Kind> names_;
};

}  // namespace

StructureFile parse_structure_file(const std::string& text, const std::string& display_name,
                                   const RunLimits& limits) {
  Parser p(text, display_name, limits);
  return p.take();
}

// --- execution -------------------------------------------------------------------

namespace {

// A referenced name whose producing directive threw before registering it.
struct MissingObject {
  std::string message;
};

// A referenced name whose producing directive finished without registering
// it; the consumer mirrors the producer's verdict instead of escalating.
struct DependencyMiss {
  Verdict verdict = Verdict::Error;
  std::string reason;
  std::string message;
};

std::string render_set(const std::vector<Elem>& xs) {
  std::string out = "{";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(xs[i]);
  }
  return out + "}";
}

std::string unavailable_reason(const std::vector<std::string>& log) {
  for (const std::string& line : log) {
    if (line.find("limit") != std::string::npos) return "limit";
  }
  return "bound-exceeded";
}

std::vector<int> slot_signature(const PositionalModule& M) {
  std::vector<int> sig;
  sig.reserve(M.actions.size());
  for (const ActionSlot& a : M.actions) sig.push_back(a.slot);
  return sig;
}

class Runner {
 public:
  Runner(const StructureFile& file, const RunOptions& opts) : opts_(opts) {
    env_.semirings = file.semirings;
    env_.modules = file.modules;
    env_.morphisms = file.morphisms;
    env_.conflations = file.conflations;
    scan_.threads = std::max(1, opts.threads);
  }

  RunResult run(const StructureFile& file) {
    RunResult out;
    for (const Directive& d : file.directives) {
      DirectiveResult R;
      R.line = d.line;
      R.verb = d.verb;
      R.args = d.args;
      try {
        execute(d, R);
      } catch (const MissingObject& m) {
        R.verdict = Verdict::Error;
        R.reason = m.message;
      } catch (const DependencyMiss& dep) {
        R.verdict = dep.verdict == Verdict::Pass ? Verdict::Error : dep.verdict;
        if (R.verdict == Verdict::Fail) {
          R.report.fail({"dependency", {}, dep.message});
        } else {
          R.reason = R.verdict == Verdict::Unavailable ? dep.reason : dep.message;
          R.report.note(dep.message);
        }
      } catch (const LimitError& e) {
        R.verdict = Verdict::Unavailable;
        R.reason = "limit";
        R.report.note(e.what());
      } catch (const std::exception& e) {
        R.verdict = Verdict::Error;
        R.reason = e.what();
      }
      if (R.verdict == Verdict::Pass && !R.report.ok) R.verdict = Verdict::Fail;
      const SplitArgs sp = split_args(d.args);
      if (!sp.as.empty() && !name_registered(sp.as)) {
        env_.missing[sp.as] = {R.verdict, R.reason};
      }
      switch (R.verdict) {
        case Verdict::Pass: ++out.pass; break;
        case Verdict::Fail: ++out.fail; break;
        case Verdict::Unavailable: ++out.unavailable; break;
        case Verdict::Error: ++out.error; break;
      }
      const bool stop = opts_.fail_fast && R.verdict != Verdict::Pass;
      out.directives.push_back(std::move(R));
      if (stop) break;
    }
    return out;
  }

 private:
  struct Env {
    std::map<std::string, SemiringPtr> semirings;
    std::map<std::string, ModulePtr> modules;
    std::map<std::string, ModuleMorphism> morphisms;
    std::map<std::string, Conflation> conflations;
    std::map<std::string, FreeModuleBounded> free_modules;
    std::map<std::string, std::pair<Verdict, std::string>> missing;
  };

  bool name_registered(const std::string& name) const {
    return env_.semirings.count(name) || env_.modules.count(name) ||
           env_.morphisms.count(name) || env_.free_modules.count(name);
  }

  template <typename Map>
  const typename Map::mapped_type& fetch(const Map& map, const std::string& name,
                                         const char* what) {
    auto it = map.find(name);
    if (it == map.end()) {
      const std::string message = std::string(what) + " '" + name +
                                  "' was not produced (its directive did not complete)";
      auto mi = env_.missing.find(name);
      if (mi != env_.missing.end()) {
        throw DependencyMiss{mi->second.first, mi->second.second, message};
      }
      throw MissingObject{message};
    }
    return it->second;
  }

  SemiringPtr semiring(const std::string& n) { return fetch(env_.semirings, n, "semiring"); }
  ModulePtr module(const std::string& n) { return fetch(env_.modules, n, "module"); }
  const ModuleMorphism& morphism(const std::string& n) {
    return fetch(env_.morphisms, n, "morphism");
  }
  const Conflation& conflation(const std::string& n) {
    return fetch(env_.conflations, n, "conflation");
  }
  const FreeModuleBounded& free_mod(const std::string& n) {
    return fetch(env_.free_modules, n, "free module");
  }

  static long long to_int(const std::string& s) { return std::stoll(s); }

  // Probes for hom-set enumerations must share the parent and the action
  // shape; anything else is a shape failure, not a probe.
  std::vector<ModulePtr> probes_same_shape(const PositionalModule& like) {
    std::vector<ModulePtr> out;
    const std::vector<int> sig = slot_signature(like);
    for (const auto& [name, M] : env_.modules) {
      if (same_parent(*M->parent, *like.parent) && slot_signature(*M) == sig) out.push_back(M);
    }
    return out;
  }

  std::vector<ModulePtr> probes_same_parent(const GammaSemiring& S) {
    std::vector<ModulePtr> out;
    for (const auto& [name, M] : env_.modules) {
      if (same_parent(*M->parent, S)) out.push_back(M);
    }
    return out;
  }

  std::vector<ModuleMorphism> morphisms_over(const GammaSemiring& S) {
    std::vector<ModuleMorphism> out;
    for (const auto& [name, f] : env_.morphisms) {
      if (same_parent(*f.source->parent, S)) out.push_back(f);
    }
    return out;
  }

  static void detail(DirectiveResult& R, const std::string& key, std::uint64_t value) {
    R.details.emplace_back(key, std::to_string(value));
  }

  static void detail(DirectiveResult& R, const std::string& key, const std::string& value) {
    R.details.emplace_back(key, value);
  }

  void register_module(const SplitArgs& sp, ModulePtr M) {
    if (!sp.as.empty()) env_.modules[sp.as] = std::move(M);
  }

  void execute(const Directive& d, DirectiveResult& R) {
    const SplitArgs sp = split_args(d.args);
    const std::vector<std::string>& pos = sp.positional;
    const std::uint64_t max_hom = opts_.limits.max_hom_enumeration;
    const std::uint64_t max_classes = opts_.limits.max_tensor_classes;

    if (d.verb == "check-semiring") {
      SemiringPtr S = semiring(pos[0]);
      ValidationReport rep = validate_gamma_semiring(*S, scan_);
      if (auto w = find_asymmetry_witness(*S)) {
        rep.note("asymmetry witness: " + w->detail);
      } else {
        rep.note("the multiplication is symmetric in its arguments");
      }
      R.report.merge(rep);
      detail(R, "carrier", std::uint64_t(S->tsize()));
      detail(R, "gamma", std::uint64_t(S->gsize()));
      detail(R, "arity", std::uint64_t(S->arity));
    } else if (d.verb == "check-module") {
      ModulePtr M = module(pos[0]);
      R.report.merge(validate_module(*M, scan_));
      detail(R, "carrier", std::uint64_t(M->msize()));
      detail(R, "actions", std::uint64_t(M->actions.size()));
    } else if (d.verb == "check-bimodule") {
      ModulePtr M = module(pos[0]);
      R.report.merge(validate_bimodule(*M, scan_));
      detail(R, "carrier", std::uint64_t(M->msize()));
    } else if (d.verb == "check-morphism") {
      const ModuleMorphism& f = morphism(pos[0]);
      R.report.merge(validate_morphism(f, scan_));
      detail(R, "source", std::uint64_t(f.source->msize()));
      detail(R, "target", std::uint64_t(f.target->msize()));
    } else if (d.verb == "kernel") {
      const ModuleMorphism& f = morphism(pos[0]);
      ValidationReport v = validate_morphism(f, scan_);
      if (!v.ok) {
        R.report.merge(v);
        R.report.note("the kernel of an invalid morphism is undefined");
        return;
      }
      KernelResult k = kernel(f);
      R.report.merge(check_kernel_universal(f, k, probes_same_shape(*f.source), max_hom));
      detail(R, "kernel-size", std::uint64_t(k.module->msize()));
      register_module(sp, k.module);
    } else if (d.verb == "cokernel") {
      const ModuleMorphism& f = morphism(pos[0]);
      ValidationReport v = validate_morphism(f, scan_);
      if (!v.ok) {
        R.report.merge(v);
        R.report.note("the cokernel of an invalid morphism is undefined");
        return;
      }
      CokernelResult c = cokernel(f);
      for (const std::string& l : c.log) R.report.note(l);
      R.report.merge(c.action_check);
      detail(R, "classes", std::uint64_t(c.module->msize()));
      register_module(sp, c.module);
      if (!c.action_check.ok) {
        R.report.note("universal property skipped: the induced actions are obstructed");
        return;
      }
      R.report.merge(check_cokernel_universal(f, c, probes_same_shape(*f.target), max_hom));
    } else if (d.verb == "biproduct") {
      ModulePtr A = module(pos[0]);
      ModulePtr B = module(pos[1]);
      if (!same_parent(*A->parent, *B->parent)) {
        throw std::invalid_argument("biproduct factors live over different parents");
      }
      if (slot_signature(*A) != slot_signature(*B)) {
        throw std::invalid_argument("biproduct factors carry different action shapes");
      }
      BiproductResult bp = biproduct(A, B);
      R.report.merge(check_biproduct(bp, scan_));
      detail(R, "size", std::uint64_t(bp.module->msize()));
      register_module(sp, bp.module);
    } else if (d.verb == "tensor" || d.verb == "multi-tensor") {
      std::vector<ModulePtr> lefts;
      for (std::size_t i = 0; i + 1 < pos.size(); ++i) lefts.push_back(module(pos[i]));
      ModulePtr N = module(pos.back());
      TensorResult T = lefts.size() == 1 ? positional_tensor(lefts[0], N, max_classes)
                                         : multi_tensor(lefts, N, max_classes);
      for (const std::string& l : T.log) R.report.note(l);
      R.report.merge(T.action_check);
      detail(R, "classes", std::uint64_t(T.module->msize()));
      detail(R, "status", to_string(T.status));
      register_module(sp, T.module);
      if (T.status != BuildStatus::Complete) {
        R.verdict = Verdict::Unavailable;
        R.reason = "bound-exceeded";
        return;
      }
      std::uint64_t probes = 0;
      for (const ModulePtr& P : probes_same_parent(*N->parent)) {
        R.report.merge(check_tensor_universal(T, P, max_hom));
        ++probes;
      }
      R.report.note("universal property checked against " + std::to_string(probes) + " probes");
    } else if (d.verb == "hom") {
      ModulePtr M = module(pos[0]);
      ModulePtr P = module(pos[1]);
      HomModule H = internal_hom(M, P, int(to_int(pos[2])), max_hom);
      for (const std::string& l : H.log) R.report.note(l);
      R.report.merge(H.report);
      detail(R, "size", std::uint64_t(H.module->msize()));
      register_module(sp, H.module);
    } else if (d.verb == "adjunction") {
      ModulePtr M = module(pos[0]);
      ModulePtr N = module(pos[1]);
      ModulePtr P = module(pos[2]);
      AdjunctionReport ar =
          check_adjunction(M, N, P, morphisms_over(*P->parent), max_classes, max_hom);
      for (const std::string& l : ar.log) R.report.note(l);
      R.report.merge(ar.report);
      if (!ar.available) {
        if (R.report.ok) {
          R.verdict = Verdict::Unavailable;
          R.reason = unavailable_reason(ar.log);
        }
        return;
      }
      if (!ar.bijective && R.report.ok) {
        R.report.fail({"bijection", {Elem(ar.lhs), Elem(ar.rhs)}, "hom-set sizes differ"});
      }
      detail(R, "lhs", std::uint64_t(ar.lhs));
      detail(R, "rhs", std::uint64_t(ar.rhs));
    } else if (d.verb == "hom-left-exact") {
      ExactnessReport er = check_hom_left_exact(module(pos[0]), conflation(pos[1]), max_hom);
      for (const std::string& l : er.log) R.report.note(l);
      R.report.merge(er.report);
      if (!er.available && R.report.ok) {
        R.verdict = Verdict::Unavailable;
        R.reason = unavailable_reason(er.log);
      }
    } else if (d.verb == "tensor-right-exact") {
      ExactnessReport er =
          check_tensor_right_exact(module(pos[0]), conflation(pos[1]), max_classes, max_hom);
      for (const std::string& l : er.log) R.report.note(l);
      R.report.merge(er.report);
      if (!er.available && R.report.ok) {
        R.verdict = Verdict::Unavailable;
        R.reason = unavailable_reason(er.log);
      }
    } else if (d.verb == "conflation") {
      R.report.merge(check_conflation(conflation(pos[0]), scan_));
    } else if (d.verb == "pushout") {
      const ModuleMorphism& i = morphism(pos[0]);
      const ModuleMorphism& f = morphism(pos[1]);
      AdmissibilityVerdict vi = certify_inflation(i, scan_);
      if (!vi.admissible) {
        R.report.merge(vi.report);
        if (R.report.ok) {
          R.report.fail({"inflation", {}, "the first morphism does not certify as an inflation"});
        }
        return;
      }
      PushoutResult po = pushout(i, f);
      for (const std::string& l : po.log) R.report.note(l);
      R.report.merge(po.action_check);
      detail(R, "size", std::uint64_t(po.module->msize()));
      register_module(sp, po.module);
      if (!po.action_check.ok) return;
      R.report.merge(po.inflation_verdict.report);
      if (!po.inflation_verdict.admissible && R.report.ok) {
        R.report.fail({"conflation", {}, "the induced map does not certify as an inflation"});
      }
      R.report.merge(check_pushout_universal(po, i, f, probes_same_shape(*i.target), max_hom));
    } else if (d.verb == "pullback") {
      const ModuleMorphism& p = morphism(pos[0]);
      const ModuleMorphism& g = morphism(pos[1]);
      AdmissibilityVerdict vp = certify_deflation(p, scan_);
      if (!vp.admissible) {
        R.report.merge(vp.report);
        if (R.report.ok) {
          R.report.fail({"deflation", {}, "the first morphism does not certify as a deflation"});
        }
        return;
      }
      PullbackResult pb = pullback(p, g);
      for (const std::string& l : pb.log) R.report.note(l);
      detail(R, "size", std::uint64_t(pb.module->msize()));
      register_module(sp, pb.module);
      R.report.merge(pb.deflation_verdict.report);
      if (!pb.deflation_verdict.admissible && R.report.ok) {
        R.report.fail({"conflation", {}, "the induced map does not certify as a deflation"});
      }
      R.report.merge(check_pullback_universal(pb, p, g, probes_same_shape(*p.source), max_hom));
    } else if (d.verb == "quillen") {
      std::vector<Conflation> cs;
      if (pos.empty()) {
        for (const auto& [name, c] : env_.conflations) cs.push_back(c);
      } else {
        for (const std::string& n : pos) cs.push_back(conflation(n));
      }
      if (cs.empty()) throw std::invalid_argument("no conflations declared");
      SemiringPtr parent = cs[0].inflation.source->parent;
      for (const Conflation& c : cs) {
        if (!same_parent(*c.inflation.source->parent, *parent)) {
          throw std::invalid_argument("the conflations span different parents");
        }
      }
      QuillenReport qr = check_quillen_instance(cs, morphisms_over(*parent), scan_);
      for (const std::string& l : qr.log) R.report.note(l);
      R.report.merge(qr.report);
      detail(R, "identities", std::uint64_t(qr.identities_checked));
      detail(R, "inflation-compositions", std::uint64_t(qr.inflation_compositions));
      detail(R, "deflation-compositions", std::uint64_t(qr.deflation_compositions));
      detail(R, "pushouts", std::uint64_t(qr.pushouts_checked));
      detail(R, "pullbacks", std::uint64_t(qr.pullbacks_checked));
    } else if (d.verb == "ideals") {
      SemiringPtr S = semiring(pos[0]);
      std::vector<GammaIdeal> ideals = enumerate_ideals(*S, opts_.limits.max_carrier);
      for (const GammaIdeal& I : ideals) R.report.note("ideal: " + render_set(I.elements()));
      detail(R, "count", std::uint64_t(ideals.size()));
    } else if (d.verb == "spectrum") {
      SemiringPtr S = semiring(pos[0]);
      std::vector<GammaIdeal> primes = prime_spectrum(*S, opts_.limits.max_carrier);
      if (primes.empty()) R.report.note("the prime spectrum is empty");
      for (const GammaIdeal& P : primes) R.report.note("prime: " + render_set(P.elements()));
      detail(R, "count", std::uint64_t(primes.size()));
    } else if (d.verb == "quotient") {
      SemiringPtr S = semiring(pos[0]);
      GammaIdeal I;
      I.member.assign(std::size_t(S->tsize()), false);
      for (std::size_t i = 1; i < pos.size(); ++i) {
        long long e = to_int(pos[i]);
        if (e < 0 || e >= S->tsize()) {
          throw std::invalid_argument("ideal element " + pos[i] + " is outside the carrier");
        }
        I.member[std::size_t(e)] = true;
      }
      ValidationReport chk = check_gamma_ideal(*S, I);
      R.report.merge(chk);
      if (!chk.ok) return;
      QuotientSemiring q = quotient_semiring(*S, I);
      R.report.merge(validate_gamma_semiring(q.semiring, scan_));
      detail(R, "classes", std::uint64_t(q.semiring.tsize()));
      if (!sp.as.empty()) {
        env_.semirings[sp.as] = std::make_shared<const GammaSemiring>(std::move(q.semiring));
      }
    } else if (d.verb == "free-module") {
      SemiringPtr S = semiring(pos[0]);
      std::vector<std::string> gens(pos.begin() + 3, pos.end());
      FreeModuleBounded F = free_module(gens, S, int(to_int(pos[1])), int(to_int(pos[2])));
      for (const std::string& l : F.log) R.report.note(l);
      detail(R, "carrier", std::uint64_t(F.module->msize()));
      detail(R, "generators", std::uint64_t(F.generators.size()));
      // A truncated universe is the normal shape of a depth-bounded free
      // module; the laws and representability are certified on the bounded
      // carrier, with undefined cells skipped.
      detail(R, "status", to_string(F.status));
      if (!sp.as.empty()) {
        env_.modules[sp.as] = F.module;
        env_.free_modules[sp.as] = F;
      }
      R.report.merge(validate_module(*F.module, scan_));
      if (!sp.against.empty()) {
        R.report.merge(check_representability(F, module(sp.against), scan_, max_hom));
      }
    } else if (d.verb == "extend") {
      const FreeModuleBounded& F = free_mod(pos[0]);
      ModulePtr target = module(pos[1]);
      std::vector<Elem> phi;
      for (std::size_t i = 2; i < pos.size(); ++i) {
        long long v = to_int(pos[i]);
        if (v < 0 || v >= target->msize()) {
          throw std::invalid_argument("generator value " + pos[i] + " is outside the target carrier");
        }
        phi.push_back(Elem(v));
      }
      if (phi.size() != F.generators.size()) {
        throw std::invalid_argument("expected " + std::to_string(F.generators.size()) +
                                    " generator values, got " + std::to_string(phi.size()));
      }
      ModuleMorphism ext = extend_morphism(F, phi, target);
      R.report.merge(validate_morphism(ext, scan_));
      for (std::size_t i = 0; i < phi.size(); ++i) {
        if (ext.map[std::size_t(F.insertion[i])] != phi[i]) {
          R.report.fail({"restriction", {Elem(i)},
                         "the extension does not restrict to the generator assignment"});
        }
      }
      if (!sp.as.empty()) env_.morphisms[sp.as] = ext;
    } else {
      throw std::invalid_argument("unhandled directive '" + d.verb + "'");
    }
  }

  Env env_;
  RunOptions opts_;
  ScanOptions scan_;
};

}  // namespace

RunResult run_checks(const StructureFile& file, const RunOptions& opts) {
  Runner r(file, opts);
  return r.run(file);
}

const std::vector<std::pair<std::string, std::string>>& directive_help() {
  static const std::vector<std::pair<std::string, std::string>> help = {
      {"check-semiring",
       "check-semiring <S>: scans additivity in every argument slot, absorption by the "
       "additive zero, and agreement of all window placements of a nested application over "
       "flattened words, plus the carrier monoid laws.  Symmetry is reported as a note, "
       "never required."},
      {"check-module",
       "check-module <M>: per action, scans additivity in the module and ring slots, "
       "evaluation-path agreement over flattened module words, absorption by both zeros, "
       "and additivity in each parameter coordinate."},
      {"check-bimodule",
       "check-bimodule <M>: the per-action module laws plus the two-action requirements: "
       "the left action sits at the strictly smaller slot and the actions commute through "
       "the mixed words that contain both."},
      {"check-morphism",
       "check-morphism <f>: the map preserves zero and addition and intertwines every "
       "action of its endpoints."},
      {"kernel",
       "kernel <f> [as <K>]: builds the preimage of zero with its inclusion, then verifies "
       "the universal property exhaustively: every morphism into the source that composes "
       "to zero with f factors uniquely through the inclusion.  Probes are all declared "
       "modules with the same parent and action shape."},
      {"cokernel",
       "cokernel <f> [as <Q>]: quotients the target by the smallest additive congruence "
       "collapsing the image, checks that the actions descend to classes, and verifies the "
       "dual universal property against the declared probes."},
      {"biproduct",
       "biproduct <M> <N> [as <P>]: forms the product carrier with componentwise actions "
       "and certifies the injection/projection identities, including the split identity."},
      {"tensor",
       "tensor <M> <N> [as <T>]: builds the positional tensor as a quotient of the bounded "
       "formal-sum universe over the generator grid by zero, additivity, and balancing "
       "relations, then checks the universal property: every balanced biadditive map out "
       "of the grid factors uniquely through it.  A truncated universe is reported as "
       "unavailable, never as a verdict."},
      {"multi-tensor",
       "multi-tensor <M1> ... <Mk> <N> [as <T>]: the tensor across the full arity; the "
       "factor count must match the parent's argument count, and balancing is imposed "
       "between every adjacent factor pair."},
      {"hom",
       "hom <M> <P> <slot> [as <H>]: enumerates the validated morphisms M -> P, closes "
       "them under pointwise addition, and installs the left action by postcomposition "
       "and the right action at <slot> by precomposition through the rotated context."},
      {"adjunction",
       "adjunction <M> <N> <P>: checks that currying is a bijection between morphisms "
       "(M tensor N) -> P and N -> Hom(M, P), and that it is natural against the declared "
       "morphism probes into P."},
      {"hom-left-exact",
       "hom-left-exact <M> <c>: applies Hom(M, -) to the conflation and checks that the "
       "result is exact on the left: the induced inclusion is injective and its image is "
       "exactly the kernel of the induced deflation map."},
      {"tensor-right-exact",
       "tensor-right-exact <N> <c>: applies - tensor N to the conflation and checks "
       "right-exactness: the composite vanishes, the second induced map is surjective, "
       "and its target is the cokernel of the first."},
      {"conflation",
       "conflation <c>: certifies the declared pair as a kernel-cokernel pair: the "
       "composite is zero, the deflation's kernel is exactly the inflation's image with "
       "the inflation injective, and the comparison from the cokernel is a bijective "
       "morphism."},
      {"pushout",
       "pushout <i> <f> [as <B>]: certifies <i> as an inflation, pushes it out along <f> "
       "as a quotient of the biproduct, re-certifies the induced map as an inflation, and "
       "verifies the cocone universal property against the declared probes."},
      {"pullback",
       "pullback <p> <g> [as <B>]: certifies <p> as a deflation, pulls it back along <g> "
       "as the matching sub-biproduct, re-certifies the induced map, and verifies the "
       "cone universal property against the declared probes."},
      {"quillen",
       "quillen [<c> ...]: runs the exact-category axioms over the given conflations "
       "(all declared ones when none are named) and every declared morphism over the same "
       "parent: identity conflations certify, inflations and deflations compose, and "
       "pushouts/pullbacks preserve admissibility."},
      {"ideals",
       "ideals <S>: enumerates every subset of the carrier that contains zero, is closed "
       "under addition, and absorbs products in every argument slot."},
      {"spectrum",
       "spectrum <S>: lists the proper ideals P such that a product landing in P forces "
       "some argument into P."},
      {"quotient",
       "quotient <S> <e> ... [as <Q>]: checks the given elements form an ideal, collapses "
       "it to zero by the smallest compatible congruence, and re-checks the semiring laws "
       "on the quotient."},
      {"free-module",
       "free-module <S> <slot> <depth> <gen> ... [against <M>] [as <F>]: builds the "
       "depth-bounded free module on the generators and validates it; with 'against', "
       "also certifies that restriction to generators is a bijection from morphisms "
       "F -> M to generator assignments."},
      {"extend",
       "extend <F> <M> <v> ... [as <f>]: extends the generator assignment to a morphism "
       "from the free module, validates it, and checks that it restricts back to the "
       "assignment."},
  };
  return help;
}

std::string format_reference() {
  return
      "Structure files are line-oriented; '#' starts a comment.  Declarations\n"
      "are sections of the form '<kind> <name> { ... }' with one key per line;\n"
      "directives are single lines.  Every name must be declared before it is\n"
      "referenced.  Tables are written as whitespace-separated element indices\n"
      "and may wrap across lines; their sizes are fixed by the declared\n"
      "carriers, and any mismatch is rejected with its location.\n"
      "\n"
      "Sections:\n"
      "  monoid <name> {            commutative addition on {0..k-1}\n"
      "    zero <i>                 additive zero (default 0)\n"
      "    labels <a> <b> ...       optional display names\n"
      "    table                    k rows of k entries; the first row sets k\n"
      "      0 1\n"
      "      1 1\n"
      "  }\n"
      "  semiring <name> {          either a realization recipe:\n"
      "    base boolean             boolean | z2 | trunc-tropical <k>\n"
      "    dim <d>                  matrix dimension (default 1)\n"
      "    arity <n>                argument count of the product\n"
      "    gamma-inner              scalars between factors, not leading\n"
      "  }                          or explicit tables:\n"
      "  semiring <name> {\n"
      "    arity <n>\n"
      "    t <monoid>               additive carrier\n"
      "    gamma <monoid>           parameter carrier\n"
      "    mu <values>              |T|^n * |Gamma|^(n-1) entries\n"
      "  }\n"
      "  module <name> {\n"
      "    parent <semiring>\n"
      "    regular <slot>           or: zero <slots>, null <slots> (with\n"
      "    carrier <monoid>         carrier), biproduct <M> <N>, or explicit\n"
      "    action <slot> <values>   action tables (one per slot, ascending)\n"
      "  }\n"
      "  morphism <name> { from <M>  to <N>  map <values> }\n"
      "  conflation <name> { inflation <f>  deflation <p> }\n"
      "\n"
      "Directives (run in file order):\n"
      "  check-semiring S | check-module M | check-bimodule M | check-morphism f\n"
      "  kernel f [as K] | cokernel f [as Q] | biproduct M N [as P]\n"
      "  tensor M N [as T] | multi-tensor M1 ... Mk N [as T] | hom M P j [as H]\n"
      "  adjunction M N P | hom-left-exact M c | tensor-right-exact N c\n"
      "  conflation c | pushout i f [as B] | pullback p g [as B] | quillen [c ...]\n"
      "  ideals S | spectrum S | quotient S e ... [as Q]\n"
      "  free-module S slot depth g ... [against M] [as F] | extend F M v ... [as f]\n"
      "\n"
      "Names produced by 'as' are usable by later directives.  Exit status:\n"
      "0 all directives pass, 1 any fail, 2 any unavailable, 3 structural error.\n";
}

}  // namespace gammalab
