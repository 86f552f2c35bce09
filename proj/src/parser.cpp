#include "most/parser.hpp"

#include <cassert>
#include <cctype>
#include <unordered_map>
#include <vector>

namespace most {

namespace {

enum class Tok {
  Ident,
  LParen,
  RParen,
  LBrace,
  RBrace,
  LBracket,
  RBracket,
  Comma,
  Colon,
  Semi,
  Dot,
  Eq,
  Turnstile,  // |- or ⊢
  ParOpen,    // |[
  ParClose,   // ]|
  Bar,        // |
  Plus,
  Amp,
  Star,
  Lolly,   // -o
  Arrow,   // ->
  DArrow,  // =>
  RecvArrow,  // <-
  End,
};

struct Token {
  Tok kind;
  std::string text;
  Pos pos;
};

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '$';
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto push = [&](Tok k, std::string text, Pos p) { out.push_back({k, std::move(text), p}); };
  while (i < src.size()) {
    char c = src[i];
    Pos pos{line, col};
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++col;
      ++i;
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') ++i;
      continue;
    }
    // UTF-8 turnstile
    if (static_cast<unsigned char>(c) == 0xE2 && i + 2 < src.size() &&
        static_cast<unsigned char>(src[i + 1]) == 0x8A &&
        static_cast<unsigned char>(src[i + 2]) == 0xA2) {
      push(Tok::Turnstile, "|-", pos);
      i += 3;
      col += 1;
      continue;
    }
    if (ident_char(c)) {
      size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      push(Tok::Ident, std::string(src.substr(i, j - i)), pos);
      col += static_cast<int>(j - i);
      i = j;
      continue;
    }
    auto two = [&](char a, char b) {
      return c == a && i + 1 < src.size() && src[i + 1] == b;
    };
    if (two('|', '-')) { push(Tok::Turnstile, "|-", pos); i += 2; col += 2; continue; }
    if (two('|', '[')) { push(Tok::ParOpen, "|[", pos); i += 2; col += 2; continue; }
    if (two(']', '|')) { push(Tok::ParClose, "]|", pos); i += 2; col += 2; continue; }
    if (two('=', '>')) { push(Tok::DArrow, "=>", pos); i += 2; col += 2; continue; }
    if (two('-', '>')) { push(Tok::Arrow, "->", pos); i += 2; col += 2; continue; }
    if (two('<', '-')) { push(Tok::RecvArrow, "<-", pos); i += 2; col += 2; continue; }
    if (two('-', 'o') && (i + 2 >= src.size() || !ident_char(src[i + 2]))) {
      push(Tok::Lolly, "-o", pos);
      i += 2;
      col += 2;
      continue;
    }
    switch (c) {
      case '(': push(Tok::LParen, "(", pos); break;
      case ')': push(Tok::RParen, ")", pos); break;
      case '{': push(Tok::LBrace, "{", pos); break;
      case '}': push(Tok::RBrace, "}", pos); break;
      case '[': push(Tok::LBracket, "[", pos); break;
      case ']': push(Tok::RBracket, "]", pos); break;
      case ',': push(Tok::Comma, ",", pos); break;
      case ':': push(Tok::Colon, ":", pos); break;
      case ';': push(Tok::Semi, ";", pos); break;
      case '.': push(Tok::Dot, ".", pos); break;
      case '=': push(Tok::Eq, "=", pos); break;
      case '|': push(Tok::Bar, "|", pos); break;
      case '+': push(Tok::Plus, "+", pos); break;
      case '&': push(Tok::Amp, "&", pos); break;
      case '*': push(Tok::Star, "*", pos); break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", pos);
    }
    ++i;
    ++col;
  }
  out.push_back({Tok::End, "", Pos{line, col}});
  return out;
}

bool is_keyword(const std::string& s) {
  return s == "proc" || s == "type" || s == "close" || s == "wait" || s == "case" ||
         s == "send" || s == "recv" || s == "new" || s == "in" || s == "CASE" ||
         s == "chan";
}

// Channel scope stack; ambient entries are visible to types but may not be
// used by processes.
struct Scope {
  struct Entry {
    std::string name;
    Chan chan;
    bool ambient;
  };
  std::vector<Entry> entries;

  void push(const std::string& name, Chan c, bool ambient) {
    entries.push_back({name, c, ambient});
  }
  void pop(size_t n) { entries.resize(entries.size() - n); }
  size_t mark() const { return entries.size(); }
  void reset(size_t m) { entries.resize(m); }
  const Entry* find(const std::string& name) const {
    for (auto it = entries.rbegin(); it != entries.rend(); ++it)
      if (it->name == name) return &*it;
    return nullptr;
  }
};

struct Parser {
  std::vector<Token> toks;
  size_t pos = 0;
  Program& prog;
  Scope scope;
  std::string current_abbrev;  // nonempty while parsing a `type` body

  explicit Parser(Program& p) : prog(p) {}

  const Token& peek(size_t k = 0) const {
    size_t i = pos + k;
    return i < toks.size() ? toks[i] : toks.back();
  }
  const Token& next() {
    const Token& t = toks[pos];
    if (t.kind != Tok::End) ++pos;
    return t;
  }
  bool at(Tok k) const { return peek().kind == k; }
  bool at_ident(const char* kw) const {
    return peek().kind == Tok::Ident && peek().text == kw;
  }
  const Token& expect(Tok k, const char* what) {
    if (!at(k)) throw ParseError(std::string("expected ") + what + ", found '" + peek().text + "'", peek().pos);
    return next();
  }
  std::string expect_name(const char* what) {
    if (!at(Tok::Ident) || is_keyword(peek().text))
      throw ParseError(std::string("expected ") + what + ", found '" + peek().text + "'", peek().pos);
    return next().text;
  }

  Chan resolve_chan(const std::string& name, Pos p, bool in_process) {
    const Scope::Entry* e = scope.find(name);
    if (!e) throw ScopeError("unbound channel '" + name + "'", p);
    if (in_process && e->ambient)
      throw WfError("ambient channel '" + name + "' may not be used by the process", p);
    return e->chan;
  }

  // ---------- types ----------

  // Skips one balanced token group starting at an opener.
  void skip_balanced() {
    Tok open = peek().kind;
    if (open != Tok::LParen && open != Tok::LBrace && open != Tok::LBracket) {
      next();
      return;
    }
    Pos p = peek().pos;
    next();
    int depth = 1;
    while (depth > 0) {
      if (at(Tok::End)) throw ParseError("unbalanced delimiter", p);
      Tok k = next().kind;
      if (k == Tok::LParen || k == Tok::LBrace || k == Tok::LBracket) ++depth;
      if (k == Tok::RParen || k == Tok::RBrace || k == Tok::RBracket) --depth;
    }
  }

  // Skips one type atom (no trailing * / -o).
  void skip_type_atom() {
    if (at(Tok::Plus) || at(Tok::Amp)) {
      next();
      skip_balanced();
      return;
    }
    if (at_ident("CASE")) {
      next();
      next();  // subject
      skip_balanced();
      return;
    }
    if (at(Tok::LParen)) {
      skip_balanced();
      return;
    }
    next();  // "1" or abbreviation name
  }

  // Skips one transmission factor: `( name : type )` or a plain type atom.
  // Returns the binder name if the factor is in binder form.
  std::optional<std::string> skip_tfactor() {
    if (at(Tok::LParen) && peek(1).kind == Tok::Ident && peek(2).kind == Tok::Colon) {
      next();
      std::string binder = next().text;
      next();  // ':'
      // skip type up to the matching ')'
      int depth = 0;
      Pos p = peek().pos;
      while (true) {
        if (at(Tok::End)) throw ParseError("unbalanced '('", p);
        Tok k = peek().kind;
        if (k == Tok::LParen || k == Tok::LBrace || k == Tok::LBracket) ++depth;
        if (k == Tok::RParen || k == Tok::RBrace || k == Tok::RBracket) {
          if (depth == 0 && k == Tok::RParen) {
            next();
            return binder;
          }
          --depth;
        }
        next();
      }
    }
    skip_type_atom();
    return std::nullopt;
  }

  TypeP refresh_binders(const TypeP& t) {
    switch (t->kind) {
      case TypeKind::One:
        return t;
      case TypeKind::IChoice:
      case TypeKind::EChoice:
      case TypeKind::CaseLabel: {
        std::vector<std::pair<Lab, TypeP>> bs;
        for (auto& [l, b] : t->branches) bs.emplace_back(l, refresh_binders(b));
        if (t->kind == TypeKind::CaseLabel) return t_case_label(t->subj, std::move(bs));
        return t_choice(t->kind, std::move(bs));
      }
      case TypeKind::Tensor:
      case TypeKind::Lolly: {
        Chan x = prog.names.fresh_chan(prog.names.chan_display(t->bind1));
        Chan y = prog.names.fresh_chan(prog.names.chan_display(t->bind2));
        TypeP a = refresh_binders(subst_chan(t->left, t->bind2, y));
        TypeP b = refresh_binders(subst_chan(t->right, t->bind1, x));
        auto mk = (t->kind == TypeKind::Tensor) ? t_tensor : t_lolly;
        return mk(x, std::move(a), y, std::move(b));
      }
      case TypeKind::CaseClose:
        return t_case_close(t->subj, refresh_binders(t->left));
      case TypeKind::CaseChan: {
        Chan x = prog.names.fresh_chan(prog.names.chan_display(t->bind1));
        return t_case_chan(t->subj, x, refresh_binders(subst_chan(t->left, t->bind1, x)));
      }
    }
    return t;
  }

  TypeP parse_type_atom() {
    Pos p = peek().pos;
    if (at(Tok::Plus) || at(Tok::Amp)) {
      TypeKind k = at(Tok::Plus) ? TypeKind::IChoice : TypeKind::EChoice;
      next();
      expect(Tok::LBrace, "'{'");
      std::vector<std::pair<Lab, TypeP>> bs;
      std::set<int32_t> seen;
      if (at(Tok::RBrace)) throw WfError("empty choice type", p);
      while (true) {
        std::string lt = expect_name("label");
        Lab l = prog.names.label(lt);
        if (!seen.insert(l.id).second) throw WfError("duplicate label '" + lt + "'", p);
        expect(Tok::Colon, "':'");
        bs.emplace_back(l, parse_type());
        if (at(Tok::Comma)) {
          next();
          continue;
        }
        break;
      }
      expect(Tok::RBrace, "'}'");
      return t_choice(k, std::move(bs));
    }
    if (at_ident("CASE")) {
      next();
      std::string subj_name = expect_name("channel");
      Chan subj = resolve_chan(subj_name, p, false);
      expect(Tok::LBrace, "'{'");
      if (at_ident("close")) {
        next();
        expect(Tok::DArrow, "'=>'");
        TypeP body = parse_type();
        expect(Tok::RBrace, "'}'");
        return t_case_close(subj, body);
      }
      if (at_ident("chan")) {
        next();
        std::string bn = expect_name("binder");
        Chan b = prog.names.fresh_chan(bn);
        expect(Tok::DArrow, "'=>'");
        size_t m = scope.mark();
        scope.push(bn, b, false);
        TypeP body = parse_type();
        scope.reset(m);
        expect(Tok::RBrace, "'}'");
        return t_case_chan(subj, b, body);
      }
      std::vector<std::pair<Lab, TypeP>> bs;
      std::set<int32_t> seen;
      if (at(Tok::RBrace)) throw WfError("empty CASE", p);
      while (true) {
        std::string lt = expect_name("label");
        Lab l = prog.names.label(lt);
        if (!seen.insert(l.id).second) throw WfError("duplicate label '" + lt + "'", p);
        expect(Tok::DArrow, "'=>'");
        bs.emplace_back(l, parse_type());
        if (at(Tok::Bar) && peek(1).kind != Tok::LBracket) {
          next();
          continue;
        }
        break;
      }
      expect(Tok::RBrace, "'}'");
      return t_case_label(subj, std::move(bs));
    }
    if (at(Tok::LParen)) {
      next();
      TypeP t = parse_type();
      expect(Tok::RParen, "')'");
      return t;
    }
    if (at(Tok::Ident)) {
      std::string name = next().text;
      if (name == "1") return t_one();
      if (name == current_abbrev)
        throw WfError("cyclic type abbreviation '" + name + "'", p);
      auto it = prog.type_abbrevs.find(name);
      if (it == prog.type_abbrevs.end())
        throw ScopeError("unknown type abbreviation '" + name + "'", p);
      return refresh_binders(it->second);
    }
    throw ParseError("expected a type, found '" + peek().text + "'", p);
  }

  // type := tfactor [ ("*" | "-o") tfactor ]
  TypeP parse_type() {
    Pos start_pos = peek().pos;
    size_t lhs_start = pos;
    std::optional<std::string> binder_l = skip_tfactor();
    if (!at(Tok::Star) && !at(Tok::Lolly)) {
      if (binder_l)
        throw ParseError("binder form '(x: A)' must be followed by '*' or '-o'", start_pos);
      pos = lhs_start;
      return parse_type_atom();
    }
    TypeKind k = at(Tok::Star) ? TypeKind::Tensor : TypeKind::Lolly;
    next();
    size_t rhs_start = pos;
    std::optional<std::string> binder_r = skip_tfactor();
    if (at(Tok::Star) || at(Tok::Lolly))
      throw ParseError("parenthesize nested channel-transmission types", peek().pos);
    size_t end = pos;

    Chan x = prog.names.fresh_chan(binder_l.value_or("_x"));
    Chan y = prog.names.fresh_chan(binder_r.value_or("_y"));

    auto parse_component = [&](size_t at_pos, const std::optional<std::string>& own_binder,
                               const std::optional<std::string>& other_name, Chan other) {
      pos = at_pos;
      size_t m = scope.mark();
      if (other_name) scope.push(*other_name, other, false);
      TypeP t;
      if (own_binder) {
        expect(Tok::LParen, "'('");
        next();  // binder name
        expect(Tok::Colon, "':'");
        t = parse_type();
        expect(Tok::RParen, "')'");
      } else {
        t = parse_type_atom();
      }
      scope.reset(m);
      return t;
    };

    // lhs component A: carrier binder y in scope; rhs component B: x in scope
    TypeP a = parse_component(lhs_start, binder_l, binder_r, y);
    TypeP b = parse_component(rhs_start, binder_r, binder_l, x);
    pos = end;
    return (k == TypeKind::Tensor) ? t_tensor(x, a, y, b) : t_lolly(x, a, y, b);
  }

  // ---------- processes ----------

  ProcP parse_process() {
    ProcP lhs = parse_prefix();
    while (at(Tok::ParOpen)) {
      Pos p = peek().pos;
      next();
      std::string cut = expect_name("channel");
      Chan a = resolve_chan(cut, p, true);
      expect(Tok::ParClose, "']|'");
      ProcP rhs = parse_prefix();
      auto fl = free_channels(lhs);
      auto fr = free_channels(rhs);
      std::set<Chan> inter;
      for (Chan c : fl)
        if (fr.count(c)) inter.insert(c);
      if (inter != std::set<Chan>{a})
        throw WfError("composed processes must share exactly the cut channel '" + cut + "'", p);
      lhs = p_par(a, lhs, rhs, p);
    }
    return lhs;
  }

  ProcP parse_prefix() {
    Pos p = peek().pos;
    if (at(Tok::LParen)) {
      next();
      ProcP q = parse_process();
      expect(Tok::RParen, "')'");
      return q;
    }
    if (at_ident("close")) {
      next();
      Chan a = resolve_chan(expect_name("channel"), p, true);
      return p_close(a, p);
    }
    if (at_ident("wait")) {
      next();
      std::string name = expect_name("channel");
      Chan a = resolve_chan(name, p, true);
      expect(Tok::Semi, "';'");
      ProcP q = parse_process();
      if (free_channels(q).count(a))
        throw WfError("channel '" + name + "' must not appear free after 'wait'", p);
      return p_wait(a, q, p);
    }
    if (at_ident("case")) {
      next();
      Chan a = resolve_chan(expect_name("channel"), p, true);
      expect(Tok::LBrace, "'{'");
      std::vector<std::pair<Lab, ProcP>> bs;
      std::set<int32_t> seen;
      if (at(Tok::RBrace)) throw WfError("empty case", p);
      while (true) {
        std::string lt = expect_name("label");
        Lab l = prog.names.label(lt);
        if (!seen.insert(l.id).second) throw WfError("duplicate label '" + lt + "'", p);
        expect(Tok::DArrow, "'=>'");
        bs.emplace_back(l, parse_process());
        if (at(Tok::Bar) && peek(1).kind != Tok::LBracket) {
          next();
          continue;
        }
        break;
      }
      expect(Tok::RBrace, "'}'");
      return p_recv_label(a, std::move(bs), p);
    }
    if (at_ident("send")) {
      next();
      Chan a = resolve_chan(expect_name("channel"), p, true);
      expect(Tok::LParen, "'('");
      std::string bn = expect_name("binder");
      Chan b = prog.names.fresh_chan(bn);
      expect(Tok::Arrow, "'->'");
      size_t m = scope.mark();
      scope.push(bn, b, false);
      ProcP p1 = parse_process();
      scope.reset(m);
      expect(Tok::RParen, "')'");
      expect(Tok::Semi, "';'");
      ProcP q = parse_process();
      auto f1 = free_channels(p1);
      f1.erase(b);
      auto f2 = free_channels(q);
      for (Chan c : f1)
        if (f2.count(c))
          throw WfError("the spawned process and the continuation of 'send' must not share channels", p);
      return p_send_chan(a, b, p1, q, p);
    }
    if (at_ident("recv")) {
      next();
      std::string bn = expect_name("binder");
      Chan b = prog.names.fresh_chan(bn);
      expect(Tok::RecvArrow, "'<-'");
      Chan a = resolve_chan(expect_name("channel"), p, true);
      size_t m = scope.mark();
      scope.push(bn, b, false);
      expect(Tok::Semi, "';'");
      ProcP q = parse_process();
      scope.reset(m);
      return p_recv_chan(b, a, q, p);
    }
    if (at_ident("new")) {
      next();
      expect(Tok::LParen, "'('");
      // pre-scan binding names so their types may refer to each other
      size_t body_start = pos;
      std::vector<std::string> names;
      {
        while (true) {
          names.push_back(expect_name("channel"));
          expect(Tok::Colon, "':'");
          int depth = 0;
          while (true) {
            Tok k = peek().kind;
            if (k == Tok::End) throw ParseError("unbalanced 'new'", p);
            if (k == Tok::LParen || k == Tok::LBrace || k == Tok::LBracket) ++depth;
            if (k == Tok::RParen || k == Tok::RBrace || k == Tok::RBracket) {
              if (depth == 0) break;
              --depth;
            }
            if (k == Tok::Comma && depth == 0) break;
            next();
          }
          if (at(Tok::Comma)) {
            next();
            continue;
          }
          break;
        }
      }
      expect(Tok::RParen, "')'");
      size_t after = pos;
      size_t m = scope.mark();
      std::vector<std::pair<Chan, TypeP>> binds;
      std::set<std::string> seen;
      for (auto& n : names) {
        if (!seen.insert(n).second) throw WfError("duplicate channel '" + n + "' in new", p);
        Chan c = prog.names.fresh_chan(n);
        scope.push(n, c, false);
        binds.emplace_back(c, nullptr);
      }
      pos = body_start;
      for (size_t i = 0; i < names.size(); ++i) {
        next();  // name
        next();  // ':'
        binds[i].second = parse_type();
        if (at(Tok::Comma)) next();
      }
      pos = after;
      if (!at_ident("in")) throw ParseError("expected 'in'", peek().pos);
      next();
      ProcP body = parse_process();
      scope.reset(m);
      return p_new(std::move(binds), body, p);
    }
    if (at(Tok::Ident) && peek(1).kind == Tok::Dot) {
      Chan a = resolve_chan(next().text, p, true);
      next();  // '.'
      std::string lt = expect_name("label");
      Lab k = prog.names.label(lt);
      expect(Tok::Semi, "';'");
      return p_send_label(a, k, parse_process(), p);
    }
    throw ParseError("expected a process, found '" + peek().text + "'", p);
  }

  // ---------- declarations ----------

  struct CtxNames {
    std::vector<std::string> names;
    size_t body_start;
  };

  // Pre-scan `name : type , ...` up to the closing token, collecting names.
  CtxNames scan_ctx(Tok closer) {
    CtxNames out;
    out.body_start = pos;
    if (at(closer)) return out;
    while (true) {
      out.names.push_back(expect_name("channel"));
      expect(Tok::Colon, "':'");
      int depth = 0;
      while (true) {
        Tok k = peek().kind;
        if (k == Tok::End) throw ParseError("unbalanced context", peek().pos);
        if (k == Tok::LParen || k == Tok::LBrace || k == Tok::LBracket) ++depth;
        if (k == Tok::RParen || k == Tok::RBrace || k == Tok::RBracket) {
          if (depth == 0) break;
          --depth;
        }
        if (k == Tok::Comma && depth == 0) break;
        next();
      }
      if (at(Tok::Comma)) {
        next();
        continue;
      }
      break;
    }
    return out;
  }

  Ctx reparse_ctx(const CtxNames& scanned, const std::vector<Chan>& chans) {
    Ctx out;
    if (scanned.names.empty()) return out;
    size_t save = pos;
    pos = scanned.body_start;
    for (size_t i = 0; i < scanned.names.size(); ++i) {
      next();  // name
      next();  // ':'
      out.add(chans[i], parse_type());
      if (at(Tok::Comma)) next();
    }
    pos = save;
    return out;
  }

  void parse_decl() {
    Pos p = peek().pos;
    next();  // 'proc'
    std::string name = expect_name("process name");
    if (prog.find(name)) throw WfError("duplicate process declaration '" + name + "'", p);

    CtxNames pi_names{{}, pos};
    if (at(Tok::LBracket)) {
      next();
      pi_names = scan_ctx(Tok::RBracket);
      expect(Tok::RBracket, "']'");
    }
    expect(Tok::LParen, "'('");
    CtxNames delta_names = scan_ctx(Tok::RParen);
    expect(Tok::RParen, "')'");
    CtxNames iota_names{{}, pos};
    if (at(Tok::LBrace)) {
      next();
      iota_names = scan_ctx(Tok::RBrace);
      expect(Tok::RBrace, "'}'");
    }
    expect(Tok::Turnstile, "'|-'");
    std::string provided_name = expect_name("channel");
    expect(Tok::Colon, "':'");
    size_t ptype_start = pos;
    skip_tfactor();
    if (at(Tok::Star) || at(Tok::Lolly)) {
      next();
      skip_tfactor();
    }
    size_t ptype_end = pos;
    expect(Tok::Eq, "'='");

    // introduce every interface channel, then re-parse the types
    size_t m = scope.mark();
    std::set<std::string> header_names;
    auto intro = [&](const std::vector<std::string>& ns, bool ambient) {
      std::vector<Chan> cs;
      for (auto& n : ns) {
        if (!header_names.insert(n).second)
          throw WfError("duplicate channel '" + n + "' in interface of '" + name + "'", p);
        Chan c = prog.names.fresh_chan(n);
        scope.push(n, c, ambient);
        cs.push_back(c);
      }
      return cs;
    };
    auto pi_chans = intro(pi_names.names, true);
    auto delta_chans = intro(delta_names.names, false);
    auto iota_chans = intro(iota_names.names, false);
    if (!header_names.insert(provided_name).second)
      throw WfError("duplicate channel '" + provided_name + "' in interface of '" + name + "'", p);
    Chan provided = prog.names.fresh_chan(provided_name);
    scope.push(provided_name, provided, false);

    Decl d;
    d.name = name;
    d.pos = p;
    d.spec.ambient = reparse_ctx(pi_names, pi_chans);
    Interface iface;
    iface.used = reparse_ctx(delta_names, delta_chans);
    iface.internal = reparse_ctx(iota_names, iota_chans);
    iface.provided = provided;
    {
      size_t save = pos;
      pos = ptype_start;
      iface.ptype = parse_type();
      if (pos != ptype_end)
        throw ParseError("malformed provided type", toks[ptype_start].pos);
      pos = save;
    }
    d.spec.interfaces.push_back(std::move(iface));

    try {
      wf_spec(d.spec, prog.names);
    } catch (WfError& e) {
      throw WfError(e.what(), p);
    }

    d.body = parse_process();
    scope.reset(m);

    // linearity of the interface
    const Interface& ifc = d.spec.interfaces[0];
    std::set<Chan> want;
    for (auto& [c, t] : ifc.used.items) want.insert(c);
    for (auto& [c, t] : ifc.internal.items) want.insert(c);
    want.insert(ifc.provided);
    auto have = free_channels(d.body);
    for (Chan c : want)
      if (!have.count(c))
        throw WfError("declared channel '" + prog.names.chan_display(c) +
                          "' is not used by process '" + name + "'",
                      p);
    for (Chan c : have)
      if (!want.count(c))
        throw WfError("process '" + name + "' uses undeclared channel '" +
                          prog.names.chan_display(c) + "'",
                      p);

    prog.decls.push_back(std::move(d));
  }

  void parse_abbrev() {
    Pos p = peek().pos;
    next();  // 'type'
    std::string name = expect_name("type name");
    if (prog.type_abbrevs.count(name))
      throw WfError("duplicate type abbreviation '" + name + "'", p);
    expect(Tok::Eq, "'='");
    current_abbrev = name;
    TypeP t = parse_type();
    current_abbrev.clear();
    if (!free_channels(t).empty())
      throw ScopeError("type abbreviation '" + name + "' must not mention channels", p);
    prog.type_abbrevs.emplace(name, std::move(t));
  }

  void parse_all(std::string_view src) {
    toks = lex(src);
    pos = 0;
    while (!at(Tok::End)) {
      if (at_ident("type")) {
        parse_abbrev();
      } else if (at_ident("proc")) {
        parse_decl();
      } else {
        throw ParseError("expected 'type' or 'proc', found '" + peek().text + "'", peek().pos);
      }
    }
  }
};

}  // namespace

void parse_into(Program& prog, std::string_view source) {
  Parser parser(prog);
  parser.parse_all(source);
}

Program parse_program(std::string_view source) {
  Program prog;
  parse_into(prog, source);
  return prog;
}

}  // namespace most
