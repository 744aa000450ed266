#include "cmdkit/dsl.hpp"

#include <cctype>
#include <sstream>

namespace cmdkit {

namespace {

enum class Tok { Ident, String, LBrace, RBrace, Colon, Dot, Question, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourceSpan span;
};

class Lexer {
 public:
  Lexer(const std::string& text, std::string file)
      : text_(text), file_(std::move(file)) {
    advance();
  }

  const Token& peek() const { return current_; }

  Token take() {
    Token t = current_;
    advance();
    return t;
  }

 private:
  void advance() {
    skip_ws_and_comments();
    current_.span = here();
    if (pos_ >= text_.size()) {
      current_.kind = Tok::End;
      current_.text = "end of input";
      return;
    }
    char c = text_[pos_];
    if (c == '{' || c == '}' || c == ':' || c == '.' || c == '?') {
      bump();
      current_.text = std::string(1, c);
      current_.kind = c == '{'   ? Tok::LBrace
                      : c == '}' ? Tok::RBrace
                      : c == ':' ? Tok::Colon
                      : c == '.' ? Tok::Dot
                                 : Tok::Question;
      return;
    }
    if (c == '"') {
      bump();
      std::string s;
      while (pos_ < text_.size() && text_[pos_] != '"') {
        if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) bump();
        s.push_back(text_[pos_]);
        bump();
      }
      if (pos_ >= text_.size())
        throw ParseError(current_.span, "closing '\"'", "end of input");
      bump();
      current_.kind = Tok::String;
      current_.text = std::move(s);
      return;
    }
    if (c == '<') {
      // Constructor selector token, e.g. <init>.
      std::string s(1, c);
      bump();
      while (pos_ < text_.size() && text_[pos_] != '>') {
        s.push_back(text_[pos_]);
        bump();
      }
      if (pos_ >= text_.size())
        throw ParseError(current_.span, "closing '>'", "end of input");
      s.push_back('>');
      bump();
      current_.kind = Tok::Ident;
      current_.text = std::move(s);
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string s;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '_')) {
        s.push_back(text_[pos_]);
        bump();
      }
      current_.kind = Tok::Ident;
      current_.text = std::move(s);
      return;
    }
    throw ParseError(here(), "identifier or punctuation",
                     "'" + std::string(1, c) + "'");
  }

  void skip_ws_and_comments() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') bump();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        bump();
      } else {
        break;
      }
    }
  }

  SourceSpan here() const { return {file_, line_, col_}; }

  void bump() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  const std::string& text_;
  std::string file_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  Token current_;
};

class Parser {
 public:
  Parser(const std::string& text, const std::string& file)
      : lex_(text, file) {}

  ProgramModel parse() {
    ProgramModel model;
    while (lex_.peek().kind != Tok::End) {
      expect_keyword("class");
      model.classes.push_back(parse_class());
    }
    return model;
  }

 private:
  ClassDef parse_class() {
    ClassDef cls;
    cls.name = expect_ident("class name");
    if (at_keyword("extends")) {
      lex_.take();
      cls.superclass = expect_ident("superclass name");
    }
    if (at_keyword("abstract")) {
      lex_.take();
      cls.is_abstract = true;
    }
    expect(Tok::LBrace, "'{'");
    while (lex_.peek().kind != Tok::RBrace) {
      if (at_keyword("var")) {
        lex_.take();
        VarDecl v;
        v.name = expect_ident("variable name");
        if (lex_.peek().kind == Tok::Colon) {
          lex_.take();
          v.declared_type = expect_ident("type name");
        }
        cls.instance_vars.push_back(std::move(v));
      } else if (at_keyword("ctor") || at_keyword("method")) {
        cls.methods.push_back(parse_method(cls.name));
      } else {
        throw ParseError(lex_.peek().span, "'var', 'method', 'ctor' or '}'",
                         describe(lex_.peek()));
      }
    }
    lex_.take();
    return cls;
  }

  MethodDef parse_method(const std::string& enclosing) {
    MethodDef m;
    if (at_keyword("ctor")) {
      lex_.take();
      m.is_constructor = true;
    }
    expect_keyword("method");
    m.selector = expect_ident("method selector");
    if (at_keyword("body")) {
      lex_.take();
      if (lex_.peek().kind != Tok::String)
        throw ParseError(lex_.peek().span, "string literal",
                         describe(lex_.peek()));
      m.body_fingerprint = lex_.take().text;
    }
    expect(Tok::LBrace, "'{'");
    int ordinal = 0;
    while (lex_.peek().kind != Tok::RBrace) {
      if (at_keyword("call")) {
        lex_.take();
        m.call_sites.push_back(parse_call(ordinal++));
      } else if (at_keyword("uses")) {
        lex_.take();
        m.var_uses.insert(parse_varref(enclosing));
      } else if (at_keyword("defs")) {
        lex_.take();
        m.var_defs.insert(parse_varref(enclosing));
      } else {
        throw ParseError(lex_.peek().span, "'call', 'uses', 'defs' or '}'",
                         describe(lex_.peek()));
      }
    }
    lex_.take();
    return m;
  }

  CallSite parse_call(int ordinal) {
    CallSite site;
    site.ordinal = ordinal;
    const Token& t = lex_.peek();
    if (t.kind == Tok::Question) {
      lex_.take();
      site.dispatch = Dispatch::Untyped;
    } else if (t.kind == Tok::Ident && t.text == "self") {
      lex_.take();
      site.dispatch = Dispatch::Self;
    } else if (t.kind == Tok::Ident && t.text == "super") {
      lex_.take();
      site.dispatch = Dispatch::Super;
    } else if (t.kind == Tok::Ident) {
      site.dispatch = Dispatch::Typed;
      site.receiver_class = lex_.take().text;
    } else {
      throw ParseError(t.span, "receiver ('self', 'super', '?' or class name)",
                       describe(t));
    }
    expect(Tok::Dot, "'.'");
    site.target_selector = expect_ident("target selector");
    return site;
  }

  VarRef parse_varref(const std::string& enclosing) {
    std::string first = expect_ident("variable reference");
    if (lex_.peek().kind == Tok::Dot) {
      lex_.take();
      std::string name = expect_ident("variable name");
      return VarRef{first, name};
    }
    return VarRef{enclosing, first};
  }

  bool at_keyword(const char* kw) const {
    return lex_.peek().kind == Tok::Ident && lex_.peek().text == kw;
  }

  void expect_keyword(const char* kw) {
    if (!at_keyword(kw))
      throw ParseError(lex_.peek().span, std::string("'") + kw + "'",
                       describe(lex_.peek()));
    lex_.take();
  }

  std::string expect_ident(const char* what) {
    if (lex_.peek().kind != Tok::Ident)
      throw ParseError(lex_.peek().span, what, describe(lex_.peek()));
    return lex_.take().text;
  }

  void expect(Tok kind, const char* what) {
    if (lex_.peek().kind != kind)
      throw ParseError(lex_.peek().span, what, describe(lex_.peek()));
    lex_.take();
  }

  static std::string describe(const Token& t) {
    if (t.kind == Tok::End) return "end of input";
    if (t.kind == Tok::String) return "string literal";
    return "'" + t.text + "'";
  }

  Lexer lex_;
};

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

ProgramModel parse_model(const std::string& text, const std::string& file_name) {
  return Parser(text, file_name).parse();
}

std::string serialize_model(const ProgramModel& model) {
  std::ostringstream out;
  for (const auto& cls : model.classes) {
    out << "class " << cls.name;
    if (!cls.superclass.empty()) out << " extends " << cls.superclass;
    if (cls.is_abstract) out << " abstract";
    out << " {\n";
    for (const auto& v : cls.instance_vars) {
      out << "  var " << v.name;
      if (!v.declared_type.empty()) out << " : " << v.declared_type;
      out << "\n";
    }
    for (const auto& m : cls.methods) {
      out << "  ";
      if (m.is_constructor) out << "ctor ";
      out << "method " << m.selector;
      if (!m.body_fingerprint.empty()) out << " body " << quote(m.body_fingerprint);
      out << " {\n";
      for (const auto& s : m.call_sites) {
        out << "    call ";
        switch (s.dispatch) {
          case Dispatch::Self: out << "self"; break;
          case Dispatch::Super: out << "super"; break;
          case Dispatch::Typed: out << s.receiver_class; break;
          case Dispatch::Untyped: out << "?"; break;
        }
        out << "." << s.target_selector << "\n";
      }
      for (const auto& r : m.var_uses)
        out << "    uses " << r.owner_class << "." << r.var_name << "\n";
      for (const auto& r : m.var_defs)
        out << "    defs " << r.owner_class << "." << r.var_name << "\n";
      out << "  }\n";
    }
    out << "}\n";
  }
  return out.str();
}

}  // namespace cmdkit
