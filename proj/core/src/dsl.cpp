// Copyright 2026 The Matforge Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "matforge/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <vector>

namespace matforge {

namespace {

// ---------------------------------------------------------------------------
// Lexer

enum class TokenKind { Ident, Number, String, Equals, LParen, RParen, Comma, Dot, End };

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;   // identifier name or decoded string contents
  double number = 0;  // Number tokens
  int line = 1;
  int column = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& source) : src_(source) {}

  std::vector<Token> lex() {
    std::vector<Token> tokens;
    for (;;) {
      skip_trivia();
      Token token = next_token();
      const bool end = token.kind == TokenKind::End;
      tokens.push_back(std::move(token));
      if (end) return tokens;
    }
  }

 private:
  [[noreturn]] void fail(const std::string& message) {
    throw DslError(DslErrorKind::Lexical, line_, column_, message);
  }

  bool at_end() const { return pos_ >= src_.size(); }
  char peek() const { return src_[pos_]; }

  char advance() {
    const char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    return c;
  }

  void skip_trivia() {
    while (!at_end()) {
      const char c = peek();
      if (c == '#') {
        while (!at_end() && peek() != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else {
        return;
      }
    }
  }

  Token next_token() {
    Token token;
    token.line = line_;
    token.column = column_;
    if (at_end()) return token;

    const char c = peek();
    if (c == '=') { advance(); token.kind = TokenKind::Equals; return token; }
    if (c == '(') { advance(); token.kind = TokenKind::LParen; return token; }
    if (c == ')') { advance(); token.kind = TokenKind::RParen; return token; }
    if (c == ',') { advance(); token.kind = TokenKind::Comma; return token; }
    if (c == '.' && !(pos_ + 1 < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
      advance();
      token.kind = TokenKind::Dot;
      return token;
    }
    if (c == '"') return lex_string(token);
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '+') {
      return lex_number(token);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return lex_ident(token);
    fail(std::string("unexpected character '") + c + "'");
  }

  Token lex_string(Token token) {
    advance();  // opening quote
    std::string out;
    while (true) {
      if (at_end()) fail("unterminated string literal");
      const char c = advance();
      if (c == '"') break;
      if (c == '\n') fail("newline inside string literal");
      if (c == '\\') {
        if (at_end()) fail("unterminated escape sequence");
        const char e = advance();
        if (e == '"') out.push_back('"');
        else if (e == '\\') out.push_back('\\');
        else fail(std::string("unknown escape sequence '\\") + e + "'");
      } else {
        out.push_back(c);
      }
    }
    token.kind = TokenKind::String;
    token.text = std::move(out);
    return token;
  }

  Token lex_number(Token token) {
    std::string text;
    if (peek() == '-' || peek() == '+') text.push_back(advance());
    bool digits = false, dot = false, exponent = false;
    while (!at_end()) {
      const char c = peek();
      if (std::isdigit(static_cast<unsigned char>(c))) {
        digits = true;
        text.push_back(advance());
      } else if (c == '.' && !dot && !exponent) {
        dot = true;
        text.push_back(advance());
      } else if ((c == 'e' || c == 'E') && digits && !exponent) {
        exponent = true;
        text.push_back(advance());
        if (!at_end() && (peek() == '-' || peek() == '+')) text.push_back(advance());
      } else {
        break;
      }
    }
    if (!digits) fail("malformed number '" + text + "'");
    double value = 0.0;
    const auto [ptr, ec] =
        std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
      fail("malformed number '" + text + "'");
    }
    token.kind = TokenKind::Number;
    token.text = std::move(text);
    token.number = value;
    return token;
  }

  Token lex_ident(Token token) {
    std::string text;
    while (!at_end()) {
      const char c = peek();
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
        text.push_back(advance());
      } else {
        break;
      }
    }
    token.kind = TokenKind::Ident;
    token.text = std::move(text);
    return token;
  }

  const std::string& src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

// ---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  Parser(const std::string& source, const NodeTypeRegistry& registry)
      : tokens_(Lexer(source).lex()), registry_(registry) {}

  MaterialGraph parse() {
    while (peek().kind != TokenKind::End) statement();
    finish();
    return std::move(graph_);
  }

 private:
  const Token& peek(int ahead = 0) const {
    const std::size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
    return tokens_[i];
  }

  const Token& advance() { return tokens_[std::min(pos_++, tokens_.size() - 1)]; }

  [[noreturn]] void fail(DslErrorKind kind, const Token& at, const std::string& message) {
    throw DslError(kind, at.line, at.column, message);
  }

  const Token& expect(TokenKind kind, const char* what) {
    const Token& token = advance();
    if (token.kind != kind) {
      fail(DslErrorKind::Lexical, token, std::string("expected ") + what);
    }
    return token;
  }

  void expect_keyword(const char* keyword) {
    const Token& token = advance();
    if (token.kind != TokenKind::Ident || token.text != keyword) {
      fail(DslErrorKind::Lexical, token, std::string("expected '") + keyword + "'");
    }
  }

  void statement() {
    const Token& head = peek();
    if (head.kind != TokenKind::Ident) {
      fail(DslErrorKind::Lexical, head, "expected a statement");
    }
    if (head.text == "link" && peek(1).kind == TokenKind::LParen) {
      link_statement();
    } else if (peek(1).kind == TokenKind::Equals) {
      decl_statement();
    } else if (peek(1).kind == TokenKind::Dot) {
      assign_statement();
    } else {
      fail(DslErrorKind::Lexical, peek(1), "expected '=', '.', or 'link(...)'");
    }
  }

  void decl_statement() {
    const Token& var = expect(TokenKind::Ident, "variable name");
    expect(TokenKind::Equals, "'='");
    expect_keyword("node");
    expect(TokenKind::LParen, "'('");
    const Token& type_token = expect(TokenKind::String, "node type string");
    expect(TokenKind::Comma, "','");
    const Token& id_token = expect(TokenKind::String, "node id string");
    expect(TokenKind::RParen, "')'");

    const NodeTypeDef* def = registry_.find(type_token.text);
    if (!def) {
      fail(DslErrorKind::Semantic, type_token,
           "unknown node type '" + type_token.text + "'");
    }
    if (vars_.count(var.text)) {
      fail(DslErrorKind::Semantic, var, "variable '" + var.text + "' redeclared");
    }
    if (node_ids_.count(id_token.text)) {
      fail(DslErrorKind::Semantic, id_token,
           "duplicate node id '" + id_token.text + "'");
    }
    Node node;
    node.node_id = id_token.text;
    node.type_id = type_token.text;
    graph_.nodes.push_back(std::move(node));
    vars_.emplace(var.text, id_token.text);
    node_ids_.insert(id_token.text);
    if (def->is_material_output) output_nodes_.push_back(id_token.text);
  }

  // var.Socket, resolved against the variable table.
  std::pair<const Node*, std::string> socket_ref() {
    const Token& var = expect(TokenKind::Ident, "variable name");
    expect(TokenKind::Dot, "'.'");
    const Token& socket = expect(TokenKind::Ident, "socket name");
    auto it = vars_.find(var.text);
    if (it == vars_.end()) {
      fail(DslErrorKind::Semantic, var, "unknown variable '" + var.text + "'");
    }
    return {graph_.find_node(it->second), socket.text};
  }

  void link_statement() {
    expect_keyword("link");
    expect(TokenKind::LParen, "'('");
    const Token& from_at = peek();
    auto [from_node, from_socket] = socket_ref();
    expect(TokenKind::Comma, "','");
    const Token& to_at = peek();
    auto [to_node, to_socket] = socket_ref();
    expect(TokenKind::RParen, "')'");

    const NodeTypeDef* from_def = registry_.find(from_node->type_id);
    const NodeTypeDef* to_def = registry_.find(to_node->type_id);
    if (!from_def->find_output(from_socket)) {
      fail(DslErrorKind::Semantic, from_at,
           "node '" + from_node->node_id + "' has no output socket '" + from_socket + "'");
    }
    if (!to_def->find_input(to_socket)) {
      fail(DslErrorKind::Semantic, to_at,
           "node '" + to_node->node_id + "' has no input socket '" + to_socket + "'");
    }
    graph_.edges.push_back(
        {{from_node->node_id, from_socket}, {to_node->node_id, to_socket}});
  }

  void assign_statement() {
    const Token& name_at = peek();
    auto [node_ptr, name] = socket_ref();
    Node* node = graph_.find_node(node_ptr->node_id);
    expect(TokenKind::Equals, "'='");
    const Token& value_at = peek();
    ParamValue value = literal();

    const NodeTypeDef* def = registry_.find(node->type_id);
    if (const ParamSpec* param = def->find_param(name)) {
      node->param_overrides.insert_or_assign(
          name, coerce(value, param->kind, value_at, name));
      if (node->param_overrides.at(name).kind() == ParamKind::Enum) {
        const std::string& variant = node->param_overrides.at(name).as_enum();
        if (std::find(param->enum_variants.begin(), param->enum_variants.end(),
                      variant) == param->enum_variants.end()) {
          fail(DslErrorKind::Semantic, value_at,
               "unknown variant '" + variant + "' for parameter '" + name + "'");
        }
      }
      return;
    }
    if (const SocketSpec* socket = def->find_input(name)) {
      if (!socket->default_value) {
        fail(DslErrorKind::Semantic, name_at,
             "socket '" + name + "' cannot take a default value");
      }
      node->input_defaults.insert_or_assign(
          name, coerce(value, socket->default_value->kind(), value_at, name));
      return;
    }
    fail(DslErrorKind::Semantic, name_at,
         "node '" + node->node_id + "' has no parameter or input '" + name + "'");
  }

  ParamValue coerce(const ParamValue& value, ParamKind target, const Token& at,
                    const std::string& name) {
    if (value.kind() == target) return value;
    if (value.kind() == ParamKind::Float && target == ParamKind::Int) {
      const double v = value.as_float();
      if (v != std::floor(v)) {
        fail(DslErrorKind::Semantic, at,
             "parameter '" + name + "' takes an integer");
      }
      return ParamValue::of_int(static_cast<long long>(v));
    }
    fail(DslErrorKind::Semantic, at,
         "value kind " + std::string(param_kind_name(value.kind())) +
             " does not match " + param_kind_name(target) + " for '" + name + "'");
  }

  double number_arg() {
    const Token& token = expect(TokenKind::Number, "number");
    return token.number;
  }

  Color4 color_literal() {
    expect_keyword("color");
    expect(TokenKind::LParen, "'('");
    Color4 c;
    c.r = number_arg();
    expect(TokenKind::Comma, "','");
    c.g = number_arg();
    expect(TokenKind::Comma, "','");
    c.b = number_arg();
    expect(TokenKind::Comma, "','");
    c.a = number_arg();
    expect(TokenKind::RParen, "')'");
    return c;
  }

  ParamValue literal() {
    const Token& head = peek();
    if (head.kind == TokenKind::Number) {
      return ParamValue::of_float(advance().number);
    }
    if (head.kind == TokenKind::String) {
      return ParamValue::of_enum(advance().text);
    }
    if (head.kind != TokenKind::Ident) {
      fail(DslErrorKind::Lexical, head, "expected a literal");
    }
    if (head.text == "true") { advance(); return ParamValue::of_bool(true); }
    if (head.text == "false") { advance(); return ParamValue::of_bool(false); }
    if (head.text == "vector") {
      advance();
      expect(TokenKind::LParen, "'('");
      Vec3 v;
      v.x = number_arg();
      expect(TokenKind::Comma, "','");
      v.y = number_arg();
      expect(TokenKind::Comma, "','");
      v.z = number_arg();
      expect(TokenKind::RParen, "')'");
      return ParamValue::of_vector(v);
    }
    if (head.text == "color") {
      return ParamValue::of_color(color_literal());
    }
    if (head.text == "ramp") {
      advance();
      expect(TokenKind::LParen, "'('");
      const Token& interp_token = expect(TokenKind::String, "interpolation string");
      ColorRampValue ramp;
      if (!ramp_interpolation_from_name(interp_token.text, ramp.interpolation)) {
        fail(DslErrorKind::Semantic, interp_token,
             "unknown ramp interpolation '" + interp_token.text + "'");
      }
      while (peek().kind == TokenKind::Comma) {
        advance();
        expect_keyword("stop");
        expect(TokenKind::LParen, "'('");
        RampStop stop;
        stop.position = number_arg();
        expect(TokenKind::Comma, "','");
        stop.color = color_literal();
        expect(TokenKind::RParen, "')'");
        ramp.stops.push_back(stop);
      }
      expect(TokenKind::RParen, "')'");
      return ParamValue::of_ramp(std::move(ramp));
    }
    fail(DslErrorKind::Lexical, head, "expected a literal");
  }

  void finish() {
    if (output_nodes_.empty()) {
      const Token& at = tokens_.back();
      throw DslError(DslErrorKind::Structural, at.line, at.column,
                     "program declares no output node");
    }
    if (output_nodes_.size() > 1) {
      const Token& at = tokens_.back();
      throw DslError(DslErrorKind::Structural, at.line, at.column,
                     "program declares more than one output node");
    }
    graph_.output_node = output_nodes_.front();

    ValidationReport report = validate_structure(graph_, registry_);
    if (!report.ok) {
      std::string message = "program builds an invalid graph:";
      for (const Violation& violation : report.violations) {
        message += ' ';
        message += violation_code_name(violation.code);
        message += " (" + violation.message + ");";
      }
      const Token& at = tokens_.back();
      throw DslError(DslErrorKind::Structural, at.line, at.column, message);
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  const NodeTypeRegistry& registry_;
  MaterialGraph graph_;
  std::map<std::string, std::string> vars_;  // variable -> node_id
  std::set<std::string> node_ids_;
  std::vector<std::string> output_nodes_;
};

// ---------------------------------------------------------------------------
// Emitter

std::string format_number(double v) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), v);
  return std::string(buffer, ptr);
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string format_color(const Color4& c) {
  return "color(" + format_number(c.r) + ", " + format_number(c.g) + ", " +
         format_number(c.b) + ", " + format_number(c.a) + ")";
}

std::string format_literal(const ParamValue& value) {
  switch (value.kind()) {
    case ParamKind::Float:
      return format_number(value.as_float());
    case ParamKind::Int:
      return std::to_string(value.as_int());
    case ParamKind::Vector: {
      const Vec3 v = value.as_vector();
      return "vector(" + format_number(v.x) + ", " + format_number(v.y) + ", " +
             format_number(v.z) + ")";
    }
    case ParamKind::Color:
      return format_color(value.as_color());
    case ParamKind::ColorRamp: {
      const ColorRampValue& ramp = value.as_ramp();
      std::string out = "ramp(";
      out += quote(ramp_interpolation_name(ramp.interpolation));
      for (const RampStop& stop : ramp.stops) {
        out += ", stop(" + format_number(stop.position) + ", " +
               format_color(stop.color) + ")";
      }
      out.push_back(')');
      return out;
    }
    case ParamKind::Enum:
      return quote(value.as_enum());
    case ParamKind::Bool:
      return value.as_bool() ? "true" : "false";
  }
  return "0";
}

// Node ids become program variables; anything outside [A-Za-z0-9_] is
// sanitized, and collisions get a numeric suffix. The original id survives
// in the declaration's second argument.
std::string sanitize_var(const std::string& node_id, std::set<std::string>& taken) {
  std::string base;
  for (char c : node_id) {
    base.push_back(std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
  }
  if (base.empty()) base = "n";
  if (std::isdigit(static_cast<unsigned char>(base[0]))) base.insert(base.begin(), '_');
  if (base == "node" || base == "link" || base == "vector" || base == "color" ||
      base == "ramp" || base == "stop" || base == "true" || base == "false") {
    base += "_";
  }
  std::string var = base;
  for (int suffix = 2; taken.count(var); ++suffix) {
    var = base + "_" + std::to_string(suffix);
  }
  taken.insert(var);
  return var;
}

}  // namespace

MaterialGraph parse(const std::string& source, const NodeTypeRegistry& registry) {
  return Parser(source, registry).parse();
}

ProgramText emit(const MaterialGraph& graph, const NodeTypeRegistry& registry) {
  const std::vector<std::string> order = topo_order(graph);

  std::set<std::string> taken;
  std::map<std::string, std::string> var_of;  // node_id -> variable
  std::ostringstream out;

  for (const std::string& node_id : order) {
    const Node* node = graph.find_node(node_id);
    const std::string var = sanitize_var(node_id, taken);
    var_of.emplace(node_id, var);
    out << var << " = node(" << quote(node->type_id) << ", " << quote(node_id)
        << ")\n";
  }

  for (const std::string& node_id : order) {
    const Node* node = graph.find_node(node_id);
    const NodeTypeDef* def = registry.find(node->type_id);
    if (!def) throw GraphError("emit: unknown node type '" + node->type_id + "'");
    for (const SocketSpec& socket : def->inputs) {
      if (const Edge* edge = graph.edge_into(node_id, socket.name)) {
        out << "link(" << var_of.at(edge->from.node_id) << "." << edge->from.socket
            << ", " << var_of.at(node_id) << "." << socket.name << ")\n";
      }
    }
  }

  for (const std::string& node_id : order) {
    const Node* node = graph.find_node(node_id);
    const NodeTypeDef* def = registry.find(node->type_id);
    for (const auto& [name, value] : node->param_overrides) {
      const ParamSpec* param = def->find_param(name);
      if (param && param->default_value == value) continue;
      out << var_of.at(node_id) << "." << name << " = " << format_literal(value)
          << "\n";
    }
    for (const auto& [name, value] : node->input_defaults) {
      const SocketSpec* socket = def->find_input(name);
      if (socket && socket->default_value && *socket->default_value == value) continue;
      out << var_of.at(node_id) << "." << name << " = " << format_literal(value)
          << "\n";
    }
  }

  ProgramText text;
  text.source = out.str();
  text.token_count = count_tokens(text.source);
  return text;
}

int count_tokens(const std::string& source) {
  const std::vector<Token> tokens = Lexer(source).lex();
  return static_cast<int>(tokens.size()) - 1;  // End token excluded
}

}  // namespace matforge
