#pragma once

#include <string>
#include <string_view>

#include "chor/choreography.hpp"
#include "chor/errors.hpp"
#include "chor/network.hpp"

namespace chor {

// Concrete syntax. Whitespace-insensitive; `//` starts a comment.
//
//   C  ::= eta ";" C | "if" p "." E "then" "{" C "}" "else" "{" C "}" ";"? C?
//        | "def" X "=" "{" C "}" "in" C | X | "0"
//   eta::= p "." E "->" q | p "." E "~>" "[" #k "]" | q "<~" "(" p "," (#k | value) ")"
//   N  ::= proc ("|" proc)* | "" | "0"
//   proc ::= p "[" value "]" ("<" "(" p "," value ")" ("," ...)* ">")? "{" B "}"
//   B  ::= q "!" E ";" B | p "?" ";" B | "if" E "then" "{" B "}" "else" "{" B "}" ";"? B?
//        | "def" X "=" "{" B "}" "in" B | X | "0"
//
// A continuation after a choreography conditional is appended to both
// branches. The trailing "; 0" after an action may be omitted.
Chor parse_choreography(std::string_view text);
Network parse_network(std::string_view text);
Behaviour parse_behaviour(std::string_view text, const ProcessName& owner);
Expr parse_expr(std::string_view text);
Value parse_value(std::string_view text);

std::string render(const Expr& e);
std::string render(const Value& v);
std::string render(const Chor& c);
std::string render(const Behaviour& b);
std::string render(const Network& n);
std::string render(const Tag& t);

// Rendering of a single action without its continuation ("p.1 -> q",
// "if p.(@ < 1)", "q <~ (p, 1)"). Empty for Nil/Call/Def.
std::string render_head(const ChorNode& n);

}  // namespace chor
