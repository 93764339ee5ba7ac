// Copyright 2026 The protomerge Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "protomerge/syntax.hpp"

#include <cctype>
#include <charconv>
#include <set>
#include <sstream>
#include <variant>
#include <vector>

#include "protomerge/overloaded.hpp"

namespace protomerge {

ParseError::ParseError(SourceSpan span, const std::string& what)
    : Error(span.file + ":" + std::to_string(span.start_line) + ":" + std::to_string(span.start_col) + ": " + what),
      span_(std::move(span)) {}

const char* to_string(ReduceOp op) {
    switch (op) {
        case ReduceOp::Min: return "min";
        case ReduceOp::Max: return "max";
        case ReduceOp::Sum: return "sum";
        case ReduceOp::Prod: return "prod";
    }
    return "?";
}

const char* to_string(CmpOp op) {
    switch (op) {
        case CmpOp::Eq: return "=";
        case CmpOp::Ne: return "!=";
        case CmpOp::Lt: return "<";
        case CmpOp::Le: return "<=";
        case CmpOp::Gt: return ">";
        case CmpOp::Ge: return ">=";
    }
    return "?";
}

namespace {

const std::set<std::string, std::less<>> kKeywords = {
    "skip", "message", "allreduce", "foreach", "integer", "float",  "true", "and",
    "or",   "not",     "send",      "recv",    "to",      "from",   "for",  "if",
    "else", "constrain",
};

enum class Tok { End, Int, Ident, Hole, Sym };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    std::int64_t value = 0;
    int line = 1;
    int col = 1;
    int end_line = 1;
    int end_col = 1;
};

class Lexer {
  public:
    Lexer(std::string_view text, std::string file) : text_(text), file_(std::move(file)) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_space();
            Token t;
            t.line = line_;
            t.col = col_;
            if (pos_ >= text_.size()) {
                t.kind = Tok::End;
                t.end_line = line_;
                t.end_col = col_;
                out.push_back(t);
                return out;
            }
            char c = text_[pos_];
            if (std::isdigit(static_cast<unsigned char>(c))) {
                std::size_t start = pos_;
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) advance();
                t.kind = Tok::Int;
                t.text = std::string(text_.substr(start, pos_ - start));
                auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.value);
                if (ec != std::errc()) fail(t, "integer literal out of range");
            } else if (is_ident_start(c)) {
                t.kind = Tok::Ident;
                t.text = ident();
            } else if (c == '?' && pos_ + 1 < text_.size() && is_ident_start(text_[pos_ + 1])) {
                advance();
                t.kind = Tok::Hole;
                t.text = ident();
            } else {
                t.kind = Tok::Sym;
                static const char* kTwo[] = {"..", "==", "!=", "<=", ">="};
                for (const char* two : kTwo) {
                    if (text_.substr(pos_, 2) == two) t.text = two;
                }
                if (t.text.empty()) {
                    if (std::string_view("{}[]():;|+-*/=<>?").find(c) == std::string_view::npos) {
                        fail(t, std::string("unexpected character '") + c + "'");
                    }
                    t.text = std::string(1, c);
                }
                for (std::size_t i = 0; i < t.text.size(); ++i) advance();
            }
            t.end_line = line_;
            t.end_col = col_;
            out.push_back(std::move(t));
        }
    }

  private:
    static bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
    static bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

    std::string ident() {
        std::size_t start = pos_;
        while (pos_ < text_.size() && is_ident_char(text_[pos_])) advance();
        return std::string(text_.substr(start, pos_ - start));
    }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_space() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    [[noreturn]] void fail(const Token& t, const std::string& msg) {
        throw ParseError({file_, t.line, t.col, line_, col_ + 1}, msg);
    }

    std::string_view text_;
    std::string file_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

using Expr = std::variant<IndexTerm, Proposition>;

class Parser {
  public:
    Parser(std::string_view text, std::string file) : file_(file), tokens_(Lexer(text, file).run()) {}

    ProtocolType protocol_file() {
        ProtocolType t = protocol_seq();
        expect_end();
        return t;
    }

    Process process_file() {
        Process p = process_seq();
        expect_end();
        return p;
    }

    IndexTerm index_file() {
        IndexTerm t = index_full();
        expect_end();
        return t;
    }

    Proposition prop_file() {
        Proposition p = prop_full();
        expect_end();
        return p;
    }

    Datatype datatype_file() {
        Datatype d = datatype();
        expect_end();
        return d;
    }

  private:
    // -- token helpers ------------------------------------------------------

    const Token& peek(std::size_t ahead = 0) const {
        std::size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
        return tokens_[i];
    }

    bool at_sym(std::string_view s, std::size_t ahead = 0) const {
        const Token& t = peek(ahead);
        return t.kind == Tok::Sym && t.text == s;
    }

    bool at_keyword(std::string_view k) const { return peek().kind == Tok::Ident && peek().text == k; }

    const Token& next() {
        const Token& t = tokens_[pos_];
        if (pos_ + 1 < tokens_.size()) ++pos_;
        return t;
    }

    [[noreturn]] void fail(const Token& t, const std::string& msg) const {
        throw ParseError({file_, t.line, t.col, t.end_line, t.end_col}, msg);
    }

    static std::string describe(const Token& t) {
        switch (t.kind) {
            case Tok::End: return "end of input";
            case Tok::Int: return "'" + t.text + "'";
            case Tok::Ident: return "'" + t.text + "'";
            case Tok::Hole: return "'?" + t.text + "'";
            case Tok::Sym: return "'" + t.text + "'";
        }
        return "?";
    }

    void expect_sym(std::string_view s) {
        if (!at_sym(s)) fail(peek(), "expected '" + std::string(s) + "', found " + describe(peek()));
        next();
    }

    void expect_keyword(std::string_view k) {
        if (!at_keyword(k)) fail(peek(), "expected '" + std::string(k) + "', found " + describe(peek()));
        next();
    }

    void expect_end() {
        if (peek().kind != Tok::End) fail(peek(), "unexpected " + describe(peek()));
    }

    std::string identifier() {
        const Token& t = peek();
        if (t.kind != Tok::Ident || kKeywords.count(t.text) != 0) {
            fail(t, "expected identifier, found " + describe(t));
        }
        return next().text;
    }

    ReduceOp reduce_op() {
        const Token& t = peek();
        if (t.kind == Tok::Ident) {
            if (t.text == "min") return next(), ReduceOp::Min;
            if (t.text == "max") return next(), ReduceOp::Max;
            if (t.text == "sum") return next(), ReduceOp::Sum;
            if (t.text == "prod") return next(), ReduceOp::Prod;
        }
        fail(t, "expected reduction operator (min, max, sum, prod), found " + describe(t));
    }

    // -- protocols ----------------------------------------------------------

    ProtocolType protocol_seq() {
        ProtocolType first = protocol_item();
        if (at_sym(";")) {
            next();
            return seq(std::move(first), protocol_seq());
        }
        return first;
    }

    ProtocolType protocol_block() {
        expect_sym("{");
        ProtocolType body = protocol_seq();
        expect_sym("}");
        return body;
    }

    ProtocolType protocol_item() {
        const Token& t = peek();
        if (at_sym("{")) return protocol_block();
        if (at_keyword("skip")) {
            next();
            return skip();
        }
        if (at_keyword("message")) {
            next();
            IndexTerm from = index_full();
            IndexTerm to = index_full();
            return message(std::move(from), std::move(to), datatype());
        }
        if (at_keyword("allreduce")) {
            next();
            ReduceOp op = reduce_op();
            if (peek().kind == Tok::Ident && at_sym(":", 1)) {
                std::string binder = identifier();
                expect_sym(":");
                Datatype payload = datatype();
                return allreduce(op, std::move(binder), std::move(payload), protocol_block());
            }
            return allreduce(op, datatype());
        }
        if (at_keyword("foreach")) {
            next();
            std::string binder = identifier();
            expect_sym(":");
            IndexTerm lo = index_full();
            expect_sym("..");
            IndexTerm hi = index_full();
            return foreach_(std::move(binder), std::move(lo), std::move(hi), protocol_block());
        }
        fail(t, "expected protocol type, found " + describe(t));
    }

    // -- processes ----------------------------------------------------------

    Process process_seq() {
        Process first = process_item();
        if (at_sym(";")) {
            next();
            return pseq(std::move(first), process_seq());
        }
        return first;
    }

    Process process_block() {
        expect_sym("{");
        Process body = process_seq();
        expect_sym("}");
        return body;
    }

    Process process_item() {
        const Token& t = peek();
        if (at_sym("{")) return process_block();
        if (at_keyword("skip")) {
            next();
            return pskip();
        }
        if (at_keyword("send")) {
            next();
            expect_keyword("to");
            IndexTerm to = index_full();
            return send(std::move(to), datatype());
        }
        if (at_keyword("recv")) {
            next();
            expect_keyword("from");
            IndexTerm from = index_full();
            return recv(std::move(from), datatype());
        }
        if (at_keyword("allreduce")) {
            next();
            ReduceOp op = reduce_op();
            return allreduce_stmt(op, datatype());
        }
        if (at_keyword("for")) {
            next();
            std::string binder = identifier();
            expect_sym(":");
            IndexTerm lo = index_full();
            expect_sym("..");
            IndexTerm hi = index_full();
            return for_(std::move(binder), std::move(lo), std::move(hi), process_block());
        }
        if (at_keyword("if")) {
            next();
            Proposition test = prop_full();
            Process then_branch = process_block();
            expect_keyword("else");
            Process else_branch = process_block();
            return if_(std::move(test), std::move(then_branch), std::move(else_branch));
        }
        if (at_keyword("constrain")) {
            next();
            Datatype lhs = datatype();
            if (at_sym("==")) {
                next();
            } else {
                expect_sym("=");
            }
            return constrain(std::move(lhs), datatype());
        }
        fail(t, "expected statement, found " + describe(t));
    }

    // -- datatypes ----------------------------------------------------------

    Datatype datatype() {
        Datatype d = datatype_primary();
        while (at_sym("[")) {
            next();
            IndexTerm len = index_full();
            expect_sym("]");
            d = array_of(std::move(d), std::move(len));
        }
        return d;
    }

    Datatype datatype_primary() {
        const Token& t = peek();
        if (at_keyword("integer")) return next(), integer_type();
        if (at_keyword("float")) return next(), float_type();
        if (t.kind == Tok::Hole) return hole(next().text);
        if (at_sym("{")) {
            next();
            std::string binder = identifier();
            expect_sym(":");
            BaseType base;
            if (at_keyword("integer")) {
                base = BaseType::Integer;
            } else if (at_keyword("float")) {
                base = BaseType::Float;
            } else {
                fail(peek(), "expected 'integer' or 'float', found " + describe(peek()));
            }
            next();
            expect_sym("|");
            Proposition pred = prop_full();
            expect_sym("}");
            return refined(std::move(binder), base, std::move(pred));
        }
        fail(t, "expected datatype, found " + describe(t));
    }

    // -- index terms and propositions ----------------------------------------

    IndexTerm as_index(Expr e, const Token& at) const {
        if (auto* i = std::get_if<IndexTerm>(&e)) return std::move(*i);
        fail(at, "expected index term, found proposition");
    }

    Proposition as_prop(Expr e, const Token& at) const {
        if (auto* p = std::get_if<Proposition>(&e)) return std::move(*p);
        fail(at, "expected proposition, found index term");
    }

    IndexTerm index_full() {
        const Token& start = peek();
        return as_index(expr_full(), start);
    }

    Proposition prop_full() {
        const Token& start = peek();
        return as_prop(expr_full(), start);
    }

    Expr expr_full() {
        const Token& start = peek();
        Expr e = expr_or();
        if (std::holds_alternative<Proposition>(e) && at_sym("?")) {
            next();
            IndexTerm then_term = index_full();
            expect_sym(":");
            IndexTerm else_term = index_full();
            return cond(as_prop(std::move(e), start), std::move(then_term), std::move(else_term));
        }
        return e;
    }

    Expr expr_or() {
        const Token& start = peek();
        Expr e = expr_and();
        while (at_keyword("or")) {
            next();
            const Token& rhs_start = peek();
            Proposition rhs = as_prop(expr_and(), rhs_start);
            e = disj(as_prop(std::move(e), start), std::move(rhs));
        }
        return e;
    }

    Expr expr_and() {
        const Token& start = peek();
        Expr e = expr_not();
        while (at_keyword("and")) {
            next();
            const Token& rhs_start = peek();
            Proposition rhs = as_prop(expr_not(), rhs_start);
            e = conj(as_prop(std::move(e), start), std::move(rhs));
        }
        return e;
    }

    Expr expr_not() {
        if (at_keyword("not")) {
            next();
            const Token& start = peek();
            return neg(as_prop(expr_not(), start));
        }
        return expr_cmp();
    }

    std::optional<CmpOp> cmp_op() const {
        const Token& t = peek();
        if (t.kind != Tok::Sym) return std::nullopt;
        if (t.text == "=" || t.text == "==") return CmpOp::Eq;
        if (t.text == "!=") return CmpOp::Ne;
        if (t.text == "<") return CmpOp::Lt;
        if (t.text == "<=") return CmpOp::Le;
        if (t.text == ">") return CmpOp::Gt;
        if (t.text == ">=") return CmpOp::Ge;
        return std::nullopt;
    }

    Expr expr_cmp() {
        const Token& start = peek();
        Expr e = expr_add();
        if (std::holds_alternative<Proposition>(e) || !cmp_op()) return e;
        IndexTerm lhs = as_index(std::move(e), start);
        std::vector<Proposition> chain;
        while (auto op = cmp_op()) {
            next();
            const Token& rhs_start = peek();
            IndexTerm rhs = as_index(expr_add(), rhs_start);
            chain.push_back(cmp(*op, lhs, rhs));
            lhs = std::move(rhs);
        }
        return conj_all(std::move(chain));
    }

    Expr expr_add() {
        const Token& start = peek();
        Expr e = expr_mul();
        while (at_sym("+") || at_sym("-")) {
            ArithOp op = next().text == "+" ? ArithOp::Add : ArithOp::Sub;
            IndexTerm lhs = as_index(std::move(e), start);
            const Token& rhs_start = peek();
            e = binop(op, std::move(lhs), as_index(expr_mul(), rhs_start));
        }
        return e;
    }

    Expr expr_mul() {
        const Token& start = peek();
        Expr e = expr_atom();
        while (at_sym("*") || at_sym("/")) {
            ArithOp op = next().text == "*" ? ArithOp::Mul : ArithOp::Div;
            IndexTerm lhs = as_index(std::move(e), start);
            const Token& rhs_start = peek();
            e = binop(op, std::move(lhs), as_index(expr_atom(), rhs_start));
        }
        return e;
    }

    Expr expr_atom() {
        const Token& t = peek();
        if (t.kind == Tok::Int) return lit(next().value);
        if (at_sym("-") && peek(1).kind == Tok::Int) {
            next();
            return lit(-next().value);
        }
        if (at_keyword("true")) return next(), ptrue();
        if (at_sym("(")) {
            next();
            Expr e = expr_full();
            expect_sym(")");
            return e;
        }
        if (t.kind == Tok::Ident && kKeywords.count(t.text) == 0) return var(next().text);
        fail(t, "expected index term or proposition, found " + describe(t));
    }

    std::string file_;
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Printing

enum IndexPrec { kIndexTop = 0, kIndexAdd = 1, kIndexMul = 2, kIndexAtom = 3 };
enum PropPrec { kPropTop = 0, kPropOr = 1, kPropAnd = 2, kPropNot = 3, kPropAtom = 4 };

std::string index_at(const IndexTerm& term, int prec);
std::string prop_at(const Proposition& prop, int prec);

std::string index_at(const IndexTerm& term, int prec) {
    return std::visit(overloaded{
                          [](const IntLit& l) {
                              return l.value < 0 ? "(" + std::to_string(l.value) + ")" : std::to_string(l.value);
                          },
                          [](const Var& v) { return v.name; },
                          [&](const BinOp& b) {
                              int level = (b.op == ArithOp::Add || b.op == ArithOp::Sub) ? kIndexAdd : kIndexMul;
                              const char* sym = b.op == ArithOp::Add   ? " + "
                                                : b.op == ArithOp::Sub ? " - "
                                                : b.op == ArithOp::Mul ? " * "
                                                                       : " / ";
                              std::string s = index_at(*b.left, level) + sym + index_at(*b.right, level + 1);
                              return level < prec ? "(" + s + ")" : s;
                          },
                          [](const Cond& c) {
                              return "(" + prop_at(*c.test, kPropTop) + " ? " + index_at(*c.then_term, kIndexTop) +
                                     " : " + index_at(*c.else_term, kIndexTop) + ")";
                          },
                      },
                      term.node);
}

std::string prop_at(const Proposition& prop, int prec) {
    auto wrap = [&](int level, std::string s) { return level < prec ? "(" + s + ")" : s; };
    return std::visit(overloaded{
                          [](const True&) { return std::string("true"); },
                          [&](const Cmp& c) {
                              return wrap(kPropAtom, index_at(c.left, kIndexTop) + " " + to_string(c.op) + " " +
                                                         index_at(c.right, kIndexTop));
                          },
                          [&](const And& a) {
                              return wrap(kPropAnd, prop_at(*a.left, kPropAnd) + " and " + prop_at(*a.right, kPropNot));
                          },
                          [&](const Or& o) {
                              return wrap(kPropOr, prop_at(*o.left, kPropOr) + " or " + prop_at(*o.right, kPropAnd));
                          },
                          [&](const Not& n) { return wrap(kPropNot, "not " + prop_at(*n.operand, kPropNot)); },
                      },
                      prop.node);
}

std::string datatype_text(const Datatype& type) {
    return std::visit(overloaded{
                          [](const IntegerType&) { return std::string("integer"); },
                          [](const FloatType&) { return std::string("float"); },
                          [](const ArrayType& a) {
                              return datatype_text(*a.elem) + "[" + index_at(a.length, kIndexTop) + "]";
                          },
                          [](const RefinedType& r) {
                              return "{" + r.binder + ": " + (r.base == BaseType::Integer ? "integer" : "float") +
                                     " | " + prop_at(r.pred, kPropTop) + "}";
                          },
                          [](const Hole& h) { return "?" + h.id; },
                      },
                      type.node);
}

class Printer {
  public:
    explicit Printer(bool inline_mode) : inline_(inline_mode) {}

    std::string protocol(const ProtocolType& t) {
        emit_protocol_seq(t, 0);
        return out_.str();
    }

    std::string process(const Process& p) {
        emit_process_seq(p, 0);
        return out_.str();
    }

  private:
    void newline(int depth) {
        if (inline_) {
            out_ << ' ';
            return;
        }
        out_ << '\n' << std::string(static_cast<std::size_t>(depth) * 2, ' ');
    }

    void open_block(int depth) {
        out_ << " {";
        newline(depth + 1);
    }

    void close_block(int depth) {
        newline(depth);
        out_ << '}';
    }

    void emit_protocol_seq(const ProtocolType& t, int depth) {
        const ProtocolType* cur = &t;
        while (const auto* s = std::get_if<Seq>(&cur->node)) {
            emit_protocol_item(*s->first, depth);
            out_ << ';';
            newline(depth);
            cur = &*s->second;
        }
        emit_protocol_item(*cur, depth);
    }

    void emit_protocol_item(const ProtocolType& t, int depth) {
        std::visit(overloaded{
                       [&](const Skip&) { out_ << "skip"; },
                       [&](const Message& m) {
                           out_ << "message " << index_at(m.from, kIndexTop) << ' ' << index_at(m.to, kIndexTop)
                                << ' ' << datatype_text(m.payload);
                       },
                       [&](const Allreduce& a) {
                           out_ << "allreduce " << to_string(a.op) << ' ';
                           if (a.binder == kAnonymousBinder && std::holds_alternative<Skip>(a.cont->node)) {
                               out_ << datatype_text(a.payload);
                               return;
                           }
                           out_ << a.binder << ": " << datatype_text(a.payload);
                           open_block(depth);
                           emit_protocol_seq(*a.cont, depth + 1);
                           close_block(depth);
                       },
                       [&](const Foreach& f) {
                           out_ << "foreach " << f.binder << ": " << index_at(f.lo, kIndexTop) << ".."
                                << index_at(f.hi, kIndexTop);
                           open_block(depth);
                           emit_protocol_seq(*f.body, depth + 1);
                           close_block(depth);
                       },
                       [&](const Seq&) {
                           out_ << '{';
                           newline(depth + 1);
                           emit_protocol_seq(t, depth + 1);
                           close_block(depth);
                       },
                   },
                   t.node);
    }

    void emit_process_seq(const Process& p, int depth) {
        const Process* cur = &p;
        while (const auto* s = std::get_if<PSeq>(&cur->node)) {
            emit_process_item(*s->first, depth);
            out_ << ';';
            newline(depth);
            cur = &*s->second;
        }
        emit_process_item(*cur, depth);
    }

    void emit_process_item(const Process& p, int depth) {
        std::visit(overloaded{
                       [&](const PSkip&) { out_ << "skip"; },
                       [&](const Send& s) {
                           out_ << "send to " << index_at(s.to, kIndexTop) << ' ' << datatype_text(s.payload);
                       },
                       [&](const Recv& r) {
                           out_ << "recv from " << index_at(r.from, kIndexTop) << ' ' << datatype_text(r.payload);
                       },
                       [&](const AllreduceStmt& a) {
                           out_ << "allreduce " << to_string(a.op) << ' ' << datatype_text(a.payload);
                       },
                       [&](const For& f) {
                           out_ << "for " << f.binder << ": " << index_at(f.lo, kIndexTop) << ".."
                                << index_at(f.hi, kIndexTop);
                           open_block(depth);
                           emit_process_seq(*f.body, depth + 1);
                           close_block(depth);
                       },
                       [&](const If& i) {
                           out_ << "if " << prop_at(i.test, kPropTop);
                           open_block(depth);
                           emit_process_seq(*i.then_branch, depth + 1);
                           close_block(depth);
                           out_ << " else";
                           open_block(depth);
                           emit_process_seq(*i.else_branch, depth + 1);
                           close_block(depth);
                       },
                       [&](const PSeq&) {
                           out_ << '{';
                           newline(depth + 1);
                           emit_process_seq(p, depth + 1);
                           close_block(depth);
                       },
                       [&](const Constrain& c) {
                           out_ << "constrain " << datatype_text(c.lhs) << " = " << datatype_text(c.rhs);
                       },
                   },
                   p.node);
    }

    bool inline_;
    std::ostringstream out_;
};

}  // namespace

ProtocolType parse_protocol(std::string_view text, const std::string& file) {
    return Parser(text, file).protocol_file();
}

Process parse_process(std::string_view text, const std::string& file) { return Parser(text, file).process_file(); }

IndexTerm parse_index(std::string_view text, const std::string& file) { return Parser(text, file).index_file(); }

Proposition parse_prop(std::string_view text, const std::string& file) { return Parser(text, file).prop_file(); }

Datatype parse_datatype(std::string_view text, const std::string& file) {
    return Parser(text, file).datatype_file();
}

std::string print_protocol(const ProtocolType& type) { return Printer(false).protocol(type); }
std::string print_protocol_inline(const ProtocolType& type) { return Printer(true).protocol(type); }
std::string print_process(const Process& process) { return Printer(false).process(process); }
std::string print_index(const IndexTerm& term) { return index_at(term, kIndexTop); }
std::string print_prop(const Proposition& prop) { return prop_at(prop, kPropTop); }
std::string print_datatype(const Datatype& type) { return datatype_text(type); }

std::string print_context(const TypingContext& ctx) {
    std::string out;
    for (const auto& entry : ctx.entries()) {
        if (!out.empty()) out += ", ";
        out += entry.name + ": " + datatype_text(entry.type);
    }
    return out;
}

}  // namespace protomerge
