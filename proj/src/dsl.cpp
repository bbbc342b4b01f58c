#include "failprop/dsl.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace failprop {

namespace {

enum class Tok {
    Ident,
    KwModel, KwValues, KwFunction, KwIn, KwOut, KwFree, KwTransfer, KwFlow,
    KwAssert, KwWhen, KwExpect, KwOthers, KwAll, KwExcept,
    KwAnd, KwOr, KwNot, KwElse, KwStatus, KwValue,
    KwOK, KwErr, KwLost,
    LBrace, RBrace, LParen, RParen, Dot, Comma, Equal, NotEqual, Arrow, FatArrow,
    End,
};

const char *tok_name(Tok t) {
    switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::KwModel: return "'model'";
    case Tok::KwValues: return "'values'";
    case Tok::KwFunction: return "'function'";
    case Tok::KwIn: return "'in'";
    case Tok::KwOut: return "'out'";
    case Tok::KwFree: return "'free'";
    case Tok::KwTransfer: return "'transfer'";
    case Tok::KwFlow: return "'flow'";
    case Tok::KwAssert: return "'assert'";
    case Tok::KwWhen: return "'when'";
    case Tok::KwExpect: return "'expect'";
    case Tok::KwOthers: return "'others'";
    case Tok::KwAll: return "'all'";
    case Tok::KwExcept: return "'except'";
    case Tok::KwAnd: return "'and'";
    case Tok::KwOr: return "'or'";
    case Tok::KwNot: return "'not'";
    case Tok::KwElse: return "'else'";
    case Tok::KwStatus: return "'status'";
    case Tok::KwValue: return "'value'";
    case Tok::KwOK: return "'OK'";
    case Tok::KwErr: return "'Err'";
    case Tok::KwLost: return "'Lost'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Dot: return "'.'";
    case Tok::Comma: return "','";
    case Tok::Equal: return "'='";
    case Tok::NotEqual: return "'!='";
    case Tok::Arrow: return "'->'";
    case Tok::FatArrow: return "'=>'";
    case Tok::End: return "end of input";
    }
    return "?";
}

struct Token {
    Tok kind = Tok::End;
    std::string text;
    SourceSpan span;
};

struct Lexer {
    std::string_view src;
    std::string file;
    size_t pos = 0;
    int line = 1, column = 1;

    explicit Lexer(std::string_view text, std::string_view filename)
        : src(text), file(filename) {}

    SourceSpan here(int length = 1) const { return {file, line, column, length}; }

    void advance() {
        if (src[pos] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
        ++pos;
    }

    Token next() {
        for (;;) {
            while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos])))
                advance();
            if (pos + 1 < src.size() && src[pos] == '/' && src[pos + 1] == '/') {
                while (pos < src.size() && src[pos] != '\n')
                    advance();
                continue;
            }
            break;
        }
        if (pos >= src.size())
            return {Tok::End, "", here(0)};

        char c = src[pos];
        SourceSpan span = here();
        auto single = [&](Tok kind, const char *text) {
            advance();
            return Token{kind, text, span};
        };
        switch (c) {
        case '{': return single(Tok::LBrace, "{");
        case '}': return single(Tok::RBrace, "}");
        case '(': return single(Tok::LParen, "(");
        case ')': return single(Tok::RParen, ")");
        case '.': return single(Tok::Dot, ".");
        case ',': return single(Tok::Comma, ",");
        case '=':
            advance();
            if (pos < src.size() && src[pos] == '>') {
                advance();
                span.length = 2;
                return {Tok::FatArrow, "=>", span};
            }
            return {Tok::Equal, "=", span};
        case '!':
            advance();
            if (pos < src.size() && src[pos] == '=') {
                advance();
                span.length = 2;
                return {Tok::NotEqual, "!=", span};
            }
            throw ParseError("stray '!'; did you mean '!='?", span);
        case '-':
            advance();
            if (pos < src.size() && src[pos] == '>') {
                advance();
                span.length = 2;
                return {Tok::Arrow, "->", span};
            }
            throw ParseError("stray '-'; did you mean '->'?", span);
        default: break;
        }

        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos;
            while (pos < src.size() && (std::isalnum(static_cast<unsigned char>(src[pos])) ||
                                        src[pos] == '_'))
                advance();
            std::string word(src.substr(start, pos - start));
            span.length = static_cast<int>(word.size());
            static const std::pair<const char *, Tok> kws[] = {
                {"model", Tok::KwModel},     {"values", Tok::KwValues},
                {"function", Tok::KwFunction}, {"in", Tok::KwIn},
                {"out", Tok::KwOut},         {"free", Tok::KwFree},
                {"transfer", Tok::KwTransfer}, {"flow", Tok::KwFlow},
                {"assert", Tok::KwAssert},   {"when", Tok::KwWhen},
                {"expect", Tok::KwExpect},   {"others", Tok::KwOthers},
                {"all", Tok::KwAll},         {"except", Tok::KwExcept},
                {"and", Tok::KwAnd},         {"or", Tok::KwOr},
                {"not", Tok::KwNot},         {"else", Tok::KwElse},
                {"status", Tok::KwStatus},   {"value", Tok::KwValue},
                {"OK", Tok::KwOK},           {"Err", Tok::KwErr},
                {"Lost", Tok::KwLost},
            };
            for (const auto &[text, kind] : kws)
                if (word == text)
                    return {kind, std::move(word), span};
            return {Tok::Ident, std::move(word), span};
        }
        throw ParseError(std::string("unexpected character '") + c + "'", span);
    }
};

struct Parser {
    Lexer lexer;
    Token tok;

    Parser(std::string_view text, std::string_view filename) : lexer(text, filename) {
        tok = lexer.next();
    }

    [[noreturn]] void unexpected(const std::string &expected) {
        throw ParseError("expected " + expected + ", found " + tok_name(tok.kind) +
                             (tok.kind == Tok::Ident ? " '" + tok.text + "'" : ""),
                         tok.span, expected);
    }

    Token eat(Tok kind) {
        if (tok.kind != kind)
            unexpected(tok_name(kind));
        Token t = tok;
        tok = lexer.next();
        return t;
    }

    bool accept(Tok kind) {
        if (tok.kind != kind)
            return false;
        tok = lexer.next();
        return true;
    }

    bool is_status_lit() const {
        return tok.kind == Tok::KwOK || tok.kind == Tok::KwErr || tok.kind == Tok::KwLost;
    }

    // literal in constraint/conclusion position: a status keyword or a
    // value-domain identifier
    std::pair<std::string, SourceSpan> literal() {
        if (is_status_lit() || tok.kind == Tok::Ident) {
            Token t = tok;
            tok = lexer.next();
            return {t.text, t.span};
        }
        unexpected("a status or value literal");
    }

    defs::Term term() {
        SourceSpan span = tok.span;
        if (tok.kind == Tok::KwStatus) {
            tok = lexer.next();
            defs::Term t = defs::own_status();
            t.span = span;
            return t;
        }
        if (is_status_lit()) {
            defs::Term t = defs::status_lit(tok.text);
            t.span = span;
            tok = lexer.next();
            return t;
        }
        if (tok.kind == Tok::Ident) {
            std::string name = tok.text;
            tok = lexer.next();
            if (accept(Tok::Dot)) {
                if (accept(Tok::KwStatus)) {
                    defs::Term t = defs::port_status(name);
                    t.span = span;
                    return t;
                }
                eat(Tok::KwValue);
                defs::Term t = defs::port_value(name);
                t.span = span;
                return t;
            }
            defs::Term t = defs::value_lit(name);
            t.span = span;
            return t;
        }
        unexpected("a term ('status', a literal, or PORT.status/PORT.value)");
    }

    defs::Guard guard_atom() {
        SourceSpan span = tok.span;
        if (accept(Tok::KwNot)) {
            defs::Guard g = defs::negate(guard_atom());
            g.span = span;
            return g;
        }
        if (accept(Tok::LParen)) {
            defs::Guard g = guard_or();
            eat(Tok::RParen);
            return g;
        }
        defs::Term lhs = term();
        bool neq = false;
        if (accept(Tok::NotEqual))
            neq = true;
        else
            eat(Tok::Equal);
        defs::Term rhs = term();
        defs::Guard g = neq ? defs::ne(std::move(lhs), std::move(rhs))
                            : defs::eq(std::move(lhs), std::move(rhs));
        g.span = span;
        return g;
    }

    defs::Guard guard_and() {
        SourceSpan span = tok.span;
        defs::Guard first = guard_atom();
        if (tok.kind != Tok::KwAnd)
            return first;
        std::vector<defs::Guard> parts;
        parts.push_back(std::move(first));
        while (accept(Tok::KwAnd))
            parts.push_back(guard_atom());
        defs::Guard g = defs::all_of(std::move(parts));
        g.span = span;
        return g;
    }

    defs::Guard guard_or() {
        SourceSpan span = tok.span;
        defs::Guard first = guard_and();
        if (tok.kind != Tok::KwOr)
            return first;
        std::vector<defs::Guard> parts;
        parts.push_back(std::move(first));
        while (accept(Tok::KwOr))
            parts.push_back(guard_and());
        defs::Guard g = defs::any_of(std::move(parts));
        g.span = span;
        return g;
    }

    // `{ guard => result ... else result }` or a bare result term
    void transfer_expr(defs::Transfer &out) {
        if (!accept(Tok::LBrace)) {
            out.fallback = term();
            return;
        }
        for (;;) {
            if (accept(Tok::KwElse)) {
                out.fallback = term();
                eat(Tok::RBrace);
                return;
            }
            if (tok.kind == Tok::RBrace)
                throw ParseError("transfer chain is not total: missing final 'else RESULT'",
                                 tok.span, "'else'");
            defs::Branch branch;
            branch.guard = guard_or();
            eat(Tok::FatArrow);
            branch.result = term();
            out.branches.push_back(std::move(branch));
        }
    }

    defs::Function function() {
        defs::Function fn;
        fn.span = tok.span;
        eat(Tok::KwFunction);
        fn.name = eat(Tok::Ident).text;
        eat(Tok::LBrace);
        while (!accept(Tok::RBrace)) {
            switch (tok.kind) {
            case Tok::KwIn: {
                tok = lexer.next();
                Token name = eat(Tok::Ident);
                bool free = accept(Tok::KwFree);
                fn.inputs.push_back({name.text, free, name.span});
                break;
            }
            case Tok::KwOut: {
                tok = lexer.next();
                Token name = eat(Tok::Ident);
                fn.outputs.push_back({name.text, false, name.span});
                break;
            }
            case Tok::KwTransfer: {
                defs::Transfer tr;
                tr.span = tok.span;
                tok = lexer.next();
                tr.port = eat(Tok::Ident).text;
                eat(Tok::Dot);
                if (accept(Tok::KwStatus))
                    tr.targets_value = false;
                else {
                    eat(Tok::KwValue);
                    tr.targets_value = true;
                }
                eat(Tok::Equal);
                transfer_expr(tr);
                fn.transfers.push_back(std::move(tr));
                break;
            }
            default:
                unexpected("'in', 'out', 'transfer', or '}'");
            }
        }
        return fn;
    }

    defs::Constraint constraint() {
        defs::Constraint c;
        c.span = tok.span;
        for (;;) {
            if (tok.kind == Tok::KwOthers || tok.kind == Tok::KwAll) {
                SourceSpan span = tok.span;
                tok = lexer.next();
                eat(Tok::KwOK);
                if (c.others_ok)
                    throw ParseError("duplicate 'others OK' clause", span);
                c.others_ok = true;
                if (accept(Tok::KwExcept)) {
                    c.exempt.push_back(eat(Tok::Ident).text);
                    while (accept(Tok::Comma))
                        c.exempt.push_back(eat(Tok::Ident).text);
                }
            } else {
                defs::ConstraintAtom atom;
                Token name = eat(Tok::Ident);
                atom.name = name.text;
                atom.span = name.span;
                eat(Tok::Dot);
                if (accept(Tok::KwStatus))
                    atom.is_value = false;
                else {
                    eat(Tok::KwValue);
                    atom.is_value = true;
                }
                eat(Tok::Equal);
                atom.literal = literal().first;
                c.atoms.push_back(std::move(atom));
            }
            if (!accept(Tok::KwAnd))
                return c;
        }
    }

    std::vector<defs::ConclusionAtom> conclusion() {
        std::vector<defs::ConclusionAtom> atoms;
        do {
            defs::ConclusionAtom atom;
            Token name = eat(Tok::Ident);
            atom.port = name.text;
            atom.span = name.span;
            eat(Tok::Dot);
            if (accept(Tok::KwStatus))
                atom.is_value = false;
            else {
                eat(Tok::KwValue);
                atom.is_value = true;
            }
            eat(Tok::Equal);
            atom.literal = literal().first;
            atoms.push_back(std::move(atom));
        } while (accept(Tok::KwAnd));
        return atoms;
    }

    defs::Assertion assertion() {
        defs::Assertion a;
        a.span = tok.span;
        eat(Tok::KwAssert);
        a.name = eat(Tok::Ident).text;
        eat(Tok::LBrace);
        if (accept(Tok::KwWhen))
            a.when = constraint();
        eat(Tok::KwExpect);
        a.expect = conclusion();
        eat(Tok::RBrace);
        return a;
    }

    defs::ModelDefs model() {
        defs::ModelDefs m;
        eat(Tok::KwModel);
        m.name = eat(Tok::Ident).text;
        while (tok.kind != Tok::End) {
            switch (tok.kind) {
            case Tok::KwValues: {
                tok = lexer.next();
                eat(Tok::LBrace);
                while (!accept(Tok::RBrace))
                    m.values.push_back(eat(Tok::Ident).text);
                break;
            }
            case Tok::KwFunction:
                m.functions.push_back(function());
                break;
            case Tok::KwFlow: {
                defs::Flow fl;
                fl.span = tok.span;
                tok = lexer.next();
                fl.source = eat(Tok::Ident).text;
                eat(Tok::Arrow);
                fl.target = eat(Tok::Ident).text;
                m.flows.push_back(std::move(fl));
                break;
            }
            case Tok::KwAssert:
                m.assertions.push_back(assertion());
                break;
            default:
                unexpected("'values', 'function', 'flow', 'assert', or end of input");
            }
        }
        return m;
    }
};

} // namespace

defs::ModelDefs parse_model_defs(std::string_view text, std::string_view filename) {
    Parser p(text, filename);
    return p.model();
}

Model parse_model(std::string_view text, std::string_view filename) {
    return build_model(parse_model_defs(text, filename));
}

Assertion parse_assertion(const Model &model, std::string_view text, std::string_view filename) {
    Parser p(text, filename);
    defs::Assertion raw = p.assertion();
    p.eat(Tok::End);
    return bind_assertion(model, raw);
}

ScenarioConstraint parse_constraint(const Model &model, std::string_view text,
                                    std::string_view filename) {
    Parser p(text, filename);
    defs::Constraint raw = p.constraint();
    p.eat(Tok::End);
    return bind_constraint(model, raw);
}

std::vector<PortEquality> parse_condition(const Model &model, std::string_view text,
                                          std::string_view filename) {
    Parser p(text, filename);
    auto raw = p.conclusion();
    p.eat(Tok::End);
    return bind_condition(model, raw);
}

// ---- serializer -----------------------------------------------------------

namespace {

struct Writer {
    const Model &m;
    std::ostringstream os;

    void term(const Term &t) {
        switch (t.kind) {
        case Term::Kind::OwnStatus: os << "status"; break;
        case Term::Kind::PortStatus: os << m.port_name(t.port) << ".status"; break;
        case Term::Kind::PortValue: os << m.port_name(t.port) << ".value"; break;
        case Term::Kind::StatusLit: os << to_string(t.status); break;
        case Term::Kind::ValueLit: os << m.values[t.value]; break;
        }
    }

    // precedence: atom/not > and > or
    void guard(const Guard &g, int parent_level) {
        int level = g.kind == Guard::Kind::Or ? 0 : g.kind == Guard::Kind::And ? 1 : 2;
        bool parens = level < parent_level;
        if (parens)
            os << '(';
        switch (g.kind) {
        case Guard::Kind::Compare:
            term(g.lhs);
            os << (g.not_equal ? " != " : " = ");
            term(g.rhs);
            break;
        case Guard::Kind::And:
            for (size_t i = 0; i < g.children.size(); ++i) {
                if (i)
                    os << " and ";
                guard(g.children[i], 2);
            }
            break;
        case Guard::Kind::Or:
            for (size_t i = 0; i < g.children.size(); ++i) {
                if (i)
                    os << " or ";
                guard(g.children[i], 1);
            }
            break;
        case Guard::Kind::Not:
            os << "not ";
            if (g.children.front().kind == Guard::Kind::Compare) {
                os << '(';
                guard(g.children.front(), 0);
                os << ')';
            } else {
                guard(g.children.front(), 3);
            }
            break;
        }
        if (parens)
            os << ')';
    }

    void transfer(const TransferExpr &e) {
        os << "  transfer " << m.port_name(e.target)
           << (e.kind == TransferExpr::Kind::Value ? ".value = " : ".status = ");
        if (e.branches.empty()) {
            term(e.fallback);
            os << '\n';
            return;
        }
        os << "{\n";
        for (const auto &b : e.branches) {
            os << "    ";
            guard(b.guard, 0);
            os << " => ";
            term(b.result);
            os << '\n';
        }
        os << "    else ";
        term(e.fallback);
        os << "\n  }\n";
    }

    void port_equality(const PortEquality &eq) {
        os << m.port_name(eq.port);
        if (eq.is_value)
            os << ".value = " << m.values[eq.value];
        else
            os << ".status = " << to_string(eq.status);
    }

    void constraint(const ScenarioConstraint &c) {
        bool first = true;
        auto sep = [&] {
            if (!first)
                os << " and ";
            first = false;
        };
        for (const auto &[f, s] : c.function_status) {
            sep();
            os << m.function_name(f) << ".status = " << to_string(s);
        }
        for (const auto &[p, v] : c.free_values) {
            sep();
            os << m.port_name(p) << ".value = " << m.values[v];
        }
        for (const auto &eq : c.port_filters) {
            sep();
            port_equality(eq);
        }
        if (c.others_ok) {
            sep();
            os << "others OK";
            for (size_t i = 0; i < c.exempt.size(); ++i)
                os << (i ? ", " : " except ") << m.function_name(c.exempt[i]);
        }
    }

    std::string run() {
        os << "model " << m.name << "\n\nvalues {";
        for (const auto &v : m.values)
            os << ' ' << v;
        os << " }\n";
        for (const auto &fn : m.functions) {
            os << "\nfunction " << fn.name << " {\n";
            for (PortId p : fn.inputs)
                os << "  in " << m.port_name(p) << (m.ports[p].free ? " free\n" : "\n");
            for (PortId p : fn.outputs)
                os << "  out " << m.port_name(p) << '\n';
            for (PortId p : fn.outputs) {
                if (m.status_transfer[p])
                    transfer(*m.status_transfer[p]);
                if (m.value_transfer[p])
                    transfer(*m.value_transfer[p]);
            }
            os << "}\n";
        }
        if (!m.flows.empty())
            os << '\n';
        for (const auto &fl : m.flows)
            os << "flow " << m.port_name(fl.source) << " -> " << m.port_name(fl.target) << '\n';
        for (const auto &a : m.assertions) {
            const auto &h = a.hypothesis;
            bool has_when = h.others_ok || !h.function_status.empty() || !h.free_values.empty() ||
                            !h.port_filters.empty();
            os << "\nassert " << a.name << " {\n";
            if (has_when) {
                os << "  when ";
                constraint(h);
                os << '\n';
            }
            os << "  expect ";
            for (size_t i = 0; i < a.conclusion.size(); ++i) {
                if (i)
                    os << " and ";
                port_equality(a.conclusion[i]);
            }
            os << "\n}\n";
        }
        return std::move(os).str();
    }
};

} // namespace

std::string serialize(const Model &model) {
    Writer w{model, {}};
    return w.run();
}

Model load_model_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open model file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_model(buf.str(), path);
}

} // namespace failprop
