#include "equgen/script.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace equgen {

ExprPtr make_name(std::string id) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::name;
    e->id = std::move(id);
    return e;
}

ExprPtr make_meet(ExprPtr a, ExprPtr b) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::meet;
    e->lhs = std::move(a);
    e->rhs = std::move(b);
    return e;
}

ExprPtr make_join(ExprPtr a, ExprPtr b) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::join;
    e->lhs = std::move(a);
    e->rhs = std::move(b);
    return e;
}

ExprPtr make_inv(ExprPtr a) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::inv;
    e->lhs = std::move(a);
    return e;
}

ExprPtr make_at(int x, int y) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::at;
    e->x = x;
    e->y = y;
    return e;
}

ExprPtr make_qu(int x, int y) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::qu;
    e->x = x;
    e->y = y;
    return e;
}

ExprPtr make_lit(LatticeValue v) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::lit;
    e->lit = std::move(v);
    return e;
}

ExprPtr make_join_all(const std::vector<ExprPtr>& parts) {
    if (parts.empty()) throw std::invalid_argument("make_join_all: empty list");
    ExprPtr acc = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i) acc = make_join(acc, parts[i]);
    return acc;
}

std::string format_value(const LatticeValue& v) {
    if (std::holds_alternative<Partition>(v)) return format_partition(std::get<Partition>(v));
    const Quasiorder& q = std::get<Quasiorder>(v);
    const auto pairs = transitive_reduction_pairs(q);
    if (pairs.empty()) return "id";
    std::string out;
    for (const auto& [x, y] : pairs) {
        if (!out.empty()) out += ' ';
        out += std::to_string(x) + ">" + std::to_string(y);
    }
    return out;
}

namespace {

void format_expr_rec(const Expr& e, std::string& out, int parent_prec) {
    // Precedence: join 1, meet 2, atoms 3.
    switch (e.kind) {
        case Expr::Kind::name:
            out += e.id;
            break;
        case Expr::Kind::join: {
            const bool paren = parent_prec > 1;
            if (paren) out += '(';
            format_expr_rec(*e.lhs, out, 1);
            out += " + ";
            format_expr_rec(*e.rhs, out, 1);
            if (paren) out += ')';
            break;
        }
        case Expr::Kind::meet: {
            const bool paren = parent_prec > 2;
            if (paren) out += '(';
            format_expr_rec(*e.lhs, out, 2);
            out += " * ";
            format_expr_rec(*e.rhs, out, 2);
            if (paren) out += ')';
            break;
        }
        case Expr::Kind::inv:
            out += "inv(";
            format_expr_rec(*e.lhs, out, 0);
            out += ')';
            break;
        case Expr::Kind::at:
            out += "at(" + std::to_string(e.x) + "," + std::to_string(e.y) + ")";
            break;
        case Expr::Kind::qu:
            out += "qu(" + std::to_string(e.x) + "," + std::to_string(e.y) + ")";
            break;
        case Expr::Kind::lit:
            if (std::holds_alternative<Partition>(*e.lit)) {
                const Partition& p = std::get<Partition>(*e.lit);
                if (p.size() <= 9)
                    out += format_partition_eq(p);
                else
                    out += '"' + format_partition(p) + '"';
            } else {
                out += '"' + format_value(*e.lit) + '"';
            }
            break;
    }
}

} // namespace

std::string format_expr(const Expr& e) {
    std::string out;
    format_expr_rec(e, out, 0);
    return out;
}

LatticeValue eval_expr(const Expr& e, const std::string& kind, int n,
                       const std::map<std::string, LatticeValue>& env) {
    const bool quo = kind == "quo";
    switch (e.kind) {
        case Expr::Kind::name: {
            const auto it = env.find(e.id);
            if (it == env.end())
                throw std::invalid_argument("undefined identifier '" + e.id + "'");
            return it->second;
        }
        case Expr::Kind::meet:
        case Expr::Kind::join: {
            const LatticeValue a = eval_expr(*e.lhs, kind, n, env);
            const LatticeValue b = eval_expr(*e.rhs, kind, n, env);
            if (a.index() != b.index())
                throw std::invalid_argument("mixed element kinds in expression");
            if (std::holds_alternative<Partition>(a)) {
                const auto& pa = std::get<Partition>(a);
                const auto& pb = std::get<Partition>(b);
                return e.kind == Expr::Kind::meet ? meet(pa, pb) : join(pa, pb);
            }
            const auto& qa = std::get<Quasiorder>(a);
            const auto& qb = std::get<Quasiorder>(b);
            return e.kind == Expr::Kind::meet ? meet(qa, qb) : join(qa, qb);
        }
        case Expr::Kind::inv: {
            if (!quo) throw std::invalid_argument("inv(...) is only valid in quo scripts");
            const LatticeValue a = eval_expr(*e.lhs, kind, n, env);
            return inverse(std::get<Quasiorder>(a));
        }
        case Expr::Kind::at: {
            const Partition p = atom(n, e.x, e.y);
            if (quo) return equ_to_quo(p);
            return p;
        }
        case Expr::Kind::qu:
            if (!quo) throw std::invalid_argument("qu(...) is only valid in quo scripts");
            return qu(n, e.x, e.y);
        case Expr::Kind::lit: {
            if (quo && std::holds_alternative<Partition>(*e.lit))
                return equ_to_quo(std::get<Partition>(*e.lit));
            if (!quo && std::holds_alternative<Quasiorder>(*e.lit))
                throw std::invalid_argument("quasiorder literal in equ script");
            return *e.lit;
        }
    }
    throw std::logic_error("unreachable expression kind");
}

// ---------------------------------------------------------------------------
// Parser.

namespace {

struct LineParser {
    const std::string& text;
    std::size_t pos = 0;
    int line_no;
    const std::string& kind;
    int n;
    const std::vector<std::pair<std::string, int>>& aliases;

    [[noreturn]] void fail(const std::string& msg) const {
        throw parse_error("line " + std::to_string(line_no) + ": " + msg,
                          static_cast<std::size_t>(line_no));
    }

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    bool eat(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    bool at_end() {
        skip_ws();
        return pos >= text.size();
    }

    bool peek_word(const std::string& w) {
        skip_ws();
        if (text.compare(pos, w.size(), w) != 0) return false;
        const std::size_t after = pos + w.size();
        if (after < text.size() &&
            (std::isalnum(static_cast<unsigned char>(text[after])) || text[after] == '_'))
            return false;
        return true;
    }

    std::string ident() {
        skip_ws();
        if (pos >= text.size() || !(std::isalpha(static_cast<unsigned char>(text[pos])) ||
                                    text[pos] == '_'))
            fail("expected identifier");
        std::size_t start = pos;
        while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) ||
                                     text[pos] == '_' || text[pos] == '\''))
            ++pos;
        return text.substr(start, pos - start);
    }

    int integer() {
        skip_ws();
        if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
            fail("expected integer");
        int v = 0;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            v = v * 10 + (text[pos] - '0');
            ++pos;
        }
        return v;
    }

    int element() {
        skip_ws();
        if (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
            return integer();
        const std::string name = ident();
        for (const auto& [a, v] : aliases)
            if (a == name) return v;
        fail("unknown element alias '" + name + "'");
    }

    ExprPtr expr() { return sum(); }

    ExprPtr sum() {
        ExprPtr e = prod();
        while (eat('+')) e = make_join(e, prod());
        return e;
    }

    ExprPtr prod() {
        ExprPtr e = atom_expr();
        while (eat('*')) e = make_meet(e, atom_expr());
        return e;
    }

    ExprPtr atom_expr() {
        skip_ws();
        if (pos >= text.size()) fail("unexpected end of expression");
        if (eat('(')) {
            ExprPtr e = expr();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        if (text[pos] == '"') {
            ++pos;
            const std::size_t end = text.find('"', pos);
            if (end == std::string::npos) fail("unterminated string literal");
            const std::string body = text.substr(pos, end - pos);
            pos = end + 1;
            if (kind == "quo") return make_lit(parse_quo_literal(body));
            return make_lit(parse_partition(body, n));
        }
        if (peek_word("eq")) {
            // eq(...) compact partition literal; raw text up to ')'.
            const std::size_t start = pos;
            const std::size_t close = text.find(')', start);
            if (close == std::string::npos) fail("unterminated eq(...) literal");
            const std::string body = text.substr(start, close - start + 1);
            pos = close + 1;
            return make_lit(parse_partition(body, n));
        }
        if (peek_word("at") || peek_word("qu")) {
            const std::string fn = ident();
            if (!eat('(')) fail("expected '(' after " + fn);
            const int x = element();
            if (!eat(',')) fail("expected ','");
            const int y = element();
            if (!eat(')')) fail("expected ')'");
            return fn == "at" ? make_at(x, y) : make_qu(x, y);
        }
        if (peek_word("inv")) {
            ident();
            if (!eat('(')) fail("expected '(' after inv");
            ExprPtr e = expr();
            if (!eat(')')) fail("expected ')'");
            return make_inv(e);
        }
        return make_name(ident());
    }

    Quasiorder parse_quo_literal(const std::string& body) const {
        if (n > Quasiorder::max_n) fail("quasiorder literal with n > 32");
        std::array<std::uint32_t, Quasiorder::max_n> rows = {};
        std::istringstream in(body);
        std::string tok;
        while (in >> tok) {
            if (tok == "id") continue;
            const auto gt = tok.find('>');
            if (gt == std::string::npos) fail("expected 'x>y' in quasiorder literal");
            int x, y;
            try {
                x = std::stoi(tok.substr(0, gt));
                y = std::stoi(tok.substr(gt + 1));
            } catch (const std::exception&) {
                fail("malformed quasiorder literal pair '" + tok + "'");
            }
            if (x < 0 || x >= n || y < 0 || y >= n) fail("pair element out of range");
            rows[static_cast<std::size_t>(x)] |= 1u << y;
        }
        return Quasiorder::from_rows(n, rows);
    }
};

void check_no_names(const Expr& e, int line_no) {
    switch (e.kind) {
        case Expr::Kind::name:
            throw parse_error("line " + std::to_string(line_no) +
                                  ": expect must be a literal expression (found name '" +
                                  e.id + "')",
                              static_cast<std::size_t>(line_no));
        case Expr::Kind::meet:
        case Expr::Kind::join:
            check_no_names(*e.lhs, line_no);
            check_no_names(*e.rhs, line_no);
            break;
        case Expr::Kind::inv:
            check_no_names(*e.lhs, line_no);
            break;
        default:
            break;
    }
}

void check_references(const Expr& e, const std::map<std::string, int>& defined, int line_no) {
    switch (e.kind) {
        case Expr::Kind::name:
            if (!defined.count(e.id))
                throw parse_error("line " + std::to_string(line_no) +
                                      ": undefined or forward reference '" + e.id + "'",
                                  static_cast<std::size_t>(line_no));
            break;
        case Expr::Kind::meet:
        case Expr::Kind::join:
            check_references(*e.lhs, defined, line_no);
            check_references(*e.rhs, defined, line_no);
            break;
        case Expr::Kind::inv:
            check_references(*e.lhs, defined, line_no);
            break;
        default:
            break;
    }
}

} // namespace

Script parse_script(const std::string& text) {
    Script s;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    bool have_kind = false;
    bool have_n = false;
    std::map<std::string, int> defined; // name -> definition line
    const auto define = [&](const std::string& name, int ln) {
        if (defined.count(name))
            throw parse_error("line " + std::to_string(ln) + ": duplicate name '" + name + "'",
                              static_cast<std::size_t>(ln));
        defined[name] = ln;
    };
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        // Trim.
        std::size_t b = 0, e = line.size();
        while (b < e && std::isspace(static_cast<unsigned char>(line[b]))) ++b;
        while (e > b && std::isspace(static_cast<unsigned char>(line[e - 1]))) --e;
        line = line.substr(b, e - b);
        if (line.empty()) continue;

        if (line.rfind("kind ", 0) == 0) {
            const std::string k = line.substr(5);
            if (k != "equ" && k != "quo")
                throw parse_error("line " + std::to_string(line_no) + ": kind must be equ or quo",
                                  static_cast<std::size_t>(line_no));
            s.kind = k;
            have_kind = true;
            continue;
        }
        if (line.rfind("n=", 0) == 0) {
            s.n = std::stoi(line.substr(2));
            if (s.n < 1 || s.n > Partition::max_n)
                throw parse_error("line " + std::to_string(line_no) + ": n out of range",
                                  static_cast<std::size_t>(line_no));
            have_n = true;
            continue;
        }
        if (!have_kind || !have_n)
            throw parse_error("line " + std::to_string(line_no) +
                                  ": kind and n= must precede bindings",
                              static_cast<std::size_t>(line_no));
        if (line.rfind("elem ", 0) == 0) {
            LineParser lp{line, 5, line_no, s.kind, s.n, s.elem_aliases};
            const std::string name = lp.ident();
            if (!lp.eat('=')) lp.fail("expected '='");
            const int v = lp.integer();
            if (v < 0 || v >= s.n) lp.fail("element alias out of range");
            if (!lp.at_end()) lp.fail("trailing input");
            s.elem_aliases.emplace_back(name, v);
            continue;
        }
        if (line.rfind("gen ", 0) == 0) {
            LineParser lp{line, 4, line_no, s.kind, s.n, s.elem_aliases};
            const std::string name = lp.ident();
            if (!lp.eat('=')) lp.fail("expected '='");
            ExprPtr ex = lp.expr();
            if (!lp.at_end()) lp.fail("trailing input");
            check_no_names(*ex, line_no);
            define(name, line_no);
            s.generators.emplace_back(name, std::move(ex));
            continue;
        }
        // Step: name := expr [expect literal]
        const auto assign = line.find(":=");
        if (assign == std::string::npos)
            throw parse_error("line " + std::to_string(line_no) + ": expected ':='",
                              static_cast<std::size_t>(line_no));
        LineParser nameparser{line, 0, line_no, s.kind, s.n, s.elem_aliases};
        const std::string name = nameparser.ident();
        nameparser.skip_ws();
        if (nameparser.pos != assign)
            nameparser.fail("malformed step name");
        std::string rhs = line.substr(assign + 2);
        ExprPtr expect;
        const auto expect_pos = rhs.find(" expect ");
        if (expect_pos != std::string::npos) {
            LineParser ep{rhs, expect_pos + 8, line_no, s.kind, s.n, s.elem_aliases};
            expect = ep.expr();
            if (!ep.at_end()) ep.fail("trailing input after expect");
            check_no_names(*expect, line_no);
            rhs = rhs.substr(0, expect_pos);
        }
        LineParser lp{rhs, 0, line_no, s.kind, s.n, s.elem_aliases};
        ExprPtr ex = lp.expr();
        if (!lp.at_end()) lp.fail("trailing input");
        check_references(*ex, defined, line_no);
        define(name, line_no);
        s.steps.push_back({name, std::move(ex), std::move(expect)});
    }
    if (!have_kind || !have_n) throw parse_error("missing kind/n= header", 0);
    return s;
}

std::string format_script(const Script& s) {
    std::string out = "kind " + s.kind + "\n";
    out += "n=" + std::to_string(s.n) + "\n";
    for (const auto& [name, v] : s.elem_aliases)
        out += "elem " + name + " = " + std::to_string(v) + "\n";
    for (const auto& [name, ex] : s.generators)
        out += "gen " + name + " = " + format_expr(*ex) + "\n";
    for (const auto& st : s.steps) {
        out += st.name + " := " + format_expr(*st.expr);
        if (st.expect) out += " expect " + format_expr(*st.expect);
        out += "\n";
    }
    return out;
}

ReplayReport replay(const Script& s) {
    ReplayReport rep;
    std::map<std::string, LatticeValue> env;
    for (const auto& [name, ex] : s.generators) {
        LatticeValue v = eval_expr(*ex, s.kind, s.n, {});
        env.emplace(name, v);
        rep.values.emplace_back(name, std::move(v));
    }
    for (const auto& st : s.steps) {
        LatticeValue v = eval_expr(*st.expr, s.kind, s.n, env);
        StepReport sr;
        sr.name = st.name;
        sr.computed = format_value(v);
        if (st.expect) {
            const LatticeValue want = eval_expr(*st.expect, s.kind, s.n, {});
            sr.expected = format_value(want);
            sr.ok = want == v;
            if (!sr.ok) rep.pass = false;
        }
        env.emplace(st.name, v);
        rep.values.emplace_back(st.name, std::move(v));
        rep.steps.push_back(std::move(sr));
    }
    return rep;
}

} // namespace equgen
