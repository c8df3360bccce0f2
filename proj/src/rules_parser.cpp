#include "proxconvoy/errors.hpp"
#include "proxconvoy/rules.hpp"

#include <cctype>
#include <charconv>
#include <fmt/format.h>
#include <set>

namespace proxconvoy {

namespace {

enum class token_kind { word, net, content, integer, lparen, rparen, comma, colon, relop, end };

struct token {
    token_kind kind;
    std::string text;
    std::size_t line;
    std::size_t column;
};

class lexer {
public:
    explicit lexer(std::string_view text) : text_(text) {}

    std::vector<token> run() {
        std::vector<token> out;
        for (;;) {
            skip_blank();
            const std::size_t line = line_;
            const std::size_t column = column_;
            if (pos_ >= text_.size()) {
                out.push_back({token_kind::end, "", line, column});
                return out;
            }
            const char c = text_[pos_];
            auto single = [&](token_kind kind) {
                advance();
                out.push_back({kind, std::string(1, c), line, column});
            };
            if (c == '(') {
                single(token_kind::lparen);
            } else if (c == ')') {
                single(token_kind::rparen);
            } else if (c == ',') {
                single(token_kind::comma);
            } else if (c == ':') {
                single(token_kind::colon);
            } else if (c == '<' || c == '>' || c == '=') {
                std::string op(1, c);
                advance();
                if (c != '=' && pos_ < text_.size() && text_[pos_] == '=') {
                    op += '=';
                    advance();
                }
                out.push_back({token_kind::relop, op, line, column});
            } else if (c == '\'') {
                out.push_back({token_kind::net, quoted('\''), line, column});
            } else if (c == '"') {
                out.push_back({token_kind::content, quoted('"'), line, column});
            } else if (c == '{') {
                out.push_back({token_kind::content, braced(), line, column});
            } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '-') {
                std::string digits;
                do {
                    digits += text_[pos_];
                    advance();
                } while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])));
                out.push_back({token_kind::integer, digits, line, column});
            } else if (word_char(c)) {
                std::string word;
                while (pos_ < text_.size() && word_char(text_[pos_])) {
                    word += text_[pos_];
                    advance();
                }
                out.push_back({token_kind::word, word, line, column});
            } else {
                throw syntax_error(line, column, fmt::format("unexpected character '{}'", c));
            }
        }
    }

private:
    static bool word_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-';
    }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    void skip_blank() {
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n')
                    advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                return;
            }
        }
    }

    std::string quoted(char quote) {
        const std::size_t line = line_;
        const std::size_t column = column_;
        advance();
        std::string out;
        while (pos_ < text_.size() && text_[pos_] != quote) {
            if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) {
                advance();
                const char c = text_[pos_];
                out += c == 'n' ? '\n' : c == 't' ? '\t' : c;
            } else {
                out += text_[pos_];
            }
            advance();
        }
        if (pos_ >= text_.size())
            throw syntax_error(line, column, "unterminated string");
        advance();
        return out;
    }

    // Brace payloads keep their text verbatim apart from surrounding spaces.
    std::string braced() {
        const std::size_t line = line_;
        const std::size_t column = column_;
        advance();
        std::string out;
        int depth = 1;
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (c == '{')
                ++depth;
            if (c == '}' && --depth == 0)
                break;
            out += c;
            advance();
        }
        if (pos_ >= text_.size())
            throw syntax_error(line, column, "unterminated '{' content");
        advance();
        const auto first = out.find_first_not_of(" \t\r\n");
        if (first == std::string::npos)
            return {};
        const auto last = out.find_last_not_of(" \t\r\n");
        return out.substr(first, last - first + 1);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t column_ = 1;
};

predicate_ptr make(auto node) {
    return std::make_shared<const predicate>(predicate{std::move(node)});
}

class parser {
public:
    explicit parser(std::vector<token> tokens) : tokens_(std::move(tokens)) {}

    std::vector<rule> rules() {
        std::vector<rule> out;
        while (peek().kind != token_kind::end)
            out.push_back(statement());
        return out;
    }

private:
    const token& peek() const { return tokens_[pos_]; }
    const token& next() { return tokens_[pos_ == tokens_.size() - 1 ? pos_ : pos_++]; }

    [[noreturn]] void fail(const token& at, const std::string& what) const {
        const std::string found = at.kind == token_kind::end ? "end of input"
                                                             : fmt::format("'{}'", at.text);
        throw syntax_error(at.line, at.column, fmt::format("{}, found {}", what, found));
    }

    const token& expect(token_kind kind, const char* what) {
        if (peek().kind != kind)
            fail(peek(), fmt::format("expected {}", what));
        return next();
    }

    void keyword(std::string_view word) {
        if (peek().kind != token_kind::word || peek().text != word)
            fail(peek(), fmt::format("expected {}", word));
        next();
    }

    bool accept_keyword(std::string_view word) {
        if (peek().kind == token_kind::word && peek().text == word) {
            next();
            return true;
        }
        return false;
    }

    rule statement() {
        keyword("RULE");
        const token& id = expect(token_kind::word, "rule id");
        rule r;
        r.id = id.text;
        expect(token_kind::colon, "':'");
        keyword("IF");
        r.condition = disjunction();
        keyword("THEN");
        r.content = expect(token_kind::content, "quoted content").text;
        return r;
    }

    predicate_ptr disjunction() {
        auto lhs = conjunction();
        while (accept_keyword("OR"))
            lhs = make(or_node{lhs, conjunction()});
        return lhs;
    }

    predicate_ptr conjunction() {
        auto lhs = unary();
        while (accept_keyword("AND"))
            lhs = make(and_node{lhs, unary()});
        return lhs;
    }

    predicate_ptr unary() {
        if (accept_keyword("NOT"))
            return make(not_node{unary()});
        if (peek().kind == token_kind::lparen) {
            next();
            auto inner = disjunction();
            expect(token_kind::rparen, "')'");
            return inner;
        }
        return term();
    }

    std::string net() { return expect(token_kind::net, "quoted network name").text; }

    int clock() {
        const token& t = expect(token_kind::net, "'HH:MM' time");
        const std::string& s = t.text;
        auto digits = [&](std::size_t at) {
            return std::isdigit(static_cast<unsigned char>(s[at])) &&
                   std::isdigit(static_cast<unsigned char>(s[at + 1]));
        };
        if (s.size() != 5 || s[2] != ':' || !digits(0) || !digits(3))
            fail(t, "expected time as 'HH:MM'");
        const int hours = std::stoi(s.substr(0, 2));
        const int minutes = std::stoi(s.substr(3, 2));
        if (hours > 23 || minutes > 59)
            fail(t, "time of day out of range");
        return hours * 60 + minutes;
    }

    long integer(long min, const char* what) {
        const token& t = expect(token_kind::integer, what);
        long value = 0;
        auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
        if (ec != std::errc() || ptr != t.text.data() + t.text.size())
            fail(t, fmt::format("expected {}", what));
        if (value < min)
            fail(t, fmt::format("{} must be >= {}", what, min));
        return value;
    }

    void open() { expect(token_kind::lparen, "'('"); }
    void close() { expect(token_kind::rparen, "')'"); }
    void comma() { expect(token_kind::comma, "','"); }

    predicate_ptr term() {
        const token& name = peek();
        if (name.kind != token_kind::word)
            fail(name, "expected condition");
        next();
        const std::string& w = name.text;
        if (w == "IS_VISIBLE" || w == "NOT_VISIBLE") {
            open();
            std::string ref = net();
            close();
            if (w == "IS_VISIBLE")
                return make(is_visible{std::move(ref)});
            return make(not_visible{std::move(ref)});
        }
        if (w == "CLOSE_THAN") {
            open();
            std::string first = net();
            comma();
            std::string second = net();
            close();
            return make(close_than{std::move(first), std::move(second)});
        }
        if (w == "FIRST_VISIT" || w == "FOLLOW_UP_VISIT") {
            open();
            close();
            if (w == "FIRST_VISIT")
                return make(first_visit{});
            return make(follow_up_visit{});
        }
        if (w == "TIME_WITHIN") {
            open();
            const int begin = clock();
            comma();
            const int end = clock();
            close();
            return make(time_within{begin, end});
        }
        if (w == "TIME") {
            open();
            close();
            const token& op = expect(token_kind::relop, "comparison operator");
            time_relation rel = time_relation::equal;
            if (op.text == "<")
                rel = time_relation::less;
            else if (op.text == "<=")
                rel = time_relation::less_equal;
            else if (op.text == ">=")
                rel = time_relation::greater_equal;
            else if (op.text == ">")
                rel = time_relation::greater;
            return make(time_compare{rel, clock()});
        }
        if (w == "IN_GROUP_OF") {
            open();
            const long n = integer(1, "group size");
            comma();
            const long seconds = integer(1, "duration in seconds");
            close();
            return make(in_group_of_term{static_cast<int>(n), seconds});
        }
        fail(name, "expected condition");
    }

    std::vector<token> tokens_;
    std::size_t pos_ = 0;
};

// Binding strength, higher binds tighter.
int precedence(const predicate& p) {
    if (std::holds_alternative<or_node>(p.node))
        return 1;
    if (std::holds_alternative<and_node>(p.node))
        return 2;
    if (std::holds_alternative<not_node>(p.node))
        return 3;
    return 4;
}

std::string quote(std::string_view text, char q) {
    std::string out(1, q);
    for (char c : text) {
        if (c == q || c == '\\')
            out += '\\';
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out += c;
    }
    out += q;
    return out;
}

std::string clock_text(int minutes) {
    return fmt::format("'{:02}:{:02}'", minutes / 60, minutes % 60);
}

std::string wrapped(const predicate& p, int min_precedence) {
    const std::string text = to_string(p);
    return precedence(p) < min_precedence ? "(" + text + ")" : text;
}

struct printer {
    std::string operator()(const is_visible& x) const {
        return "IS_VISIBLE(" + quote(x.net, '\'') + ")";
    }
    std::string operator()(const not_visible& x) const {
        return "NOT_VISIBLE(" + quote(x.net, '\'') + ")";
    }
    std::string operator()(const close_than& x) const {
        return "CLOSE_THAN(" + quote(x.first, '\'') + ", " + quote(x.second, '\'') + ")";
    }
    std::string operator()(const first_visit&) const { return "FIRST_VISIT()"; }
    std::string operator()(const follow_up_visit&) const { return "FOLLOW_UP_VISIT()"; }
    std::string operator()(const time_within& x) const {
        return "TIME_WITHIN(" + clock_text(x.begin) + ", " + clock_text(x.end) + ")";
    }
    std::string operator()(const time_compare& x) const {
        static constexpr const char* ops[] = {"<", "<=", "=", ">=", ">"};
        return fmt::format("TIME() {} {}", ops[static_cast<int>(x.relation)],
                           clock_text(x.minutes));
    }
    std::string operator()(const in_group_of_term& x) const {
        return fmt::format("IN_GROUP_OF({}, {})", x.n, x.seconds);
    }
    // Parsing is left associative, so a right operand of equal strength
    // needs parentheses to keep its shape.
    std::string operator()(const and_node& x) const {
        return wrapped(*x.lhs, 2) + " AND " + wrapped(*x.rhs, 3);
    }
    std::string operator()(const or_node& x) const {
        return wrapped(*x.lhs, 1) + " OR " + wrapped(*x.rhs, 2);
    }
    std::string operator()(const not_node& x) const { return "NOT " + wrapped(*x.operand, 3); }
};

bool same(const predicate_ptr& a, const predicate_ptr& b) {
    if (!a || !b)
        return a == b;
    return *a == *b;
}

struct equal_visitor {
    template <class A, class B>
    bool operator()(const A&, const B&) const { return false; }

    bool operator()(const is_visible& a, const is_visible& b) const { return a.net == b.net; }
    bool operator()(const not_visible& a, const not_visible& b) const { return a.net == b.net; }
    bool operator()(const close_than& a, const close_than& b) const {
        return a.first == b.first && a.second == b.second;
    }
    bool operator()(const first_visit&, const first_visit&) const { return true; }
    bool operator()(const follow_up_visit&, const follow_up_visit&) const { return true; }
    bool operator()(const time_within& a, const time_within& b) const {
        return a.begin == b.begin && a.end == b.end;
    }
    bool operator()(const time_compare& a, const time_compare& b) const {
        return a.relation == b.relation && a.minutes == b.minutes;
    }
    bool operator()(const in_group_of_term& a, const in_group_of_term& b) const {
        return a.n == b.n && a.seconds == b.seconds;
    }
    bool operator()(const and_node& a, const and_node& b) const {
        return same(a.lhs, b.lhs) && same(a.rhs, b.rhs);
    }
    bool operator()(const or_node& a, const or_node& b) const {
        return same(a.lhs, b.lhs) && same(a.rhs, b.rhs);
    }
    bool operator()(const not_node& a, const not_node& b) const {
        return same(a.operand, b.operand);
    }
};

} // namespace

bool operator==(const predicate& a, const predicate& b) {
    return std::visit(equal_visitor{}, a.node, b.node);
}

bool operator==(const rule& a, const rule& b) {
    return a.id == b.id && a.content == b.content && same(a.condition, b.condition);
}

ruleset::ruleset(std::vector<rule> rules) : rules_(std::move(rules)) {
    std::set<std::string> ids;
    for (const auto& r : rules_)
        if (!ids.insert(r.id).second)
            throw duplicate_rule_id(r.id);
}

ruleset parse_rules(std::string_view text) {
    parser p(lexer(text).run());
    return ruleset(p.rules());
}

std::string to_string(const predicate& p) {
    return std::visit(printer{}, p.node);
}

std::string to_string(const rule& r) {
    return fmt::format("RULE {} : IF {} THEN {}", r.id, to_string(*r.condition),
                       quote(r.content, '"'));
}

std::string to_string(const ruleset& rs) {
    std::string out;
    for (const auto& r : rs.rules()) {
        out += to_string(r);
        out += '\n';
    }
    return out;
}

} // namespace proxconvoy
