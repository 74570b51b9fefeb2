#include "weavetex/builtin.hpp"

#include "weavetex/error.hpp"

#include <fstream>
#include <system_error>
#include <vector>

namespace weavetex {

namespace {

namespace mp = boost::multiprecision;
using Integer = mp::cpp_int;

constexpr long kMaxExponent = 100000;

bool is_ident_start(char c) noexcept {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
bool is_digit(char c) noexcept { return c >= '0' && c <= '9'; }
bool is_ident_char(char c) noexcept { return is_ident_start(c) || is_digit(c); }
bool is_ws(char c) noexcept { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

bool is_integer(const Rational& v) { return mp::denominator(v) == 1; }

Integer euclid_mod(const Integer& a, const Integer& b) {
    if (b == 0)
        throw Error(ErrorCode::DivisionByZero, "modulo by zero");
    Integer r = a % b;
    if (r < 0)
        r += mp::abs(b);
    return r;
}

Integer require_integer(const Rational& v, const char* what) {
    if (!is_integer(v))
        throw Error(ErrorCode::Unsupported, std::string(what) + " requires integer operands");
    return mp::numerator(v);
}

Rational power(const Rational& base, const Rational& exponent) {
    Integer e = require_integer(exponent, "exponentiation");
    if (mp::abs(e) > kMaxExponent)
        throw Error(ErrorCode::Unsupported, "exponent too large");
    long n = e.convert_to<long>();
    unsigned long mag = static_cast<unsigned long>(n < 0 ? -n : n);
    Integer num = mp::pow(mp::numerator(base), static_cast<unsigned>(mag));
    Integer den = mp::pow(mp::denominator(base), static_cast<unsigned>(mag));
    if (n >= 0)
        return Rational(num, den);
    if (num == 0)
        throw Error(ErrorCode::DivisionByZero, "zero raised to a negative power");
    return Rational(den, num);
}

class Parser {
public:
    // With `syntax_only` nothing is computed or looked up, so syntax errors
    // surface before evaluation errors.
    Parser(std::string_view src, const Environment& env, bool syntax_only = false)
        : src_(src), env_(env), syntax_only_(syntax_only) {}

    Rational parse_all() {
        Rational v = expr();
        skip_ws();
        if (pos_ < src_.size())
            unexpected();
        return v;
    }

private:
    void skip_ws() {
        while (pos_ < src_.size() && is_ws(src_[pos_]))
            ++pos_;
    }

    char peek() {
        skip_ws();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }

    [[noreturn]] void unexpected() {
        if (pos_ >= src_.size())
            throw Error(ErrorCode::ParseError, "unexpected end of expression");
        if (src_[pos_] == '=')
            throw Error(ErrorCode::ParseError, "assignment is not an expression");
        throw Error(ErrorCode::ParseError,
                    std::string("unexpected '") + src_[pos_] + "' at offset " + std::to_string(pos_));
    }

    void expect(char c) {
        if (peek() != c)
            unexpected();
        ++pos_;
    }

    Rational expr() {
        Rational v = term();
        for (;;) {
            char c = peek();
            if (c == '+') {
                ++pos_;
                Rational r = term();
                if (!syntax_only_)
                    v += r;
            } else if (c == '-') {
                ++pos_;
                Rational r = term();
                if (!syntax_only_)
                    v -= r;
            } else {
                return v;
            }
        }
    }

    Rational term() {
        Rational v = unary();
        for (;;) {
            char c = peek();
            if (c == '*') {
                ++pos_;
                Rational r = unary();
                if (!syntax_only_)
                    v *= r;
            } else if (c == '/') {
                ++pos_;
                Rational d = unary();
                if (syntax_only_)
                    continue;
                if (d == 0)
                    throw Error(ErrorCode::DivisionByZero, "division by zero");
                v /= d;
            } else if (c == '%') {
                ++pos_;
                Rational d = unary();
                if (syntax_only_)
                    continue;
                v = Rational(euclid_mod(require_integer(v, "%"), require_integer(d, "%")));
            } else {
                return v;
            }
        }
    }

    Rational unary() {
        char c = peek();
        if (c == '-') {
            ++pos_;
            return -unary();
        }
        if (c == '+') {
            ++pos_;
            return unary();
        }
        return pow_expr();
    }

    Rational pow_expr() {
        Rational base = primary();
        if (peek() == '^') {
            ++pos_;
            Rational e = unary();
            return syntax_only_ ? base : power(base, e);
        }
        return base;
    }

    Rational primary() {
        char c = peek();
        if (c == '(') {
            ++pos_;
            Rational v = expr();
            expect(')');
            return v;
        }
        if (is_digit(c)) {
            std::size_t start = pos_;
            while (pos_ < src_.size() && is_digit(src_[pos_]))
                ++pos_;
            if (pos_ < src_.size() && (src_[pos_] == '.' || is_ident_start(src_[pos_])))
                throw Error(ErrorCode::ParseError, "only integer literals are supported");
            if (syntax_only_)
                return 0;
            return Rational(Integer(std::string(src_.substr(start, pos_ - start))));
        }
        if (is_ident_start(c)) {
            std::size_t start = pos_;
            while (pos_ < src_.size() && is_ident_char(src_[pos_]))
                ++pos_;
            std::string_view name = src_.substr(start, pos_ - start);
            if (peek() == '(')
                return call(name);
            if (syntax_only_)
                return 0;
            auto it = env_.find(name);
            if (it == env_.end())
                throw Error(ErrorCode::UnboundIdentifier,
                            "name '" + std::string(name) + "' is not defined");
            return it->second;
        }
        unexpected();
    }

    Rational call(std::string_view name) {
        expect('(');
        std::vector<Rational> args;
        if (peek() != ')') {
            args.push_back(expr());
            while (peek() == ',') {
                ++pos_;
                args.push_back(expr());
            }
        }
        expect(')');

        auto arity = [&](std::size_t n) {
            if (args.size() != n)
                throw Error(ErrorCode::ParseError, std::string(name) + "() takes " +
                                                       std::to_string(n) + " argument(s)");
        };
        if (name == "mod") {
            arity(2);
            if (syntax_only_)
                return 0;
            return Rational(
                euclid_mod(require_integer(args[0], "mod"), require_integer(args[1], "mod")));
        }
        if (name == "Integer") {
            arity(1);
            if (syntax_only_)
                return 0;
            return Rational(require_integer(args[0], "Integer"));
        }
        if (syntax_only_)
            return 0;
        throw Error(ErrorCode::UnboundIdentifier,
                    "function '" + std::string(name) + "' is not defined");
    }

    std::string_view src_;
    const Environment& env_;
    bool syntax_only_ = false;
    std::size_t pos_ = 0;
};

std::vector<std::string_view> split_statements(std::string_view program) {
    std::vector<std::string_view> out;
    int depth = 0;
    std::size_t start = 0;
    auto push = [&](std::size_t end) {
        std::string_view stmt = program.substr(start, end - start);
        std::size_t first = 0;
        while (first < stmt.size() && is_ws(stmt[first]))
            ++first;
        if (first < stmt.size())
            out.push_back(stmt);
    };
    for (std::size_t i = 0; i < program.size(); ++i) {
        char c = program[i];
        if (c == '#') {
            push(i);
            std::size_t nl = program.find('\n', i);
            i = nl == std::string_view::npos ? program.size() : nl;
            start = i + 1;
            continue;
        }
        if (c == '(')
            ++depth;
        else if (c == ')' && depth > 0)
            --depth;
        else if ((c == '\n' || c == ';') && depth == 0) {
            push(i);
            start = i + 1;
        }
    }
    if (start < program.size())
        push(program.size());
    return out;
}

} // namespace

std::string render_latex(const Rational& value) {
    if (is_integer(value))
        return mp::numerator(value).str();
    return "\\frac{" + mp::numerator(value).str() + "}{" + mp::denominator(value).str() + "}";
}

Rational evaluate(std::string_view expr, const Environment& env) {
    Parser(expr, env, true).parse_all();
    return Parser(expr, env).parse_all();
}

std::string builtin_eval(std::string_view expr, const Environment& env) {
    return render_latex(evaluate(expr, env));
}

void builtin_exec(std::string_view program, Environment& env) {
    for (std::string_view stmt : split_statements(program)) {
        std::size_t pos = 0;
        while (pos < stmt.size() && is_ws(stmt[pos]))
            ++pos;
        std::size_t name_start = pos;
        if (pos < stmt.size() && is_ident_start(stmt[pos])) {
            while (pos < stmt.size() && is_ident_char(stmt[pos]))
                ++pos;
            std::size_t name_end = pos;
            while (pos < stmt.size() && (stmt[pos] == ' ' || stmt[pos] == '\t'))
                ++pos;
            if (pos < stmt.size() && stmt[pos] == '=' &&
                (pos + 1 >= stmt.size() || stmt[pos + 1] != '=')) {
                std::string name(stmt.substr(name_start, name_end - name_start));
                if (name == "mod" || name == "Integer")
                    throw Error(ErrorCode::ParseError, "cannot assign to builtin '" + name + "'");
                env.insert_or_assign(std::move(name), evaluate(stmt.substr(pos + 1), env));
                continue;
            }
        }
        evaluate(stmt, env);
    }
}

BuiltinBackend::BuiltinBackend(std::filesystem::path base_dir) : base_dir_(std::move(base_dir)) {}

BackendResponse BuiltinBackend::send(const BackendRequest& request) {
    BackendResponse resp;
    resp.id = request.id;
    try {
        switch (request.kind) {
        case RequestKind::Eval:
            resp.latex = builtin_eval(request.code, env_);
            break;
        case RequestKind::Exec:
            builtin_exec(request.code, env_);
            break;
        case RequestKind::Plot: {
            if (!request.save_path || request.save_path->empty())
                throw Error(ErrorCode::ProtocolViolation, "plot request without save_path");
            std::filesystem::path rel(*request.save_path);
            if (rel.is_absolute())
                throw Error(ErrorCode::ProtocolViolation, "save_path must be relative");
            for (const auto& part : rel)
                if (part == "..")
                    throw Error(ErrorCode::ProtocolViolation, "save_path must not contain '..'");
            std::filesystem::path target = base_dir_ / rel;
            std::error_code ec;
            std::filesystem::create_directories(target.parent_path(), ec);
            std::ofstream out(target, std::ios::binary | std::ios::trunc);
            out.write(kPlotStubPayload.data(),
                      static_cast<std::streamsize>(kPlotStubPayload.size()));
            if (!out)
                throw Error(ErrorCode::IoError, "cannot write " + target.string());
            resp.files = std::vector<std::string>{*request.save_path};
            break;
        }
        }
        resp.ok = true;
    } catch (const Error& e) {
        resp = BackendResponse{};
        resp.id = request.id;
        resp.ok = false;
        resp.error = std::string(error_code_name(e.code())) + ": " + e.what();
    }
    return resp;
}

} // namespace weavetex
