#include "rdsde/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <vector>

namespace rdsde {

namespace {

ExprNodePtr make_constant(double v) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprNode::Kind::constant;
    n->value = v;
    return n;
}

ExprNodePtr make_unary(UnaryOp op, ExprNodePtr arg) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprNode::Kind::unary;
    n->unary = op;
    n->lhs = std::move(arg);
    return n;
}

ExprNodePtr make_binary(BinaryOp op, ExprNodePtr a, ExprNodePtr b) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprNode::Kind::binary;
    n->binary = op;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
}

class Parser {
public:
    Parser(std::string_view src, const ParamMap& params, std::size_t dim)
        : src_(src), params_(params), dim_(dim) {}

    ExprNodePtr run() {
        skip_ws();
        if (pos_ == src_.size()) {
            throw SyntaxError("empty expression", pos_);
        }
        ExprNodePtr e = expr();
        skip_ws();
        if (pos_ != src_.size()) {
            throw SyntaxError("unexpected '" + std::string(1, src_[pos_]) + "'", pos_);
        }
        return e;
    }

private:
    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_])) != 0) {
            ++pos_;
        }
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) {
            if (pos_ >= src_.size()) {
                throw SyntaxError(std::string("expected '") + c + "' but input ended", pos_);
            }
            throw SyntaxError(std::string("expected '") + c + "'", pos_);
        }
    }

    ExprNodePtr expr() {
        ExprNodePtr lhs = term();
        for (;;) {
            if (accept('+')) {
                lhs = make_binary(BinaryOp::add, lhs, term());
            } else if (accept('-')) {
                lhs = make_binary(BinaryOp::sub, lhs, term());
            } else {
                return lhs;
            }
        }
    }

    ExprNodePtr term() {
        ExprNodePtr lhs = unary();
        for (;;) {
            if (accept('*')) {
                lhs = make_binary(BinaryOp::mul, lhs, unary());
            } else if (accept('/')) {
                lhs = make_binary(BinaryOp::div, lhs, unary());
            } else {
                return lhs;
            }
        }
    }

    ExprNodePtr unary() {
        if (accept('-')) {
            return make_unary(UnaryOp::neg, unary());
        }
        if (accept('+')) {
            return unary();
        }
        return power();
    }

    ExprNodePtr power() {
        ExprNodePtr base = primary();
        if (accept('^')) {
            return make_binary(BinaryOp::pow, base, unary());
        }
        return base;
    }

    ExprNodePtr primary() {
        skip_ws();
        if (pos_ >= src_.size()) {
            throw SyntaxError("unexpected end of input", pos_);
        }
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            ExprNodePtr e = expr();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) != 0 || c == '.') {
            return number();
        }
        if (std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_') {
            return identifier();
        }
        throw SyntaxError("unexpected '" + std::string(1, c) + "'", pos_);
    }

    ExprNodePtr number() {
        const std::size_t start = pos_;
        auto digits = [&] {
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])) != 0) {
                ++pos_;
            }
        };
        digits();
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            digits();
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t save = pos_;
            ++pos_;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) {
                ++pos_;
            }
            if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])) != 0) {
                digits();
            } else {
                pos_ = save;
            }
        }
        double v = 0.0;
        const char* first = src_.data() + start;
        const char* last = src_.data() + pos_;
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr != last) {
            throw SyntaxError("malformed number", start);
        }
        return make_constant(v);
    }

    // Parses the 1-based index suffix of x<k>, xd<k>, s<k>; returns 0 if not all digits.
    static std::size_t suffix_index(std::string_view s) {
        if (s.empty() || s.front() == '0') {
            return 0;
        }
        std::size_t v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        return ec == std::errc() && ptr == s.data() + s.size() ? v : 0;
    }

    ExprNodePtr variable(std::string_view id, std::size_t at) {
        auto n = std::make_shared<ExprNode>();
        n->kind = ExprNode::Kind::variable;
        if (id == "t") {
            n->var = VarKind::time;
            return n;
        }
        std::size_t idx = 0;
        if (id.starts_with("xd") && (idx = suffix_index(id.substr(2))) != 0) {
            n->var = VarKind::delayed;
        } else if (id.starts_with("x") && (idx = suffix_index(id.substr(1))) != 0) {
            n->var = VarKind::current;
        } else if (id.starts_with("s") && (idx = suffix_index(id.substr(1))) != 0) {
            n->var = VarKind::sup;
        } else {
            return nullptr;
        }
        if (idx > dim_) {
            throw UnknownIdentifierError("variable '" + std::string(id) + "' exceeds state dimension " +
                                             std::to_string(dim_),
                                         at);
        }
        n->index = idx - 1;
        return n;
    }

    ExprNodePtr identifier() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) != 0 || src_[pos_] == '_')) {
            ++pos_;
        }
        const std::string_view id = src_.substr(start, pos_ - start);
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == '(') {
            return call(id, start);
        }
        if (auto v = variable(id, start)) {
            return v;
        }
        if (auto it = params_.find(id); it != params_.end()) {
            auto n = std::make_shared<ExprNode>();
            n->kind = ExprNode::Kind::parameter;
            n->name = std::string(id);
            n->value = it->second;
            return n;
        }
        throw UnknownIdentifierError("unknown identifier '" + std::string(id) + "'", start);
    }

    ExprNodePtr call(std::string_view name, std::size_t at) {
        expect('(');
        std::vector<ExprNodePtr> args;
        if (!accept(')')) {
            args.push_back(expr());
            while (accept(',')) {
                args.push_back(expr());
            }
            expect(')');
        }
        struct Fn {
            std::string_view name;
            UnaryOp op;
        };
        static constexpr Fn unary_fns[] = {{"sin", UnaryOp::sin},
                                           {"cos", UnaryOp::cos},
                                           {"exp", UnaryOp::exp},
                                           {"abs", UnaryOp::abs},
                                           {"neg", UnaryOp::neg}};
        for (const auto& fn : unary_fns) {
            if (fn.name == name) {
                if (args.size() != 1) {
                    throw ArityError(std::string(name) + " takes 1 argument, got " + std::to_string(args.size()),
                                     at);
                }
                return make_unary(fn.op, args[0]);
            }
        }
        if (name == "pow") {
            if (args.size() != 2) {
                throw ArityError("pow takes 2 arguments, got " + std::to_string(args.size()), at);
            }
            return make_binary(BinaryOp::pow, args[0], args[1]);
        }
        throw UnknownIdentifierError("unknown function '" + std::string(name) + "'", at);
    }

    std::string_view src_;
    const ParamMap& params_;
    std::size_t dim_;
    std::size_t pos_ = 0;
};

void print_node(const ExprNode& n, std::string& out) {
    switch (n.kind) {
    case ExprNode::Kind::constant: {
        char buf[64];
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), n.value);
        out.append(buf, ptr);
        return;
    }
    case ExprNode::Kind::parameter:
        out += n.name;
        return;
    case ExprNode::Kind::variable:
        switch (n.var) {
        case VarKind::time:
            out += "t";
            return;
        case VarKind::current:
            out += "x";
            break;
        case VarKind::delayed:
            out += "xd";
            break;
        case VarKind::sup:
            out += "s";
            break;
        }
        out += std::to_string(n.index + 1);
        return;
    case ExprNode::Kind::unary: {
        static constexpr const char* names[] = {"sin", "cos", "exp", "abs", "neg"};
        out += names[static_cast<int>(n.unary)];
        out += '(';
        print_node(*n.lhs, out);
        out += ')';
        return;
    }
    case ExprNode::Kind::binary:
        if (n.binary == BinaryOp::pow) {
            out += "pow(";
            print_node(*n.lhs, out);
            out += ", ";
            print_node(*n.rhs, out);
            out += ')';
            return;
        }
        static constexpr const char* ops[] = {" + ", " - ", " * ", " / "};
        out += '(';
        print_node(*n.lhs, out);
        out += ops[static_cast<int>(n.binary)];
        print_node(*n.rhs, out);
        out += ')';
        return;
    }
}

double eval_node(const ExprNode& n, const EvalContext& ctx) {
    switch (n.kind) {
    case ExprNode::Kind::constant:
    case ExprNode::Kind::parameter:
        return n.value;
    case ExprNode::Kind::variable:
        switch (n.var) {
        case VarKind::time:
            return ctx.t;
        case VarKind::current:
            return ctx.current[n.index];
        case VarKind::delayed:
            return ctx.delayed[n.index];
        case VarKind::sup:
            return ctx.sup[n.index];
        }
        break;
    case ExprNode::Kind::unary: {
        const double a = eval_node(*n.lhs, ctx);
        switch (n.unary) {
        case UnaryOp::sin:
            return std::sin(a);
        case UnaryOp::cos:
            return std::cos(a);
        case UnaryOp::exp:
            return std::exp(a);
        case UnaryOp::abs:
            return std::abs(a);
        case UnaryOp::neg:
            return -a;
        }
        break;
    }
    case ExprNode::Kind::binary: {
        const double a = eval_node(*n.lhs, ctx);
        const double b = eval_node(*n.rhs, ctx);
        switch (n.binary) {
        case BinaryOp::add:
            return a + b;
        case BinaryOp::sub:
            return a - b;
        case BinaryOp::mul:
            return a * b;
        case BinaryOp::div:
            return a / b;
        case BinaryOp::pow:
            return std::pow(a, b);
        }
        break;
    }
    }
    return std::nan("");
}

bool node_uses(const ExprNode& n, VarKind kind) {
    switch (n.kind) {
    case ExprNode::Kind::variable:
        return n.var == kind;
    case ExprNode::Kind::unary:
        return node_uses(*n.lhs, kind);
    case ExprNode::Kind::binary:
        return node_uses(*n.lhs, kind) || node_uses(*n.rhs, kind);
    default:
        return false;
    }
}

}  // namespace

Expr Expr::parse(std::string_view source, const ParamMap& params, std::size_t dim) {
    return Expr(Parser(source, params, dim).run());
}

std::string Expr::print() const {
    std::string out;
    if (root_) {
        print_node(*root_, out);
    }
    return out;
}

double Expr::eval(const EvalContext& ctx) const {
    return root_ ? eval_node(*root_, ctx) : 0.0;
}

bool Expr::uses(VarKind kind) const {
    return root_ && node_uses(*root_, kind);
}

bool same_tree(const ExprNode& a, const ExprNode& b) {
    if (a.kind != b.kind) {
        return false;
    }
    switch (a.kind) {
    case ExprNode::Kind::constant:
        return a.value == b.value;
    case ExprNode::Kind::parameter:
        return a.name == b.name && a.value == b.value;
    case ExprNode::Kind::variable:
        return a.var == b.var && a.index == b.index;
    case ExprNode::Kind::unary:
        return a.unary == b.unary && same_tree(*a.lhs, *b.lhs);
    case ExprNode::Kind::binary:
        return a.binary == b.binary && same_tree(*a.lhs, *b.lhs) && same_tree(*a.rhs, *b.rhs);
    }
    return false;
}

bool operator==(const Expr& a, const Expr& b) {
    if (!a.root_ || !b.root_) {
        return !a.root_ && !b.root_;
    }
    return same_tree(*a.root_, *b.root_);
}

}  // namespace rdsde
