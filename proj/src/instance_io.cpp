#include "vcsp/instance_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <unordered_map>
#include <vector>

#include "vcsp/errors.hpp"

namespace vcsp {

namespace {

struct Token {
    std::string_view text;
    std::size_t column;  // 1-based
};

struct Line {
    std::size_t number;
    std::vector<Token> tokens;
};

std::vector<Line> tokenize(std::string_view text) {
    std::vector<Line> lines;
    std::size_t number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto end = std::min(text.find('\n', pos), text.size());
        auto body = text.substr(pos, end - pos);
        ++number;
        if (const auto hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
        Line line{number, {}};
        std::size_t i = 0;
        while (i < body.size()) {
            while (i < body.size() && (body[i] == ' ' || body[i] == '\t' || body[i] == '\r')) ++i;
            const auto start = i;
            while (i < body.size() && body[i] != ' ' && body[i] != '\t' && body[i] != '\r') ++i;
            if (i > start) line.tokens.push_back({body.substr(start, i - start), start + 1});
        }
        if (!line.tokens.empty()) lines.push_back(std::move(line));
        if (end == text.size()) break;
        pos = end + 1;
    }
    return lines;
}

class Cursor {
public:
    explicit Cursor(const Line& line) : line_(line) {}

    const Token& next(const char* what) {
        if (i_ >= line_.tokens.size()) fail_at_end(std::string("expected ") + what);
        return line_.tokens[i_++];
    }

    template <typename Int>
    std::pair<Int, const Token*> integer(const char* what) {
        const auto& tok = next(what);
        Int value{};
        const auto* first = tok.text.data();
        const auto* last = first + tok.text.size();
        const auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc{} || ptr != last)
            throw ParseError(line_.number, tok.column,
                             std::string("expected ") + what + ", found '" + std::string(tok.text) + "'");
        return {value, &tok};
    }

    void finish() const {
        if (i_ < line_.tokens.size())
            throw ParseError(line_.number, line_.tokens[i_].column,
                             "unexpected token '" + std::string(line_.tokens[i_].text) + "'");
    }

    [[noreturn]] void fail_at_end(const std::string& message) const {
        const auto& last = line_.tokens.back();
        throw ParseError(line_.number, last.column + last.text.size(), message);
    }

    std::size_t line() const { return line_.number; }

private:
    const Line& line_;
    std::size_t i_ = 0;
};

struct Located {
    std::size_t line;
    std::size_t column;
};

struct DomainDecl {
    std::vector<std::pair<Label, Located>> labels;
    Located where;
};

struct UnaryDecl {
    VarId var;
    std::vector<std::pair<Label, Located>> labels;
    Located where;
};

struct ConstraintDecl {
    VarId first;
    VarId second;
    Located first_at;
    Located second_at;
    bool allow;
    std::vector<std::pair<std::pair<Label, Label>, std::pair<Located, Located>>> pairs;
    std::size_t line;
};

std::string describe(const ConstraintDecl& c) {
    return "constraint (" + std::to_string(c.first) + ", " + std::to_string(c.second) + ") on line " +
           std::to_string(c.line);
}

}  // namespace

Instance parse_instance(std::string_view text) {
    const auto lines = tokenize(text);
    if (lines.empty()) throw ParseError(1, 1, "empty document: expected 'csp <num_variables>'");

    std::size_t n = 0;
    {
        Cursor cur(lines.front());
        const auto& head = cur.next("'csp'");
        if (head.text != "csp")
            throw ParseError(lines.front().number, head.column,
                             "expected 'csp <num_variables>', found '" + std::string(head.text) + "'");
        const auto [count, tok] = cur.integer<std::size_t>("variable count");
        cur.finish();
        // Each variable needs its own dom line.
        if (count > lines.size() - 1)
            throw ValidationError(lines.front().number, tok->column,
                                  "header declares " + std::to_string(count) + " variables but the document has only " +
                                      std::to_string(lines.size() - 1) + " directive lines");
        n = count;
    }

    std::vector<std::optional<DomainDecl>> domains(n);
    std::vector<UnaryDecl> unaries;
    std::vector<ConstraintDecl> cons;

    const auto check_var = [&](std::size_t value, const Token* tok, std::size_t line, const std::string& context) {
        if (value >= n)
            throw ValidationError(line, tok->column,
                                  context + "variable " + std::to_string(value) + " out of range (instance has " +
                                      std::to_string(n) + " variables)");
        return static_cast<VarId>(value);
    };

    for (std::size_t li = 1; li < lines.size(); ++li) {
        const auto& line = lines[li];
        Cursor cur(line);
        const auto& directive = cur.next("directive");
        if (directive.text == "dom") {
            const auto [v, vtok] = cur.integer<std::size_t>("variable index");
            const VarId var = check_var(v, vtok, line.number, "");
            if (domains[var])
                throw ValidationError(line.number, vtok->column,
                                      "variable " + std::to_string(var) + " already has a domain (line " +
                                          std::to_string(domains[var]->where.line) + ")");
            DomainDecl decl{{}, {line.number, directive.column}};
            for (std::size_t k = 2; k < line.tokens.size(); ++k) {
                const auto [label, ltok] = cur.integer<Label>("value label");
                decl.labels.push_back({label, {line.number, ltok->column}});
            }
            domains[var] = std::move(decl);
        } else if (directive.text == "una") {
            const auto [v, vtok] = cur.integer<std::size_t>("variable index");
            UnaryDecl decl{check_var(v, vtok, line.number, "unary constraint: "), {}, {line.number, directive.column}};
            const auto count = cur.integer<std::size_t>("label count").first;
            for (std::size_t k = 0; k < count; ++k) {
                const auto [label, ltok] = cur.integer<Label>("value label");
                decl.labels.push_back({label, {line.number, ltok->column}});
            }
            cur.finish();
            unaries.push_back(std::move(decl));
        } else if (directive.text == "con") {
            ConstraintDecl decl{};
            decl.line = line.number;
            const auto [i, itok] = cur.integer<std::size_t>("variable index");
            const auto [j, jtok] = cur.integer<std::size_t>("variable index");
            decl.first_at = {line.number, itok->column};
            decl.second_at = {line.number, jtok->column};
            decl.first = check_var(i, itok, line.number, "constraint on line " + std::to_string(line.number) + ": ");
            decl.second = check_var(j, jtok, line.number, "constraint on line " + std::to_string(line.number) + ": ");
            const auto& sem = cur.next("'allow' or 'forbid'");
            if (sem.text != "allow" && sem.text != "forbid")
                throw ParseError(line.number, sem.column,
                                 "expected 'allow' or 'forbid', found '" + std::string(sem.text) + "'");
            decl.allow = sem.text == "allow";
            const auto [count, ctok] = cur.integer<std::size_t>("pair count");
            const std::size_t listed = line.tokens.size() - 5;
            if (listed % 2 != 0 || listed / 2 != count)
                throw ParseError(line.number, ctok->column,
                                 "pair count " + std::to_string(count) + " does not match the " +
                                     std::to_string(listed) + " labels that follow");
            for (std::size_t k = 0; k < count; ++k) {
                const auto [a, atok] = cur.integer<Label>("value label");
                const auto [b, btok] = cur.integer<Label>("value label");
                decl.pairs.push_back({{a, b}, {{line.number, atok->column}, {line.number, btok->column}}});
            }
            cons.push_back(std::move(decl));
        } else if (directive.text == "csp") {
            throw ParseError(line.number, directive.column, "duplicate 'csp' header");
        } else {
            throw ParseError(line.number, directive.column, "unknown directive '" + std::string(directive.text) + "'");
        }
    }

    // Domains, with duplicate labels rejected and unary restrictions folded in.
    std::vector<std::vector<Label>> labels(n);
    std::vector<std::unordered_map<Label, ValueIndex>> index(n);
    std::vector<std::set<Label>> declared(n);
    for (VarId v = 0; v < n; ++v) {
        if (!domains[v]) {
            const auto& last = lines.back();
            throw ValidationError(last.number, 1, "variable " + std::to_string(v) + " has no 'dom' line");
        }
        for (const auto& [label, at] : domains[v]->labels) {
            if (!declared[v].insert(label).second)
                throw ValidationError(at.line, at.column,
                                      "label " + std::to_string(label) + " repeated in domain of variable " +
                                          std::to_string(v));
            labels[v].push_back(label);
        }
    }
    for (const auto& u : unaries) {
        std::set<Label> keep;
        for (const auto& [label, at] : u.labels) keep.insert(label);
        std::erase_if(labels[u.var], [&](Label l) { return !keep.count(l); });
    }
    for (VarId v = 0; v < n; ++v) {
        if (labels[v].empty())
            throw ValidationError(domains[v]->where.line, domains[v]->where.column,
                                  "variable " + std::to_string(v) + " has an empty domain");
        for (ValueIndex a = 0; a < labels[v].size(); ++a) index[v][labels[v][a]] = a;
    }

    std::map<std::pair<VarId, VarId>, std::size_t> seen_pairs;
    std::vector<BinaryConstraint> constraints;
    for (const auto& c : cons) {
        if (c.first == c.second)
            throw ValidationError(c.second_at.line, c.second_at.column, describe(c) + ": scope repeats a variable");
        const auto key = std::minmax(c.first, c.second);
        if (const auto it = seen_pairs.find(key); it != seen_pairs.end())
            throw ValidationError(c.first_at.line, c.first_at.column,
                                  describe(c) + ": variables already constrained on line " +
                                      std::to_string(it->second));
        seen_pairs[key] = c.line;

        const auto rows = labels[c.first].size();
        const auto cols = labels[c.second].size();
        std::vector<bool> matrix(rows * cols, !c.allow);
        std::vector<bool> listed(rows * cols, false);
        for (const auto& [pair, at] : c.pairs) {
            const auto ia = index[c.first].find(pair.first);
            const auto ib = index[c.second].find(pair.second);
            if (!declared[c.first].count(pair.first))
                throw ValidationError(at.first.line, at.first.column,
                                      describe(c) + ": label " + std::to_string(pair.first) +
                                          " not in domain of variable " + std::to_string(c.first));
            if (!declared[c.second].count(pair.second))
                throw ValidationError(at.second.line, at.second.column,
                                      describe(c) + ": label " + std::to_string(pair.second) +
                                          " not in domain of variable " + std::to_string(c.second));
            // Labels removed by a unary restriction drop out of the matrix.
            if (ia == index[c.first].end() || ib == index[c.second].end()) continue;
            const auto cell = ia->second * cols + ib->second;
            if (listed[cell])
                throw ValidationError(at.first.line, at.first.column,
                                      describe(c) + ": pair (" + std::to_string(pair.first) + ", " +
                                          std::to_string(pair.second) + ") listed twice");
            listed[cell] = true;
            matrix[cell] = c.allow;
        }
        constraints.emplace_back(c.first, c.second, rows, cols, matrix);
    }
    return Instance(std::move(labels), std::move(constraints));
}

std::string serialize_instance(const Instance& instance) {
    std::ostringstream os;
    os << "csp " << instance.num_variables() << '\n';
    for (VarId v = 0; v < instance.num_variables(); ++v) {
        os << "dom " << v;
        for (auto label : instance.labels(v)) os << ' ' << label;
        os << '\n';
    }
    for (const auto& con : instance.constraints()) {
        const bool allow = con.allowed_count() < con.forbidden_count();
        os << "con " << con.first() << ' ' << con.second() << (allow ? " allow " : " forbid ")
           << (allow ? con.allowed_count() : con.forbidden_count());
        const auto la = instance.labels(con.first());
        const auto lb = instance.labels(con.second());
        for (ValueIndex a = 0; a < con.first_size(); ++a)
            for (ValueIndex b = 0; b < con.second_size(); ++b)
                if (con.allows(a, b) == allow) os << ' ' << la[a] << ' ' << lb[b];
        os << '\n';
    }
    return os.str();
}

Instance read_instance_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_instance(buf.str());
}

void write_instance_file(const std::string& path, const Instance& instance) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << serialize_instance(instance);
    if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace vcsp
