#include "germ/problem.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace germ {

namespace {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

double parse_real(std::string_view text, int line_no) {
    const std::string s{trim(text)};
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || s.empty()) {
        throw Error(ErrorKind::ConfigError,
                    "line " + std::to_string(line_no) + ": bad number '" + s + "'");
    }
    return v;
}

int parse_int(std::string_view text, int line_no) {
    const std::string s{trim(text)};
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw Error(ErrorKind::ConfigError,
                    "line " + std::to_string(line_no) + ": bad integer '" + s + "'");
    }
    return v;
}

bool parse_bool(std::string_view text, int line_no) {
    const std::string_view s = trim(text);
    if (s == "true") return true;
    if (s == "false") return false;
    throw Error(ErrorKind::ConfigError,
                "line " + std::to_string(line_no) + ": expected true or false, got '" +
                    std::string(s) + "'");
}

std::vector<std::string> split_list(std::string_view text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t comma = text.find(',', start);
        if (comma == std::string_view::npos) comma = text.size();
        const std::string_view item = trim(text.substr(start, comma - start));
        if (!item.empty()) out.emplace_back(item);
        start = comma + 1;
    }
    return out;
}

Vec parse_real_list(std::string_view text, int line_no) {
    Vec out;
    for (const std::string& item : split_list(text)) out.push_back(parse_real(item, line_no));
    return out;
}

bool valid_var_name(const std::string& name) {
    if (name.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(name[0])) && name[0] != '_') return false;
    for (char c : name) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    }
    return true;
}

bool is_reserved_z_name(const std::string& name) {
    if (name.size() < 2 || name[0] != 'z') return false;
    for (std::size_t i = 1; i < name.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(name[i]))) return false;
    }
    return true;
}

void validate(const ProblemFile& pf) {
    pf.dims.validate();
    const int p = pf.dims.p();
    const int n = pf.dims.n;
    if (pf.name.empty()) {
        throw Error(ErrorKind::ConfigError, "problem file needs a name");
    }
    if (static_cast<int>(pf.var_names.size()) != p + n) {
        throw Error(ErrorKind::ConfigError,
                    "expected " + std::to_string(p + n) + " variable names, got " +
                        std::to_string(pf.var_names.size()));
    }
    for (const std::string& v : pf.var_names) {
        if (!valid_var_name(v)) {
            throw Error(ErrorKind::ConfigError, "invalid variable name '" + v + "'");
        }
        if (expr::is_known_function(v)) {
            throw Error(ErrorKind::ConfigError,
                        "variable name '" + v + "' collides with a builtin function");
        }
        if (is_reserved_z_name(v)) {
            throw Error(ErrorKind::ConfigError,
                        "variable name '" + v + "' is reserved for oracle targets");
        }
    }
    for (std::size_t i = 0; i < pf.var_names.size(); ++i)
        for (std::size_t j = i + 1; j < pf.var_names.size(); ++j)
            if (pf.var_names[i] == pf.var_names[j]) {
                throw Error(ErrorKind::ConfigError,
                            "duplicate variable name '" + pf.var_names[i] + "'");
            }
    if (static_cast<int>(pf.expressions.size()) != n) {
        throw Error(ErrorKind::ConfigError, "expected " + std::to_string(n) + " expression(s), got " +
                                                std::to_string(pf.expressions.size()));
    }
    if (static_cast<int>(pf.seed_a.size()) != pf.dims.q ||
        static_cast<int>(pf.seed_d.size()) != pf.dims.m ||
        static_cast<int>(pf.seed_b.size()) != n || static_cast<int>(pf.seed_c.size()) != n) {
        throw Error(ErrorKind::ConfigError, "seed component lengths do not match dims");
    }
    if (!pf.oracle_expressions.empty() && static_cast<int>(pf.oracle_expressions.size()) != n) {
        throw Error(ErrorKind::ConfigError, "oracle needs one expression per y-coordinate");
    }
    if (!pf.check_radii.empty() && static_cast<int>(pf.check_radii.size()) != p + n) {
        throw Error(ErrorKind::ConfigError, "check radii need one entry per (x, z) axis");
    }
    if (pf.smoothness != kSmoothnessInf && pf.smoothness < 1) {
        throw Error(ErrorKind::ConfigError, "smoothness must be >= 1 or inf");
    }
}

std::vector<std::string> default_var_names(const Dims& dims) {
    std::vector<std::string> names;
    for (int i = 1; i <= dims.q; ++i) names.push_back("s" + std::to_string(i));
    for (int i = 1; i <= dims.m; ++i) names.push_back("t" + std::to_string(i));
    for (int i = 1; i <= dims.n; ++i) names.push_back("y" + std::to_string(i));
    return names;
}

}  // namespace

ProblemFile parse_problem_file(std::string_view text) {
    ProblemFile pf;
    pf.dims = Dims{0, 0, 0};  // force explicit n
    bool saw_vars = false;

    enum class Section { Top, Expressions, Seed, Solver, Oracle, Check };
    Section section = Section::Top;

    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;

        if (line.front() == '[') {
            if (line == "[expressions]") section = Section::Expressions;
            else if (line == "[seed]") section = Section::Seed;
            else if (line == "[solver]") section = Section::Solver;
            else if (line == "[oracle]") section = Section::Oracle;
            else if (line == "[check]") section = Section::Check;
            else {
                throw Error(ErrorKind::ConfigError, "line " + std::to_string(line_no) +
                                                        ": unknown section " + std::string(line));
            }
            continue;
        }

        if (section == Section::Expressions) {
            pf.expressions.emplace_back(line);
            continue;
        }
        if (section == Section::Oracle) {
            pf.oracle_expressions.emplace_back(line);
            continue;
        }

        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorKind::ConfigError,
                        "line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key{trim(line.substr(0, eq))};
        const std::string_view value = trim(line.substr(eq + 1));

        switch (section) {
            case Section::Top:
                if (key == "name") pf.name = std::string(value);
                else if (key == "q") pf.dims.q = parse_int(value, line_no);
                else if (key == "m") pf.dims.m = parse_int(value, line_no);
                else if (key == "n") pf.dims.n = parse_int(value, line_no);
                else if (key == "vars") {
                    pf.var_names = split_list(value);
                    saw_vars = true;
                } else if (key == "smoothness") {
                    pf.smoothness = (value == "inf") ? kSmoothnessInf : parse_int(value, line_no);
                } else if (key == "differentiable_in_s") {
                    pf.differentiable_in_s = parse_bool(value, line_no);
                } else if (key == "probe_only") {
                    pf.probe_only = parse_bool(value, line_no);
                } else {
                    throw Error(ErrorKind::ConfigError,
                                "line " + std::to_string(line_no) + ": unknown key '" + key + "'");
                }
                break;
            case Section::Seed:
                if (key == "a") pf.seed_a = parse_real_list(value, line_no);
                else if (key == "d") pf.seed_d = parse_real_list(value, line_no);
                else if (key == "b") pf.seed_b = parse_real_list(value, line_no);
                else if (key == "c") pf.seed_c = parse_real_list(value, line_no);
                else {
                    throw Error(ErrorKind::ConfigError, "line " + std::to_string(line_no) +
                                                            ": unknown seed key '" + key + "'");
                }
                break;
            case Section::Solver:
                if (key == "tol_res") pf.solver.tol_res = parse_real(value, line_no);
                else if (key == "rcond_min") pf.solver.rcond_min = parse_real(value, line_no);
                else if (key == "max_iters") pf.solver.max_iters = parse_int(value, line_no);
                else if (key == "min_step") pf.solver.min_step = parse_real(value, line_no);
                else if (key == "fd_step") pf.solver.fd_step = parse_real(value, line_no);
                else {
                    throw Error(ErrorKind::ConfigError, "line " + std::to_string(line_no) +
                                                            ": unknown solver key '" + key + "'");
                }
                break;
            case Section::Check:
                if (key == "radii") pf.check_radii = parse_real_list(value, line_no);
                else {
                    throw Error(ErrorKind::ConfigError, "line " + std::to_string(line_no) +
                                                            ": unknown check key '" + key + "'");
                }
                break;
            default:
                throw Error(ErrorKind::ConfigError,
                            "line " + std::to_string(line_no) + ": key outside a section");
        }
    }

    if (pf.dims.n == 0) {
        throw Error(ErrorKind::ConfigError, "problem file must set n");
    }
    if (!saw_vars) pf.var_names = default_var_names(pf.dims);
    validate(pf);

    // Expressions must parse and reference only declared variables.
    for (const std::string& text_expr : pf.expressions) {
        expr::parse_expression(text_expr, pf.var_names);
    }
    if (!pf.oracle_expressions.empty()) {
        std::vector<std::string> oracle_vars(pf.var_names.begin(),
                                             pf.var_names.begin() + pf.dims.p());
        for (int i = 1; i <= pf.dims.n; ++i) oracle_vars.push_back("z" + std::to_string(i));
        for (const std::string& text_expr : pf.oracle_expressions) {
            expr::parse_expression(text_expr, oracle_vars);
        }
    }
    return pf;
}

std::string serialize_problem_file(const ProblemFile& pf) {
    validate(pf);
    std::string out;
    auto line = [&out](const std::string& s) {
        out += s;
        out += '\n';
    };
    auto real_list = [](const Vec& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) s += ", ";
            s += format_g17(v[i]);
        }
        return s;
    };

    line("name = " + pf.name);
    line("q = " + std::to_string(pf.dims.q));
    line("m = " + std::to_string(pf.dims.m));
    line("n = " + std::to_string(pf.dims.n));
    {
        std::string s = "vars = ";
        for (std::size_t i = 0; i < pf.var_names.size(); ++i) {
            if (i) s += ", ";
            s += pf.var_names[i];
        }
        line(s);
    }
    line(std::string("smoothness = ") +
         (pf.smoothness == kSmoothnessInf ? "inf" : std::to_string(pf.smoothness)));
    line(std::string("differentiable_in_s = ") + (pf.differentiable_in_s ? "true" : "false"));
    if (pf.probe_only) line("probe_only = true");

    line("");
    line("[expressions]");
    for (const std::string& e : pf.expressions) line(e);

    line("");
    line("[seed]");
    if (pf.dims.q > 0) line("a = " + real_list(pf.seed_a));
    if (pf.dims.m > 0) line("d = " + real_list(pf.seed_d));
    line("b = " + real_list(pf.seed_b));
    line("c = " + real_list(pf.seed_c));

    if (pf.solver != SolverOverrides{}) {
        line("");
        line("[solver]");
        if (pf.solver.tol_res) line("tol_res = " + format_g17(*pf.solver.tol_res));
        if (pf.solver.rcond_min) line("rcond_min = " + format_g17(*pf.solver.rcond_min));
        if (pf.solver.max_iters) line("max_iters = " + std::to_string(*pf.solver.max_iters));
        if (pf.solver.min_step) line("min_step = " + format_g17(*pf.solver.min_step));
        if (pf.solver.fd_step) line("fd_step = " + format_g17(*pf.solver.fd_step));
    }

    if (!pf.oracle_expressions.empty()) {
        line("");
        line("[oracle]");
        for (const std::string& e : pf.oracle_expressions) line(e);
    }

    if (!pf.check_radii.empty()) {
        line("");
        line("[check]");
        line("radii = " + real_list(pf.check_radii));
    }
    return out;
}

ProblemFile load_problem(const std::string& reference) {
    constexpr std::string_view kCatalogPrefix = "catalog:";
    if (reference.rfind(kCatalogPrefix, 0) == 0) {
        return catalog_entry(reference.substr(kCatalogPrefix.size()));
    }
    std::ifstream in(reference);
    if (!in) {
        throw Error(ErrorKind::IoError, "cannot open problem file '" + reference + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_problem_file(buffer.str());
}

FunctionSpec build_spec(const ProblemFile& pf) {
    validate(pf);
    auto asts = std::make_shared<std::vector<expr::AstPtr>>();
    for (const std::string& text : pf.expressions) {
        asts->push_back(expr::parse_expression(text, pf.var_names));
    }
    const int n = pf.dims.n;

    FunctionSpec spec;
    spec.dims = pf.dims;
    spec.name = pf.name;
    spec.smoothness = pf.smoothness;
    spec.differentiable_in_s = pf.differentiable_in_s;
    spec.evaluator = [asts, n](const Vec& point) -> Vec {
        Vec out(n);
        for (int i = 0; i < n; ++i) out[i] = expr::eval_ast(*(*asts)[i], point);
        return out;
    };
    return spec;
}

std::function<Vec(const Vec&, const Vec&)> build_oracle(const ProblemFile& pf) {
    if (pf.oracle_expressions.empty()) return nullptr;
    validate(pf);
    std::vector<std::string> oracle_vars(pf.var_names.begin(), pf.var_names.begin() + pf.dims.p());
    for (int i = 1; i <= pf.dims.n; ++i) oracle_vars.push_back("z" + std::to_string(i));
    auto asts = std::make_shared<std::vector<expr::AstPtr>>();
    for (const std::string& text : pf.oracle_expressions) {
        asts->push_back(expr::parse_expression(text, oracle_vars));
    }
    const int n = pf.dims.n;
    return [asts, n](const Vec& x, const Vec& z) -> Vec {
        const Vec values = vec_concat(x, z);
        Vec out(n);
        for (int i = 0; i < n; ++i) out[i] = expr::eval_ast(*(*asts)[i], values);
        return out;
    };
}

SolverConfig apply_overrides(const SolverOverrides& overrides, SolverConfig base) {
    if (overrides.tol_res) base.tol_res = *overrides.tol_res;
    if (overrides.rcond_min) base.rcond_min = *overrides.rcond_min;
    if (overrides.max_iters) base.max_newton_iters = *overrides.max_iters;
    if (overrides.min_step) base.min_step = *overrides.min_step;
    if (overrides.fd_step) base.fd_step = *overrides.fd_step;
    return base;
}

Vec default_check_radii(const ProblemFile& pf) {
    if (!pf.check_radii.empty()) return pf.check_radii;
    return Vec(static_cast<std::size_t>(pf.dims.total()), 0.1);
}

}  // namespace germ
