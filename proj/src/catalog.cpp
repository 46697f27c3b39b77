#include <map>

#include "germ/problem.hpp"

namespace germ {

namespace {

// The builtin problems, stored in problem-file form so the catalog and
// the file format never drift apart.

constexpr const char* kCircle = R"(name = circle
q = 0
m = 1
n = 1
vars = t1, y1

[expressions]
t1^2 + y1^2 - 1

[seed]
d = 0
b = 1
c = 0

[oracle]
sqrt(1 + z1 - t1^2)

[check]
radii = 0.3, 0.1
)";

constexpr const char* kExp = R"(name = exp
q = 0
m = 0
n = 1
vars = y1

[expressions]
exp(y1)

[seed]
b = 0
c = 1

[oracle]
ln(z1)

[check]
radii = 0.3
)";

// The tighter residual gate forces the second Newton step, which lands
// at rounding level; the default 1e-10 would stop ~1e-11 away from the
// closed form.
constexpr const char* kAffine = R"(name = affine
q = 0
m = 1
n = 1
vars = t1, y1

[expressions]
2*t1 + 3*y1

[seed]
d = 0
b = 0
c = 0

[solver]
tol_res = 1e-13

[oracle]
(z1 - 2*t1) / 3

[check]
radii = 1, 1
)";

constexpr const char* kPoly2x2 = R"(name = poly2x2
q = 0
m = 1
n = 2
vars = t1, y1, y2

[expressions]
y1^2 + y2^2 - t1
y1 - y2

[seed]
d = 2
b = 1, 1
c = 0, 0

[oracle]
(z2 + sqrt(2*(t1 + z1) - z2^2)) / 2
(sqrt(2*(t1 + z1) - z2^2) - z2) / 2

[check]
radii = 0.3, 0.1, 0.1
)";

constexpr const char* kMixedAbs = R"(name = mixed-abs
q = 1
m = 1
n = 1
vars = s1, t1, y1
differentiable_in_s = false

[expressions]
y1 - abs(s1) - t1^2

[seed]
a = 0
d = 0
b = 0
c = 0

[oracle]
z1 + abs(s1) + t1^2

[check]
radii = 0.2, 0.2, 0.2
)";

constexpr const char* kSinDiff = R"(name = sindiff
q = 0
m = 0
n = 1
vars = y1
probe_only = true

[expressions]
y1^2 * sin(1 / y1)

[seed]
b = 0
c = 0

[check]
radii = 0.1
)";

const std::vector<std::pair<std::string, const char*>>& catalog_sources() {
    static const std::vector<std::pair<std::string, const char*>> sources = {
        {"circle", kCircle},     {"exp", kExp},           {"affine", kAffine},
        {"poly2x2", kPoly2x2},   {"mixed-abs", kMixedAbs}, {"sindiff", kSinDiff},
    };
    return sources;
}

const std::map<std::string, ProblemFile>& catalog_map() {
    static const std::map<std::string, ProblemFile> entries = [] {
        std::map<std::string, ProblemFile> out;
        for (const auto& [name, text] : catalog_sources()) {
            out.emplace(name, parse_problem_file(text));
        }
        return out;
    }();
    return entries;
}

}  // namespace

std::vector<std::string> catalog_names() {
    std::vector<std::string> names;
    for (const auto& [name, text] : catalog_sources()) names.push_back(name);
    return names;
}

const ProblemFile& catalog_entry(const std::string& name) {
    const auto& entries = catalog_map();
    auto it = entries.find(name);
    if (it == entries.end()) {
        throw Error(ErrorKind::UnknownCatalogEntry, "no catalog entry named '" + name + "'")
            .with_token(name);
    }
    return it->second;
}

}  // namespace germ
