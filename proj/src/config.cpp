#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <toml.hpp>

#include "nonlocal/error.hpp"
#include "nonlocal/scenario.hpp"

namespace nonlocal {

namespace {

template <class E>
struct Names {
    E value;
    std::string_view name;
};

constexpr Names<ExperimentKind> kKinds[] = {
    {ExperimentKind::eigen, "eigen"},   {ExperimentKind::ladder, "ladder"},
    {ExperimentKind::mp, "mp"},         {ExperimentKind::kpp, "kpp"},
    {ExperimentKind::evolve, "evolve"}, {ExperimentKind::exhaustion, "exhaustion"},
    {ExperimentKind::rankone, "rankone"},
};
constexpr Names<Geometry> kGeometries[] = {{Geometry::bounded, "bounded"}, {Geometry::torus, "torus"}};
constexpr Names<KernelShape> kKernels[] = {
    {KernelShape::uniform, "uniform"},
    {KernelShape::triangular, "triangular"},
    {KernelShape::cosine_bump, "cosine-bump"},
};
constexpr Names<DispersalShape> kDispersals[] = {
    {DispersalShape::constant, "constant"},
    {DispersalShape::affine, "affine"},
    {DispersalShape::power_degenerate, "power-degenerate"},
};
constexpr Names<CoefficientShape> kCoefficients[] = {
    {CoefficientShape::constant, "constant"},         {CoefficientShape::quadratic_well, "quadratic-well"},
    {CoefficientShape::power_contact, "power-contact"}, {CoefficientShape::plateau, "plateau"},
    {CoefficientShape::saturating_well, "saturating-well"},
};
constexpr Names<Stepper> kSteppers[] = {{Stepper::explicit_euler, "explicit"}, {Stepper::imex, "imex"}};

template <class E, std::size_t K>
std::string_view name_of(const Names<E> (&table)[K], E value) {
    for (const auto& entry : table)
        if (entry.value == value)
            return entry.name;
    throw InvalidArgument("value outside the configuration enumeration");
}

int line_of(const toml::node& node) { return static_cast<int>(node.source().begin.line); }

// Reads keys from one table and rejects any key it was not asked about.
class Reader {
public:
    Reader(const toml::table& table, std::string context) : table_(table), context_(std::move(context)) {}

    const toml::node* find(std::string_view key) {
        used_.insert(std::string(key));
        return table_.get(key);
    }

    bool has(std::string_view key) const { return table_.contains(key); }

    double real(std::string_view key, std::optional<double> fallback = std::nullopt) {
        const toml::node* node = find(key);
        if (!node) {
            if (fallback)
                return *fallback;
            throw missing(key);
        }
        const auto v = node->value<double>();
        if (!v || !(node->is_floating_point() || node->is_integer()))
            throw ConfigError(where(key) + " must be a number", line_of(*node));
        if (!std::isfinite(*v))
            throw ConfigError(where(key) + " must be finite", line_of(*node));
        return *v;
    }

    std::optional<double> optional_real(std::string_view key) {
        if (!has(key)) {
            used_.insert(std::string(key));
            return std::nullopt;
        }
        return real(key);
    }

    std::int64_t integer(std::string_view key, std::optional<std::int64_t> fallback = std::nullopt) {
        const toml::node* node = find(key);
        if (!node) {
            if (fallback)
                return *fallback;
            throw missing(key);
        }
        if (!node->is_integer())
            throw ConfigError(where(key) + " must be an integer", line_of(*node));
        return *node->value<std::int64_t>();
    }

    bool boolean(std::string_view key) {
        const toml::node* node = find(key);
        if (!node)
            throw missing(key);
        if (!node->is_boolean())
            throw ConfigError(where(key) + " must be true or false", line_of(*node));
        return *node->value<bool>();
    }

    std::string text(std::string_view key, std::optional<std::string> fallback = std::nullopt) {
        const toml::node* node = find(key);
        if (!node) {
            if (fallback)
                return *fallback;
            throw missing(key);
        }
        if (!node->is_string())
            throw ConfigError(where(key) + " must be a string", line_of(*node));
        return *node->value<std::string>();
    }

    template <class E, std::size_t K>
    E choice(std::string_view key, const Names<E> (&table)[K], std::optional<std::type_identity_t<E>> fallback = std::nullopt) {
        if (!has(key) && fallback) {
            used_.insert(std::string(key));
            return *fallback;
        }
        const std::string value = text(key);
        for (const auto& entry : table)
            if (entry.name == value)
                return entry.value;
        std::string allowed;
        for (const auto& entry : table)
            allowed += (allowed.empty() ? "" : ", ") + std::string(entry.name);
        throw ConfigError(where(key) + " = \"" + value + "\" is not one of {" + allowed + "}",
                          line_of(*table_.get(key)));
    }

    std::vector<double> reals(std::string_view key, std::optional<std::vector<double>> fallback = std::nullopt) {
        const toml::node* node = find(key);
        if (!node) {
            if (fallback)
                return *fallback;
            throw missing(key);
        }
        const toml::array* arr = node->as_array();
        if (!arr)
            throw ConfigError(where(key) + " must be an array of numbers", line_of(*node));
        std::vector<double> out;
        for (const auto& item : *arr) {
            const auto v = item.value<double>();
            if (!v || !std::isfinite(*v))
                throw ConfigError(where(key) + " must contain finite numbers", line_of(item));
            out.push_back(*v);
        }
        return out;
    }

    std::vector<int> integers(std::string_view key) {
        const toml::node* node = find(key);
        if (!node)
            throw missing(key);
        const toml::array* arr = node->as_array();
        if (!arr)
            throw ConfigError(where(key) + " must be an array of integers", line_of(*node));
        std::vector<int> out;
        for (const auto& item : *arr) {
            if (!item.is_integer())
                throw ConfigError(where(key) + " must contain integers", line_of(item));
            out.push_back(static_cast<int>(*item.value<std::int64_t>()));
        }
        return out;
    }

    const toml::table* subtable(std::string_view key) {
        const toml::node* node = find(key);
        if (!node)
            return nullptr;
        const toml::table* t = node->as_table();
        if (!t)
            throw ConfigError(where(key) + " must be a table", line_of(*node));
        return t;
    }

    // Unknown keys are errors.
    void finish() const {
        for (auto&& [key, node] : table_) {
            if (!used_.contains(std::string(key.str())))
                throw ConfigError("unknown key '" + std::string(key.str()) + "' in " + context_,
                                  static_cast<int>(key.source().begin.line));
        }
    }

    ConfigError fail(const std::string& message, std::string_view key) const {
        const toml::node* node = table_.get(key);
        return ConfigError(context_ + ": " + message, node ? line_of(*node) : line_of(table_));
    }

    ConfigError fail(const std::string& message) const { return ConfigError(context_ + ": " + message, line_of(table_)); }

private:
    std::string where(std::string_view key) const { return context_ + "." + std::string(key); }
    ConfigError missing(std::string_view key) const {
        return ConfigError("missing key '" + std::string(key) + "' in " + context_, line_of(table_));
    }

    const toml::table& table_;
    std::string context_;
    std::set<std::string> used_;
};

std::vector<double> default_center(int dim) { return std::vector<double>(static_cast<std::size_t>(dim), 0.0); }

DomainSpec read_domain(const toml::table& t, const std::string& ctx) {
    Reader r(t, ctx);
    DomainSpec d;
    const auto dim = r.integer("dim", 1);
    if (dim != 1 && dim != 2)
        throw r.fail("dim must be 1 or 2", "dim");
    d.dim = static_cast<int>(dim);
    d.lower = r.reals("lower");
    d.upper = r.reals("upper");
    if (d.lower.size() != static_cast<std::size_t>(d.dim) || d.upper.size() != static_cast<std::size_t>(d.dim))
        throw r.fail("lower and upper need one entry per dimension", "lower");
    for (int k = 0; k < d.dim; ++k)
        if (!(d.lower[static_cast<std::size_t>(k)] < d.upper[static_cast<std::size_t>(k)]))
            throw r.fail("lower < upper required on every axis", "upper");
    d.geometry = r.choice("geometry", kGeometries, Geometry::bounded);
    r.finish();
    return d;
}

GridSpec read_grid(const toml::table& t, const std::string& ctx) {
    Reader r(t, ctx);
    GridSpec g;
    if (r.has("N")) {
        const auto N = r.integer("N");
        if (N < 2 || N > 1 << 16)
            throw r.fail("N must lie in [2, 65536]", "N");
        g.N = static_cast<int>(N);
    }
    if (r.has("ladder")) {
        g.ladder = r.integers("ladder");
        for (std::size_t k = 0; k < g.ladder.size(); ++k) {
            if (g.ladder[k] < 2)
                throw r.fail("ladder levels must be >= 2", "ladder");
            if (k > 0 && g.ladder[k] <= g.ladder[k - 1])
                throw r.fail("ladder must be strictly increasing", "ladder");
        }
    }
    r.finish();
    return g;
}

KernelSpec read_kernel(const toml::table& t, const std::string& ctx) {
    Reader r(t, ctx);
    KernelSpec k;
    k.shape = r.choice("shape", kKernels);
    k.support = r.real("support");
    k.mass = r.real("mass", 1.0);
    if (!(k.support > 0.0) || !(k.mass > 0.0))
        throw r.fail("support and mass must be positive");
    r.finish();
    return k;
}

DispersalSpec read_dispersal(const toml::table& t, const std::string& ctx) {
    Reader r(t, ctx);
    DispersalSpec g;
    g.shape = r.choice("shape", kDispersals);
    switch (g.shape) {
    case DispersalShape::constant:
        g.value = r.real("value");
        if (!(g.value > 0.0))
            throw r.fail("constant g must be positive", "value");
        break;
    case DispersalShape::affine:
        g.intercept = r.real("intercept");
        g.slope = r.real("slope");
        break;
    case DispersalShape::power_degenerate:
        g.exponent = r.real("exponent");
        g.cap = r.real("cap");
        if (!(g.exponent > 0.0 && g.exponent < 1.0) || !(g.cap > 0.0))
            throw r.fail("power-degenerate g needs exponent in (0, 1) and cap > 0");
        break;
    case DispersalShape::custom: break;
    }
    g.g_floor = r.real("g_floor", 1e-8);
    r.finish();
    return g;
}

CoefficientSpec read_coefficient(const toml::table& t, const std::string& ctx, int dim) {
    Reader r(t, ctx);
    CoefficientSpec a;
    a.shape = r.choice("shape", kCoefficients);
    a.center = default_center(dim);
    auto read_center = [&] {
        a.center = r.reals("center", default_center(dim));
        if (a.center.size() != static_cast<std::size_t>(dim))
            throw r.fail("center needs one entry per dimension", "center");
    };
    switch (a.shape) {
    case CoefficientShape::constant: a.value = r.real("value"); break;
    case CoefficientShape::quadratic_well:
    case CoefficientShape::saturating_well:
        a.sigma = r.real("sigma", 0.0);
        a.c = r.real("c", 1.0);
        read_center();
        break;
    case CoefficientShape::power_contact:
        a.sigma = r.real("sigma", 0.0);
        a.gamma = r.real("gamma");
        a.c = r.real("c", 1.0);
        read_center();
        break;
    case CoefficientShape::plateau:
        a.sigma = r.real("sigma", 0.0);
        a.radius = r.real("radius");
        a.gamma = r.real("gamma", 2.0);
        a.c = r.real("c", 1.0);
        read_center();
        break;
    case CoefficientShape::custom: break;
    }
    if (!(a.c > 0.0) || !(a.gamma > 0.0) || a.radius < 0.0)
        throw r.fail("c and gamma must be positive, radius nonnegative");
    r.finish();
    return a;
}

NonlinearitySpec read_nonlinearity(const toml::table& t, const std::string& ctx) {
    Reader r(t, ctx);
    if (r.text("shape") != "logistic")
        throw r.fail("shape must be \"logistic\"", "shape");
    NonlinearitySpec f;
    f.mu0 = r.real("mu0");
    f.mu2 = r.real("mu2", 0.0);
    if (f.mu2 < 0.0)
        throw r.fail("mu2 must be nonnegative", "mu2");
    r.finish();
    return f;
}

SolverSpec read_solver(const toml::table& t, const std::string& ctx) {
    Reader r(t, ctx);
    SolverSpec s;
    s.tol = r.real("tol", s.tol);
    s.max_iter = static_cast<int>(r.integer("max_iter", s.max_iter));
    s.dt = r.optional_real("dt");
    s.T = r.real("T", s.T);
    s.k = r.optional_real("k");
    const auto seed = r.integer("seed", 0);
    if (seed < 0)
        throw r.fail("seed must be nonnegative", "seed");
    s.seed = static_cast<std::uint64_t>(seed);
    if (r.has("renormalize"))
        s.renormalize = r.boolean("renormalize");
    else
        r.find("renormalize");
    s.battery = static_cast<int>(r.integer("battery", s.battery));
    s.cutoff_margin = r.real("cutoff_margin", s.cutoff_margin);
    s.checkpoints = static_cast<int>(r.integer("checkpoints", s.checkpoints));
    s.stepper = r.choice("stepper", kSteppers, Stepper::explicit_euler);
    s.u0 = r.real("u0", s.u0);
    s.evolve_tol = r.real("evolve_tol", s.evolve_tol);
    s.subsolution_n = static_cast<int>(r.integer("subsolution_n", s.subsolution_n));
    s.epsilon = r.real("epsilon", s.epsilon);
    if (!(s.tol > 0.0) || s.max_iter < 1 || !(s.T > 0.0) || s.battery < 0 || s.checkpoints < 1 ||
        !(s.cutoff_margin > 0.0) || !(s.u0 > 0.0) || !(s.evolve_tol > 0.0) || s.subsolution_n < 1 ||
        !(s.epsilon > 0.0) || (s.dt && !(*s.dt > 0.0)) || (s.k && !(*s.k > 0.0)))
        throw r.fail("solver parameters must be positive");
    r.finish();
    return s;
}

ScenarioConfig read_scenario(const toml::table& t, const std::string& ctx, bool allow_output) {
    Reader r(t, ctx);
    ScenarioConfig c;
    c.kind = r.choice("kind", kKinds);
    c.name = r.text("name", std::string("scenario"));
    if (c.name.empty() || c.name.find_first_of("/\\ \t\n") != std::string::npos)
        throw r.fail("name must be a non-empty token without spaces or slashes", "name");
    if (allow_output)
        r.find("output");

    const toml::table* domain = r.subtable("domain");
    if (domain)
        c.domain = read_domain(*domain, ctx + ".domain");
    else if (c.kind != ExperimentKind::exhaustion)
        throw r.fail("missing required block [domain]");
    const int dim = c.domain.dim;

    if (const toml::table* grid = r.subtable("grid"))
        c.grid = read_grid(*grid, ctx + ".grid");
    if (const toml::table* kernel = r.subtable("kernel"))
        c.kernel = read_kernel(*kernel, ctx + ".kernel");
    if (const toml::table* dispersal = r.subtable("dispersal"))
        c.dispersal = read_dispersal(*dispersal, ctx + ".dispersal");
    if (const toml::table* coefficient = r.subtable("coefficient"))
        c.coefficient = read_coefficient(*coefficient, ctx + ".coefficient", dim);
    else
        throw r.fail("missing required block [coefficient]");
    if (const toml::table* f = r.subtable("nonlinearity"))
        c.nonlinearity = read_nonlinearity(*f, ctx + ".nonlinearity");
    if (const toml::table* solver = r.subtable("solver"))
        c.solver = read_solver(*solver, ctx + ".solver");
    if (const toml::table* rank = r.subtable("rankone")) {
        Reader rr(*rank, ctx + ".rankone");
        c.rankone = RankOneSpec{rr.real("rho")};
        if (!(c.rankone->rho > 0.0))
            throw rr.fail("rho must be positive", "rho");
        rr.finish();
    }
    if (const toml::table* ex = r.subtable("exhaustion")) {
        Reader er(*ex, ctx + ".exhaustion");
        ExhaustionSpec e;
        e.core = er.reals("core");
        e.radii = er.reals("radii");
        e.h = er.real("h");
        if (e.core.size() != 2 || !(e.core[0] < e.core[1]))
            throw er.fail("core must be [lower, upper] with lower < upper", "core");
        if (e.radii.size() < 2 || !(e.h > 0.0))
            throw er.fail("need at least two radii and h > 0");
        er.finish();
        c.exhaustion = e;
    }
    r.finish();

    // Per-kind requirements.
    const bool torus = c.domain.geometry == Geometry::torus;
    switch (c.kind) {
    case ExperimentKind::kpp:
    case ExperimentKind::evolve:
        if (!c.nonlinearity)
            throw r.fail("missing nonlinearity");
        [[fallthrough]];
    case ExperimentKind::eigen:
    case ExperimentKind::mp:
        if (!c.grid.N)
            throw r.fail("missing grid.N");
        if (!c.kernel)
            throw r.fail("missing required block [kernel]");
        break;
    case ExperimentKind::ladder:
        if (!c.kernel)
            throw r.fail("missing required block [kernel]");
        [[fallthrough]];
    case ExperimentKind::rankone:
        if (c.grid.ladder.size() < 4)
            throw r.fail("grid.ladder needs at least 4 levels");
        for (std::size_t k = 1; k < c.grid.ladder.size(); ++k)
            if (c.grid.ladder[k] != 2 * c.grid.ladder[k - 1] && c.grid.ladder[k] != 2 * c.grid.ladder[k - 1] - 1)
                throw r.fail("grid.ladder levels must double N");
        if (c.kind == ExperimentKind::rankone && !c.rankone)
            throw r.fail("missing required block [rankone]");
        break;
    case ExperimentKind::exhaustion:
        if (!c.exhaustion)
            throw r.fail("missing required block [exhaustion]");
        if (!c.kernel)
            throw r.fail("missing required block [kernel]");
        if (dim != 1)
            throw r.fail("exhaustion runs on the line (dim = 1)");
        break;
    }
    if (torus && (c.kind == ExperimentKind::mp || c.kind == ExperimentKind::rankone ||
                  c.kind == ExperimentKind::exhaustion))
        throw r.fail(std::string(kind_name(c.kind)) + " needs a bounded domain, not a torus");
    if (torus && c.dispersal.shape == DispersalShape::power_degenerate)
        throw r.fail("degenerate dispersal is supported on bounded domains only");
    return c;
}

ScenarioSet read_set(const toml::table& root) {
    ScenarioSet set;
    if (const toml::node* out = root.get("output")) {
        const toml::table* t = out->as_table();
        if (!t)
            throw ConfigError("output must be a table", line_of(*out));
        Reader r(*t, "output");
        set.output_dir = r.text("dir", std::string("."));
        r.finish();
    }
    if (const toml::node* list = root.get("scenario")) {
        const toml::array* arr = list->as_array();
        if (!arr || arr->empty() || !arr->is_array_of_tables())
            throw ConfigError("scenario must be an array of tables ([[scenario]])", line_of(*list));
        for (auto&& [key, node] : root) {
            if (key.str() != "scenario" && key.str() != "output")
                throw ConfigError("unknown key '" + std::string(key.str()) + "' next to [[scenario]]",
                                  static_cast<int>(key.source().begin.line));
        }
        std::size_t index = 0;
        for (const auto& item : *arr) {
            set.scenarios.push_back(
                read_scenario(*item.as_table(), "scenario[" + std::to_string(index++) + "]", false));
        }
    } else {
        set.scenarios.push_back(read_scenario(root, "scenario", true));
    }
    std::set<std::string> names;
    for (const auto& s : set.scenarios)
        if (!names.insert(s.name).second)
            throw ConfigError("duplicate scenario name '" + s.name + "'");
    return set;
}

// Shortest round-trip decimal, always carrying a '.' or exponent.
std::string real_text(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    std::string s(buf, res.ptr);
    if (s.find_first_of(".eE") == std::string::npos)
        s += ".0";
    return s;
}

std::string reals_text(const std::vector<double>& values) {
    std::string s = "[";
    for (std::size_t i = 0; i < values.size(); ++i)
        s += (i ? ", " : "") + real_text(values[i]);
    return s + "]";
}

std::string quoted(std::string_view s) { return "\"" + std::string(s) + "\""; }

void emit_scenario(std::ostringstream& out, const ScenarioConfig& c, const std::string& prefix) {
    out << "kind = " << quoted(kind_name(c.kind)) << "\n";
    out << "name = " << quoted(c.name) << "\n";

    out << "\n[" << prefix << "domain]\n";
    out << "dim = " << c.domain.dim << "\n";
    out << "lower = " << reals_text(c.domain.lower) << "\n";
    out << "upper = " << reals_text(c.domain.upper) << "\n";
    out << "geometry = " << quoted(name_of(kGeometries, c.domain.geometry)) << "\n";

    if (c.grid.N || !c.grid.ladder.empty()) {
        out << "\n[" << prefix << "grid]\n";
        if (c.grid.N)
            out << "N = " << *c.grid.N << "\n";
        if (!c.grid.ladder.empty()) {
            out << "ladder = [";
            for (std::size_t i = 0; i < c.grid.ladder.size(); ++i)
                out << (i ? ", " : "") << c.grid.ladder[i];
            out << "]\n";
        }
    }
    if (c.kernel) {
        out << "\n[" << prefix << "kernel]\n";
        out << "shape = " << quoted(name_of(kKernels, c.kernel->shape)) << "\n";
        out << "support = " << real_text(c.kernel->support) << "\n";
        out << "mass = " << real_text(c.kernel->mass) << "\n";
    }

    const auto& g = c.dispersal;
    out << "\n[" << prefix << "dispersal]\n";
    out << "shape = " << quoted(name_of(kDispersals, g.shape)) << "\n";
    switch (g.shape) {
    case DispersalShape::constant: out << "value = " << real_text(g.value) << "\n"; break;
    case DispersalShape::affine:
        out << "intercept = " << real_text(g.intercept) << "\nslope = " << real_text(g.slope) << "\n";
        break;
    case DispersalShape::power_degenerate:
        out << "exponent = " << real_text(g.exponent) << "\ncap = " << real_text(g.cap) << "\n";
        break;
    case DispersalShape::custom: break;
    }
    out << "g_floor = " << real_text(g.g_floor) << "\n";

    const auto& a = c.coefficient;
    out << "\n[" << prefix << "coefficient]\n";
    out << "shape = " << quoted(name_of(kCoefficients, a.shape)) << "\n";
    if (a.shape == CoefficientShape::constant) {
        out << "value = " << real_text(a.value) << "\n";
    } else {
        out << "sigma = " << real_text(a.sigma) << "\n";
        out << "c = " << real_text(a.c) << "\n";
        if (a.shape == CoefficientShape::power_contact || a.shape == CoefficientShape::plateau)
            out << "gamma = " << real_text(a.gamma) << "\n";
        if (a.shape == CoefficientShape::plateau)
            out << "radius = " << real_text(a.radius) << "\n";
        out << "center = " << reals_text(a.center) << "\n";
    }

    if (c.nonlinearity) {
        out << "\n[" << prefix << "nonlinearity]\n";
        out << "shape = \"logistic\"\n";
        out << "mu0 = " << real_text(c.nonlinearity->mu0) << "\n";
        out << "mu2 = " << real_text(c.nonlinearity->mu2) << "\n";
    }

    const auto& s = c.solver;
    out << "\n[" << prefix << "solver]\n";
    out << "tol = " << real_text(s.tol) << "\n";
    out << "max_iter = " << s.max_iter << "\n";
    if (s.dt)
        out << "dt = " << real_text(*s.dt) << "\n";
    out << "T = " << real_text(s.T) << "\n";
    if (s.k)
        out << "k = " << real_text(*s.k) << "\n";
    out << "seed = " << s.seed << "\n";
    if (s.renormalize)
        out << "renormalize = " << (*s.renormalize ? "true" : "false") << "\n";
    out << "battery = " << s.battery << "\n";
    out << "cutoff_margin = " << real_text(s.cutoff_margin) << "\n";
    out << "checkpoints = " << s.checkpoints << "\n";
    out << "stepper = " << quoted(name_of(kSteppers, s.stepper)) << "\n";
    out << "u0 = " << real_text(s.u0) << "\n";
    out << "evolve_tol = " << real_text(s.evolve_tol) << "\n";
    out << "subsolution_n = " << s.subsolution_n << "\n";
    out << "epsilon = " << real_text(s.epsilon) << "\n";

    if (c.rankone) {
        out << "\n[" << prefix << "rankone]\n";
        out << "rho = " << real_text(c.rankone->rho) << "\n";
    }
    if (c.exhaustion) {
        out << "\n[" << prefix << "exhaustion]\n";
        out << "core = " << reals_text(c.exhaustion->core) << "\n";
        out << "radii = " << reals_text(c.exhaustion->radii) << "\n";
        out << "h = " << real_text(c.exhaustion->h) << "\n";
    }
}

} // namespace

std::string_view kind_name(ExperimentKind kind) { return name_of(kKinds, kind); }

ScenarioSet parse_config_string(std::string_view text, std::string_view source) {
    toml::table root;
    try {
        root = toml::parse(text, source);
    } catch (const toml::parse_error& e) {
        throw ConfigError(std::string("parse error: ") + std::string(e.description()),
                          static_cast<int>(e.source().begin.line));
    }
    return read_set(root);
}

ScenarioSet parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_string(buf.str(), path.string());
}

std::string to_toml(const ScenarioConfig& config) {
    std::ostringstream out;
    emit_scenario(out, config, "");
    return out.str();
}

std::string to_toml(const ScenarioSet& set) {
    std::ostringstream out;
    out << "[output]\ndir = " << quoted(set.output_dir) << "\n";
    for (const auto& c : set.scenarios) {
        out << "\n[[scenario]]\n";
        emit_scenario(out, c, "scenario.");
    }
    return out.str();
}

Domain make_domain(const ScenarioConfig& config) {
    const auto& d = config.domain;
    std::vector<Interval> axes;
    for (int k = 0; k < d.dim; ++k)
        axes.push_back(Interval{d.lower[static_cast<std::size_t>(k)], d.upper[static_cast<std::size_t>(k)]});
    return Domain(std::move(axes), d.geometry);
}

KernelJ make_kernel(const ScenarioConfig& config) {
    if (!config.kernel)
        throw ConfigError("scenario '" + config.name + "' has no kernel");
    const int dim = config.kind == ExperimentKind::exhaustion ? 1 : config.domain.dim;
    return KernelJ::shape(config.kernel->shape, dim, config.kernel->support, config.kernel->mass);
}

DispersalG make_dispersal(const ScenarioConfig& config, const Domain& domain) {
    const auto& g = config.dispersal;
    switch (g.shape) {
    case DispersalShape::constant: return DispersalG::constant(g.value);
    case DispersalShape::affine: return DispersalG::affine(g.intercept, g.slope, domain);
    case DispersalShape::power_degenerate: return DispersalG::power_degenerate(g.exponent, g.cap);
    case DispersalShape::custom: break;
    }
    throw ConfigError("unsupported dispersal shape");
}

CoefficientA make_coefficient(const ScenarioConfig& config) {
    const auto& a = config.coefficient;
    const Point center{a.center.empty() ? 0.0 : a.center[0], a.center.size() > 1 ? a.center[1] : 0.0};
    switch (a.shape) {
    case CoefficientShape::constant: return CoefficientA::constant(a.value);
    case CoefficientShape::quadratic_well: return CoefficientA::quadratic_well(a.sigma, a.c, center);
    case CoefficientShape::power_contact: return CoefficientA::power_contact(a.sigma, a.gamma, a.c, center);
    case CoefficientShape::plateau: return CoefficientA::plateau(a.sigma, a.radius, a.c, a.gamma, center);
    case CoefficientShape::saturating_well: return CoefficientA::saturating_well(a.sigma, a.c, center);
    case CoefficientShape::custom: break;
    }
    throw ConfigError("unsupported coefficient shape");
}

KPPNonlinearity make_nonlinearity(const ScenarioConfig& config) {
    if (!config.nonlinearity)
        throw ConfigError("missing nonlinearity");
    return KPPNonlinearity::logistic(config.nonlinearity->mu0, config.nonlinearity->mu2);
}

AssemblyOptions make_assembly(const ScenarioConfig& config) {
    AssemblyOptions o;
    o.renormalize = config.solver.renormalize;
    o.exclude_degenerate = config.dispersal.shape == DispersalShape::power_degenerate;
    o.g_floor = config.dispersal.g_floor;
    return o;
}

EigenOptions make_eigen(const ScenarioConfig& config) {
    EigenOptions o;
    o.tol = config.solver.tol;
    o.max_iter = config.solver.max_iter;
    return o;
}

void validate_profiles(const ScenarioConfig& config) {
    try {
        if (config.kind == ExperimentKind::exhaustion) {
            const auto& e = *config.exhaustion;
            const KernelJ J = make_kernel(config);
            J.validate();
            const UnboundedLine line{Interval{e.core[0], e.core[1]}, e.radii};
            const auto windows = exhaustion_sequence(line, e.radii.size());
            const Grid grid = build_grid(windows.back(), 16);
            make_dispersal(config, windows.back()).validate(grid);
            make_coefficient(config).validate(grid);
            return;
        }
        const Domain domain = make_domain(config);
        const int N = config.grid.N ? *config.grid.N : config.grid.ladder.front();
        const Grid grid = build_grid(domain, N);
        if (config.kernel)
            make_kernel(config).validate();
        make_dispersal(config, domain).validate(grid);
        make_coefficient(config).validate(grid);
        if (config.nonlinearity)
            make_nonlinearity(config).validate(grid);
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError("scenario '" + config.name + "': " + e.what());
    }
}

} // namespace nonlocal
