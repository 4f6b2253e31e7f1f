#ifndef COALGDEF_TOOLS_CLI_HPP
#define COALGDEF_TOOLS_CLI_HPP

// Batch front end. Reports go to stdout (text, or JSON with --json); timing
// and warnings go to stderr. Exit codes: 0 ok, 1 invalid object or
// obstructed, 2 usage or parse error.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "coalgdef/cohomology.hpp"
#include "coalgdef/deformation.hpp"
#include "coalgdef/io.hpp"

namespace coalgdef::cli {

using Report = nlohmann::ordered_json;

enum Exit : int { ok = 0, math_failure = 1, usage = 2 };

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Request {
    std::string command;
    std::string file;
    std::string name;
    std::string complex;
    long long number = 0;
    std::string output;
};

inline void render(const Report& r, std::ostream& out, int indent = 0)
{
    const std::string pad(static_cast<std::size_t>(indent), ' ');
    for (const auto& [key, value] : r.items()) {
        if (value.is_object()) {
            out << pad << key << ":\n";
            render(value, out, indent + 2);
        } else if (value.is_array() && std::any_of(value.begin(), value.end(), [](const auto& v) {
                       return v.is_object() || v.is_array();
                   })) {
            out << pad << key << ":\n";
            for (const auto& item : value) {
                if (item.is_object()) {
                    out << pad << "  -\n";
                    render(item, out, indent + 4);
                } else {
                    out << pad << "  - " << item.dump() << "\n";
                }
            }
        } else if (value.is_string()) {
            out << pad << key << ": " << value.get<std::string>() << "\n";
        } else {
            out << pad << key << ": " << value.dump() << "\n";
        }
    }
}

namespace detail {

template <Field F>
Report defect_report(const Defect& d)
{
    return Report{{"equation", d.equation}, {"order", d.order}, {"row", d.row}, {"col", d.col}, {"value", d.value}};
}

template <Field F>
std::vector<std::string> format_vector(const F& field, const Vector<scalar_t<F>>& v)
{
    std::vector<std::string> out;
    for (const auto& x : v)
        out.push_back(field.format(x));
    return out;
}

// First failing structural check of a morphism and its two coalgebras.
template <Field F>
CheckReport check_morphism_chain(const CoalgebraMorphism<F>& f)
{
    if (auto r = check_coassociative(f.source()); !r)
        return r;
    if (auto r = check_coassociative(f.target()); !r)
        return r;
    return check_morphism(f);
}

template <Field F>
int fail(Report& r, const CheckReport& c)
{
    r["status"] = "fail";
    r["defect"] = defect_report<F>(*c.defect);
    return math_failure;
}

inline void write_file(const std::string& path, const std::string& text)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw UsageError("cannot write " + path);
    os << text;
    if (!os)
        throw UsageError("failed writing " + path);
}

inline std::size_t positive(long long n, const char* what)
{
    if (n < 1)
        throw UsageError(std::string(what) + " must be at least 1");
    return static_cast<std::size_t>(n);
}

template <Field F>
int cmd_check(const ProblemFile<F>& p, const Request& q, Report& r)
{
    const auto& name = q.name;
    if (auto it = p.coalgebras.find(name); it != p.coalgebras.end()) {
        r["kind"] = "coalgebra";
        r["dim"] = it->second.dim();
        if (auto c = check_coassociative(it->second); !c)
            return fail<F>(r, c);
    } else if (auto it = p.morphisms.find(name); it != p.morphisms.end()) {
        r["kind"] = "morphism";
        r["source"] = it->second.source().name();
        r["target"] = it->second.target().name();
        if (auto c = check_morphism_chain(it->second); !c)
            return fail<F>(r, c);
    } else if (auto it = p.deformations.find(name); it != p.deformations.end()) {
        const auto& d = it->second.deformation;
        r["kind"] = "deformation";
        r["morphism"] = it->second.morphism;
        r["order"] = d.order();
        if (auto c = check_morphism_chain(d.morphism()); !c)
            return fail<F>(r, c);
        if (auto c = verify_deformation(d); !c)
            return fail<F>(r, c);
    } else if (auto it = p.isomorphisms.find(name); it != p.isomorphisms.end()) {
        r["kind"] = "isomorphism";
        r["morphism"] = it->second.morphism;
        r["order"] = it->second.isomorphism.order();
        if (auto c = check_morphism_chain(it->second.isomorphism.morphism()); !c)
            return fail<F>(r, c);
        if (!it->second.isomorphism.starts_at_identity()) {
            r["status"] = "fail";
            r["reason"] = "phi_0 is not the identity";
            return math_failure;
        }
    } else if (auto it = p.cocycles.find(name); it != p.cocycles.end()) {
        const auto& f = p.morphism(it->second.morphism);
        r["kind"] = "cochain";
        r["morphism"] = it->second.morphism;
        if (auto c = check_morphism_chain(f); !c)
            return fail<F>(r, c);
        MorphismComplex<F> complex(f);
        if (auto c = first_difference(p.field, complex.apply(it->second.cochain), "d_c(w)"); !c)
            return fail<F>(r, c);
    } else {
        throw UsageError("no object named '" + name + "'");
    }
    r["status"] = "ok";
    return ok;
}

template <class Complex>
void cohomology_payload(const Complex& c, std::size_t degree, Report& r)
{
    auto h = cohomology(c, degree);
    r["cocycle_dim"] = h.cocycle_dim;
    r["coboundary_dim"] = h.coboundary_dim;
    r["h_dim"] = h.h_dim;
    Report reps = Report::array();
    for (const auto& w : h.representatives)
        reps.push_back(format_vector(c.field(), c.flatten(w)));
    r["representatives"] = reps;
}

template <Field F>
int cmd_cohomology(const ProblemFile<F>& p, const Request& q, Report& r, std::ostream& err)
{
    const std::size_t degree = positive(q.number, "degree");
    const auto& kind = q.complex;
    if (kind != "source" && kind != "target" && kind != "morphism" && kind != "via")
        throw UsageError("complex must be source, target, morphism or via");
    r["complex"] = kind;
    r["degree"] = degree;

    std::optional<Coalgebra<F>> single;
    std::optional<CoalgebraMorphism<F>> f;
    if (auto it = p.coalgebras.find(q.name); it != p.coalgebras.end()) {
        if (kind == "morphism" || kind == "via")
            throw UsageError("the " + kind + " complex needs a morphism, '" + q.name + "' is a coalgebra");
        single = it->second;
    } else if (auto it = p.morphisms.find(q.name); it != p.morphisms.end()) {
        f = it->second;
        if (kind == "source")
            single = f->source();
        else if (kind == "target")
            single = f->target();
    } else {
        throw UsageError("no coalgebra or morphism named '" + q.name + "'");
    }

    std::size_t largest = single ? single->dim() : std::max(f->source().dim(), f->target().dim());
    if (degree > 6 && largest >= 3)
        err << "warning: degree " << degree << " over dimension " << largest << " builds matrices with "
            << ipow(largest, degree + 1) << "+ rows\n";

    if (single) {
        if (auto c = check_coassociative(*single); !c)
            return fail<F>(r, c);
        cohomology_payload(HochschildComplex<F>(regular_bicomodule(*single)), degree, r);
    } else {
        if (auto c = check_morphism_chain(*f); !c)
            return fail<F>(r, c);
        if (kind == "via")
            cohomology_payload(HochschildComplex<F>(bicomodule_via(*f)), degree, r);
        else
            cohomology_payload(MorphismComplex<F>(*f), degree, r);
    }
    r["status"] = "ok";
    return ok;
}

template <Field F>
const NamedDeformation<F>& find_deformation(const ProblemFile<F>& p, const std::string& name)
{
    auto it = p.deformations.find(name);
    if (it == p.deformations.end())
        throw UsageError("no deformation named '" + name + "'");
    return it->second;
}

template <Field F>
CheckReport check_deformation_chain(const TruncatedDeformation<F>& d)
{
    if (auto c = check_morphism_chain(d.morphism()); !c)
        return c;
    return verify_deformation(d);
}

template <Field F>
Report class_report(const F& field, const Vector<scalar_t<F>>& v)
{
    return format_vector(field, v);
}

template <Field F>
int cmd_obstruct(const ProblemFile<F>& p, const Request& q, Report& r)
{
    const auto& nd = find_deformation(p, q.name);
    const auto& d = nd.deformation;
    r["order"] = d.order();
    if (auto c = check_deformation_chain(d); !c)
        return fail<F>(r, c);
    auto ob = obstruction(d);
    const std::size_t da = d.morphism().source().dim(), db = d.morphism().target().dim();
    r["Ob_A"] = coalgdef::detail::write_quads(p.field, ob.cochain.xi, da);
    r["Ob_B"] = coalgdef::detail::write_quads(p.field, ob.cochain.pi, db);
    r["Ob_F"] = coalgdef::detail::write_quads(p.field, ob.cochain.phi, db);
    r["3-cocycle"] = "confirmed";
    r["h3_class"] = class_report(p.field, ob.h3_class);
    if (ob.cobounding()) {
        r["status"] = "ok";
        return ok;
    }
    r["status"] = "obstructed";
    return math_failure;
}

template <Field F>
int cmd_integrate(const ProblemFile<F>& p, const Request& q, Report& r)
{
    auto it = p.cocycles.find(q.name);
    if (it == p.cocycles.end())
        throw UsageError("no cochain named '" + q.name + "'");
    const auto& f = p.morphism(it->second.morphism);
    if (q.number < 0)
        throw UsageError("order must be nonnegative");
    const auto target = static_cast<std::size_t>(q.number);
    r["target_order"] = target;
    if (auto c = check_morphism_chain(f); !c)
        return fail<F>(r, c);
    MorphismComplex<F> complex(f);
    if (auto c = first_difference(p.field, complex.apply(it->second.cochain), "d_c(w)"); !c)
        throw UsageError("'" + q.name + "' is not a 2-cocycle: " + c.defect->describe());

    auto result = integrate(f, it->second.cochain, target);
    ProblemFile<F> outp{p.field, {}, {}, {}, {}, {}};
    outp.add_morphism(it->second.morphism, f);
    const std::string dname = q.name + "_integrated";
    outp.deformations.emplace(dname, NamedDeformation<F>{it->second.morphism, result.deformation});
    write_file(q.output, to_text(outp));
    r["deformation"] = dname;
    r["reached_order"] = result.deformation.order();
    r["output"] = q.output;
    if (result.complete()) {
        r["status"] = "ok";
        return ok;
    }
    r["failing_order"] = result.deformation.order() + 1;
    r["h3_class"] = class_report(p.field, result.obstruction->h3_class);
    r["status"] = "obstructed";
    return math_failure;
}

template <Field F>
int cmd_trivialize(const ProblemFile<F>& p, const Request& q, Report& r)
{
    const auto& nd = find_deformation(p, q.name);
    const auto& d = nd.deformation;
    r["order"] = d.order();
    if (auto c = check_deformation_chain(d); !c)
        return fail<F>(r, c);
    auto result = trivialize(d);
    if (auto* failure = std::get_if<TrivializationFailure<scalar_t<F>>>(&result)) {
        r["status"] = "fail";
        r["blocked_order"] = failure->order;
        r["h2_class"] = class_report(p.field, failure->h2_class);
        return math_failure;
    }
    const auto& iso = std::get<FormalIsomorphism<F>>(result);
    ProblemFile<F> outp{p.field, {}, {}, {}, {}, {}};
    outp.add_morphism(nd.morphism, d.morphism());
    const std::string iname = q.name + "_trivializer";
    outp.isomorphisms.emplace(iname, NamedIsomorphism<F>{nd.morphism, iso});
    write_file(q.output, to_text(outp));
    Report coeffs = Report::array();
    for (std::size_t n = 1; n <= iso.order(); ++n)
        coeffs.push_back(Report{{"order", n},
                                {"A", coalgdef::detail::write_matrix(p.field, iso.a(n))},
                                {"B", coalgdef::detail::write_matrix(p.field, iso.b(n))}});
    r["isomorphism"] = iname;
    r["coefficients"] = coeffs;
    r["output"] = q.output;
    r["status"] = "ok";
    return ok;
}

template <Field F>
int execute(const F& field, const nlohmann::json& doc, const Request& q, Report& r, std::ostream& err)
{
    ProblemFile<F> p = parse_problem(doc, field);
    r["field"] = field.name();
    if (q.command == "check")
        return cmd_check(p, q, r);
    if (q.command == "cohomology")
        return cmd_cohomology(p, q, r, err);
    if (q.command == "obstruct")
        return cmd_obstruct(p, q, r);
    if (q.command == "integrate")
        return cmd_integrate(p, q, r);
    return cmd_trivialize(p, q, r);
}

inline std::string read_text(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw UsageError("cannot read " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

} // namespace detail

/// Runs one invocation; args excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Deformations of coalgebra morphisms over exact fields", "coalgdef"};
    app.fallthrough();
    app.require_subcommand(0, 1);
    std::string field_spec, fixtures_dir;
    bool as_json = false;
    app.add_option("--field", field_spec, "rational or prime:<p> (overrides the file)");
    app.add_option("--fixtures", fixtures_dir, "write the built-in corpus to <dir>/corpus.json");
    app.add_flag("--json", as_json, "machine-readable report");

    Request q;
    auto* check = app.add_subcommand("check", "validate a named object");
    check->add_option("file", q.file)->required();
    check->add_option("name", q.name)->required();

    auto* coh = app.add_subcommand("cohomology", "cohomology of a complex in one degree");
    coh->add_option("file", q.file)->required();
    coh->add_option("complex", q.complex, "source, target, morphism or via")->required();
    coh->add_option("name", q.name)->required();
    coh->add_option("degree", q.number)->required();

    auto* obs = app.add_subcommand("obstruct", "obstruction cochain of a deformation");
    obs->add_option("file", q.file)->required();
    obs->add_option("name", q.name)->required();

    auto* integ = app.add_subcommand("integrate", "integrate a 2-cocycle");
    integ->add_option("file", q.file)->required();
    integ->add_option("name", q.name)->required();
    integ->add_option("order", q.number)->required();
    integ->add_option("-o,--output", q.output)->required();

    auto* triv = app.add_subcommand("trivialize", "find an isomorphism to the trivial deformation");
    triv->add_option("file", q.file)->required();
    triv->add_option("name", q.name)->required();
    triv->add_option("-o,--output", q.output)->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? ok : usage;
    }

    const auto start = std::chrono::steady_clock::now();
    int code = ok;
    try {
        if (!fixtures_dir.empty()) {
            std::filesystem::create_directories(fixtures_dir);
            const auto path = (std::filesystem::path(fixtures_dir) / "corpus.json").string();
            auto field = parse_field_spec(field_spec.empty() ? "rational" : field_spec);
            std::visit([&](const auto& f) { detail::write_file(path, to_text(fixture_corpus(f))); }, field);
            err << "wrote " << path << "\n";
        }
        auto subs = app.get_subcommands();
        if (subs.empty()) {
            if (fixtures_dir.empty()) {
                err << app.help();
                return usage;
            }
            return ok;
        }
        q.command = subs.front()->get_name();

        Report r;
        std::string echo = q.command;
        for (const auto& a : {q.file, q.complex, q.name})
            if (!a.empty())
                echo += " " + a;
        if (q.command == "cohomology" || q.command == "integrate")
            echo += " " + std::to_string(q.number);
        r["command"] = echo;
        r["status"] = "pending";

        auto doc = parse_json_text(detail::read_text(q.file));
        auto field = parse_field_spec(field_spec.empty() ? read_field_name(doc) : field_spec);
        code = std::visit([&](const auto& f) { return detail::execute(f, doc, q, r, err); }, field);

        if (as_json) {
            std::string text;
            write_json(r, text);
            out << text << "\n";
        }
        else
            render(r, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return usage;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return usage;
    } catch (const std::logic_error& e) {
        // invalid_argument derives from logic_error; anything else is a bug
        err << (dynamic_cast<const std::invalid_argument*>(&e) ? "error: " : "internal error: ") << e.what() << "\n";
        return dynamic_cast<const std::invalid_argument*>(&e) ? usage : math_failure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return usage;
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    err << "time: " << std::fixed << std::setprecision(3) << seconds << " s\n";
    return code;
}

} // namespace coalgdef::cli

#endif
