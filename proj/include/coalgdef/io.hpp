#ifndef COALGDEF_IO_HPP
#define COALGDEF_IO_HPP

// Problem files: JSON documents naming coalgebras, morphisms, deformations,
// formal isomorphisms and 2-cochains over one field. Scalars are strings
// ("3/7", "-2") or JSON integers. Comultiplications and other maps into
// X (x) X are lists of [a, b, c, coeff] meaning e_a -> coeff e_b (x) e_c;
// maps A -> B are row lists, matrix[i][j] the e_i coefficient of f(e_j).

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "deformation.hpp"
#include "fixtures.hpp"

namespace coalgdef {

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using AnyField = std::variant<RationalField, PrimeField>;

/// "rational" or "prime:<p>".
inline AnyField parse_field_spec(const std::string& spec)
{
    if (spec == "rational")
        return RationalField{};
    if (spec.rfind("prime:", 0) == 0) {
        const std::string digits = spec.substr(6);
        if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos || digits.size() > 19)
            throw ParseError("bad prime in field spec '" + spec + "'");
        try {
            return PrimeField(std::stoull(digits));
        } catch (const std::invalid_argument& e) {
            throw ParseError(e.what());
        }
    }
    throw ParseError("unknown field '" + spec + "' (expected rational or prime:<p>)");
}

template <Field F>
struct NamedDeformation {
    std::string morphism;
    TruncatedDeformation<F> deformation;
};

template <Field F>
struct NamedIsomorphism {
    std::string morphism;
    FormalIsomorphism<F> isomorphism;
};

template <Field F>
struct NamedCochain {
    std::string morphism;
    MorphismCochain<scalar_t<F>> cochain;
};

template <Field F>
struct ProblemFile {
    F field;
    std::map<std::string, Coalgebra<F>> coalgebras;
    std::map<std::string, CoalgebraMorphism<F>> morphisms;
    std::map<std::string, NamedDeformation<F>> deformations;
    std::map<std::string, NamedIsomorphism<F>> isomorphisms;
    std::map<std::string, NamedCochain<F>> cocycles;

    bool has_name(const std::string& name) const
    {
        return coalgebras.count(name) || morphisms.count(name) || deformations.count(name) ||
               isomorphisms.count(name) || cocycles.count(name);
    }

    const CoalgebraMorphism<F>& morphism(const std::string& name) const
    {
        auto it = morphisms.find(name);
        if (it == morphisms.end())
            throw ParseError("unknown morphism '" + name + "'");
        return it->second;
    }

    /// A morphism together with its source and target coalgebras.
    void add_morphism(const std::string& name, const CoalgebraMorphism<F>& f)
    {
        coalgebras.insert_or_assign(f.source().name(), f.source());
        coalgebras.insert_or_assign(f.target().name(), f.target());
        morphisms.insert_or_assign(name, f);
    }

    friend bool operator==(const ProblemFile& a, const ProblemFile& b)
    {
        auto same_def = [](const auto& x, const auto& y) {
            return x.morphism == y.morphism && x.deformation == y.deformation;
        };
        auto same_iso = [](const auto& x, const auto& y) {
            return x.morphism == y.morphism && x.isomorphism == y.isomorphism;
        };
        auto same_co = [](const auto& x, const auto& y) { return x.morphism == y.morphism && x.cochain == y.cochain; };
        auto maps_equal = [](const auto& l, const auto& r, auto eq) {
            return l.size() == r.size() && std::equal(l.begin(), l.end(), r.begin(), [&](const auto& p, const auto& q) {
                       return p.first == q.first && eq(p.second, q.second);
                   });
        };
        return a.field.name() == b.field.name() && a.coalgebras == b.coalgebras && a.morphisms == b.morphisms &&
               maps_equal(a.deformations, b.deformations, same_def) &&
               maps_equal(a.isomorphisms, b.isomorphisms, same_iso) && maps_equal(a.cocycles, b.cocycles, same_co);
    }
};

namespace detail {

using nlohmann::json;

template <Field F>
scalar_t<F> read_scalar(const F& field, const json& j, const std::string& where)
{
    try {
        if (j.is_string())
            return field.parse(j.get<std::string>());
        if (j.is_number_integer())
            return field.parse(j.dump());
    } catch (const std::invalid_argument& e) {
        throw ParseError(where + ": " + e.what());
    }
    throw ParseError(where + ": expected a scalar string or integer, got " + j.dump());
}

inline std::size_t read_index(const json& j, const std::string& where)
{
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0))
        throw ParseError(where + ": expected a nonnegative integer, got " + j.dump());
    return j.get<std::size_t>();
}

inline const json& member(const json& obj, const char* key, const std::string& where)
{
    if (!obj.is_object() || !obj.contains(key))
        throw ParseError(where + ": missing '" + key + "'");
    return obj.at(key);
}

// d_out^2 x d_in matrix from [a, b, c, coeff] quadruples; repeated entries add up.
template <Field F>
Matrix<scalar_t<F>> read_quads(const F& field, const json& j, std::size_t d_in, std::size_t d_out,
                               const std::string& where)
{
    if (!j.is_array())
        throw ParseError(where + ": expected a list of [a, b, c, coeff]");
    Matrix<scalar_t<F>> m(d_out * d_out, d_in);
    for (std::size_t k = 0; k < j.size(); ++k) {
        const auto& q = j[k];
        const std::string at = where + "[" + std::to_string(k) + "]";
        if (!q.is_array() || q.size() != 4)
            throw ParseError(at + ": expected [a, b, c, coeff]");
        std::size_t a = read_index(q[0], at), b = read_index(q[1], at), c = read_index(q[2], at);
        if (a >= d_in || b >= d_out || c >= d_out)
            throw ParseError(at + ": index out of range");
        m(b * d_out + c, a) += read_scalar(field, q[3], at);
    }
    return m;
}

template <Field F>
Matrix<scalar_t<F>> read_matrix(const F& field, const json& j, std::size_t rows, std::size_t cols,
                                const std::string& where)
{
    if (!j.is_array() || j.size() != rows)
        throw ParseError(where + ": expected " + std::to_string(rows) + " rows");
    Matrix<scalar_t<F>> m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols)
            throw ParseError(where + ": row " + std::to_string(i) + " must have " + std::to_string(cols) + " entries");
        for (std::size_t c = 0; c < cols; ++c)
            m(i, c) = read_scalar(field, j[i][c], where);
    }
    return m;
}

template <Field F>
json write_quads(const F& field, const Matrix<scalar_t<F>>& m, std::size_t d_out)
{
    json out = json::array();
    for (std::size_t a = 0; a < m.cols(); ++a)
        for (std::size_t r = 0; r < m.rows(); ++r)
            if (!is_zero(m(r, a)))
                out.push_back(json::array({a, r / d_out, r % d_out, field.format(m(r, a))}));
    return out;
}

template <Field F>
json write_matrix(const F& field, const Matrix<scalar_t<F>>& m)
{
    json out = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j)
            row.push_back(field.format(m(i, j)));
        out.push_back(std::move(row));
    }
    return out;
}

template <Field F>
MorphismCochain<scalar_t<F>> read_two_cochain(const F& field, const json& j, const CoalgebraMorphism<F>& f,
                                              const std::string& where)
{
    const std::size_t da = f.source().dim(), db = f.target().dim();
    auto w = TruncatedDeformation<F>::zero_coefficient(f);
    if (j.contains("A"))
        w.xi = read_quads(field, j["A"], da, da, where + ".A");
    if (j.contains("B"))
        w.pi = read_quads(field, j["B"], db, db, where + ".B");
    if (j.contains("F"))
        w.phi = read_matrix(field, j["F"], db, da, where + ".F");
    return w;
}

template <Field F>
json write_two_cochain(const F& field, const MorphismCochain<scalar_t<F>>& w)
{
    return {{"A", write_quads(field, w.xi, w.xi.cols())},
            {"B", write_quads(field, w.pi, w.pi.cols())},
            {"F", write_matrix(field, w.phi)}};
}

inline std::size_t read_order(const json& obj, const std::string& where)
{
    return read_index(member(obj, "order", where), where + ".order");
}

} // namespace detail

inline std::string read_field_name(const nlohmann::json& doc)
{
    if (!doc.is_object())
        throw ParseError("problem file must be a JSON object");
    if (!doc.contains("field"))
        return "rational";
    if (!doc["field"].is_string())
        throw ParseError("'field' must be a string");
    return doc["field"].get<std::string>();
}

inline nlohmann::json parse_json_text(const std::string& text)
{
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
}

template <Field F>
ProblemFile<F> parse_problem(const nlohmann::json& doc, const F& field)
{
    using detail::json;
    using detail::member;
    ProblemFile<F> p{field, {}, {}, {}, {}, {}};
    if (!doc.is_object())
        throw ParseError("problem file must be a JSON object");
    for (const auto& [key, value] : doc.items())
        if (key != "field" && key != "coalgebras" && key != "morphisms" && key != "deformations" &&
            key != "isomorphisms" && key != "cocycles")
            throw ParseError("unknown top-level key '" + key + "'");
    auto section = [&](const char* key) -> json {
        if (!doc.contains(key))
            return json::object();
        if (!doc[key].is_object())
            throw ParseError(std::string("'") + key + "' must be an object");
        return doc[key];
    };
    const json coalgebras_section = section("coalgebras"), morphisms_section = section("morphisms"),
               deformations_section = section("deformations"), isomorphisms_section = section("isomorphisms"),
               cocycles_section = section("cocycles");
    auto claim = [&](const std::string& name) {
        if (name.empty())
            throw ParseError("empty object name");
        if (p.has_name(name))
            throw ParseError("name '" + name + "' is used twice");
    };

    for (const auto& [name, c] : coalgebras_section.items()) {
        claim(name);
        const std::string where = "coalgebra " + name;
        std::size_t dim = detail::read_index(member(c, "dim", where), where + ".dim");
        auto delta = detail::read_quads(field, member(c, "delta", where), dim, dim, where + ".delta");
        p.coalgebras.emplace(name, Coalgebra<F>(field, name, std::move(delta)));
    }
    auto coalgebra = [&](const json& j, const std::string& where) -> const Coalgebra<F>& {
        if (!j.is_string())
            throw ParseError(where + ": expected a coalgebra name");
        auto it = p.coalgebras.find(j.get<std::string>());
        if (it == p.coalgebras.end())
            throw ParseError(where + ": unknown coalgebra '" + j.get<std::string>() + "'");
        return it->second;
    };
    for (const auto& [name, m] : morphisms_section.items()) {
        claim(name);
        const std::string where = "morphism " + name;
        const auto& a = coalgebra(member(m, "source", where), where + ".source");
        const auto& b = coalgebra(member(m, "target", where), where + ".target");
        auto map = detail::read_matrix(field, member(m, "matrix", where), b.dim(), a.dim(), where + ".matrix");
        p.morphisms.emplace(name, CoalgebraMorphism<F>(a, b, std::move(map)));
    }
    auto morphism_of = [&](const json& obj, const std::string& where) -> std::pair<std::string, CoalgebraMorphism<F>> {
        const auto& j = member(obj, "morphism", where);
        if (!j.is_string() || !p.morphisms.count(j.get<std::string>()))
            throw ParseError(where + ": unknown morphism " + j.dump());
        return {j.get<std::string>(), p.morphisms.at(j.get<std::string>())};
    };
    auto coefficient_list = [&](const json& obj, std::size_t order, const std::string& where) {
        std::map<std::size_t, json> by_order;
        const auto& list = member(obj, "coefficients", where);
        if (!list.is_array())
            throw ParseError(where + ": 'coefficients' must be a list");
        for (const auto& c : list) {
            std::size_t n = detail::read_order(c, where);
            if (n > order)
                throw ParseError(where + ": coefficient of order " + std::to_string(n) + " exceeds the order");
            if (!by_order.emplace(n, c).second)
                throw ParseError(where + ": order " + std::to_string(n) + " given twice");
        }
        return by_order;
    };

    for (const auto& [name, d] : deformations_section.items()) {
        claim(name);
        const std::string where = "deformation " + name;
        auto [mname, f] = morphism_of(d, where);
        std::size_t order = detail::read_order(d, where);
        auto given = coefficient_list(d, order, where);
        if (given.count(0))
            throw ParseError(where + ": omega_0 is fixed by the morphism and must not be listed");
        std::vector<MorphismCochain<scalar_t<F>>> higher;
        for (std::size_t n = 1; n <= order; ++n)
            higher.push_back(given.count(n)
                                 ? detail::read_two_cochain(field, given[n], f, where + ".order" + std::to_string(n))
                                 : TruncatedDeformation<F>::zero_coefficient(f));
        p.deformations.emplace(name, NamedDeformation<F>{mname, TruncatedDeformation<F>(f, std::move(higher))});
    }

    for (const auto& [name, d] : isomorphisms_section.items()) {
        claim(name);
        const std::string where = "isomorphism " + name;
        auto [mname, f] = morphism_of(d, where);
        std::size_t order = detail::read_order(d, where);
        auto given = coefficient_list(d, order, where);
        const std::size_t da = f.source().dim(), db = f.target().dim();
        std::vector<MorphismCochain<scalar_t<F>>> coeffs;
        for (std::size_t n = 0; n <= order; ++n) {
            Matrix<scalar_t<F>> a = n == 0 ? f.source().id() : Matrix<scalar_t<F>>(da, da);
            Matrix<scalar_t<F>> b = n == 0 ? f.target().id() : Matrix<scalar_t<F>>(db, db);
            if (given.count(n)) {
                const std::string at = where + ".order" + std::to_string(n);
                if (given[n].contains("A"))
                    a = detail::read_matrix(field, given[n]["A"], da, da, at + ".A");
                if (given[n].contains("B"))
                    b = detail::read_matrix(field, given[n]["B"], db, db, at + ".B");
            }
            coeffs.push_back(FormalIsomorphism<F>::make_coefficient(f, std::move(a), std::move(b)));
        }
        p.isomorphisms.emplace(name, NamedIsomorphism<F>{mname, FormalIsomorphism<F>(f, std::move(coeffs))});
    }

    for (const auto& [name, c] : cocycles_section.items()) {
        claim(name);
        const std::string where = "cocycle " + name;
        auto [mname, f] = morphism_of(c, where);
        p.cocycles.emplace(name, NamedCochain<F>{mname, detail::read_two_cochain(field, c, f, where)});
    }
    return p;
}

template <Field F>
nlohmann::json serialize(const ProblemFile<F>& p)
{
    using detail::json;
    const auto& field = p.field;
    json doc = json::object();
    doc["field"] = field.name();
    json cs = json::object(), ms = json::object(), ds = json::object(), is = json::object(), ws = json::object();
    for (const auto& [name, c] : p.coalgebras)
        cs[name] = {{"dim", c.dim()}, {"delta", detail::write_quads(field, c.delta(), c.dim())}};
    for (const auto& [name, m] : p.morphisms)
        ms[name] = {{"source", m.source().name()},
                    {"target", m.target().name()},
                    {"matrix", detail::write_matrix(field, m.map())}};
    for (const auto& [name, d] : p.deformations) {
        json coeffs = json::array();
        for (std::size_t n = 1; n <= d.deformation.order(); ++n) {
            json c = detail::write_two_cochain(field, d.deformation.coefficient(n));
            c["order"] = n;
            coeffs.push_back(std::move(c));
        }
        ds[name] = {{"morphism", d.morphism}, {"order", d.deformation.order()}, {"coefficients", coeffs}};
    }
    for (const auto& [name, i] : p.isomorphisms) {
        json coeffs = json::array();
        const auto& iso = i.isomorphism;
        for (std::size_t n = iso.starts_at_identity() ? 1 : 0; n <= iso.order(); ++n)
            coeffs.push_back({{"order", n},
                              {"A", detail::write_matrix(field, iso.a(n))},
                              {"B", detail::write_matrix(field, iso.b(n))}});
        is[name] = {{"morphism", i.morphism}, {"order", iso.order()}, {"coefficients", coeffs}};
    }
    for (const auto& [name, w] : p.cocycles) {
        json c = detail::write_two_cochain(field, w.cochain);
        c["morphism"] = w.morphism;
        ws[name] = std::move(c);
    }
    doc["coalgebras"] = cs;
    doc["morphisms"] = ms;
    doc["deformations"] = ds;
    doc["isomorphisms"] = is;
    doc["cocycles"] = ws;
    return doc;
}

/// Two-space indented JSON with arrays of scalars kept on one line.
template <class Json>
void write_json(const Json& j, std::string& out, int indent = 0)
{
    const std::string pad(static_cast<std::size_t>(indent), ' '), inner(static_cast<std::size_t>(indent + 2), ' ');
    auto flat = [](const Json& a) {
        return std::none_of(a.begin(), a.end(), [](const Json& v) { return v.is_structured(); });
    };
    if (j.is_object() && !j.empty()) {
        out += "{\n";
        std::size_t k = 0;
        for (const auto& [key, value] : j.items()) {
            out += inner + Json(key).dump() + ": ";
            write_json(value, out, indent + 2);
            out += ++k < j.size() ? ",\n" : "\n";
        }
        out += pad + "}";
    } else if (j.is_array() && !j.empty() && !flat(j)) {
        out += "[\n";
        for (std::size_t k = 0; k < j.size(); ++k) {
            out += inner;
            write_json(j[k], out, indent + 2);
            out += k + 1 < j.size() ? ",\n" : "\n";
        }
        out += pad + "]";
    } else if (j.is_array()) {
        out += "[";
        for (std::size_t k = 0; k < j.size(); ++k)
            out += (k ? ", " : "") + j[k].dump();
        out += "]";
    } else {
        out += j.dump();
    }
}

template <Field F>
std::string to_text(const ProblemFile<F>& p)
{
    std::string out;
    write_json(serialize(p), out);
    return out + "\n";
}

/// The built-in corpus: fixture coalgebras and morphisms, the divided-power
/// deformation, an obstructed and a non-cocycle 2-cochain, a deformation
/// blocked by H^2, and one invalid coalgebra and deformation.
template <Field F>
ProblemFile<F> fixture_corpus(const F& field)
{
    using S = scalar_t<F>;
    ProblemFile<F> p{field, {}, {}, {}, {}, {}};
    for (std::size_t n = 1; n <= 3; ++n) {
        auto g = grouplike(field, n);
        p.coalgebras.emplace(g.name(), g);
    }
    for (std::size_t n = 2; n <= 3; ++n) {
        auto d = divided_power(field, n);
        p.coalgebras.emplace(d.name(), d);
    }
    auto sum = direct_sum(grouplike(field, 1), divided_power(field, 2));
    p.coalgebras.emplace(sum.name(), sum);
    Matrix<S> broken(4, 2);
    broken(1, 0) = field.one();
    p.coalgebras.emplace("broken", Coalgebra<F>(field, "broken", broken));

    auto g1 = grouplike(field, 1);
    auto dp2 = divided_power(field, 2);
    p.add_morphism("id_grouplike1", identity_morphism(g1));
    p.add_morphism("id_divided_power2", identity_morphism(dp2));
    p.add_morphism("id_null1", identity_morphism(null_coalgebra(field, 1)));
    p.add_morphism("id_null2", identity_morphism(null_coalgebra(field, 2)));
    p.add_morphism("collapse2", collapse_morphism(field, 2));
    p.add_morphism("collapse3", collapse_morphism(field, 3));
    p.add_morphism("inclusion_dp2_dp3", standard_inclusion(dp2, divided_power(field, 3)));
    p.add_morphism("zero_dp2_g2", zero_morphism(dp2, grouplike(field, 2)));

    auto dp_def = divided_power_deformation(field, 1);
    p.deformations.emplace("divided_power_deformation", NamedDeformation<F>{"id_divided_power2", dp_def});
    p.deformations.emplace("divided_power_deformation5",
                           NamedDeformation<F>{"id_divided_power2", divided_power_deformation(field, 5)});
    p.deformations.emplace("trivial_collapse2",
                           NamedDeformation<F>{"collapse2", TruncatedDeformation<F>::trivial(p.morphism("collapse2"), 2)});
    p.deformations.emplace("squaring_null1", NamedDeformation<F>{"id_null1", squaring_deformation(field, 2)});
    auto w = dp_def.coefficient(1);
    w.pi = Matrix<S>(4, 2);
    p.deformations.emplace("broken_deformation",
                           NamedDeformation<F>{"id_divided_power2", TruncatedDeformation<F>(dp_def.morphism(), {w})});

    const auto& id_g1 = p.morphism("id_grouplike1");
    auto coef = [&](std::int64_t a, std::int64_t b) {
        Matrix<S> x(1, 1), y(1, 1);
        x(0, 0) = field.from_int(a);
        y(0, 0) = field.from_int(b);
        return FormalIsomorphism<F>::make_coefficient(id_g1, x, y);
    };
    FormalIsomorphism<F> shift(id_g1, {coef(1, 1), coef(2, -1), coef(1, 3), coef(0, 1)});
    p.isomorphisms.emplace("grouplike_shift", NamedIsomorphism<F>{"id_grouplike1", shift});
    p.deformations.emplace(
        "grouplike_deformation",
        NamedDeformation<F>{"id_grouplike1", apply_equivalence(shift, TruncatedDeformation<F>::trivial(id_g1, 3))});

    p.cocycles.emplace("divided_power_infinitesimal", NamedCochain<F>{"id_divided_power2", dp_def.coefficient(1)});
    p.cocycles.emplace("zero_cocycle", NamedCochain<F>{"id_divided_power2",
                                                       TruncatedDeformation<F>::zero_coefficient(dp_def.morphism())});
    p.cocycles.emplace("obstructed_null2", NamedCochain<F>{"id_null2", obstructed_cocycle(field)});
    auto bad = TruncatedDeformation<F>::zero_coefficient(id_g1);
    bad.xi(0, 0) = field.one();
    p.cocycles.emplace("non_cocycle", NamedCochain<F>{"id_grouplike1", bad});
    return p;
}

} // namespace coalgdef

#endif
