#include "svarsoft/restrictions.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "svarsoft/error.hpp"

namespace svarsoft {

std::string_view to_string(RestrictionKind kind) {
    switch (kind) {
        case RestrictionKind::IrfSign: return "irf-sign";
        case RestrictionKind::IrfRanking: return "irf-ranking";
        case RestrictionKind::StructuralSign: return "structural-sign";
        case RestrictionKind::ElasticityBound: return "elasticity-bound";
        case RestrictionKind::IrfRatioBound: return "irf-ratio-bound";
        case RestrictionKind::NarrativeShockSign: return "narrative-shock-sign";
        case RestrictionKind::NarrativeHdMost: return "narrative-hd-most";
        case RestrictionKind::NarrativeHdLeast: return "narrative-hd-least";
        case RestrictionKind::SignNormalisation: return "sign-normalisation";
    }
    return "unknown";
}

std::string_view to_string(SignNormalisation mode) {
    switch (mode) {
        case SignNormalisation::Auto: return "auto";
        case SignNormalisation::Mechanical: return "mechanical";
        case SignNormalisation::Soft: return "soft";
        case SignNormalisation::None: return "none";
    }
    return "unknown";
}

bool Restriction::operator==(const Restriction& o) const {
    return kind == o.kind && variable == o.variable && shock == o.shock && horizon == o.horizon &&
           other_horizon == o.other_horizon && denominator == o.denominator &&
           episode == o.episode && sign == o.sign && bound == o.bound &&
           cumulative == o.cumulative;
}

namespace {

bool is_narrative(RestrictionKind k) {
    return k == RestrictionKind::NarrativeShockSign || k == RestrictionKind::NarrativeHdMost ||
           k == RestrictionKind::NarrativeHdLeast;
}

}  // namespace

int RestrictionSet::max_horizon() const {
    int h = 0;
    for (const auto& r : restrictions) h = std::max({h, r.horizon, r.other_horizon});
    return h;
}

bool RestrictionSet::needs_innovations() const {
    return std::any_of(restrictions.begin(), restrictions.end(),
                       [](const Restriction& r) { return is_narrative(r.kind); });
}

RestrictionSet RestrictionSet::with_normalisation(SignNormalisation mode) const {
    RestrictionSet out = *this;
    std::erase_if(out.restrictions, [](const Restriction& r) {
        return r.kind == RestrictionKind::SignNormalisation;
    });
    out.normalisation = mode;
    if (mode == SignNormalisation::Soft) {
        for (int j = 0; j < static_cast<int>(shocks.size()); ++j) {
            Restriction r;
            r.kind = RestrictionKind::SignNormalisation;
            r.shock = j;
            r.variable = j;
            r.label = "sign-normalisation " + shocks[static_cast<std::size_t>(j)];
            out.restrictions.push_back(r);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------------------------
// Compiled evaluation

CompiledRestrictions::CompiledRestrictions(const RestrictionSet& set,
                                           const ReducedFormParams& phi,
                                           const MarginContext& context)
    : n_(phi.n), mechanical_(set.normalisation == SignNormalisation::Mechanical) {
    if (set.n() != 0 && set.n() != phi.n)
        throw Error(ErrorCode::SchemaError, "restriction set dimension does not match the model");

    IrfCoefficients local_irf;
    const IrfCoefficients* irf = context.irf;
    if (irf == nullptr || irf->horizons() < set.max_horizon()) {
        local_irf = compute_irf_coefficients(phi, set.max_horizon());
        irf = &local_irf;
    }
    if (set.needs_innovations() && context.innovations == nullptr)
        throw Error(ErrorCode::MissingContext,
                    "narrative restrictions require the innovation series in the margin context");

    for (int j = 0; j < phi.n; ++j) normalisers_.push_back(inverse_sigma_column(phi, j));

    Eigen::MatrixXd whitened;
    if (context.innovations != nullptr && set.needs_innovations())
        whitened = whiten(phi, context.innovations->u);

    auto check_episode = [&](const Restriction& r) {
        if (r.episode < 0 || r.episode + r.horizon >= static_cast<int>(whitened.rows()))
            throw Error(ErrorCode::OutOfSample, "narrative episode outside the innovation series");
    };

    for (const auto& r : set.restrictions) {
        switch (r.kind) {
            case RestrictionKind::IrfSign: {
                Eigen::VectorXd c = irf->row(r.variable, r.horizon, r.cumulative);
                entries_.emplace_back(Linear{r.shock, r.sign * c, -r.sign * r.bound});
                break;
            }
            case RestrictionKind::IrfRanking: {
                Eigen::VectorXd a = irf->row(r.variable, r.horizon, r.cumulative) -
                                    irf->row(r.variable, r.other_horizon, r.cumulative);
                entries_.emplace_back(Linear{r.shock, a, 0.0});
                break;
            }
            case RestrictionKind::StructuralSign:
                entries_.emplace_back(Linear{r.shock, r.sign * normalisers_[r.variable], 0.0});
                break;
            case RestrictionKind::ElasticityBound:
            case RestrictionKind::IrfRatioBound: {
                Eigen::VectorXd num = irf->row(r.variable, r.horizon, r.cumulative);
                Eigen::VectorXd den = irf->row(r.denominator, r.horizon, r.cumulative);
                if (r.denominator_sign != 0) {
                    // sign * (num - bound * den) >= 0, multiplied through by sign(den).
                    Eigen::VectorXd a = (r.sign * r.denominator_sign) * (num - r.bound * den);
                    entries_.emplace_back(Linear{r.shock, a, 0.0});
                } else {
                    entries_.emplace_back(Ratio{r.shock, num, den, r.bound, r.sign});
                }
                break;
            }
            case RestrictionKind::NarrativeShockSign: {
                check_episode(r);
                Eigen::VectorXd v = r.sign * whitened.row(r.episode).transpose();
                entries_.emplace_back(Linear{r.shock, v, 0.0});
                break;
            }
            case RestrictionKind::NarrativeHdMost:
            case RestrictionKind::NarrativeHdLeast: {
                check_episode(r);
                if (r.horizon > irf->horizons())
                    throw Error(ErrorCode::MissingContext, "IRF horizon shorter than episode span");
                HistoricalDecomposition hd{r.shock, r.kind == RestrictionKind::NarrativeHdMost, {}, {}};
                for (int l = 0; l <= r.horizon; ++l) {
                    hd.c.push_back(irf->row(r.variable, l));
                    hd.v.push_back(whitened.row(r.episode + r.horizon - l).transpose());
                }
                entries_.emplace_back(std::move(hd));
                break;
            }
            case RestrictionKind::SignNormalisation:
                entries_.emplace_back(Linear{r.shock, normalisers_[r.shock], 0.0});
                break;
        }
    }
}

void CompiledRestrictions::evaluate(const SquareMatrix& q, Eigen::Ref<Eigen::VectorXd> out) const {
    for (std::size_t l = 0; l < entries_.size(); ++l) {
        out[static_cast<Eigen::Index>(l)] = std::visit(
            [&](const auto& e) -> double {
                using T = std::decay_t<decltype(e)>;
                if constexpr (std::is_same_v<T, Linear>) {
                    return e.a.dot(q.col(e.column)) + e.offset;
                } else if constexpr (std::is_same_v<T, Ratio>) {
                    const double den = e.den.dot(q.col(e.column));
                    const double ratio = e.num.dot(q.col(e.column)) / den;
                    if (!std::isfinite(ratio)) return -std::numeric_limits<double>::infinity();
                    return e.sign * (ratio - e.bound);
                } else {
                    const auto n = q.cols();
                    double own = 0.0;
                    double extreme = e.most ? 0.0 : std::numeric_limits<double>::infinity();
                    for (Eigen::Index j = 0; j < n; ++j) {
                        const auto qj = q.col(j);
                        double contribution = 0.0;
                        for (std::size_t l = 0; l < e.c.size(); ++l)
                            contribution += e.c[l].dot(qj) * qj.dot(e.v[l]);
                        contribution = std::abs(contribution);
                        if (j == e.column)
                            own = contribution;
                        else
                            extreme = e.most ? std::max(extreme, contribution)
                                             : std::min(extreme, contribution);
                    }
                    if (n == 1) return 0.0;
                    return e.most ? own - extreme : extreme - own;
                }
            },
            entries_[l]);
    }
}

Eigen::VectorXd CompiledRestrictions::evaluate(const SquareMatrix& q) const {
    Eigen::VectorXd out(size());
    evaluate(q, out);
    return out;
}

void CompiledRestrictions::normalise(SquareMatrix& q) const {
    for (int j = 0; j < n_; ++j)
        if (normalisers_[static_cast<std::size_t>(j)].dot(q.col(j)) < 0.0) q.col(j) = -q.col(j);
}

Eigen::VectorXd margins(const RestrictionSet& set, const ReducedFormParams& phi,
                        const SquareMatrix& q, const MarginContext& context) {
    return CompiledRestrictions(set, phi, context).evaluate(q);
}

bool is_feasible(const RestrictionSet& set, const ReducedFormParams& phi, const SquareMatrix& q,
                 const MarginContext& context) {
    const Eigen::VectorXd m = margins(set, phi, q, context);
    return m.size() == 0 || m.minCoeff() >= 0.0;
}

SquareMatrix normalize_signs(const ReducedFormParams& phi, const SquareMatrix& q) {
    SquareMatrix out = q;
    for (int j = 0; j < phi.n; ++j) {
        const double d = inverse_sigma_column(phi, j).dot(q.col(j));
        if (d < 0.0) out.col(j) = -out.col(j);
    }
    return out;
}

// ---------------------------------------------------------------------------------------------
// Parsing

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& message) {
    throw Error(ErrorCode::SchemaError, path + ": " + message);
}

std::vector<std::string> read_names(const YAML::Node& doc, const char* key) {
    const YAML::Node node = doc[key];
    if (!node || !node.IsSequence() || node.size() == 0)
        schema_error(key, "expected a nonempty list of names");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < node.size(); ++i) out.push_back(node[i].as<std::string>());
    return out;
}

int lookup(const std::vector<std::string>& names, const std::string& name, ErrorCode code,
           const std::string& path) {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw Error(code, path + ": unknown name '" + name + "'");
    return static_cast<int>(it - names.begin());
}

int parse_sign(const YAML::Node& node, const std::string& path, int fallback) {
    if (!node) return fallback;
    const auto s = node.as<std::string>();
    if (s == "+" || s == "positive" || s == ">=") return +1;
    if (s == "-" || s == "negative" || s == "<=") return -1;
    schema_error(path, "sign must be \"+\" or \"-\" (or >= / <=), got '" + s + "'");
}

std::vector<int> parse_int_list(const YAML::Node& entry, const char* plural, const char* singular,
                                const std::string& path, std::vector<int> fallback) {
    if (const YAML::Node many = entry[plural]) {
        if (!many.IsSequence() || many.size() == 0) schema_error(path + "." + plural, "expected a list");
        std::vector<int> out;
        for (std::size_t i = 0; i < many.size(); ++i) {
            const int v = many[i].as<int>();
            if (v < 0) schema_error(path + "." + plural, "must be nonnegative");
            out.push_back(v);
        }
        return out;
    }
    if (const YAML::Node one = entry[singular]) {
        const int v = one.as<int>();
        if (v < 0) schema_error(path + "." + singular, "must be nonnegative");
        return {v};
    }
    return fallback;
}

std::vector<std::string> parse_dates(const YAML::Node& entry, const std::string& path) {
    std::vector<std::string> out;
    if (const YAML::Node many = entry["dates"]) {
        if (!many.IsSequence() || many.size() == 0) schema_error(path + ".dates", "expected a list");
        for (std::size_t i = 0; i < many.size(); ++i) out.push_back(many[i].as<std::string>());
    } else if (const YAML::Node one = entry["date"]) {
        out.push_back(one.as<std::string>());
    } else {
        schema_error(path, "narrative restriction needs `date` or `dates`");
    }
    return out;
}

RestrictionKind parse_kind(const std::string& s, const std::string& path) {
    static const std::pair<const char*, RestrictionKind> table[] = {
        {"irf-sign", RestrictionKind::IrfSign},
        {"irf-ranking", RestrictionKind::IrfRanking},
        {"structural-sign", RestrictionKind::StructuralSign},
        {"elasticity-bound", RestrictionKind::ElasticityBound},
        {"irf-ratio-bound", RestrictionKind::IrfRatioBound},
        {"narrative-shock-sign", RestrictionKind::NarrativeShockSign},
        {"narrative-hd-most", RestrictionKind::NarrativeHdMost},
        {"narrative-hd-least", RestrictionKind::NarrativeHdLeast},
    };
    for (const auto& [name, kind] : table)
        if (s == name) return kind;
    if (s == "sign-normalisation")
        schema_error(path, "sign-normalisation is set through the top-level `sign_normalisation` key");
    schema_error(path, "unknown restriction kind '" + s + "'");
}

SignNormalisation parse_normalisation(const YAML::Node& node) {
    if (!node) return SignNormalisation::Auto;
    const auto s = node.as<std::string>();
    if (s == "auto") return SignNormalisation::Auto;
    if (s == "mechanical") return SignNormalisation::Mechanical;
    if (s == "soft") return SignNormalisation::Soft;
    if (s == "none") return SignNormalisation::None;
    schema_error("sign_normalisation", "expected mechanical|soft|none|auto, got '" + s + "'");
}

std::string describe(const Restriction& r, const RestrictionSet& set) {
    std::ostringstream os;
    os << to_string(r.kind);
    if (r.variable >= 0 && r.kind != RestrictionKind::SignNormalisation)
        os << " " << set.variables[static_cast<std::size_t>(r.variable)];
    if (r.denominator >= 0) os << "/" << set.variables[static_cast<std::size_t>(r.denominator)];
    if (r.shock >= 0) os << " <- " << set.shocks[static_cast<std::size_t>(r.shock)];
    os << " h=" << r.horizon;
    if (r.episode >= 0) os << " k=" << r.episode;
    return os.str();
}

// The sign of the ratio denominator implied by an irf-sign restriction in the same set.
int implied_denominator_sign(const RestrictionSet& set, const Restriction& ratio) {
    for (const auto& r : set.restrictions) {
        if (r.kind != RestrictionKind::IrfSign || r.variable != ratio.denominator ||
            r.shock != ratio.shock || r.horizon != ratio.horizon ||
            r.cumulative != ratio.cumulative)
            continue;
        if (r.sign > 0 && r.bound >= 0.0) return +1;
        if (r.sign < 0 && r.bound <= 0.0) return -1;
    }
    return 0;
}

}  // namespace

RestrictionSet parse_restrictions(const std::string& document,
                                  const RestrictionParseOptions& options) {
    YAML::Node doc;
    try {
        doc = YAML::Load(document);
    } catch (const YAML::Exception& e) {
        throw Error(ErrorCode::SchemaError, std::string("restriction config: ") + e.what());
    }
    if (!doc.IsMap()) schema_error("<root>", "expected a mapping");

    RestrictionSet set;
    set.variables = read_names(doc, "variables");
    set.shocks = read_names(doc, "shocks");
    if (set.shocks.size() != set.variables.size())
        schema_error("shocks", "need exactly one shock per variable");
    if (options.dataset_variables && *options.dataset_variables != set.variables) {
        for (const auto& v : set.variables)
            lookup(*options.dataset_variables, v, ErrorCode::UnknownVariable, "variables");
        throw Error(ErrorCode::UnknownVariable,
                    "variables: order must match the dataset header");
    }
    const SignNormalisation mode = parse_normalisation(doc["sign_normalisation"]);

    const YAML::Node list = doc["restrictions"];
    if (!list || !list.IsSequence() || list.size() == 0)
        schema_error("restrictions", "at least one restriction is required");

    try {
        for (std::size_t idx = 0; idx < list.size(); ++idx) {
            const std::string path = "restrictions[" + std::to_string(idx) + "]";
            const YAML::Node e = list[idx];
            if (!e.IsMap() || !e["kind"]) schema_error(path, "expected a mapping with `kind`");
            Restriction base;
            base.kind = parse_kind(e["kind"].as<std::string>(), path + ".kind");
            base.cumulative = e["cumulative"] ? e["cumulative"].as<bool>() : false;
            if (e["shock"])
                base.shock = lookup(set.shocks, e["shock"].as<std::string>(),
                                    ErrorCode::SchemaError, path + ".shock");
            else
                schema_error(path, "missing `shock`");
            auto variable = [&](const char* key) {
                if (!e[key]) schema_error(path, std::string("missing `") + key + "`");
                return lookup(set.variables, e[key].as<std::string>(), ErrorCode::UnknownVariable,
                              path + "." + key);
            };

            std::vector<Restriction> expanded;
            switch (base.kind) {
                case RestrictionKind::IrfSign: {
                    base.variable = variable("variable");
                    base.sign = parse_sign(e["sign"], path + ".sign", +1);
                    base.bound = e["bound"] ? e["bound"].as<double>() : 0.0;
                    for (int h : parse_int_list(e, "horizons", "horizon", path, {0})) {
                        Restriction r = base;
                        r.horizon = h;
                        expanded.push_back(r);
                    }
                    break;
                }
                case RestrictionKind::IrfRanking: {
                    base.variable = variable("variable");
                    const auto hs = parse_int_list(e, "horizons", "horizon", path, {});
                    if (hs.size() != 2)
                        schema_error(path + ".horizons", "ranking needs [higher, lower] horizons");
                    base.horizon = hs[0];
                    base.other_horizon = hs[1];
                    expanded.push_back(base);
                    break;
                }
                case RestrictionKind::StructuralSign:
                    base.variable = variable("variable");
                    base.sign = parse_sign(e["sign"], path + ".sign", +1);
                    expanded.push_back(base);
                    break;
                case RestrictionKind::ElasticityBound:
                case RestrictionKind::IrfRatioBound: {
                    base.variable = variable("numerator");
                    base.denominator = variable("denominator");
                    if (!e["bound"]) schema_error(path, "missing `bound`");
                    base.bound = e["bound"].as<double>();
                    // An elasticity bound is an upper bound on the ratio unless stated otherwise.
                    base.sign = parse_sign(e["direction"], path + ".direction", -1);
                    for (int h : parse_int_list(e, "horizons", "horizon", path, {0})) {
                        Restriction r = base;
                        r.horizon = h;
                        expanded.push_back(r);
                    }
                    break;
                }
                case RestrictionKind::NarrativeShockSign:
                case RestrictionKind::NarrativeHdMost:
                case RestrictionKind::NarrativeHdLeast: {
                    if (base.kind == RestrictionKind::NarrativeShockSign)
                        base.sign = parse_sign(e["sign"], path + ".sign", +1);
                    else
                        base.variable = variable("variable");
                    base.horizon = e["span"] ? e["span"].as<int>() : 0;
                    if (base.horizon < 0) schema_error(path + ".span", "must be nonnegative");
                    for (const auto& date : parse_dates(e, path)) {
                        if (!options.innovation_dates)
                            throw Error(ErrorCode::UnknownDate,
                                        path + ": narrative date '" + date +
                                            "' cannot be resolved without a dataset");
                        Restriction r = base;
                        r.episode = lookup(*options.innovation_dates, date, ErrorCode::UnknownDate,
                                           path + ".dates");
                        if (r.episode + r.horizon >=
                            static_cast<int>(options.innovation_dates->size()))
                            throw Error(ErrorCode::UnknownDate,
                                        path + ": episode span runs past the end of the sample");
                        expanded.push_back(r);
                    }
                    break;
                }
                case RestrictionKind::SignNormalisation:
                    break;
            }
            for (auto& r : expanded) {
                r.label = describe(r, set);
                if (std::find(set.restrictions.begin(), set.restrictions.end(), r) !=
                    set.restrictions.end())
                    set.warnings.push_back(path + ": duplicate restriction (" + r.label + ")");
                set.restrictions.push_back(r);
            }
        }
    } catch (const YAML::Exception& ex) {
        throw Error(ErrorCode::SchemaError, std::string("restriction config: ") + ex.what());
    }

    for (auto& r : set.restrictions)
        if (r.kind == RestrictionKind::ElasticityBound || r.kind == RestrictionKind::IrfRatioBound)
            r.denominator_sign = implied_denominator_sign(set, r);

    return set.with_normalisation(mode);
}

RestrictionSet parse_restrictions_file(const std::filesystem::path& path,
                                       const RestrictionParseOptions& options) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open restriction config " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_restrictions(buffer.str(), options);
}

}  // namespace svarsoft
