#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "svarsoft/linalg.hpp"
#include "svarsoft/svar.hpp"

namespace svarsoft {

enum class RestrictionKind {
    IrfSign,
    IrfRanking,
    StructuralSign,
    ElasticityBound,
    IrfRatioBound,
    NarrativeShockSign,
    NarrativeHdMost,
    NarrativeHdLeast,
    SignNormalisation,
};

/// How diag(A0) >= 0 is imposed. Auto defers to the sampler (mechanical for accept-reject,
/// soft margins for the slice sampler).
enum class SignNormalisation { Auto, Mechanical, Soft, None };

std::string_view to_string(RestrictionKind kind);
std::string_view to_string(SignNormalisation mode);

/** One scalar inequality m(phi, Q) >= 0.
 *
 * `sign` is the direction: +1 requests "at least `bound`", -1 "at most `bound`". For ratio kinds
 * `variable` is the numerator, `denominator` the denominator, and `denominator_sign` the sign
 * implied by an accompanying irf-sign restriction (0 when nothing pins it, in which case the raw
 * ratio margin is used). Narrative kinds index the innovation series through `episode`.
 */
struct Restriction {
    RestrictionKind kind = RestrictionKind::IrfSign;
    int variable = -1;
    int shock = -1;
    int horizon = 0;        ///< IRF horizon, or the span h of a historical decomposition
    int other_horizon = 0;  ///< ranking: eta at `horizon` >= eta at `other_horizon`
    int denominator = -1;
    int denominator_sign = 0;
    int episode = -1;
    int sign = +1;
    double bound = 0.0;
    bool cumulative = false;
    std::string label;

    bool operator==(const Restriction& other) const;
};

/// Ordered restriction list; normalisation entries (when soft) are always last.
struct RestrictionSet {
    std::vector<std::string> variables;
    std::vector<std::string> shocks;
    std::vector<Restriction> restrictions;
    SignNormalisation normalisation = SignNormalisation::Auto;
    std::vector<std::string> warnings;

    int n() const { return static_cast<int>(variables.size()); }
    /// Number of margins, s.
    int size() const { return static_cast<int>(restrictions.size()); }
    int max_horizon() const;
    bool needs_innovations() const;
    /// Copy with the normalisation mode resolved; adds or strips the n normalisation margins.
    RestrictionSet with_normalisation(SignNormalisation mode) const;
};

/// Objects some restrictions depend on beyond phi and Q.
struct MarginContext {
    const IrfCoefficients* irf = nullptr;
    const InnovationSeries* innovations = nullptr;
};

/** Restriction set specialised to one value of phi.
 *
 * Everything that depends only on phi (IRF rows, Sigma_tr^{-1} columns, whitened innovations) is
 * precomputed, so evaluating all margins at a new Q costs a handful of dot products. Immutable and
 * shareable across threads.
 */
class CompiledRestrictions {
public:
    CompiledRestrictions(const RestrictionSet& set, const ReducedFormParams& phi,
                         const MarginContext& context = {});

    int size() const { return static_cast<int>(entries_.size()); }
    int n() const { return n_; }
    bool mechanical_normalisation() const { return mechanical_; }

    void evaluate(const SquareMatrix& q, Eigen::Ref<Eigen::VectorXd> out) const;
    Eigen::VectorXd evaluate(const SquareMatrix& q) const;
    /// Flips columns so that diag(Q' Sigma_tr^{-1}) >= 0.
    void normalise(SquareMatrix& q) const;

private:
    struct Linear {
        int column;
        Eigen::VectorXd a;
        double offset;
    };
    struct Ratio {
        int column;
        Eigen::VectorXd num;
        Eigen::VectorXd den;
        double bound;
        int sign;
    };
    struct HistoricalDecomposition {
        int column;
        bool most;
        std::vector<Eigen::VectorXd> c;  ///< c_il, l = 0..h
        std::vector<Eigen::VectorXd> v;  ///< Sigma_tr^{-1} u_{k+h-l}, l = 0..h
    };
    using Entry = std::variant<Linear, Ratio, HistoricalDecomposition>;

    int n_ = 0;
    bool mechanical_ = false;
    std::vector<Entry> entries_;
    std::vector<Eigen::VectorXd> normalisers_;  ///< Sigma_tr^{-1} e_j
};

/// m_l(phi, Q) for l = 1..s. Throws MissingContext if narrative restrictions lack innovations.
Eigen::VectorXd margins(const RestrictionSet& set, const ReducedFormParams& phi,
                        const SquareMatrix& q, const MarginContext& context = {});

/// True iff every margin is >= 0 (no tolerance).
bool is_feasible(const RestrictionSet& set, const ReducedFormParams& phi, const SquareMatrix& q,
                 const MarginContext& context = {});

SquareMatrix normalize_signs(const ReducedFormParams& phi, const SquareMatrix& q);

struct RestrictionParseOptions {
    /// Dataset variable names; when given, the config's `variables` must match them exactly.
    std::optional<std::vector<std::string>> dataset_variables;
    /// Dates of the innovation series (one per usable observation), used to resolve episodes.
    std::optional<std::vector<std::string>> innovation_dates;
};

RestrictionSet parse_restrictions(const std::string& document,
                                  const RestrictionParseOptions& options = {});
RestrictionSet parse_restrictions_file(const std::filesystem::path& path,
                                       const RestrictionParseOptions& options = {});

}  // namespace svarsoft
