#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wideopen/classical.hpp"

namespace wideopen {

enum class Semantics { Jet, Exact };
enum class Verdict { Solvable, Unsolvable, Inconclusive };

const char* verdict_name(Verdict v);

struct BoundaryDatum {
    OrientedAnnulus annulus;
    long top = 0;
    LaurentChunk data; // exponents <= top; tails are Lower
    bool free = false;
    Rational trim;     // Shilov radius used for |.|_X
};

struct MLProblem {
    WideOpenDomain domain;
    Mode mode = Mode::Functions;
    Semantics semantics = Semantics::Jet;
    DiffMode diff_mode = DiffMode::Principal;
    std::vector<BoundaryDatum> ends;

    std::vector<Point> points() const;
    std::vector<long> tops() const;
    std::vector<LaurentChunk> data() const;
    AffinoidSlice slice() const;
    void validate() const;
};

// Dual space used by the criterion: l1_basis (functions) or ld_basis (differentials).
std::vector<RationalFn> dual_basis(const MLProblem& pb);

struct PairingResidual {
    Rational exact;                 // over explicit coefficients
    std::optional<NormExp> tail;    // bound on the tail contribution; nullopt = not certifiable
};

std::vector<PairingResidual> pairing_residuals(const MLProblem& pb, const std::vector<RationalFn>& basis);

struct ObstructionState {
    long l;
    Vec beta;            // -(pairing of the data truncated at exponents >= l)
    NormExp B;           // max_j |beta_j|
    NormExp certified_B; // bound from below-l explicit data plus tail certificates; bottom-less if unbounded
    bool certified_bounded = true;
};

ObstructionState compute_obstructions(const MLProblem& pb, const std::vector<RationalFn>& basis, long l);

struct Column {
    std::size_t end;
    long l;
};

struct CorrectionSystem {
    std::vector<Column> columns; // ascending l
    Matrix M;                    // M[j][s] = alpha^{(i_s)}_{j,-l_s-1}
    NormExp det_exp;
    NormExp minor_exp;
    std::size_t scanned = 0;
};

CorrectionSystem build_correction_system(const MLProblem& pb, const std::vector<RationalFn>& basis,
                                         std::size_t budget_factor = 8);

struct CorrectionSolution {
    Vec x;
    NormExp bound_exp;
    bool cramer_ok;
};

CorrectionSolution solve_corrections(const CorrectionSystem& sys, const Vec& beta, const PContext& ctx);

struct DepthRecord {
    long l;
    Vec beta;
    NormExp B;
    NormExp certified_B;
    bool certified_bounded;
    Vec x;
    NormExp cramer_bound;
    bool cramer_ok;
    std::optional<NormExp> step_distance; // |phi_l - phi_{l+1}|_X
    RationalFn phi;
};

struct OracleReport {
    Verdict verdict = Verdict::Unsolvable;
    Semantics semantics = Semantics::Jet;
    std::optional<RationalFn> solution;
    // inconsistent row combination: (end, exponent, multiplier); exponent -1 at
    // end == npos stands for the residue row at infinity
    struct WitnessRow {
        std::size_t end;
        long u;
        Rational multiplier;
    };
    std::vector<WitnessRow> witness;
    std::string reason;
    std::size_t unknowns = 0;
    std::size_t equations = 0;
};

struct SolveReport {
    Verdict verdict = Verdict::Inconclusive;
    std::string criterion; // certified | refuted | uncertified
    std::vector<RationalFn> basis;
    std::vector<PairingResidual> residuals;
    std::optional<JetCertificate> certificate;
    std::optional<RationalFn> solution; // times dt in differentials mode
    std::optional<NormExp> error_exp;   // nullopt: not certifiable
    std::optional<CorrectionSystem> system;
    std::vector<DepthRecord> trace;
    bool jets_verified = false;
    std::optional<Rational> residue_sum; // literal sum of data residues (differentials)
    std::optional<OracleReport> oracle;
    std::vector<std::string> notes;
};

SolveReport solve(const MLProblem& pb, long depth);

OracleReport oracle_solve(const MLProblem& pb, long depth);

// Attaches the oracle and records documented divergences between readings.
void cross_check(const MLProblem& pb, SolveReport& rep, long depth);

struct Completion {
    MLProblem problem;
    SolveReport report;
};

Completion complete_partial_data(const MLProblem& pb, long depth);

// Certified operator bound for the canonical jet solution of unit data at
// (end i, exponent e): |Phi(delta_{i,e})|_X <= p^K.
class OperatorBound {
public:
    explicit OperatorBound(const MLProblem& pb);
    NormExp at(std::size_t i, long e) const;
    // sup over exponents s < edge of tail.term_bound(s) + K(i, s); nullopt if unbounded
    std::optional<NormExp> tail_sup(std::size_t i, const TailBound& t) const;
    const JetSystem& system() const { return sys_; }

private:
    struct Lin {
        NormExp c;     // value at e = 0
        Rational slope;
    };
    std::vector<Lin> pure_pieces(std::size_t i) const;
    std::vector<std::pair<long, NormExp>> exceptional(std::size_t i) const;

    const MLProblem& pb_;
    JetSystem sys_;
    std::vector<NormExp> w_norm_;
};

} // namespace wideopen
