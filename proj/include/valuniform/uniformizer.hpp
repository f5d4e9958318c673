#pragma once

// Valuation monoids of a lattice given by lex weight matrices, free covers of
// finite subsets, and the rational-rank / defect bookkeeping of valued fields.

#include "valuniform/exactval.hpp"
#include "valuniform/linalg.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace valuniform {

using LexValue = std::vector<GammaElement>;

class WeightMatrix {
public:
    // Rows share one IrrationalBasis, which must be declared independent so
    // that injectivity on the lattice can be decided exactly.
    WeightMatrix(std::size_t ambient, std::vector<std::vector<GammaElement>> rows);

    std::size_t ambient() const { return n_; }
    std::size_t height() const { return rows_.size(); }
    const std::vector<std::vector<GammaElement>>& rows() const { return rows_; }
    const BasisPtr& basis() const { return basis_; }

    LexValue value(const IntVec& lambda) const;
    LexValue value(const RatVec& lambda) const;

    // Row i as rational functionals, one per coordinate of the gamma basis
    // (the rational part first).
    RatMat flattened_row(std::size_t i) const;

private:
    std::size_t n_;
    std::vector<std::vector<GammaElement>> rows_;
    BasisPtr basis_;
};

// Sign of the first nonzero entry; Zero if all vanish. Throws a precision
// error if some entry cannot be decided.
Sign lex_sign(const LexValue& v);
int lex_compare(const LexValue& a, const LexValue& b);

enum class VMStatus { Inside, BoundaryUnit, Outside };
std::string to_string(VMStatus s);
VMStatus vm_membership(const IntVec& lambda, const WeightMatrix& w);

struct FreeCoverCertificate {
    IntMat set;                        // the covered set S
    IntMat basis;                      // b_1..b_n
    std::vector<LexValue> values;      // W-lex value of each b_i
    IntMat coordinates;                // N-coordinates of each s in the basis
    Int det;
    bool det_check = false;
    bool membership_check = false;
    bool coverage_check = false;
};

struct CertificateCheck {
    bool det = false;
    bool membership = false;
    bool coverage = false;
    bool values = false;    // recorded values equal the recomputed ones
    bool recorded = false;  // recorded det and check flags are consistent
    bool ok() const { return det && membership && coverage && values && recorded; }
};

// Pure function of (S, W, certificate).
CertificateCheck verify_certificate(const IntMat& set, const WeightMatrix& w, const FreeCoverCertificate& cert);

struct FreeCoverStats {
    std::size_t steps = 0;
    Int initial_multiplicity;
};

// Lattice basis b with every b_i in the valuation monoid and S inside N b.
FreeCoverCertificate free_cover(const IntMat& set, const WeightMatrix& w, FreeCoverStats* stats = nullptr);

std::size_t rational_rank(const std::vector<GammaElement>& values, const std::vector<GammaElement>& base);

struct InvariantReport {
    long n = 0;
    long E = 0;
    long F = 0;
    long D = 0;
    bool abhyankar = false;
};

InvariantReport invariant_report(long n, long E, long F);
long defect(long n, long e, long f);

struct StarCheck {
    bool holds = false;
    bool abhyankar_basis = false;
    std::size_t value_rank = 0;
    bool residues_declared = true;  // F-side facts are taken as declarations
};

StarCheck star_check(const std::vector<GammaElement>& be_values, const std::vector<GammaElement>& base,
                     const std::vector<bool>& bf_residue_flags, long n);

// Number of rows that are nonzero on the common kernel of the earlier rows.
std::size_t rz_height(const WeightMatrix& w);

// Iteration cap shared by the search loops: VALUNIFORM_ITER_CAP or 10^5.
std::size_t iteration_cap();

}  // namespace valuniform
