#pragma once

#include "rmt/correlation.hpp"

#include <string>

namespace rmt {

enum class CleaningKind { Clipping, PowerLaw, LinearShrinkage, ConstantCorrShrinkage };

struct CleaningScheme {
    CleaningKind kind = CleaningKind::Clipping;
    double alpha = 0.0;
    double mu = 2.0;                    // PowerLaw only
    bool renormalize_diagonal = false;  // Clipping only

    void validate() const;
};

/// Parses "clip", "powerlaw", "shrink", "ledoit".
CleaningKind parse_cleaning_kind(const std::string& name);
std::string to_string(CleaningKind kind);

/// Keeps the ⌈(1−α)N⌉ largest eigenvalues; the others are set to a common
/// value so that the trace equals N. Eigenvectors are unchanged.
CorrelationMatrix clip(const CorrelationMatrix& E, double alpha, bool renormalize_diagonal = false);

/// λ_1 kept; λ_k = λ0 + (A N/k)^{1/μ} for k ≥ 2 (2α−1 + (1−α)√(N/k) at μ = 2),
/// floored at 1e-8. No trace rescaling.
CorrelationMatrix powerlaw_clean(const CorrelationMatrix& E, double alpha, double mu = 2.0);

/// (1−α)E + α·1.
CorrelationMatrix shrink_identity(const CorrelationMatrix& E, double alpha);

/// (1−α)E + αC̄, C̄ with unit diagonal and the mean off-diagonal entry of E elsewhere.
CorrelationMatrix shrink_const_corr(const CorrelationMatrix& E, double alpha);

CorrelationMatrix clean(const CorrelationMatrix& E, const CleaningScheme& scheme);

/// Mean off-diagonal entry (0 for N = 1).
double mean_off_diagonal(const Eigen::MatrixXd& m);

/// New eigenvalues (same order and eigenvectors as E) for the schemes that
/// act on the spectrum only: clipping, power law and identity shrinkage.
/// Throws for constant-correlation shrinkage.
Eigen::VectorXd cleaned_spectrum(const CorrelationMatrix& E, const CleaningScheme& scheme);

}  // namespace rmt
