#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace instab {

enum class Verdict { Pass, Fail, EvidenceOnly };

const char* verdict_name(Verdict v);

enum class CheckSense { UpperBound, LowerBound };

struct BoundCheck {
    std::string label;
    double where = 0.0;     // n, t, or r
    double observed = 0.0;
    double bound = 0.0;
    double margin = 0.0;    // slack toward satisfaction; negative = violated
    CheckSense sense = CheckSense::UpperBound;
};

/// Per-step comparison of observed quantities against a proposition's bound.
/// Only a bounded number of worst checks is retained; the totals and the
/// worst margin always cover every check fed in.
struct BoundReport {
    std::string experiment;
    std::vector<BoundCheck> checks;   // worst retained_limit checks, sorted on demand
    std::size_t total_checks = 0;
    std::size_t violations = 0;
    double worst_margin = 0.0;
    bool worst_set = false;
    BoundCheck worst_check;
    Verdict verdict = Verdict::Pass;
    std::vector<std::string> notes;
    std::size_t retained_limit = 64;

    // Floating-point slack: only representation error is forgiven.
    static double slack(double bound) { return 1e-10 * std::abs(bound); }

    /// observed <= bound (+slack)
    void require_le(const std::string& label, double where, double observed, double bound);
    /// observed >= bound (-slack)
    void require_ge(const std::string& label, double where, double observed, double bound);
    void note(std::string text) { notes.push_back(std::move(text)); }

    /// Folds another report's checks and counters into this one.
    void absorb(const BoundReport& other, const std::string& prefix);

    /// Sets the verdict from the accumulated margins.
    void finalize(bool evidence_only = false);

    bool passed() const { return verdict != Verdict::Fail; }

private:
    void record(BoundCheck check);
    void insert_retained(BoundCheck check);
};

} // namespace instab
