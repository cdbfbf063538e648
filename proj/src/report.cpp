#include "instab/report.hpp"

#include <algorithm>
#include <cmath>

namespace instab {

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "PASS";
        case Verdict::Fail: return "FAIL";
        case Verdict::EvidenceOnly: return "EVIDENCE_ONLY";
    }
    return "?";
}

void BoundReport::require_le(const std::string& label, double where, double observed,
                             double bound) {
    BoundCheck c{label, where, observed, bound, bound - observed, CheckSense::UpperBound};
    record(std::move(c));
}

void BoundReport::require_ge(const std::string& label, double where, double observed,
                             double bound) {
    BoundCheck c{label, where, observed, bound, observed - bound, CheckSense::LowerBound};
    record(std::move(c));
}

void BoundReport::record(BoundCheck check) {
    ++total_checks;
    if (check.margin < -slack(check.bound)) ++violations;
    insert_retained(std::move(check));
}

void BoundReport::insert_retained(BoundCheck check) {
    if (!worst_set || check.margin < worst_margin) {
        worst_margin = check.margin;
        worst_check = check;
        worst_set = true;
    }
    if (checks.size() < retained_limit) {
        checks.push_back(std::move(check));
        if (checks.size() == retained_limit)
            std::sort(checks.begin(), checks.end(),
                      [](const BoundCheck& a, const BoundCheck& b) { return a.margin < b.margin; });
        return;
    }
    // keep the worst retained_limit entries (list is sorted once full)
    if (check.margin < checks.back().margin) {
        checks.back() = std::move(check);
        for (std::size_t i = checks.size() - 1; i > 0 && checks[i].margin < checks[i - 1].margin; --i)
            std::swap(checks[i], checks[i - 1]);
    }
}

void BoundReport::absorb(const BoundReport& other, const std::string& prefix) {
    total_checks += other.total_checks;
    violations += other.violations;
    for (const auto& c : other.checks) {
        BoundCheck copy = c;
        copy.label = prefix.empty() ? c.label : prefix + "." + c.label;
        insert_retained(std::move(copy));
    }
    if (other.worst_set) {
        BoundCheck copy = other.worst_check;
        copy.label = prefix.empty() ? copy.label : prefix + "." + copy.label;
        insert_retained(std::move(copy));
    }
    for (const auto& n : other.notes)
        notes.push_back(prefix.empty() ? n : prefix + ": " + n);
}

void BoundReport::finalize(bool evidence_only) {
    if (violations > 0)
        verdict = Verdict::Fail;
    else
        verdict = evidence_only ? Verdict::EvidenceOnly : Verdict::Pass;
}

} // namespace instab
