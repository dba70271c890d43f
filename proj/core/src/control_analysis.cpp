#include "kaczmarz/control_analysis.hpp"

#include <algorithm>
#include <string>

#include "kaczmarz/error.hpp"

namespace kaczmarz {

namespace {

std::vector<std::size_t> absent(const std::vector<char>& seen) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < seen.size(); ++i) {
        if (!seen[i]) {
            out.push_back(i);
        }
    }
    return out;
}

}  // namespace

IndexSequence::IndexSequence(std::vector<std::size_t> values, std::size_t m)
    : values_(std::move(values)), m_(m) {
    if (m_ == 0) {
        throw InvalidArgument("index alphabet must be non-empty");
    }
    for (std::size_t t = 0; t < values_.size(); ++t) {
        if (values_[t] >= m_) {
            throw InvalidArgument("index " + std::to_string(values_[t] + 1) + " at position " +
                                  std::to_string(t) + " exceeds m = " + std::to_string(m_));
        }
    }
}

TauPartition extract_tau_partition(const IndexSequence& seq) {
    const std::size_t m = seq.alphabet_size();
    TauPartition part;
    part.taus.push_back(0);

    std::vector<char> seen(m, 0);
    std::size_t distinct = 0;
    for (std::size_t t = 0; t < seq.size(); ++t) {
        if (!seen[seq[t]]) {
            seen[seq[t]] = 1;
            ++distinct;
        }
        if (distinct == m) {
            part.taus.push_back(t + 1);
            std::fill(seen.begin(), seen.end(), 0);
            distinct = 0;
        }
    }

    part.complete_prefix_len = part.taus.back();
    if (part.complete_prefix_len < seq.size()) {
        part.tail_missing = absent(seen);
    }
    return part;
}

WindowCheck verify_control_windows(const IndexSequence& seq, std::span<const std::size_t> taus) {
    if (taus.empty() || taus.front() != 0) {
        throw MalformedTaus("tau sequence must start at 0");
    }
    for (std::size_t k = 1; k < taus.size(); ++k) {
        if (taus[k] <= taus[k - 1]) {
            throw MalformedTaus("tau sequence not strictly increasing at k = " + std::to_string(k));
        }
    }
    if (taus.back() > seq.size()) {
        throw MalformedTaus("tau " + std::to_string(taus.back()) + " beyond sequence length " +
                            std::to_string(seq.size()));
    }

    std::vector<char> seen(seq.alphabet_size());
    for (std::size_t k = 0; k + 1 < taus.size(); ++k) {
        std::fill(seen.begin(), seen.end(), 0);
        for (std::size_t t = taus[k]; t < taus[k + 1]; ++t) {
            seen[seq[t]] = 1;
        }
        auto missing = absent(seen);
        if (!missing.empty()) {
            return WindowCheck{false, k, std::move(missing)};
        }
    }
    return WindowCheck{};
}

RecurrenceReport recurrence_report(const IndexSequence& seq) {
    const std::size_t m = seq.alphabet_size();
    RecurrenceReport report;
    report.counts.assign(m, 0);
    report.last_position.assign(m, std::nullopt);
    for (std::size_t t = 0; t < seq.size(); ++t) {
        ++report.counts[seq[t]];
        report.last_position[seq[t]] = t;
    }
    for (std::size_t i = 0; i < m; ++i) {
        if (report.counts[i] == 0) {
            report.missing.push_back(i);
        }
    }
    return report;
}

}  // namespace kaczmarz
