#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace kaczmarz {

/// Finite prefix of an index mapping i : N -> {0, ..., m-1}.
class IndexSequence {
public:
    /// Throws InvalidArgument when m == 0 or a value is >= m.
    IndexSequence(std::vector<std::size_t> values, std::size_t m);

    std::span<const std::size_t> values() const noexcept { return values_; }
    std::size_t alphabet_size() const noexcept { return m_; }
    std::size_t size() const noexcept { return values_.size(); }
    std::size_t operator[](std::size_t t) const { return values_[t]; }

private:
    std::vector<std::size_t> values_;
    std::size_t m_;
};

/// Greedy covering windows [taus[k], taus[k+1]) over the sequence.
struct TauPartition {
    std::vector<std::size_t> taus;  // taus[0] == 0, strictly increasing
    std::size_t complete_prefix_len = 0;  // == taus.back()
    std::vector<std::size_t> tail_missing;  // absent from the unfinished window

    std::size_t complete_windows() const noexcept { return taus.size() - 1; }
};

/// Each tau_{k+1} is the smallest position after tau_k whose window contains
/// every index. Single pass, O(length + m).
TauPartition extract_tau_partition(const IndexSequence& seq);

struct WindowCheck {
    bool ok = true;
    std::optional<std::size_t> failing_window;
    std::vector<std::size_t> missing;  // indices absent from the failing window
};

/// True iff every window [taus[k], taus[k+1]) covers {0, ..., m-1}. Throws
/// MalformedTaus unless taus starts at 0, increases strictly and stays within
/// the sequence length.
WindowCheck verify_control_windows(const IndexSequence& seq, std::span<const std::size_t> taus);

struct RecurrenceReport {
    std::vector<std::size_t> counts;
    std::vector<std::optional<std::size_t>> last_position;
    std::vector<std::size_t> missing;  // indices with count 0
};

/// Occurrence counts on a finite prefix: the empirical stand-in for "every
/// index appears infinitely often". An empty `missing` is evidence, not proof.
RecurrenceReport recurrence_report(const IndexSequence& seq);

}  // namespace kaczmarz
