#ifndef RATIT_SEQUENCE_HPP_
#define RATIT_SEQUENCE_HPP_

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ratit {

/// Thrown when an input sequence is shorter than an operation requires.
class LengthError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown on index-space lookups outside the stored range.
class IndexError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Finite indexed sequence of real scalars. Immutable once built; transforms
/// return new sequences. The offset is the index of the first stored element,
/// so a transform that consumes leading terms can keep the index space of its
/// input.
class RealSequence {
public:
    explicit RealSequence(std::vector<double> values, long offset = 0)
        : values_(std::move(values)), offset_(offset) {
        if (values_.empty())
            throw LengthError("RealSequence: need at least one value");
        for (double v : values_)
            if (!std::isfinite(v))
                throw std::invalid_argument("RealSequence: non-finite value");
    }

    std::size_t size() const { return values_.size(); }
    long offset() const { return offset_; }
    long first_index() const { return offset_; }
    long last_index() const { return offset_ + static_cast<long>(values_.size()) - 1; }

    /// Storage-order access, 0-based.
    double operator[](std::size_t k) const { return values_[k]; }

    /// Index-space access (honours the offset).
    double at_index(long idx) const {
        if (idx < first_index() || idx > last_index())
            throw IndexError("RealSequence: index " + std::to_string(idx) + " out of range [" +
                             std::to_string(first_index()) + ", " + std::to_string(last_index()) + "]");
        return values_[static_cast<std::size_t>(idx - offset_)];
    }

    const std::vector<double>& values() const { return values_; }

private:
    std::vector<double> values_;
    long offset_;
};

}  // namespace ratit

#endif
