#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace tcmdp {

//! One logged step: state x, control a, context g and next state y.
struct Transition {
    double x = 0.0;
    double a = 0.0;
    double g = 0.0;
    double y = 0.0;
};

//! The offline log. Coordinates are clipped into [0, 1] on construction.
class Trajectory {
public:
    static constexpr std::size_t min_samples = 3;

    //! Throws DomainError for fewer than three samples, non-finite values,
    //! or a broken chain when contiguous is set.
    explicit Trajectory(std::vector<Transition> samples, bool contiguous = false);

    std::size_t size() const { return samples_.size(); }
    const Transition& operator[](std::size_t i) const { return samples_[i]; }
    const std::vector<Transition>& samples() const { return samples_; }
    bool contiguous() const { return contiguous_; }
    //! Number of coordinates moved by clipping during construction.
    std::size_t clipped_count() const { return clipped_; }

    //! CSV with header x,a,g,y. Lines starting with '#' are skipped.
    static Trajectory read_csv(const std::string& path);
    static Trajectory read_csv(std::istream& in, const std::string& name = "<stream>");
    void write_csv(std::ostream& out) const;

private:
    std::vector<Transition> samples_;
    bool contiguous_ = false;
    std::size_t clipped_ = 0;
};

} // namespace tcmdp
