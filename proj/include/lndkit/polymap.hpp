#pragma once

#include <string>
#include <vector>

#include "lndkit/polynomial.hpp"

namespace lndkit {

// F = (f_1, ..., f_q) : Q^n -> Q^q.  Each component has a target ("tag")
// variable name; the tags form their own ring, disjoint from the source.
class PolyMap {
public:
    PolyMap(Ring source, std::vector<std::string> tag_names, std::vector<Polynomial> components);
    // Tags named t1..tq (t for q = 1), freshened against the source names.
    PolyMap(Ring source, std::vector<Polynomial> components);

    const Ring& source() const noexcept { return source_; }
    const Ring& tags() const noexcept { return tags_; }
    // Source variables first, then tags.
    const Ring& graph_ring() const noexcept { return graph_; }

    std::size_t size() const noexcept { return components_.size(); }
    const std::vector<Polynomial>& components() const noexcept { return components_; }
    const Polynomial& operator[](std::size_t i) const { return components_.at(i); }

    // P(F) for P in the tag ring.
    Polynomial pullback(const Polynomial& tag_poly) const;
    // The graph ideal generators t_i - f_i in graph_ring().
    std::vector<Polynomial> graph_ideal() const;
    // Variables of the source ring as a mask over graph_ring().
    std::vector<bool> source_mask() const;

private:
    Ring source_;
    Ring tags_;
    Ring graph_;
    std::vector<Polynomial> components_;
};

std::vector<std::string> default_tag_names(const Ring& source, std::size_t q);

}  // namespace lndkit
