#include "lndkit/polymap.hpp"

namespace lndkit {

std::vector<std::string> default_tag_names(const Ring& source, std::size_t q) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < q; ++i) {
        std::string base = q == 1 ? "t" : "t" + std::to_string(i + 1);
        names.push_back(fresh_name(source, base));
    }
    return names;
}

PolyMap::PolyMap(Ring source, std::vector<std::string> tag_names, std::vector<Polynomial> components)
    : source_(std::move(source)), components_(std::move(components)) {
    if (components_.empty()) throw InputError("a polynomial map needs at least one component");
    if (tag_names.size() != components_.size())
        throw DimensionMismatch("one tag name per map component");
    if (components_.size() > source_->size())
        throw DimensionMismatch("map has more components than source variables");
    for (const auto& c : components_)
        if (!same_ring(c.ring(), source_)) throw ContextMismatch("map components");
    for (const auto& t : tag_names)
        if (source_->index_of(t)) throw InputError("tag name '" + t + "' clashes with a source variable");
    tags_ = make_ring(std::move(tag_names));
    graph_ = join_rings(source_, tags_);
}

PolyMap::PolyMap(Ring source, std::vector<Polynomial> components)
    : PolyMap(source, default_tag_names(source, components.size()), components) {}

Polynomial PolyMap::pullback(const Polynomial& tag_poly) const {
    if (!same_ring(tag_poly.ring(), tags_)) throw ContextMismatch("pullback: polynomial is not over the tag ring");
    return compose(tag_poly, components_);
}

std::vector<Polynomial> PolyMap::graph_ideal() const {
    std::vector<Polynomial> gens;
    std::size_t n = source_->size();
    for (std::size_t i = 0; i < components_.size(); ++i)
        gens.push_back(Polynomial::variable(graph_, n + i) - rebase(components_[i], graph_));
    return gens;
}

std::vector<bool> PolyMap::source_mask() const {
    std::vector<bool> mask(graph_->size(), false);
    for (std::size_t i = 0; i < source_->size(); ++i) mask[i] = true;
    return mask;
}

}  // namespace lndkit
