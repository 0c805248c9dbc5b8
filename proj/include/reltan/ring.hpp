#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "reltan/errors.hpp"
#include "reltan/field.hpp"
#include "reltan/monomial.hpp"

namespace reltan {

// Variable names, coefficient field and term order. Immutable once built and
// shared by every polynomial that lives in it.
template <class F>
class Ring {
public:
    using Field = F;
    using Element = typename F::Element;

    Ring(std::vector<std::string> names, F field, MonomialOrder order)
        : names_(std::move(names)), field_(std::move(field)), order_(std::move(order)) {
        if (names_.size() > kMaxVars)
            throw InputError("at most " + std::to_string(kMaxVars) + " variables are supported");
        std::set<std::string> seen;
        for (const auto& n : names_) {
            if (n.empty()) throw InputError("empty variable name");
            if (!seen.insert(n).second) throw InputError("duplicate variable name '" + n + "'");
        }
    }

    std::size_t nvars() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }
    const std::string& name(std::size_t i) const { return names_[i]; }
    const F& field() const { return field_; }
    const MonomialOrder& order() const { return order_; }

    std::optional<std::size_t> index_of(const std::string& n) const {
        for (std::size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == n) return i;
        return std::nullopt;
    }

    int compare(const Monomial& a, const Monomial& b) const { return order_.compare(a, b, names_.size()); }

    bool same_as(const Ring& o) const {
        return this == &o || (names_ == o.names_ && field_ == o.field_ && order_ == o.order_);
    }

private:
    std::vector<std::string> names_;
    F field_;
    MonomialOrder order_;
};

template <class F>
using RingPtr = std::shared_ptr<const Ring<F>>;

template <class F>
RingPtr<F> make_ring(std::vector<std::string> names, F field,
                     MonomialOrder order = MonomialOrder::grevlex()) {
    return std::make_shared<const Ring<F>>(std::move(names), std::move(field), std::move(order));
}

template <class F>
RingPtr<F> with_order(const RingPtr<F>& r, MonomialOrder order) {
    return make_ring<F>(r->names(), r->field(), std::move(order));
}

}  // namespace reltan
